#pragma once

#include <string>
#include <vector>

#include "cumbia/dissimilarity.hpp"
#include "cumbia/matrix_core.hpp"

namespace cumbia {

struct ShaveStep {
  std::vector<Eigen::Index> samples;    // indices into the original matrix, ascending
  std::vector<Eigen::Index> variables;  // indices into the original matrix, ascending
  std::vector<double> sample_scores;    // aligned with `samples`
  std::vector<double> variable_scores;  // aligned with `variables`
};

struct ShaveTrace {
  std::vector<ShaveStep> steps;
  std::vector<std::string> warnings;
};

struct ShaveOptions {
  Eigen::Index neighbours = 3;  // K0
  double drop_fraction = 0.1;
  Eigen::Index min_objects = 2;
};

/// Backward elimination over nested sample/variable subsets.
///
/// Each step recomputes the joint dissimilarity on the surviving submatrix,
/// scores every object by the mean of its K0 smallest same-kind
/// dissimilarities, and removes ceil(drop_fraction * count) of the
/// highest-scoring objects of each kind (equal scores: lower index first).
/// Stops once either kind is down to min_objects.
ShaveTrace shave(const DataMatrix& x, const CumbiaConfig& cfg, const ShaveOptions& options = {});

/// Mean of the `neighbours` smallest off-diagonal entries in each row of a
/// square dissimilarity block.
std::vector<double> neighbour_scores(const MatrixXd& block, Eigen::Index neighbours);

}  // namespace cumbia
