#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cumbia/matrix_core.hpp"

namespace cumbia {

enum class ObjectKind { Sample, Variable };

struct CumbiaConfig {
  std::optional<Eigen::Index> rank;  // truncation rank s; nullopt means s = r
  Eigen::Index k_samples = 3;        // paths averaged for sample pairs
  std::optional<Eigen::Index> k_variables;  // defaults to k_samples
  unsigned workers = 1;

  Eigen::Index variable_paths() const { return k_variables.value_or(k_samples); }
};

/// Symmetric (N+p) x (N+p) dissimilarity over samples followed by variables.
struct JointDissimilarity {
  MatrixXd values;
  std::vector<ObjectKind> kinds;
  std::vector<std::string> labels;
  std::vector<std::string> warnings;

  Eigen::Index samples() const;
  Eigen::Index variables() const;
};

/// Entry (i, j) is sqrt(lambda1 - X_s(i, j)). Radicands in [-1e-12 lambda1, 0)
/// are clamped to 0; anything below throws InvariantViolation.
MatrixXd sample_variable_diss(const MatrixXd& truncated, double lambda1);

/// Pairs (a, b), a < b, of objects with bitwise-identical profiles in X_s:
/// rows for samples, columns for variables.
std::vector<std::pair<Eigen::Index, Eigen::Index>> identical_profiles(const MatrixXd& truncated,
                                                                      ObjectKind kind);

struct WithinKind {
  MatrixXd values;
  Eigen::Index paths_used = 0;
  std::optional<std::string> warning;
};

/// Same-kind dissimilarities from the sample-variable block.
///
/// For samples i != j, the entry is the mean of the K smallest two-edge path
/// lengths D_sv(i, k) + D_sv(j, k) over all variables k (for variables, over
/// all samples). Candidates are ranked by (length, intermediary index) and
/// summed in that order. K larger than the intermediary count is clamped and
/// reported. Pairs listed in `identical` are set to zero afterwards.
WithinKind within_kind_diss(const MatrixXd& sample_variable, Eigen::Index paths, ObjectKind kind,
                            const std::vector<std::pair<Eigen::Index, Eigen::Index>>& identical = {},
                            unsigned workers = 1);

/// Assembles the joint matrix from the rank-s truncation of x (x itself when
/// s = r) and lambda_1 of the full decomposition.
JointDissimilarity joint_matrix(const DataMatrix& x, const SvdFactors<double>& factors,
                                const CumbiaConfig& cfg);

// Resolves cfg.rank against the available rank; throws ParameterError when invalid.
Eigen::Index resolve_rank(const CumbiaConfig& cfg, Eigen::Index available);

}  // namespace cumbia
