#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "cumbia/matrix_core.hpp"

namespace cumbia {

enum class Orientation { SamplesAsRows, VariablesAsRows };

struct TableFormat {
  char delimiter = ',';
  Orientation orientation = Orientation::SamplesAsRows;
  std::string missing_token = "NA";  // empty cells are always missing
};

/// Reads a delimited table: header row of variable labels, first column of
/// sample labels (transposed first when orientation is VariablesAsRows).
DataMatrix load_table(const std::filesystem::path& path, const TableFormat& format = {});
DataMatrix parse_table(const std::string& text, const TableFormat& format = {});

struct PreprocessReport {
  std::size_t dropped_missing = 0;
  std::size_t dropped_negative = 0;
  std::size_t dropped_constant = 0;
  bool log2 = false;
  bool zscored = false;
};

/// Drops variables with missing cells, then variables with any value <= 0,
/// then takes log2 of what remains.
std::pair<DataMatrix, PreprocessReport> filter_and_log2(const DataMatrix& x);

enum class ZeroVariancePolicy { Error, Drop };

/// Per-variable standardisation to mean 0 and sample sd 1 (denominator N-1).
DataMatrix zscore_variables(const DataMatrix& x, ZeroVariancePolicy policy = ZeroVariancePolicy::Error,
                            PreprocessReport* report = nullptr);

/// Per-sample group assignment.
struct GroupLabels {
  std::vector<std::string> assignment;

  std::vector<std::string> distinct() const;  // in order of first appearance
  std::size_t count(const std::string& group) const;
};

/// Two-sample pooled-variance t statistic per variable, target group against
/// every other sample. Zero pooled variance yields +/-Inf by the sign of the
/// mean difference, or 0 when the means agree.
VectorXd t_statistic(const DataMatrix& x, const GroupLabels& groups, const std::string& target_group);

/// One-way ANOVA F statistic per variable. Zero within-group variance yields
/// +Inf, or 0 when the between-group variance is also zero.
VectorXd f_statistic(const DataMatrix& x, const GroupLabels& groups);

// Indices of the m largest (descending) or smallest (ascending) entries; ties by index.
std::vector<Eigen::Index> top_indices(const VectorXd& stat, std::size_t m);
std::vector<Eigen::Index> bottom_indices(const VectorXd& stat, std::size_t m);

struct SynthSpec {
  Eigen::Index samples = 60;
  Eigen::Index variables = 1500;
  Eigen::Index planted_samples = 6;
  Eigen::Index planted_variables = 25;
  double shift = 2.0;
  std::uint64_t seed = 0;
};

struct SynthData {
  DataMatrix matrix;
  GroupLabels sample_groups;    // "planted" / "background"
  GroupLabels variable_groups;  // "planted" / "background"
};

/// Gaussian matrix with a planted top-left block of mean `shift`.
///
/// Draws come from std::mt19937_64 seeded with `seed`, mapped to 53-bit
/// uniforms and paired through the Box-Muller transform, filled row by row.
SynthData synth_block(const SynthSpec& spec);

}  // namespace cumbia
