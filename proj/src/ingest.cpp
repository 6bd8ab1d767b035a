#include "cumbia/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace cumbia {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

std::vector<std::string> own(const std::vector<std::string_view>& cells, std::size_t from) {
  std::vector<std::string> out;
  for (std::size_t i = from; i < cells.size(); ++i) out.emplace_back(unquote(cells[i]));
  return out;
}

double mean_of(const Eigen::Ref<const VectorXd>& v) { return v.sum() / static_cast<double>(v.size()); }

double signed_inf_or_zero(double diff) {
  if (diff > 0) return std::numeric_limits<double>::infinity();
  if (diff < 0) return -std::numeric_limits<double>::infinity();
  return 0.0;
}

}  // namespace

DataMatrix parse_table(const std::string& text, const TableFormat& format) {
  std::vector<std::string_view> lines;
  {
    std::string_view rest(text);
    while (!rest.empty()) {
      auto pos = rest.find('\n');
      lines.push_back(rest.substr(0, pos));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.size() < 2) throw InputError("table needs a header row and at least one data row");

  const auto header = split(lines[0], format.delimiter);
  if (header.size() < 2) throw InputError("line 1: header needs a label column and at least one column");
  std::vector<std::string> col_labels = own(header, 1);
  const std::size_t ncols = col_labels.size();
  const std::size_t nrows = lines.size() - 1;

  MatrixXd values(static_cast<Eigen::Index>(nrows), static_cast<Eigen::Index>(ncols));
  std::vector<std::string> row_labels;
  std::vector<std::vector<bool>> missing_cells(nrows, std::vector<bool>(ncols, false));

  for (std::size_t r = 0; r < nrows; ++r) {
    const std::size_t line_no = r + 2;
    const auto cells = split(lines[r + 1], format.delimiter);
    if (cells.size() != ncols + 1)
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(ncols + 1) +
                       " fields, found " + std::to_string(cells.size()));
    row_labels.emplace_back(unquote(cells[0]));
    for (std::size_t c = 0; c < ncols; ++c) {
      const auto cell = cells[c + 1];
      double v = 0.0;
      if (cell.empty() || cell == format.missing_token) {
        missing_cells[r][c] = true;
      } else {
        const char* first = cell.data();
        const char* last = cell.data() + cell.size();
        if (*first == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || !std::isfinite(v))
          throw InputError("line " + std::to_string(line_no) + ", column " + std::to_string(c + 2) +
                           ": non-numeric cell '" + std::string(cell) + "'");
      }
      values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }

  if (format.orientation == Orientation::SamplesAsRows) {
    std::vector<bool> miss(ncols, false);
    for (std::size_t r = 0; r < nrows; ++r)
      for (std::size_t c = 0; c < ncols; ++c) miss[c] = miss[c] || missing_cells[r][c];
    return DataMatrix(std::move(values), std::move(row_labels), std::move(col_labels), std::move(miss));
  }
  std::vector<bool> miss(nrows, false);
  for (std::size_t r = 0; r < nrows; ++r)
    for (std::size_t c = 0; c < ncols; ++c) miss[r] = miss[r] || missing_cells[r][c];
  MatrixXd t = values.transpose();
  return DataMatrix(std::move(t), std::move(col_labels), std::move(row_labels), std::move(miss));
}

DataMatrix load_table(const std::filesystem::path& path, const TableFormat& format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_table(buf.str(), format);
}

std::pair<DataMatrix, PreprocessReport> filter_and_log2(const DataMatrix& x) {
  PreprocessReport report;
  std::vector<Eigen::Index> keep;
  const auto& miss = x.missing_variables();
  for (Eigen::Index j = 0; j < x.variables(); ++j) {
    if (miss[static_cast<std::size_t>(j)]) {
      ++report.dropped_missing;
    } else if ((x.values().col(j).array() <= 0.0).any()) {
      ++report.dropped_negative;
    } else {
      keep.push_back(j);
    }
  }
  if (keep.empty()) throw InputError("no variables survive filtering");
  DataMatrix kept = x.select_variables(keep);
  MatrixXd logged = kept.values().array().log2();
  report.log2 = true;
  return {DataMatrix(std::move(logged), kept.sample_labels(), kept.variable_labels()), report};
}

DataMatrix zscore_variables(const DataMatrix& x, ZeroVariancePolicy policy, PreprocessReport* report) {
  x.require_complete();
  const Eigen::Index n = x.samples();
  if (n < 2) throw ParameterError("z-scoring needs at least 2 samples");

  std::vector<Eigen::Index> keep;
  MatrixXd z(n, x.variables());
  Eigen::Index out = 0;
  for (Eigen::Index j = 0; j < x.variables(); ++j) {
    const auto col = x.values().col(j);
    const double m = mean_of(col);
    const double sd = std::sqrt((col.array() - m).square().sum() / static_cast<double>(n - 1));
    const double scale = std::max(1.0, col.cwiseAbs().maxCoeff());
    if (!(sd > 1e-12 * scale)) {
      if (policy == ZeroVariancePolicy::Error)
        throw InputError("variable '" + x.variable_labels()[static_cast<std::size_t>(j)] +
                         "' has zero variance");
      if (report) ++report->dropped_constant;
      continue;
    }
    z.col(out++) = (col.array() - m) / sd;
    keep.push_back(j);
  }
  if (keep.empty()) throw InputError("no variables survive z-scoring");
  if (report) report->zscored = true;
  DataMatrix kept = x.select_variables(keep);
  return DataMatrix(z.leftCols(out), kept.sample_labels(), kept.variable_labels());
}

std::vector<std::string> GroupLabels::distinct() const {
  std::vector<std::string> out;
  for (const auto& g : assignment)
    if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
  return out;
}

std::size_t GroupLabels::count(const std::string& group) const {
  return static_cast<std::size_t>(std::count(assignment.begin(), assignment.end(), group));
}

VectorXd t_statistic(const DataMatrix& x, const GroupLabels& groups, const std::string& target_group) {
  x.require_complete();
  if (static_cast<Eigen::Index>(groups.assignment.size()) != x.samples())
    throw ParameterError("group assignment length does not match sample count");
  std::vector<Eigen::Index> in, out;
  for (std::size_t i = 0; i < groups.assignment.size(); ++i)
    (groups.assignment[i] == target_group ? in : out).push_back(static_cast<Eigen::Index>(i));
  if (in.size() < 2 || out.size() < 2)
    throw ParameterError("t statistic needs at least 2 samples in '" + target_group +
                         "' and 2 in its complement");

  const double n1 = static_cast<double>(in.size());
  const double n2 = static_cast<double>(out.size());
  VectorXd t(x.variables());
  for (Eigen::Index j = 0; j < x.variables(); ++j) {
    const VectorXd a = x.values()(in, j);
    const VectorXd b = x.values()(out, j);
    const double ma = mean_of(a), mb = mean_of(b);
    const double ssa = (a.array() - ma).square().sum();
    const double ssb = (b.array() - mb).square().sum();
    const double pooled = (ssa + ssb) / (n1 + n2 - 2.0);
    const double diff = ma - mb;
    t(j) = pooled == 0.0 ? signed_inf_or_zero(diff) : diff / std::sqrt(pooled * (1.0 / n1 + 1.0 / n2));
  }
  return t;
}

VectorXd f_statistic(const DataMatrix& x, const GroupLabels& groups) {
  x.require_complete();
  if (static_cast<Eigen::Index>(groups.assignment.size()) != x.samples())
    throw ParameterError("group assignment length does not match sample count");
  const auto names = groups.distinct();
  const auto k = names.size();
  const auto n = groups.assignment.size();
  if (k < 2) throw ParameterError("F statistic needs at least 2 groups");
  if (n <= k) throw ParameterError("F statistic needs more samples than groups");

  std::vector<std::vector<Eigen::Index>> members(k);
  for (std::size_t i = 0; i < n; ++i) {
    auto g = static_cast<std::size_t>(std::find(names.begin(), names.end(), groups.assignment[i]) - names.begin());
    members[g].push_back(static_cast<Eigen::Index>(i));
  }

  VectorXd f(x.variables());
  for (Eigen::Index j = 0; j < x.variables(); ++j) {
    const auto col = x.values().col(j);
    const double grand = mean_of(col);
    double between = 0.0, within = 0.0;
    for (const auto& idx : members) {
      const VectorXd v = col(idx);
      const double m = mean_of(v);
      between += static_cast<double>(v.size()) * (m - grand) * (m - grand);
      within += (v.array() - m).square().sum();
    }
    if (within == 0.0) {
      f(j) = between > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    } else {
      f(j) = (between / static_cast<double>(k - 1)) / (within / static_cast<double>(n - k));
    }
  }
  return f;
}

std::vector<Eigen::Index> top_indices(const VectorXd& stat, std::size_t m) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(stat.size()));
  for (Eigen::Index i = 0; i < stat.size(); ++i) idx[static_cast<std::size_t>(i)] = i;
  m = std::min(m, idx.size());
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return stat(a) > stat(b); });
  idx.resize(m);
  return idx;
}

std::vector<Eigen::Index> bottom_indices(const VectorXd& stat, std::size_t m) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(stat.size()));
  for (Eigen::Index i = 0; i < stat.size(); ++i) idx[static_cast<std::size_t>(i)] = i;
  m = std::min(m, idx.size());
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return stat(a) < stat(b); });
  idx.resize(m);
  return idx;
}

SynthData synth_block(const SynthSpec& spec) {
  if (spec.samples < 1 || spec.variables < 1) throw ParameterError("synthetic matrix must be at least 1x1");
  if (spec.planted_samples < 0 || spec.planted_samples > spec.samples || spec.planted_variables < 0 ||
      spec.planted_variables > spec.variables)
    throw ParameterError("planted block does not fit inside the matrix");
  if (!std::isfinite(spec.shift)) throw ParameterError("shift must be finite");

  std::mt19937_64 engine(spec.seed);
  auto uniform = [&engine] {
    return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
  };
  bool have_spare = false;
  double spare = 0.0;
  auto normal = [&] {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare = radius * std::sin(angle);
    have_spare = true;
    return radius * std::cos(angle);
  };

  MatrixXd values(spec.samples, spec.variables);
  for (Eigen::Index i = 0; i < spec.samples; ++i)
    for (Eigen::Index j = 0; j < spec.variables; ++j) {
      const bool planted = i < spec.planted_samples && j < spec.planted_variables;
      values(i, j) = normal() + (planted ? spec.shift : 0.0);
    }

  GroupLabels sg, vg;
  for (Eigen::Index i = 0; i < spec.samples; ++i)
    sg.assignment.emplace_back(i < spec.planted_samples ? "planted" : "background");
  for (Eigen::Index j = 0; j < spec.variables; ++j)
    vg.assignment.emplace_back(j < spec.planted_variables ? "planted" : "background");
  return {DataMatrix::unlabeled(std::move(values)), std::move(sg), std::move(vg)};
}

}  // namespace cumbia
