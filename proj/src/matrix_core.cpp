#include "cumbia/matrix_core.hpp"

#include <unordered_set>

namespace cumbia {
namespace {

void require_unique(const std::vector<std::string>& labels, const char* kind) {
  std::unordered_set<std::string> seen;
  for (const auto& l : labels)
    if (!seen.insert(l).second) throw InputError(std::string("duplicate ") + kind + " label '" + l + "'");
}

std::vector<std::string> numbered(const char* prefix, Eigen::Index n) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

}  // namespace

DataMatrix::DataMatrix(MatrixXd values, std::vector<std::string> sample_labels,
                       std::vector<std::string> variable_labels, std::vector<bool> missing_variables)
    : values_(std::move(values)),
      sample_labels_(std::move(sample_labels)),
      variable_labels_(std::move(variable_labels)),
      missing_(std::move(missing_variables)) {
  if (values_.rows() < 1 || values_.cols() < 1) throw InputError("data matrix must be at least 1x1");
  if (static_cast<Eigen::Index>(sample_labels_.size()) != values_.rows())
    throw InputError("sample label count does not match row count");
  if (static_cast<Eigen::Index>(variable_labels_.size()) != values_.cols())
    throw InputError("variable label count does not match column count");
  if (missing_.empty()) missing_.assign(static_cast<std::size_t>(values_.cols()), false);
  if (static_cast<Eigen::Index>(missing_.size()) != values_.cols())
    throw InputError("missing-variable flags do not match column count");
  require_finite(values_);
  require_unique(sample_labels_, "sample");
  require_unique(variable_labels_, "variable");
}

DataMatrix DataMatrix::unlabeled(MatrixXd values) {
  auto s = numbered("s", values.rows());
  auto v = numbered("v", values.cols());
  return DataMatrix(std::move(values), std::move(s), std::move(v));
}

bool DataMatrix::has_missing() const {
  for (bool m : missing_)
    if (m) return true;
  return false;
}

void DataMatrix::require_complete() const {
  for (std::size_t j = 0; j < missing_.size(); ++j)
    if (missing_[j])
      throw InputError("variable '" + variable_labels_[j] +
                       "' contains missing values; filter it before decomposition");
}

DataMatrix DataMatrix::select(const std::vector<Eigen::Index>& samples,
                              const std::vector<Eigen::Index>& variables) const {
  MatrixXd sub = values_(samples, variables);
  std::vector<std::string> sl, vl;
  std::vector<bool> miss;
  for (auto i : samples) sl.push_back(sample_labels_.at(static_cast<std::size_t>(i)));
  for (auto j : variables) {
    vl.push_back(variable_labels_.at(static_cast<std::size_t>(j)));
    miss.push_back(missing_[static_cast<std::size_t>(j)]);
  }
  return DataMatrix(std::move(sub), std::move(sl), std::move(vl), std::move(miss));
}

DataMatrix DataMatrix::select_variables(const std::vector<Eigen::Index>& variables) const {
  std::vector<Eigen::Index> all(static_cast<std::size_t>(samples()));
  for (Eigen::Index i = 0; i < samples(); ++i) all[static_cast<std::size_t>(i)] = i;
  return select(all, variables);
}

SvdFactors<double> svd(const DataMatrix& x, double rank_tolerance) {
  x.require_complete();
  return svd(x.values(), rank_tolerance);
}

}  // namespace cumbia
