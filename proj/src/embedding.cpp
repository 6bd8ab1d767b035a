#include "cumbia/embedding.hpp"

namespace cumbia {

GramMatrix<double> double_center(const JointDissimilarity& d) { return double_center(d.values); }

Embedding classical_mds(const JointDissimilarity& d, Eigen::Index dims) {
  auto mds = classical_mds(d.values, dims);
  Embedding e;
  e.coordinates = std::move(mds.coordinates);
  e.eigenvalues = std::move(mds.eigenvalues);
  e.most_negative_axis = std::move(mds.most_negative_axis);
  e.kinds = d.kinds;
  e.labels = d.labels;
  e.warnings = d.warnings;
  e.shortfall = mds.shortfall;
  if (e.shortfall)
    e.warnings.push_back("only " + std::to_string(e.dims_used()) + " positive eigenvalues for " +
                         std::to_string(dims) + " requested dimensions");
  return e;
}

BiplotCoordinates pca_biplot(const DataMatrix& x, std::optional<Eigen::Index> rank, double alpha) {
  if (!(alpha >= 0 && alpha <= 1)) throw ParameterError("alpha must lie in [0, 1]");
  const auto f = svd(x);
  const Eigen::Index s = rank.value_or(f.rank());
  auto [samples, variables] = biplot_split(f, s, alpha);
  return {std::move(samples), std::move(variables), x.sample_labels(), x.variable_labels(),
          f.singular_values, alpha, s};
}

Scree scree(const std::vector<double>& spectrum, SpectrumKind kind) {
  if (spectrum.empty()) throw ParameterError("scree needs a nonempty spectrum");
  Scree out;
  if (kind == SpectrumKind::SingularValues) {
    double total = 0.0;
    for (double v : spectrum) {
      if (!(v >= 0)) throw ParameterError("singular values must be nonnegative");
      total += v * v;
    }
    if (!(total > 0)) throw ParameterError("singular values are all zero");
    for (double v : spectrum) out.fractions.push_back(v * v / total);
    return out;
  }
  double total = 0.0;
  for (double v : spectrum) {
    if (!std::isfinite(v)) throw ParameterError("eigenvalues must be finite");
    if (v > 0) total += v;
  }
  for (double v : spectrum) {
    if (v > 0) out.fractions.push_back(v / total);
    if (v < 0) out.negatives.push_back(v);
  }
  return out;
}

Embedding cumbia(const DataMatrix& x, const CumbiaConfig& cfg, Eigen::Index dims) {
  const auto f = svd(x);
  const auto joint = joint_matrix(x, f, cfg);
  Embedding e = classical_mds(joint, dims);
  e.config = cfg;
  e.rank_used = resolve_rank(cfg, f.rank());
  return e;
}

}  // namespace cumbia
