#include "cumbia/dissimilarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

namespace cumbia {
namespace {

const char* kind_name(ObjectKind kind) { return kind == ObjectKind::Sample ? "sample" : "variable"; }

// Mean of the `paths` smallest values of profiles.col(a) + profiles.col(b),
// ranked by (value, intermediary index).
double k_smallest_mean(const MatrixXd& profiles, Eigen::Index a, Eigen::Index b, Eigen::Index paths,
                       std::vector<double>& best) {
  const double* pa = profiles.col(a).data();
  const double* pb = profiles.col(b).data();
  const Eigen::Index n = profiles.rows();
  Eigen::Index filled = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double len = pa[k] + pb[k];
    if (filled == paths) {
      // Equal lengths keep the earlier intermediary.
      if (!(len < best[static_cast<std::size_t>(paths - 1)])) continue;
      --filled;
    }
    Eigen::Index pos = filled;
    while (pos > 0 && len < best[static_cast<std::size_t>(pos - 1)]) {
      best[static_cast<std::size_t>(pos)] = best[static_cast<std::size_t>(pos - 1)];
      --pos;
    }
    best[static_cast<std::size_t>(pos)] = len;
    ++filled;
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < paths; ++i) sum += best[static_cast<std::size_t>(i)];
  return sum / static_cast<double>(paths);
}

}  // namespace

Eigen::Index JointDissimilarity::samples() const {
  return static_cast<Eigen::Index>(std::count(kinds.begin(), kinds.end(), ObjectKind::Sample));
}

Eigen::Index JointDissimilarity::variables() const {
  return static_cast<Eigen::Index>(kinds.size()) - samples();
}

MatrixXd sample_variable_diss(const MatrixXd& truncated, double lambda1) {
  if (!(lambda1 > 0) || !std::isfinite(lambda1)) throw ParameterError("lambda1 must be positive and finite");
  const double band = 1e-12 * lambda1;
  MatrixXd d(truncated.rows(), truncated.cols());
  for (Eigen::Index j = 0; j < truncated.cols(); ++j)
    for (Eigen::Index i = 0; i < truncated.rows(); ++i) {
      double radicand = lambda1 - truncated(i, j);
      if (radicand < 0) {
        if (radicand < -band)
          throw InvariantViolation("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                   ") exceeds the largest singular value");
        radicand = 0.0;
      }
      d(i, j) = std::sqrt(radicand);
    }
  return d;
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> identical_profiles(const MatrixXd& truncated,
                                                                      ObjectKind kind) {
  const MatrixXd profiles = kind == ObjectKind::Sample ? MatrixXd(truncated.transpose()) : truncated;
  const Eigen::Index n = profiles.cols();
  const Eigen::Index len = profiles.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto less = [&](Eigen::Index a, Eigen::Index b) {
    const double* pa = profiles.col(a).data();
    const double* pb = profiles.col(b).data();
    for (Eigen::Index k = 0; k < len; ++k)
      if (pa[k] != pb[k]) return pa[k] < pb[k];
    return a < b;
  };
  auto same = [&](Eigen::Index a, Eigen::Index b) {
    return std::equal(profiles.col(a).data(), profiles.col(a).data() + len, profiles.col(b).data());
  };
  std::sort(order.begin(), order.end(), less);

  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start + 1;
    while (end < order.size() && same(order[start], order[end])) ++end;
    for (std::size_t u = start; u < end; ++u)
      for (std::size_t v = u + 1; v < end; ++v)
        pairs.emplace_back(std::min(order[u], order[v]), std::max(order[u], order[v]));
    start = end;
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

WithinKind within_kind_diss(const MatrixXd& sample_variable, Eigen::Index paths, ObjectKind kind,
                            const std::vector<std::pair<Eigen::Index, Eigen::Index>>& identical,
                            unsigned workers) {
  if (paths < 1) throw ParameterError("number of averaged paths must be at least 1");
  // Column c of `profiles` holds object c's distances to every intermediary.
  const MatrixXd profiles =
      kind == ObjectKind::Sample ? MatrixXd(sample_variable.transpose()) : sample_variable;
  const Eigen::Index n = profiles.cols();
  const Eigen::Index intermediaries = profiles.rows();

  WithinKind out;
  out.paths_used = paths;
  if (paths > intermediaries) {
    out.paths_used = intermediaries;
    out.warning = std::string("K = ") + std::to_string(paths) + " for " + kind_name(kind) +
                  " pairs exceeds " + std::to_string(intermediaries) + " intermediaries; clamped";
  }
  out.values = MatrixXd::Zero(n, n);

  const unsigned w = std::max(1u, workers);
  auto run = [&](unsigned worker) {
    std::vector<double> best(static_cast<std::size_t>(out.paths_used));
    for (Eigen::Index a = worker; a < n; a += w)
      for (Eigen::Index b = a + 1; b < n; ++b) {
        const double d = k_smallest_mean(profiles, a, b, out.paths_used, best);
        out.values(a, b) = d;
        out.values(b, a) = d;
      }
  };
  if (w == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < w; ++t) pool.emplace_back(run, t);
  }

  for (const auto& [a, b] : identical) {
    out.values(a, b) = 0.0;
    out.values(b, a) = 0.0;
  }
  return out;
}

Eigen::Index resolve_rank(const CumbiaConfig& cfg, Eigen::Index available) {
  if (!cfg.rank) return available;
  if (*cfg.rank < 1 || *cfg.rank > available)
    throw ParameterError("truncation rank " + std::to_string(*cfg.rank) + " outside [1, " +
                         std::to_string(available) + "]");
  return *cfg.rank;
}

JointDissimilarity joint_matrix(const DataMatrix& x, const SvdFactors<double>& factors,
                                const CumbiaConfig& cfg) {
  if (factors.U.rows() != x.samples() || factors.V.rows() != x.variables())
    throw ParameterError("SVD factors do not match the data matrix");
  const Eigen::Index s = resolve_rank(cfg, factors.rank());
  // X_r is X itself.
  const MatrixXd truncated = s == factors.rank() ? x.values() : truncate(factors, s);
  const MatrixXd sv = sample_variable_diss(truncated, factors.largest());

  auto ss = within_kind_diss(sv, cfg.k_samples, ObjectKind::Sample,
                             identical_profiles(truncated, ObjectKind::Sample), cfg.workers);
  auto vv = within_kind_diss(sv, cfg.variable_paths(), ObjectKind::Variable,
                             identical_profiles(truncated, ObjectKind::Variable), cfg.workers);

  const Eigen::Index n = x.samples();
  const Eigen::Index p = x.variables();
  JointDissimilarity d;
  d.values.resize(n + p, n + p);
  d.values.topLeftCorner(n, n) = ss.values;
  d.values.bottomRightCorner(p, p) = vv.values;
  d.values.topRightCorner(n, p) = sv;
  d.values.bottomLeftCorner(p, n) = sv.transpose();

  d.kinds.assign(static_cast<std::size_t>(n), ObjectKind::Sample);
  d.kinds.insert(d.kinds.end(), static_cast<std::size_t>(p), ObjectKind::Variable);
  d.labels = x.sample_labels();
  d.labels.insert(d.labels.end(), x.variable_labels().begin(), x.variable_labels().end());
  if (ss.warning) d.warnings.push_back(*ss.warning);
  if (vv.warning) d.warnings.push_back(*vv.warning);
  return d;
}

}  // namespace cumbia
