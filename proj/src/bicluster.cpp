#include "cumbia/bicluster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cumbia {
namespace {

std::vector<Eigen::Index> iota_indices(Eigen::Index n) {
  std::vector<Eigen::Index> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), Eigen::Index{0});
  return v;
}

// Removes the `drop` worst-scoring positions; survivors keep their order.
std::vector<Eigen::Index> survivors(const std::vector<Eigen::Index>& current, const std::vector<double>& scores,
                                    std::size_t drop) {
  std::vector<std::size_t> order(current.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });
  std::vector<bool> removed(current.size(), false);
  for (std::size_t i = 0; i < drop; ++i) removed[order[i]] = true;
  std::vector<Eigen::Index> out;
  for (std::size_t i = 0; i < current.size(); ++i)
    if (!removed[i]) out.push_back(current[i]);
  return out;
}

std::size_t drop_count(std::size_t count, double fraction, Eigen::Index min_objects) {
  auto drop = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(count)));
  const auto floor = static_cast<std::size_t>(min_objects);
  return std::min(drop, count - floor);
}

}  // namespace

std::vector<double> neighbour_scores(const MatrixXd& block, Eigen::Index neighbours) {
  const Eigen::Index n = block.rows();
  std::vector<double> scores(static_cast<std::size_t>(n));
  std::vector<double> row;
  for (Eigen::Index i = 0; i < n; ++i) {
    row.clear();
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) row.push_back(block(i, j));
    const auto k = static_cast<std::size_t>(neighbours);
    std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k), row.end());
    double sum = 0.0;
    for (std::size_t t = 0; t < k; ++t) sum += row[t];
    scores[static_cast<std::size_t>(i)] = sum / static_cast<double>(k);
  }
  return scores;
}

ShaveTrace shave(const DataMatrix& x, const CumbiaConfig& cfg, const ShaveOptions& options) {
  if (options.neighbours < 1) throw ParameterError("K0 must be at least 1");
  if (!(options.drop_fraction > 0 && options.drop_fraction < 1))
    throw ParameterError("drop fraction must lie in (0, 1)");
  if (options.min_objects < 2) throw ParameterError("min_objects must be at least 2");
  x.require_complete();
  if (x.samples() < options.min_objects || x.variables() < options.min_objects)
    throw ParameterError("matrix is already smaller than min_objects");

  ShaveTrace trace;
  auto note = [&trace](std::string msg) {
    if (std::find(trace.warnings.begin(), trace.warnings.end(), msg) == trace.warnings.end())
      trace.warnings.push_back(std::move(msg));
  };

  std::vector<Eigen::Index> samples = iota_indices(x.samples());
  std::vector<Eigen::Index> variables = iota_indices(x.variables());
  for (;;) {
    const DataMatrix sub = x.select(samples, variables);
    const auto f = svd(sub);
    CumbiaConfig step_cfg = cfg;
    if (cfg.rank && *cfg.rank > f.rank()) {
      note("rank " + std::to_string(*cfg.rank) + " exceeds submatrix rank; clamped");
      step_cfg.rank = f.rank();
    }
    const auto joint = joint_matrix(sub, f, step_cfg);
    for (const auto& w : joint.warnings) note(w);

    const auto n = static_cast<Eigen::Index>(samples.size());
    const auto p = static_cast<Eigen::Index>(variables.size());
    auto clamp_k0 = [&](Eigen::Index count, const char* kind) {
      if (options.neighbours <= count - 1) return options.neighbours;
      note("K0 = " + std::to_string(options.neighbours) + " exceeds the " + kind + " neighbours available (" +
           std::to_string(count - 1) + "); clamped");
      return count - 1;
    };

    ShaveStep step;
    step.samples = samples;
    step.variables = variables;
    step.sample_scores = neighbour_scores(joint.values.topLeftCorner(n, n), clamp_k0(n, "sample"));
    step.variable_scores = neighbour_scores(joint.values.bottomRightCorner(p, p), clamp_k0(p, "variable"));
    trace.steps.push_back(std::move(step));
    const auto& last = trace.steps.back();

    if (n <= options.min_objects || p <= options.min_objects) break;
    samples = survivors(samples, last.sample_scores,
                        drop_count(samples.size(), options.drop_fraction, options.min_objects));
    variables = survivors(variables, last.variable_scores,
                          drop_count(variables.size(), options.drop_fraction, options.min_objects));
  }
  return trace;
}

}  // namespace cumbia
