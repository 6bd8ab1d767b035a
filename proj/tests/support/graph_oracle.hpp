#pragma once

// Reference construction of the joint dissimilarity by explicit graph search.
// Test-only: builds the complete weighted bipartite graph, enumerates every
// two-edge path between same-kind objects, sorts, and averages the K shortest.

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include "cumbia/dissimilarity.hpp"

namespace cumbia::testing {

struct Edge {
  Eigen::Index to;
  double weight;
};

inline JointDissimilarity graph_oracle(const MatrixXd& truncated, double lambda1, Eigen::Index paths) {
  const Eigen::Index n = truncated.rows();
  const Eigen::Index p = truncated.cols();
  if (n > 50 || p > 50) throw ParameterError("graph oracle is limited to 50 x 50 inputs");
  if (paths < 1) throw ParameterError("paths must be positive");
  const Eigen::Index nodes = n + p;

  std::vector<std::vector<Edge>> adjacency(static_cast<std::size_t>(nodes));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) {
      double radicand = lambda1 - truncated(i, j);
      if (radicand < 0) {
        if (radicand < -1e-12 * lambda1) throw InvariantViolation("negative edge radicand");
        radicand = 0.0;
      }
      const double w = std::sqrt(radicand);
      adjacency[static_cast<std::size_t>(i)].push_back({n + j, w});
      adjacency[static_cast<std::size_t>(n + j)].push_back({i, w});
    }

  auto weight = [&](Eigen::Index a, Eigen::Index b) {
    for (const auto& e : adjacency[static_cast<std::size_t>(a)])
      if (e.to == b) return e.weight;
    throw InvariantViolation("missing edge");
  };

  JointDissimilarity d;
  d.values = MatrixXd::Zero(nodes, nodes);
  for (Eigen::Index a = 0; a < nodes; ++a)
    for (const auto& e : adjacency[static_cast<std::size_t>(a)]) d.values(a, e.to) = e.weight;

  for (Eigen::Index a = 0; a < nodes; ++a)
    for (Eigen::Index b = a + 1; b < nodes; ++b) {
      const bool a_sample = a < n;
      if (a_sample != (b < n)) continue;
      std::vector<std::pair<double, Eigen::Index>> lengths;
      for (const auto& first : adjacency[static_cast<std::size_t>(a)])
        lengths.emplace_back(first.weight + weight(first.to, b), first.to);
      std::sort(lengths.begin(), lengths.end());
      const auto k = std::min<std::size_t>(static_cast<std::size_t>(paths), lengths.size());
      double sum = 0.0;
      for (std::size_t t = 0; t < k; ++t) sum += lengths[t].first;
      d.values(a, b) = d.values(b, a) = sum / static_cast<double>(k);
    }

  // Objects with identical profiles are at distance zero.
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a + 1; b < n; ++b)
      if ((truncated.row(a).array() == truncated.row(b).array()).all()) d.values(a, b) = d.values(b, a) = 0.0;
  for (Eigen::Index a = 0; a < p; ++a)
    for (Eigen::Index b = a + 1; b < p; ++b)
      if ((truncated.col(a).array() == truncated.col(b).array()).all())
        d.values(n + a, n + b) = d.values(n + b, n + a) = 0.0;

  d.kinds.assign(static_cast<std::size_t>(n), ObjectKind::Sample);
  d.kinds.insert(d.kinds.end(), static_cast<std::size_t>(p), ObjectKind::Variable);
  for (Eigen::Index i = 1; i <= n; ++i) d.labels.push_back("s" + std::to_string(i));
  for (Eigen::Index j = 1; j <= p; ++j) d.labels.push_back("v" + std::to_string(j));
  return d;
}

}  // namespace cumbia::testing
