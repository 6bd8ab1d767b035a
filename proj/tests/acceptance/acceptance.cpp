// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cumbia/bicluster.hpp"
#include "cumbia/embedding.hpp"
#include "cumbia/ingest.hpp"
#include "cumbia/io.hpp"
#include "support/graph_oracle.hpp"
#include "support/oracles.hpp"

using namespace cumbia;
using cumbia::testing::euclidean_distances;
using cumbia::testing::random_matrix;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Byte digests of the outputs of criteria 4-8, keyed by run.
struct Digests {
  std::vector<std::string> c4, c5, c6, c8;
};

Eigen::Index uniform_index(std::mt19937_64& rng, Eigen::Index lo, Eigen::Index hi) {
  return std::uniform_int_distribution<Eigen::Index>(lo, hi)(rng);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome eckart_young() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (std::uint64_t m = 0; m < 50; ++m) {
    const MatrixXd x = random_matrix(uniform_index(rng, 1, 40), uniform_index(rng, 1, 60), 1000 + m);
    const auto f = svd(x);
    const double total = x.squaredNorm();
    for (Eigen::Index s = 1; s <= f.rank(); ++s) {
      const double tail = f.singular_values.tail(f.singular_values.size() - s).squaredNorm();
      const double err = (x - truncate(f, s)).squaredNorm();
      worst = std::max(worst, std::abs(err - tail) / total);
    }
  }
  return {worst <= 1e-8, "max relative error " + fmt("%.2e", worst)};
}

Outcome biplot_exactness() {
  std::mt19937_64 rng(202);
  double worst_product = 0.0, worst_distance = 0.0;
  for (std::uint64_t m = 0; m < 20; ++m) {
    const auto x = DataMatrix::unlabeled(random_matrix(uniform_index(rng, 2, 30), uniform_index(rng, 2, 40), 2000 + m));
    for (double alpha : {0.0, 0.5, 1.0}) {
      const auto b = pca_biplot(x, std::nullopt, alpha);
      worst_product = std::max(
          worst_product, (b.sample_coords * b.variable_coords.transpose() - x.values()).cwiseAbs().maxCoeff());
      if (alpha == 1.0)
        worst_distance =
            std::max(worst_distance, (euclidean_distances(b.sample_coords) - euclidean_distances(x.values()))
                                         .cwiseAbs()
                                         .maxCoeff());
    }
  }
  return {worst_product <= 1e-8 && worst_distance <= 1e-8,
          "product " + fmt("%.2e", worst_product) + ", distances " + fmt("%.2e", worst_distance)};
}

Outcome mds_recovery() {
  std::mt19937_64 rng(303);
  double worst = 0.0;
  for (std::uint64_t m = 0; m < 20; ++m) {
    const Eigen::Index dims = uniform_index(rng, 1, 4);
    const MatrixXd pts = random_matrix(uniform_index(rng, 2, 15), dims, 3000 + m);
    const MatrixXd d = euclidean_distances(pts);
    const auto e = classical_mds(d, dims);
    worst = std::max(worst, (euclidean_distances(e.coordinates) - d).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-8, "max distance error " + fmt("%.2e", worst)};
}

Outcome oracle_equivalence(unsigned workers, std::vector<std::string>& digests) {
  std::mt19937_64 rng(404);
  int cases = 0, mismatches = 0;
  std::string bytes;
  for (std::uint64_t m = 0; m < 20; ++m) {
    const auto x = DataMatrix::unlabeled(random_matrix(uniform_index(rng, 2, 8), uniform_index(rng, 2, 12), 4000 + m));
    const auto f = svd(x);
    for (Eigen::Index s = 1; s <= f.rank(); ++s)
      for (Eigen::Index k = 1; k <= 3; ++k) {
        const auto d = joint_matrix(x, f, CumbiaConfig{s, k, std::nullopt, workers});
        const MatrixXd xs = s == f.rank() ? x.values() : truncate(f, s);
        const auto o = cumbia::testing::graph_oracle(xs, f.largest(), k);
        ++cases;
        if (!(d.values == o.values) || d.labels != o.labels) ++mismatches;
        bytes += io::dissimilarity_text(d);
      }
  }
  digests.push_back(io::sha256_hex(bytes));
  return {mismatches == 0, std::to_string(cases) + " cases, " + std::to_string(mismatches) + " mismatches"};
}

Outcome invariants(unsigned workers, std::vector<std::string>& digests) {
  std::mt19937_64 rng(505);
  double worst_identity = 0.0;
  bool structural = true;
  std::string bytes;
  for (std::uint64_t m = 0; m < 100; ++m) {
    const auto x = DataMatrix::unlabeled(random_matrix(uniform_index(rng, 2, 25), uniform_index(rng, 2, 30), 5000 + m));
    const auto f = svd(x);
    const Eigen::Index s = uniform_index(rng, 1, f.rank());
    const Eigen::Index k = uniform_index(rng, 1, 4);
    const auto d = joint_matrix(x, f, CumbiaConfig{s, k, std::nullopt, workers});
    const MatrixXd xs = s == f.rank() ? x.values() : truncate(f, s);
    const Eigen::Index n = x.samples();
    structural = structural && d.values == d.values.transpose() && d.values.diagonal().isZero(0.0) &&
                 d.values.minCoeff() >= 0.0;
    const MatrixXd sv = d.values.topRightCorner(n, x.variables());
    worst_identity = std::max(
        worst_identity, (sv.array().square() + xs.array() - f.largest()).abs().maxCoeff());
    bytes += io::dissimilarity_text(d);
  }
  digests.push_back(io::sha256_hex(bytes));
  return {structural && worst_identity <= 1e-12,
          std::string(structural ? "symmetric, zero diagonal, nonnegative" : "structural check failed") +
              "; identity error " + fmt("%.2e", worst_identity)};
}

// True when some threshold on `values` puts exactly the `members` on one side.
bool separates(const VectorXd& values, const std::vector<bool>& members) {
  double in_lo = INFINITY, in_hi = -INFINITY, out_lo = INFINITY, out_hi = -INFINITY;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = values(i);
    if (members[static_cast<std::size_t>(i)]) {
      in_lo = std::min(in_lo, v);
      in_hi = std::max(in_hi, v);
    } else {
      out_lo = std::min(out_lo, v);
      out_hi = std::max(out_hi, v);
    }
  }
  return in_hi < out_lo || out_hi < in_lo;
}

std::vector<bool> planted(const GroupLabels& g) {
  std::vector<bool> out;
  for (const auto& a : g.assignment) out.push_back(a == "planted");
  return out;
}

struct FigureRuns {
  int cumbia_separates = 0, samples_separate = 0, variables_separate = 0, pca_fails = 0;
  int negative_present = 0, axis_pure = 0, seeds = 0;
  double worst_purity = 1.0;
};

FigureRuns figure_analog(unsigned workers, int seeds, std::vector<std::string>& digests) {
  FigureRuns r;
  for (int seed = 0; seed < seeds; ++seed) {
    SynthSpec spec;
    spec.seed = static_cast<std::uint64_t>(seed);
    const auto data = synth_block(spec);
    const auto x = zscore_variables(data.matrix);
    const auto e = cumbia::cumbia(x, CumbiaConfig{std::nullopt, 3, std::nullopt, workers}, 3);
    digests.push_back(io::sha256_hex(io::embedding_text(e) + io::spectrum_text(e.eigenvalues)));
    ++r.seeds;

    const Eigen::Index n = x.samples(), p = x.variables();
    const VectorXd c1 = e.coordinates.col(0);
    const bool by_samples = separates(c1.head(n), planted(data.sample_groups));
    const bool by_variables = separates(c1.tail(p), planted(data.variable_groups));
    r.samples_separate += by_samples;
    r.variables_separate += by_variables;
    r.cumbia_separates += by_samples && by_variables;

    const auto b = pca_biplot(x, std::nullopt, 1.0);
    bool any = false;
    for (Eigen::Index k = 0; k < 3; ++k) any = any || separates(b.sample_coords.col(k), planted(data.sample_groups));
    if (!any) ++r.pca_fails;

    if (e.eigenvalues.minCoeff() < 0) {
      ++r.negative_present;
      const VectorXd& axis = e.most_negative_axis;
      const Eigen::Index samples_pos = (axis.head(n).array() > 0).count();
      const Eigen::Index variables_neg = (axis.tail(p).array() < 0).count();
      const double agree = static_cast<double>(samples_pos + variables_neg) / static_cast<double>(n + p);
      const double purity = std::max(agree, 1.0 - agree);
      r.worst_purity = std::min(r.worst_purity, purity);
      if (purity > 0.95) ++r.axis_pure;
    } else {
      r.worst_purity = 0.0;
    }
  }
  return r;
}

struct ShaveResult {
  Outcome outcome;
  std::string digest;
};

ShaveResult shave_recovery(unsigned workers) {
  SynthSpec spec{30, 200, 6, 20, 2.0, 0};
  const auto data = synth_block(spec);
  const auto trace =
      shave(data.matrix, CumbiaConfig{std::nullopt, 3, std::nullopt, workers}, ShaveOptions{3, 0.1, 2});
  const std::string digest = io::sha256_hex(io::trace_header() + io::trace_rows(trace, data.matrix));

  auto recall = [&](auto member, std::size_t planted_count, auto sizes) -> std::pair<double, std::size_t> {
    for (std::size_t s = 0; s < trace.steps.size(); ++s) {
      const auto& kept = sizes(trace.steps[s]);
      if (kept.size() >= 2 * planted_count) continue;
      const auto hits = static_cast<std::size_t>(std::count_if(kept.begin(), kept.end(), member));
      return {static_cast<double>(hits) / static_cast<double>(planted_count), s};
    }
    return {0.0, trace.steps.size()};
  };
  const auto [rs, ss] = recall([](Eigen::Index i) { return i < 6; }, 6, [](const ShaveStep& st) { return st.samples; });
  const auto [rv, sv] =
      recall([](Eigen::Index j) { return j < 20; }, 20, [](const ShaveStep& st) { return st.variables; });
  return {{rs >= 0.8 && rv >= 0.8, "samples " + fmt("%.2f", rs) + " at step " + std::to_string(ss) +
                                       ", variables " + fmt("%.2f", rv) + " at step " + std::to_string(sv)},
          digest};
}

int failures = 0;

void report(int id, const std::string& name, const Outcome& o, double seconds, double budget) {
  const bool ok = o.pass && seconds < budget;
  if (!ok) ++failures;
  std::printf("criterion %d %-28s %s  (%s; %.2f s, budget %.0f s)\n", id, name.c_str(), ok ? "PASS" : "FAIL",
              o.detail.c_str(), seconds, budget);
  std::fflush(stdout);
}

template <typename F>
auto timed(F&& f, double& seconds) {
  const auto start = std::chrono::steady_clock::now();
  auto result = f();
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace

int main() {
  Digests digests;
  double t = 0;

  report(1, "Eckart-Young", timed(eckart_young, t), t, 10);
  report(2, "biplot exactness", timed(biplot_exactness, t), t, 5);
  report(3, "MDS recovery", timed(mds_recovery, t), t, 5);
  report(4, "oracle equivalence", timed([&] { return oracle_equivalence(1, digests.c4); }, t), t, 10);
  report(5, "dissimilarity invariants", timed([&] { return invariants(1, digests.c5); }, t), t, 30);

  const auto fig = timed([&] { return figure_analog(1, 10, digests.c6); }, t);
  const double fig_seconds = t;
  report(6, "planted block, component 1",
         {fig.cumbia_separates >= 9 && fig.pca_fails >= 9,
          "CUMBIA separates " + std::to_string(fig.cumbia_separates) + "/10 (samples " +
              std::to_string(fig.samples_separate) + "/10, variables " + std::to_string(fig.variables_separate) +
              "/10), PCA fails " +
              std::to_string(fig.pca_fails) + "/10"},
         fig_seconds, 300);
  report(7, "negative eigenvalue axis",
         {fig.negative_present == fig.seeds && fig.axis_pure == fig.seeds,
          "negative spectrum " + std::to_string(fig.negative_present) + "/10, purity > 0.95 " +
              std::to_string(fig.axis_pure) + "/10, worst " + fmt("%.3f", fig.worst_purity)},
         fig_seconds, 300);

  const auto sh = timed([] { return shave_recovery(1); }, t);
  digests.c8.push_back(sh.digest);
  report(8, "shave recovery", sh.outcome, t, 120);

  // Repeat criteria 4-8 once with the same worker count and once with four workers.
  const auto start = std::chrono::steady_clock::now();
  for (unsigned workers : {1u, 4u}) {
    oracle_equivalence(workers, digests.c4);
    invariants(workers, digests.c5);
    figure_analog(workers, 10, digests.c6);
    digests.c8.push_back(shave_recovery(workers).digest);
  }
  auto stable = [](const std::vector<std::string>& d, std::size_t runs) {
    const std::size_t per = d.size() / runs;
    for (std::size_t i = per; i < d.size(); ++i)
      if (d[i] != d[i % per]) return false;
    return true;
  };
  const bool same = stable(digests.c4, 3) && stable(digests.c5, 3) && stable(digests.c6, 3) && stable(digests.c8, 3);
  t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(9, "determinism", {same, same ? "3 runs (workers 1, 1, 4) byte-identical" : "outputs differ between runs"},
         t, 600);

  std::printf("%s: %d criteria failed\n", failures == 0 ? "PASS" : "FAIL", failures);
  return failures == 0 ? 0 : 1;
}
