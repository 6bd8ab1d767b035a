#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cumbia/dissimilarity.hpp"
#include "cumbia/matrix_core.hpp"

namespace cumbia {

/// Double-centred Gram matrix C(D) = -1/2 J (D o D) J, J = I - 11^T / n.
template <typename Scalar>
struct GramMatrix {
  Matrix<Scalar> values;
};

template <typename Derived>
GramMatrix<typename Derived::Scalar> double_center(const Eigen::MatrixBase<Derived>& d) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = d.rows();
  if (d.cols() != n) throw InputError("dissimilarity matrix must be square");
  require_finite(d);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      if (std::abs(d(i, j) - d(j, i)) > Scalar(1e-12))
        throw InputError("dissimilarity matrix is not symmetric at (" + std::to_string(i) + ", " +
                         std::to_string(j) + ")");

  const Matrix<Scalar> sq = d.derived().array().square().matrix();
  // Column means; the symmetric input gives row means equal to these.
  const Vector<Scalar> means = sq.colwise().mean().transpose();
  const Scalar grand = means.mean();
  GramMatrix<Scalar> c{Matrix<Scalar>(n, n)};
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) {
      const Scalar v = Scalar(-0.5) * (sq(i, j) - means(i) - means(j) + grand);
      c.values(i, j) = v;
      c.values(j, i) = v;
    }
  return c;
}

/// Eigenpairs of a symmetric matrix ordered by (value descending, index ascending).
template <typename Scalar>
struct OrderedSpectrum {
  Vector<Scalar> values;
  Matrix<Scalar> vectors;
};

template <typename Scalar>
OrderedSpectrum<Scalar> ordered_eigen(const Matrix<Scalar>& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(symmetric);
  if (es.info() != Eigen::Success) throw InvariantViolation("symmetric eigendecomposition did not converge");
  const Eigen::Index n = symmetric.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return ev(a) > ev(b); });
  return {ev(order), es.eigenvectors()(Eigen::all, order)};
}

// Flips v so its largest-magnitude entry (first on ties) is positive.
template <typename Derived>
void fix_sign(Eigen::MatrixBase<Derived>&& v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0) v = -v;
}

template <typename Scalar>
struct MdsResult {
  Matrix<Scalar> coordinates;  // n x d, column k scaled by sqrt(eigenvalue k)
  Vector<Scalar> eigenvalues;  // full signed spectrum, descending
  Vector<Scalar> most_negative_axis;  // unit eigenvector of the most negative eigenvalue, if any
  Eigen::Index requested = 0;
  bool shortfall = false;  // fewer than `requested` positive eigenvalues
};

/// Classical (Torgerson) scaling: top eigenvectors of C(D) with positive
/// eigenvalues (> 1e-10 * top eigenvalue), negatives discarded.
template <typename Derived>
MdsResult<typename Derived::Scalar> classical_mds(const Eigen::MatrixBase<Derived>& d, Eigen::Index dims) {
  using Scalar = typename Derived::Scalar;
  if (dims < 1) throw ParameterError("embedding dimension must be at least 1");
  const auto gram = double_center(d);
  auto spec = ordered_eigen(gram.values);

  const Eigen::Index n = spec.values.size();
  const Scalar top = spec.values(0);
  Eigen::Index positive = 0;
  if (top > 0)
    while (positive < n && spec.values(positive) > Scalar(1e-10) * top) ++positive;
  const Eigen::Index used = std::min(dims, positive);

  MdsResult<Scalar> out;
  out.requested = dims;
  out.shortfall = used < dims;
  out.coordinates.resize(n, used);
  for (Eigen::Index k = 0; k < used; ++k) {
    out.coordinates.col(k) = spec.vectors.col(k) * std::sqrt(spec.values(k));
    fix_sign(out.coordinates.col(k));
  }
  if (spec.values(n - 1) < 0) {
    out.most_negative_axis = spec.vectors.col(n - 1);
    fix_sign(out.most_negative_axis.col(0));
  }
  out.eigenvalues = std::move(spec.values);
  return out;
}

/// Joint sample/variable coordinates from classical MDS.
struct Embedding {
  MatrixXd coordinates;
  VectorXd eigenvalues;
  VectorXd most_negative_axis;
  std::vector<ObjectKind> kinds;
  std::vector<std::string> labels;
  std::vector<std::string> warnings;
  std::optional<CumbiaConfig> config;
  Eigen::Index rank_used = 0;
  bool shortfall = false;

  Eigen::Index dims_used() const { return coordinates.cols(); }
};

GramMatrix<double> double_center(const JointDissimilarity& d);
Embedding classical_mds(const JointDissimilarity& d, Eigen::Index dims);

/// Biplot split of X_s: samples U_s L^alpha, variables V_s L^(1 - alpha).
struct BiplotCoordinates {
  MatrixXd sample_coords;
  MatrixXd variable_coords;
  std::vector<std::string> sample_labels;
  std::vector<std::string> variable_labels;
  VectorXd singular_values;  // all r values of X
  double alpha = 1.0;
  Eigen::Index rank_used = 0;
};

template <typename Scalar>
std::pair<Matrix<Scalar>, Matrix<Scalar>> biplot_split(const SvdFactors<Scalar>& f, Eigen::Index s,
                                                        Scalar alpha) {
  if (!(alpha >= 0 && alpha <= 1)) throw ParameterError("alpha must lie in [0, 1]");
  if (s < 1 || s > f.rank())
    throw ParameterError("biplot rank " + std::to_string(s) + " outside [1, " + std::to_string(f.rank()) + "]");
  const Vector<Scalar> lam = f.singular_values.head(s);
  const Vector<Scalar> left = lam.array().pow(alpha);
  const Vector<Scalar> right = lam.array().pow(Scalar(1) - alpha);
  return {f.U.leftCols(s) * left.asDiagonal(), f.V.leftCols(s) * right.asDiagonal()};
}

// rank = nullopt uses s = r.
BiplotCoordinates pca_biplot(const DataMatrix& x, std::optional<Eigen::Index> rank, double alpha);

enum class SpectrumKind { SingularValues, Eigenvalues };

struct Scree {
  std::vector<double> fractions;  // of the total, for the retained (positive) components
  std::vector<double> negatives;  // eigenvalue mode only, in input order
};

/// Singular values: lambda_k^2 / sum lambda^2. Eigenvalues: share of the sum
/// of positive eigenvalues; negative eigenvalues are listed separately.
Scree scree(const std::vector<double>& spectrum, SpectrumKind kind);

/// svd -> truncate -> joint_matrix -> classical_mds.
Embedding cumbia(const DataMatrix& x, const CumbiaConfig& cfg, Eigen::Index dims = 3);

}  // namespace cumbia
