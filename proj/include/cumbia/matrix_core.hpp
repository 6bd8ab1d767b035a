#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "cumbia/errors.hpp"

namespace cumbia {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

/// N x p table of measurements with sample (row) and variable (column) labels.
///
/// Values are always finite. A variable whose source cells were missing is
/// flagged in missing_variables() (its missing cells hold 0) and must be
/// removed by preprocessing before any decomposition.
class DataMatrix {
 public:
  DataMatrix(MatrixXd values, std::vector<std::string> sample_labels,
             std::vector<std::string> variable_labels,
             std::vector<bool> missing_variables = {});

  // Builds a matrix with generated labels s1..sN and v1..vp.
  static DataMatrix unlabeled(MatrixXd values);

  const MatrixXd& values() const { return values_; }
  const std::vector<std::string>& sample_labels() const { return sample_labels_; }
  const std::vector<std::string>& variable_labels() const { return variable_labels_; }
  const std::vector<bool>& missing_variables() const { return missing_; }

  Eigen::Index samples() const { return values_.rows(); }
  Eigen::Index variables() const { return values_.cols(); }
  bool has_missing() const;

  // Throws InputError naming the first flagged variable.
  void require_complete() const;

  // Submatrix over the given sample and variable indices, in the given order.
  DataMatrix select(const std::vector<Eigen::Index>& samples,
                    const std::vector<Eigen::Index>& variables) const;
  DataMatrix select_variables(const std::vector<Eigen::Index>& variables) const;

 private:
  MatrixXd values_;
  std::vector<std::string> sample_labels_;
  std::vector<std::string> variable_labels_;
  std::vector<bool> missing_;
};

/// Throws InputError naming the first non-finite entry as (row, column).
template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j)))
        throw InputError("non-finite entry at row " + std::to_string(i) + ", column " +
                         std::to_string(j));
}

template <typename Derived>
typename Derived::RealScalar frobenius_norm(const Eigen::MatrixBase<Derived>& a) {
  require_finite(a);
  return a.norm();
}

/// Thin SVD X = U diag(singular_values) V^T truncated to the numerical rank.
template <typename Scalar>
struct SvdFactors {
  Matrix<Scalar> U;
  Vector<Scalar> singular_values;
  Matrix<Scalar> V;

  Eigen::Index rank() const { return singular_values.size(); }
  Scalar largest() const { return singular_values(0); }
};

/// Thin SVD restricted to singular values above rank_tolerance * (largest).
///
/// Each singular pair is sign-normalised so that the largest-magnitude entry of
/// the U column is positive (first such entry on exact ties).
template <typename Derived>
SvdFactors<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& x,
                                         typename Derived::RealScalar rank_tolerance = 1e-12) {
  using Scalar = typename Derived::Scalar;
  if (x.rows() < 1 || x.cols() < 1) throw InputError("empty matrix");
  if (!(rank_tolerance >= 0)) throw ParameterError("rank_tolerance must be nonnegative");
  require_finite(x);

  Eigen::BDCSVD<Matrix<Scalar>> dec(x.derived().eval(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = dec.singularValues();
  if (sv.size() == 0 || !(sv(0) > 0)) throw InputError("rank zero, no decomposition");

  const Scalar cutoff = rank_tolerance * sv(0);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;

  SvdFactors<Scalar> f{dec.matrixU().leftCols(r), sv.head(r), dec.matrixV().leftCols(r)};
  for (Eigen::Index k = 0; k < r; ++k) {
    Eigen::Index arg = 0;
    f.U.col(k).cwiseAbs().maxCoeff(&arg);
    if (f.U(arg, k) < 0) {
      f.U.col(k) = -f.U.col(k);
      f.V.col(k) = -f.V.col(k);
    }
  }
  return f;
}

SvdFactors<double> svd(const DataMatrix& x, double rank_tolerance = 1e-12);

/// Rank-s reconstruction U_s diag(lambda_1..lambda_s) V_s^T.
template <typename Scalar>
Matrix<Scalar> truncate(const SvdFactors<Scalar>& f, Eigen::Index s) {
  if (s < 1 || s > f.rank())
    throw ParameterError("truncation rank " + std::to_string(s) + " outside [1, " +
                         std::to_string(f.rank()) + "]");
  return f.U.leftCols(s) * f.singular_values.head(s).asDiagonal() * f.V.leftCols(s).transpose();
}

}  // namespace cumbia
