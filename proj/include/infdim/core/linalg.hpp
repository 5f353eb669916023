#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <string>
#include <utility>
#include <vector>

#include "infdim/core/coefficients.hpp"

namespace infdim {

/// Relative cutoff below which singular values count as zero in least squares.
inline constexpr double rank_threshold = 1e-12;

/// Singular values of `A`, in descending order.
inline std::vector<double> singular_values(const DenseMatrix& A) {
  if (A.size() == 0) return {};
  Eigen::BDCSVD<DenseMatrix> svd(A);
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

/// Numerical rank under the `rank_threshold` convention.
inline Eigen::Index numerical_rank(const std::vector<double>& sv) {
  if (sv.empty() || sv.front() == 0.0) return 0;
  const double cut = rank_threshold * sv.front();
  Eigen::Index r = 0;
  for (double s : sv)
    if (s > cut) ++r;
  return r;
}

/// Minimum-norm minimizer of ||A x - b|| via a complete orthogonal decomposition.
///
/// Column-pivoted Householder QR gives A P = Q [T; *]; the leading `r` rows
/// (r = numerical rank) are compressed again, T^H = Z S, so that the
/// solution lies in the row space of A.
inline DenseVector min_norm_least_squares(const DenseMatrix& A, const DenseVector& b) {
  if (A.rows() != b.size()) {
    throw InvalidArgument("least squares: matrix has " + std::to_string(A.rows()) +
                          " rows but right-hand side has length " + std::to_string(b.size()));
  }
  const Eigen::Index n = A.cols();
  DenseVector x = DenseVector::Zero(n);
  if (A.size() == 0) return x;
  const Eigen::Index r = numerical_rank(singular_values(A));
  if (r == 0) return x;

  Eigen::ColPivHouseholderQR<DenseMatrix> qr(A);
  const DenseMatrix R = qr.matrixQR().template triangularView<Eigen::Upper>();
  const DenseVector qtb = qr.householderQ().adjoint() * b;

  const DenseMatrix Tadj = R.topRows(r).adjoint();  // n x r
  Eigen::HouseholderQR<DenseMatrix> rz(Tadj);
  const DenseMatrix S = rz.matrixQR().topRows(r).template triangularView<Eigen::Upper>();
  const DenseVector y = S.adjoint().template triangularView<Eigen::Lower>().solve(qtb.head(r));
  DenseVector z = DenseVector::Zero(n);
  z.head(r) = y;
  z = rz.householderQ() * z;
  x = qr.colsPermutation() * z;
  return x;
}

/// Least squares on coefficient vectors; the result is tagged with `solution_tag`.
inline Coefficients qr_least_squares(const DenseMatrix& A, const Coefficients& b,
                                     std::string solution_tag = "solution") {
  return Coefficients(min_norm_least_squares(A, b.values()), 1, std::move(solution_tag));
}

/// Unit vector orthogonal to every row of `C` (a null vector of C).
/// Requires C.cols() > C.rows().
inline DenseVector unit_null_vector(const DenseMatrix& C) {
  const Eigen::Index m = C.rows(), k = C.cols();
  if (k <= m) {
    throw InvalidArgument("constraint matrix with " + std::to_string(m) + " rows has no null vector in dimension " +
                          std::to_string(k));
  }
  Eigen::HouseholderQR<DenseMatrix> qr(C.adjoint());
  DenseVector e = DenseVector::Zero(k);
  e[m] = 1.0;
  DenseVector v = qr.householderQ() * e;
  return v / v.norm();
}

}  // namespace infdim
