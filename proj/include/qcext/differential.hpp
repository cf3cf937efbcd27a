#pragma once

#include <functional>
#include <string>

#include "qcext/extension.hpp"

namespace qcext {

using PointMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// [[A, A y], [y^T A, y^T A y]], the integrand of DF against phi.
template <typename DerivedA, typename DerivedY>
MatrixX<typename DerivedA::Scalar> block_matrix(const Eigen::MatrixBase<DerivedA>& a,
                                                const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedA::Scalar;
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw Error(ErrorKind::DimensionMismatch, "block_matrix: A must be square");
  require_same_dim(n, y.size(), "block_matrix");
  // Ay and y^T A summed in the same order, so B is exactly symmetric when A is
  MatrixX<Scalar> b(n + 1, n + 1);
  b.topLeftCorner(n, n) = a;
  for (Eigen::Index i = 0; i < n; ++i) {
    Scalar col(0);
    Scalar row(0);
    for (Eigen::Index k = 0; k < n; ++k) {
      col += a(i, k) * y(k);
      row += a(k, i) * y(k);
    }
    b(i, n) = col;
    b(n, i) = row;
  }
  b(n, n) = y.dot(b.col(n).head(n));
  return b;
}

/// DF(x,t) = sum_k w_k B(Df(x + t y_k), y_k), for t > 0.
SquareMatrix extension_jacobian(const ExtensionField& field, const HalfSpacePoint& p);

/// Column j is (F(p + h e_j) - F(p - h e_j)) / (2h).
SquareMatrix finite_difference_jacobian(const PointMap& map, const Eigen::VectorXd& p, double h);

inline constexpr double kOperatorNormTolerance = 1e-10;
inline constexpr int kOperatorNormMaxIterations = 1000;

/// Largest singular value by power iteration on M^T M from a fixed start
/// vector. Throws no-convergence after kOperatorNormMaxIterations.
double operator_norm(const SquareMatrix& m);

/// operator_norm, falling back to a full SVD when the iteration stalls.
double spectral_norm(const SquareMatrix& m);

struct AlphaAverage {
  double value = 0.0;
  HalfSpacePoint center;
  std::string scheme;  // ball rule description
};

/// alpha = int_{B(0,1)} ||Df(x + t y)|| dy over the unit ball in y.
AlphaAverage unit_ball_norm_average(const ExtensionField& field, const HalfSpacePoint& p);

/// Row-major CSV of a matrix preceded by "# x=... t=... spec_hash=... scheme_hash=..." .
std::string jacobian_to_csv(const SquareMatrix& m, const HalfSpacePoint& p, const std::string& spec_hash,
                            const std::string& scheme_hash);

}  // namespace qcext
