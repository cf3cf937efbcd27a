#pragma once

#include <Eigen/Dense>

#include "qcext/error.hpp"

namespace qcext {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// A point of R^n. The dimension is the vector size.
using Point = Eigen::VectorXd;
// Df, A(y), B(y) and DF all live here; squareness is checked where it matters.
using SquareMatrix = Eigen::MatrixXd;

/// (x, t) with x in R^n. Any real height is allowed; the extension is defined
/// on all of R^{n+1} by reflection, while hyperbolic operations need t > 0.
template <typename Scalar>
struct HalfSpacePointT {
  VectorX<Scalar> base;
  Scalar height{0};

  Eigen::Index dim() const { return base.size(); }

  /// The point as a vector of R^{n+1}, height last.
  VectorX<Scalar> lifted() const {
    VectorX<Scalar> out(base.size() + 1);
    out.head(base.size()) = base;
    out(base.size()) = height;
    return out;
  }

  template <typename Derived>
  static HalfSpacePointT from_lifted(const Eigen::MatrixBase<Derived>& v) {
    const Eigen::Index n = v.size() - 1;
    return {v.head(n), v(n)};
  }
};

using HalfSpacePoint = HalfSpacePointT<double>;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

inline void require_same_dim(Eigen::Index expected, Eigen::Index got, const char* what) {
  if (expected != got) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": expected dimension " +
                                                  std::to_string(expected) + ", got " +
                                                  std::to_string(got));
  }
}

}  // namespace qcext
