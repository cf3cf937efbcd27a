#pragma once

// Reference computations that share no code with the library: plain
// trapezoid sums, polar integrals, full SVDs, dense angular sweeps and
// fourth-order differences.

#include <cmath>
#include <functional>
#include <numbers>

#include <Eigen/Dense>

namespace oracle {

inline double phi1(double y) { return std::exp(-0.5 * y * y) / std::sqrt(2.0 * std::numbers::pi); }

/// int g(y) phi(y) dy on R by the trapezoid rule on [-L, L].
inline double gaussian_1d(const std::function<double(double)>& g, int n = 20001, double L = 12.0) {
  const double h = 2.0 * L / (n - 1);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = -L + h * i;
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    sum += w * g(y) * phi1(y);
  }
  return sum * h;
}

/// Vector-valued int g(y) phi(y) dy on R^2 by a product trapezoid rule.
inline Eigen::VectorXd gaussian_2d(const std::function<Eigen::VectorXd(const Eigen::Vector2d&)>& g,
                                   int out_dim, int n = 801, double L = 9.0) {
  const double h = 2.0 * L / (n - 1);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(out_dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Eigen::Vector2d y(-L + h * i, -L + h * j);
      sum += phi1(y(0)) * phi1(y(1)) * g(y);
    }
  }
  return sum * h * h;
}

/// int_{B(0,R)} rho(r cos th, r sin th) in the plane, midpoint rule in (r, th).
inline double polar_ball_2d(const std::function<double(double, double)>& rho, double R = 1.0, int nr = 2000,
                            int nth = 256) {
  const double dr = R / nr;
  const double dth = 2.0 * std::numbers::pi / nth;
  double sum = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double r = (i + 0.5) * dr;
    for (int k = 0; k < nth; ++k) {
      const double th = (k + 0.5) * dth;
      sum += rho(r * std::cos(th), r * std::sin(th)) * r;
    }
  }
  return sum * dr * dth;
}

inline double sigma_max(const Eigen::MatrixXd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

inline double sigma_min(const Eigen::MatrixXd& m) {
  const auto s = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
  return s(s.size() - 1);
}

/// min over a dense angle sweep of v^T A v / (|Av| |v|) for 2x2 A.
inline double sweep_delta_2d(const Eigen::Matrix2d& a, int samples = 200000) {
  double best = 1.0;
  for (int k = 0; k < samples; ++k) {
    const double th = std::numbers::pi * k / samples;
    const Eigen::Vector2d v(std::cos(th), std::sin(th));
    const Eigen::Vector2d av = a * v;
    if (av.norm() == 0.0) continue;
    best = std::min(best, v.dot(av) / av.norm());
  }
  return best;
}

/// Same minimum for 3x3 A over a (theta, phi) grid of the upper hemisphere.
inline double sweep_delta_3d(const Eigen::Matrix3d& a, int n_theta = 600, int n_phi = 1200) {
  double best = 1.0;
  for (int i = 0; i <= n_theta; ++i) {
    const double th = 0.5 * std::numbers::pi * i / n_theta;
    for (int j = 0; j < n_phi; ++j) {
      const double ph = 2.0 * std::numbers::pi * j / n_phi;
      const Eigen::Vector3d v(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
      const Eigen::Vector3d av = a * v;
      if (av.norm() == 0.0) continue;
      best = std::min(best, v.dot(av) / av.norm());
    }
  }
  return best;
}

/// Fourth-order central differences.
inline Eigen::MatrixXd jacobian_4th(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                    const Eigen::VectorXd& p, double h) {
  const Eigen::VectorXd f0 = f(p);
  Eigen::MatrixXd jac(f0.size(), p.size());
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(p.size());
    e(j) = h;
    jac.col(j) = (f(p - 2 * e) - 8 * f(p - e) + 8 * f(p + e) - f(p + 2 * e)) / (12 * h);
  }
  return jac;
}

/// E[y^k] for the standard normal.
inline double normal_moment(int k) {
  if (k % 2) return 0.0;
  double m = 1.0;
  for (int j = k - 1; j > 0; j -= 2) m *= j;
  return m;
}

inline double rel_frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& ref) {
  return (a - ref).norm() / std::max(ref.norm(), 1e-300);
}

}  // namespace oracle
