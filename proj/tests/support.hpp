#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcext/map_spec.hpp"
#include "qcext/types.hpp"

namespace support {

// Small generator kit for the property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  double normal() { return std::normal_distribution<double>()(rng_); }

  Eigen::VectorXd vector(int n, double box) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = uniform(-box, box);
    return v;
  }

  Eigen::VectorXd unit(int n) {
    Eigen::VectorXd v(n);
    do {
      for (int i = 0; i < n; ++i) v(i) = normal();
    } while (v.norm() < 1e-8);
    return v.normalized();
  }

  Eigen::MatrixXd matrix(int n) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = normal();
    }
    return m;
  }

  qcext::HalfSpacePoint point(int n, double box, double tmin, double tmax) {
    return {vector(n, box), uniform(tmin, tmax)};
  }

 private:
  std::mt19937_64 rng_;
};

struct GalleryEntry {
  std::string name;
  qcext::MapSpec spec;
  bool monotone;
};

// One spec per gallery kind.
inline std::vector<GalleryEntry> gallery(int n) {
  using qcext::MapSpec;
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) * 2.0;
  a(0, 1) = 0.5;
  a(1, 0) = -0.3;
  return {
      {"identity", MapSpec::identity(n), true},
      {"linear", MapSpec::linear(a), true},
      {"power_radial", MapSpec::power_radial(n, 1.0), true},
      {"planar_rotation", MapSpec::planar_rotation(n, std::numbers::pi / 4), true},
      {"convex_gradient_quartic", MapSpec::convex_gradient_quartic(n, 1.0, 0.5), true},
      {"composition",
       MapSpec::composition({MapSpec::planar_rotation(n, std::numbers::pi / 8),
                             MapSpec::convex_gradient_quartic(n, 1.0, 0.25)}),
       true},
  };
}

inline Eigen::MatrixXd rotation(double theta) {
  Eigen::MatrixXd r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

}  // namespace support

#include <optional>

#include "qcext/error.hpp"

namespace support {

template <typename F>
std::optional<qcext::ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const qcext::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace support
