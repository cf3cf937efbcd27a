#include "qcext/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <random>
#include <vector>

#include "qcext/hashing.hpp"

namespace qcext {

std::string_view to_string(QuadratureMethod method) noexcept {
  switch (method) {
    case QuadratureMethod::TensorHermite: return "tensor_hermite";
    case QuadratureMethod::QuasiRandom: return "quasi_random";
  }
  return "unknown";
}

QuadratureMethod quadrature_method_from_string(std::string_view name) {
  if (name == "tensor_hermite") return QuadratureMethod::TensorHermite;
  if (name == "quasi_random") return QuadratureMethod::QuasiRandom;
  throw Error(ErrorKind::InvalidParameter, "unknown quadrature method \"" + std::string(name) + "\"");
}

// ---------------------------------------------------------------------------
// 1-D rules

namespace {

// Orthonormal probabilists' Hermite polynomials h_k = He_k / sqrt(k!):
// h_{k+1} = (x h_k - sqrt(k) h_{k-1}) / sqrt(k+1). Returns (h_m, h_{m-1}).
std::pair<double, double> normalized_hermite(int m, double x) {
  double prev = 0.0;
  double cur = 1.0;
  for (int k = 0; k < m; ++k) {
    const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) / std::sqrt(k + 1.0);
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

// Legendre P_m and P_{m-1} by the three-term recurrence.
std::pair<double, double> legendre(int m, double x) {
  double prev = 1.0;
  double cur = x;
  if (m == 0) return {1.0, 0.0};
  for (int k = 1; k < m; ++k) {
    const double next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

// Symmetric tridiagonal Jacobi matrix eigenvalues (Golub-Welsch starting guesses).
Eigen::VectorXd jacobi_eigenvalues(const Eigen::VectorXd& off_diagonal) {
  const Eigen::Index m = off_diagonal.size() + 1;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index k = 0; k + 1 < m; ++k) {
    jac(k, k + 1) = off_diagonal(k);
    jac(k + 1, k) = off_diagonal(k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jac, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();  // ascending
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_hermite_rule(int order) {
  if (order < 1) throw Error(ErrorKind::ResolutionTooSmall, "Gauss-Hermite order must be >= 1");
  const int m = order;
  Eigen::VectorXd x(m);
  Eigen::VectorXd w(m);
  if (m == 1) {
    x(0) = 0.0;
    w(0) = 1.0;
    return {x, w};
  }
  Eigen::VectorXd off(m - 1);
  for (int k = 1; k < m; ++k) off(k - 1) = std::sqrt(static_cast<double>(k));
  x = jacobi_eigenvalues(off);

  // Newton polish on h_m, using h_m' = sqrt(m) h_{m-1}; then mirror exactly.
  for (int i = m / 2; i < m; ++i) {
    double xi = std::max(0.0, x(i));
    if (m % 2 == 1 && i == m / 2) xi = 0.0;
    for (int it = 0; it < 100 && xi != 0.0; ++it) {
      const auto [hm, hm1] = normalized_hermite(m, xi);
      const double step = hm / (std::sqrt(static_cast<double>(m)) * hm1);
      xi -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(xi))) break;
    }
    const auto [hm, hm1] = normalized_hermite(m, xi);
    (void)hm;
    const double wi = 1.0 / (m * hm1 * hm1);
    x(i) = xi;
    x(m - 1 - i) = -xi;
    w(i) = wi;
    w(m - 1 - i) = wi;
  }
  w /= w.sum();
  return {x, w};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre_rule(int order) {
  if (order < 1) throw Error(ErrorKind::ResolutionTooSmall, "Gauss-Legendre order must be >= 1");
  const int m = order;
  Eigen::VectorXd x(m);
  Eigen::VectorXd w(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const auto [p, p1] = legendre(m, z);
      dp = m * (z * p - p1) / (z * z - 1.0);
      const double step = p / dp;
      z -= step;
      if (std::abs(step) <= 1e-16) break;
    }
    const auto [p, p1] = legendre(m, z);
    dp = m * (z * p - p1) / (z * z - 1.0);
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    x(m - 1 - i) = z;
    x(i) = -z;
    w(i) = wi;
    w(m - 1 - i) = wi;
  }
  if (m % 2 == 1) x(m / 2) = 0.0;
  return {x, w};
}

int nth_prime(int i) {
  static const std::vector<int> primes = [] {
    std::vector<int> out;
    for (int c = 2; out.size() < 256; ++c) {
      bool prime = true;
      for (int p : out) {
        if (p * p > c) break;
        if (c % p == 0) {
          prime = false;
          break;
        }
      }
      if (prime) out.push_back(c);
    }
    return out;
  }();
  if (i < 0 || i >= static_cast<int>(primes.size())) {
    throw Error(ErrorKind::InvalidParameter, "low-discrepancy dimension out of range");
  }
  return primes[static_cast<std::size_t>(i)];
}

double radical_inverse(std::uint64_t index, int base) {
  const double inv = 1.0 / base;
  double factor = inv;
  double out = 0.0;
  while (index > 0) {
    out += static_cast<double>(index % static_cast<std::uint64_t>(base)) * factor;
    index /= static_cast<std::uint64_t>(base);
    factor *= inv;
  }
  return out;
}

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::OutOfRange, "normal quantile needs p in (0,1)");
  // Acklam's rational approximation followed by one Halley step on erfc.
  static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                           -2.759285104469687e+02, 1.383577518672690e+02,
                                           -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                           -1.556989798598866e+02, 6.680131188771972e+01,
                                           -1.328068155288572e+01};
  static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                           -2.400758277161838e+00, -2.549732539343734e+00,
                                           4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                           2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double unit_ball_volume(int dim) {
  return std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

// ---------------------------------------------------------------------------
// Schemes

namespace {

void fill_tensor(Eigen::MatrixXd& nodes, Eigen::VectorXd& weights, int dim, int order) {
  const auto [x, w] = gauss_hermite_rule(order);
  Eigen::Index count = 1;
  for (int d = 0; d < dim; ++d) count *= order;
  nodes.resize(dim, count);
  weights.resize(count);
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  for (Eigen::Index k = 0; k < count; ++k) {
    double wk = 1.0;
    for (int d = 0; d < dim; ++d) {
      nodes(d, k) = x(idx[static_cast<std::size_t>(d)]);
      wk *= w(idx[static_cast<std::size_t>(d)]);
    }
    weights(k) = wk;
    for (int d = 0; d < dim; ++d) {
      if (++idx[static_cast<std::size_t>(d)] < order) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
  }
}

void fill_quasi_random(Eigen::MatrixXd& nodes, Eigen::VectorXd& weights, int dim, int count,
                       std::uint64_t seed) {
  const Eigen::Index half = count / 2;
  nodes.resize(dim, 2 * half);
  weights.setConstant(2 * half, 1.0 / static_cast<double>(2 * half));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> shift(static_cast<std::size_t>(dim));
  for (auto& s : shift) s = unit(rng);
  for (Eigen::Index k = 0; k < half; ++k) {
    for (int d = 0; d < dim; ++d) {
      double u = radical_inverse(static_cast<std::uint64_t>(k) + 1, nth_prime(d)) +
                 shift[static_cast<std::size_t>(d)];
      u -= std::floor(u);
      u = std::clamp(u, 0x1p-53, 1.0 - 0x1p-53);
      const double y = inverse_normal_cdf(u);
      nodes(d, k) = y;
      nodes(d, 2 * half - 1 - k) = -y;
    }
  }
}

}  // namespace

QuadratureScheme build_scheme_unchecked(int dim, QuadratureMethod method, int resolution,
                                        std::uint64_t seed, bool with_coarse) {
  QuadratureScheme s;
  s.dim_ = dim;
  s.method_ = method;
  s.resolution_ = resolution;
  s.seed_ = seed;
  if (method == QuadratureMethod::TensorHermite) {
    fill_tensor(s.nodes_, s.weights_, dim, resolution);
  } else {
    fill_quasi_random(s.nodes_, s.weights_, dim, resolution, seed);
  }
  if (with_coarse) {
    const int coarse_res = method == QuadratureMethod::TensorHermite ? std::max(1, resolution / 2)
                                                                     : std::max(2, resolution / 2);
    s.coarse_ = std::make_shared<const QuadratureScheme>(
        build_scheme_unchecked(dim, method, coarse_res, seed, false));
  }
  return s;
}

QuadratureScheme build_scheme(int dim, QuadratureMethod method, int resolution, std::uint64_t seed) {
  if (dim < 1) throw Error(ErrorKind::InvalidParameter, "scheme dimension must be >= 1");
  if (method == QuadratureMethod::TensorHermite) {
    if (resolution < 2) throw Error(ErrorKind::ResolutionTooSmall, "tensor_hermite needs order >= 2");
    if (std::pow(static_cast<double>(resolution), dim) > kMaxTensorNodes) {
      throw Error(ErrorKind::DimensionOverflow,
                  "tensor_hermite with " + std::to_string(resolution) + "^" + std::to_string(dim) +
                      " nodes exceeds 1e8");
    }
  } else if (resolution < 16) {
    throw Error(ErrorKind::ResolutionTooSmall, "quasi_random needs at least 16 samples");
  }
  return build_scheme_unchecked(dim, method, resolution, seed, true);
}

QuadratureScheme default_scheme(int dim, std::uint64_t seed) {
  if (dim <= 3) return build_scheme(dim, QuadratureMethod::TensorHermite, 20, seed);
  return build_scheme(dim, QuadratureMethod::QuasiRandom, 1 << 16, seed);
}

std::string QuadratureScheme::hash() const { return hex_digest(scheme_to_json(*this).dump()); }

nlohmann::json scheme_to_json(const QuadratureScheme& scheme) {
  return {{"dim", scheme.dim()},
          {"method", std::string(to_string(scheme.method()))},
          {"resolution", scheme.resolution()},
          {"seed", scheme.seed()}};
}

QuadratureScheme scheme_from_json(const nlohmann::json& j) {
  try {
    return build_scheme(j.at("dim").get<int>(),
                        quadrature_method_from_string(j.at("method").get<std::string>()),
                        j.at("resolution").get<int>(), j.value("seed", std::uint64_t{0}));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedSyntax, std::string("scheme JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Ball rules

namespace {

BallRule make_ball_rule(int dim) {
  BallRule rule;
  if (dim == 1) {
    auto [x, w] = gauss_legendre_rule(32);
    rule.nodes = x.transpose();
    rule.weights = w;
    return rule;
  }
  if (dim == 2) {
    constexpr int radial = 32;
    constexpr int angular = 64;
    auto [x, w] = gauss_legendre_rule(radial);
    rule.nodes.resize(2, radial * angular);
    rule.weights.resize(radial * angular);
    for (int i = 0; i < radial; ++i) {
      const double r = 0.5 * (x(i) + 1.0);
      const double wr = 0.5 * w(i) * r;  // dr on [0,1] times the Jacobian r
      for (int k = 0; k < angular; ++k) {
        const double th = 2.0 * std::numbers::pi * k / angular;
        const int col = i * angular + k;
        rule.nodes(0, col) = r * std::cos(th);
        rule.nodes(1, col) = r * std::sin(th);
        rule.weights(col) = wr * 2.0 * std::numbers::pi / angular;
      }
    }
    return rule;
  }
  constexpr int target = 1 << 15;
  rule.nodes.resize(dim, target);
  Eigen::VectorXd p(dim);
  int accepted = 0;
  for (std::uint64_t k = 1; accepted < target; ++k) {
    for (int d = 0; d < dim; ++d) p(d) = 2.0 * radical_inverse(k, nth_prime(d)) - 1.0;
    if (p.squaredNorm() < 1.0) rule.nodes.col(accepted++) = p;
  }
  rule.weights.setConstant(target, unit_ball_volume(dim) / target);
  return rule;
}

}  // namespace

const BallRule& unit_ball_rule(int dim) {
  if (dim < 1 || dim > 12) throw Error(ErrorKind::InvalidParameter, "ball rule dimension out of range");
  static std::array<std::once_flag, 13> flags;
  static std::array<BallRule, 13> rules;
  const auto i = static_cast<std::size_t>(dim);
  std::call_once(flags[i], [&] { rules[i] = make_ball_rule(dim); });
  return rules[i];
}

}  // namespace qcext
