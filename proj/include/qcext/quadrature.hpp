#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <utility>

#include <json.hpp>

#include "qcext/types.hpp"

namespace qcext {

enum class QuadratureMethod { TensorHermite, QuasiRandom };

std::string_view to_string(QuadratureMethod method) noexcept;
QuadratureMethod quadrature_method_from_string(std::string_view name);

/// Discretization of the standard Gaussian density on R^n:
/// integral of g(y) phi(y) dy ~ sum_k w_k g(y_k).
///
/// Nodes are stored column-wise and ordered so that node k and node N-1-k are
/// mirror images (y and -y) with equal weights; a middle node, when present,
/// is the origin. The summation in integrate_gaussian pairs them, so odd
/// integrands integrate to exactly zero.
class QuadratureScheme {
 public:
  int dim() const noexcept { return dim_; }
  QuadratureMethod method() const noexcept { return method_; }
  int resolution() const noexcept { return resolution_; }
  std::uint64_t seed() const noexcept { return seed_; }
  Eigen::Index size() const noexcept { return weights_.size(); }
  const Eigen::MatrixXd& nodes() const noexcept { return nodes_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }

  /// The half-resolution companion used for the spread diagnostic.
  const QuadratureScheme& coarse() const { return *coarse_; }

  /// Short stable digest of (dim, method, resolution, seed).
  std::string hash() const;

 private:
  friend QuadratureScheme build_scheme(int, QuadratureMethod, int, std::uint64_t);
  friend QuadratureScheme build_scheme_unchecked(int, QuadratureMethod, int, std::uint64_t, bool);

  int dim_ = 0;
  QuadratureMethod method_ = QuadratureMethod::TensorHermite;
  int resolution_ = 0;
  std::uint64_t seed_ = 0;
  Eigen::MatrixXd nodes_;
  Eigen::VectorXd weights_;
  std::shared_ptr<const QuadratureScheme> coarse_;
};

inline constexpr double kMaxTensorNodes = 1e8;

/// resolution is the per-axis order m for tensor_hermite and the node count N
/// for quasi_random (rounded down to even so every node has its mirror).
QuadratureScheme build_scheme(int dim, QuadratureMethod method, int resolution,
                              std::uint64_t seed = 0);

/// tensor_hermite m=20 for n <= 3, quasi_random N=2^16 otherwise.
QuadratureScheme default_scheme(int dim, std::uint64_t seed = 0);

nlohmann::json scheme_to_json(const QuadratureScheme& scheme);
QuadratureScheme scheme_from_json(const nlohmann::json& j);

struct IntegrationResult {
  Eigen::VectorXd value;
  double spread = 0.0;  // max-abs gap between full and half resolution
};

/// Weighted sum over the scheme. g(y, out) writes out_dim components into out.
template <typename G>
Eigen::VectorXd gaussian_sum(const QuadratureScheme& scheme, Eigen::Index out_dim, G&& g) {
  const Eigen::Index count = scheme.size();
  const auto& nodes = scheme.nodes();
  const auto& w = scheme.weights();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(out_dim);
  Eigen::VectorXd lo(out_dim);
  Eigen::VectorXd hi(out_dim);
  const Eigen::Index half = count / 2;
  for (Eigen::Index k = 0; k < half; ++k) {
    g(nodes.col(k), lo);
    g(nodes.col(count - 1 - k), hi);
    if (!lo.allFinite() || !hi.allFinite()) {
      throw Error(ErrorKind::NonFiniteIntegrand, "integrand is not finite at a quadrature node");
    }
    acc += w(k) * (lo + hi);
  }
  if (count % 2 == 1) {
    g(nodes.col(half), lo);
    if (!lo.allFinite()) {
      throw Error(ErrorKind::NonFiniteIntegrand, "integrand is not finite at a quadrature node");
    }
    acc += w(half) * lo;
  }
  return acc;
}

template <typename G>
IntegrationResult integrate_gaussian(const QuadratureScheme& scheme, Eigen::Index out_dim, G&& g) {
  IntegrationResult result;
  result.value = gaussian_sum(scheme, out_dim, g);
  const Eigen::VectorXd coarse = gaussian_sum(scheme.coarse(), out_dim, g);
  result.spread = (result.value - coarse).cwiseAbs().maxCoeff();
  return result;
}

// ---------------------------------------------------------------------------
// One-dimensional rules and samplers shared by the other modules.

/// Gauss-Hermite rule for the standard normal weight: nodes ascending,
/// mirrored exactly, weights summing to one.
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_hermite_rule(int order);

/// Gauss-Legendre rule on [-1, 1].
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre_rule(int order);

/// Radical inverse of index in the given prime base.
double radical_inverse(std::uint64_t index, int base);
int nth_prime(int i);

/// Standard normal quantile for p in (0, 1).
double inverse_normal_cdf(double p);

double unit_ball_volume(int dim);

/// Cubature on the open unit ball B(0,1) of R^n: weights sum to its volume.
/// n=1: 32-point Gauss-Legendre. n=2: 32 radial x 64 angular product rule.
/// n>=3: Halton points accepted inside the ball (2^15 of them), equal weights.
struct BallRule {
  Eigen::MatrixXd nodes;
  Eigen::VectorXd weights;
};

const BallRule& unit_ball_rule(int dim);

}  // namespace qcext
