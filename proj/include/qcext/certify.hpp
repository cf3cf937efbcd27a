#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qcext/differential.hpp"

namespace qcext {

// ---------------------------------------------------------------------------
// Two-point monotonicity

/// How two_point_delta draws its pairs. All families are generated up front
/// from `seed`, in a fixed order, so certificates do not depend on threading.
struct PairSamplerConfig {
  std::uint64_t seed = 1;
  std::size_t pairs = 10000;  // generic pairs
  double min_separation = 1e-3;
  double max_separation = 1e3;
  double box = 10.0;  // base points uniform in [-box, box]^dim

  /// Pairs (a, b) with a above and b below the hyperplane {x_dim = 0}.
  std::size_t crossing_pairs = 0;

  /// Witness family against the trivial lift of a radial map: a = (R u, 0),
  /// b = (R u + eps tau, h) with tau tangential, eps = 1/R and h = sqrt(R) eps.
  std::size_t adversarial_pairs = 0;
  double adversarial_radius = 400.0;
};

using PointPair = std::pair<Eigen::VectorXd, Eigen::VectorXd>;

std::vector<PointPair> sample_pairs(int dim, const PairSamplerConfig& config);

/// <u - v, a - b> / (|u - v| |a - b|) with u = F(a), v = F(b), clamped to [-1, 1].
double two_point_ratio(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& fa,
                       const Eigen::VectorXd& fb);

struct DeltaCertificate {
  double delta_hat = 1.0;
  PointPair witness;
  std::size_t samples = 0;  // pairs whose ratio was evaluated
  std::size_t skipped = 0;  // pairs with F(a) == F(b) or a == b
  std::uint64_t seed = 0;
  std::size_t crossing_samples = 0;
  double crossing_min = 1.0;  // minimum over the crossing family alone
};

DeltaCertificate two_point_delta(const PointMap& map, int dim, const PairSamplerConfig& config);

nlohmann::json to_json(const DeltaCertificate& cert);

// ---------------------------------------------------------------------------
// Matrix-level constants

/// min over unit v with Av != 0 of v^T A v / |A v|.
double matrix_delta(const SquareMatrix& a);

/// min over unit v of v^T A v / ||A||, i.e. lambda_min(sym A) / sigma_max(A).
double matrix_gamma(const SquareMatrix& a);

/// c(delta) in |Av| >= c ||A|| |v|: the square of the lower bound
/// delta^-1 + 1 - sqrt((delta^-1 + 1)^2 - 1) on sqrt|Av|.
double claim_constant(double delta);

/// ||A||^n / det A.
double qc_distortion(const SquareMatrix& a, int n);
inline double qc_distortion(const SquareMatrix& a) { return qc_distortion(a, static_cast<int>(a.rows())); }

struct ClaimCheckConfig {
  std::size_t matrices_per_dim = 10000;
  std::vector<int> dims{2, 3};
  std::uint64_t seed = 7;
  double min_delta = 0.05;
};

struct ClaimCheckDimension {
  int dim = 0;
  std::size_t matrices = 0;
  std::size_t generated = 0;        // including those rejected for delta < min_delta
  std::size_t violations = 0;       // sigma_min < c(delta) sigma_max
  std::size_t chain_violations = 0; // gamma < delta c(delta) or delta < gamma
  double min_slack = 0.0;           // min of (sigma_min / sigma_max) / c(delta)
  double min_delta = 1.0;
  Eigen::MatrixXd worst;            // matrix attaining min_slack
};

struct ClaimCheckReport {
  ClaimCheckConfig config;
  std::vector<ClaimCheckDimension> dims;
  std::size_t total_violations() const;
};

/// Brute-force check of |Av| >= c(delta_A) ||A|| |v| and of the delta/gamma
/// chain over random matrices with matrix_delta >= min_delta.
ClaimCheckReport run_claim_check(const ClaimCheckConfig& config);

nlohmann::json to_json(const ClaimCheckReport& report);

// ---------------------------------------------------------------------------
// Quasisymmetry

struct TripleSamplerConfig {
  std::uint64_t seed = 1;
  std::size_t triples = 10000;
  double box = 10.0;
  double min_ratio = 1e-2;  // s = |x - z| / |y - z| spans [min_ratio, max_ratio]
  double max_ratio = 1e2;
  int buckets = 40;
};

struct EtaSample {
  double s = 0.0;
  double q = 0.0;
};

struct EtaProfile {
  std::vector<EtaSample> samples;
  std::vector<double> bucket_edges;  // buckets + 1 log-spaced edges
  std::vector<double> bucket_max;    // raw max q per bucket (0 if empty)
  std::vector<double> envelope;      // running max of bucket_max: nondecreasing
  std::size_t degenerate = 0;
  std::uint64_t seed = 0;
};

EtaProfile quasisymmetry_profile(const MapSpec& spec, const TripleSamplerConfig& config);

std::string profile_to_csv(const EtaProfile& profile);
nlohmann::json to_json(const EtaProfile& profile);

// ---------------------------------------------------------------------------
// Non-closure of delta-monotone maps under composition

struct CompositionReport {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta_composed = 0.0;
  bool non_monotone = false;  // |theta1 + theta2| >= pi/2
  DeltaCertificate composed_certificate;  // sampled pairs for the composed map
};

CompositionReport composition_monotonicity_demo(double theta1, double theta2, std::uint64_t seed = 1);

nlohmann::json to_json(const CompositionReport& report);

}  // namespace qcext
