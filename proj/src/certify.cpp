#include "qcext/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "qcext/format.hpp"
#include "qcext/parallel.hpp"

namespace qcext {

namespace {

using Rng = std::mt19937_64;

Eigen::VectorXd random_unit(Rng& rng, Eigen::Index dim) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(dim);
  do {
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = normal(rng);
  } while (v.norm() < 1e-12);
  return v.normalized();
}

Eigen::VectorXd random_in_box(Rng& rng, Eigen::Index dim, double box) {
  std::uniform_real_distribution<double> coord(-box, box);
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = coord(rng);
  return v;
}

double log_uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

}  // namespace

// ---------------------------------------------------------------------------
// Two-point monotonicity

std::vector<PointPair> sample_pairs(int dim, const PairSamplerConfig& config) {
  if (dim < 1) throw Error(ErrorKind::InvalidParameter, "sample_pairs: dim must be >= 1");
  if (!(config.min_separation > 0.0) || !(config.max_separation >= config.min_separation)) {
    throw Error(ErrorKind::InvalidParameter, "sample_pairs: bad separation range");
  }
  Rng rng(config.seed);
  std::vector<PointPair> pairs;
  pairs.reserve(config.pairs + config.crossing_pairs + config.adversarial_pairs);

  for (std::size_t i = 0; i < config.pairs; ++i) {
    Eigen::VectorXd a = random_in_box(rng, dim, config.box);
    const double r = log_uniform(rng, config.min_separation, config.max_separation);
    Eigen::VectorXd b = a + r * random_unit(rng, dim);
    pairs.emplace_back(std::move(a), std::move(b));
  }

  const Eigen::Index last = dim - 1;
  for (std::size_t i = 0; i < config.crossing_pairs; ++i) {
    Eigen::VectorXd c = random_in_box(rng, dim, config.box);
    c(last) = 0.0;
    Eigen::VectorXd u;
    do {
      u = random_unit(rng, dim);
    } while (std::abs(u(last)) < 1e-6);
    if (u(last) < 0.0) u = -u;
    const double s1 = log_uniform(rng, config.min_separation, config.max_separation) / 2;
    const double s2 = log_uniform(rng, config.min_separation, config.max_separation) / 2;
    pairs.emplace_back(c + s1 * u, c - s2 * u);
  }

  if (config.adversarial_pairs > 0) {
    if (dim < 3) {
      throw Error(ErrorKind::InvalidParameter, "adversarial pairs need a lifted dimension >= 3");
    }
    const double radius = config.adversarial_radius;
    const double eps = 1.0 / radius;
    const double gap = std::sqrt(radius) * eps;
    for (std::size_t i = 0; i < config.adversarial_pairs; ++i) {
      const Eigen::VectorXd u = random_unit(rng, last);
      Eigen::VectorXd tau;
      do {
        tau = random_unit(rng, last);
        tau -= tau.dot(u) * u;
      } while (tau.norm() < 1e-8);
      tau.normalize();
      Eigen::VectorXd a = Eigen::VectorXd::Zero(dim);
      a.head(last) = radius * u;
      Eigen::VectorXd b = a;
      b.head(last) += eps * tau;
      b(last) = (i % 2 == 0) ? gap : -gap;
      pairs.emplace_back(std::move(a), std::move(b));
    }
  }
  return pairs;
}

double two_point_ratio(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& fa,
                       const Eigen::VectorXd& fb) {
  const Eigen::VectorXd dx = a - b;
  const Eigen::VectorXd df = fa - fb;
  const double denom = df.norm() * dx.norm();
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::clamp(df.dot(dx) / denom, -1.0, 1.0);
}

DeltaCertificate two_point_delta(const PointMap& map, int dim, const PairSamplerConfig& config) {
  const std::vector<PointPair> pairs = sample_pairs(dim, config);
  std::vector<double> ratios(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto& [a, b] = pairs[i];
    const Eigen::VectorXd fa = map(a);
    const Eigen::VectorXd fb = map(b);
    if (!fa.allFinite() || !fb.allFinite()) {
      throw Error(ErrorKind::NonFiniteEvaluation, "map is not finite at a sampled pair");
    }
    ratios[i] = two_point_ratio(a, b, fa, fb);
  });

  DeltaCertificate cert;
  cert.seed = config.seed;
  std::size_t best = pairs.size();
  const std::size_t crossing_begin = config.pairs;
  const std::size_t crossing_end = config.pairs + config.crossing_pairs;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (std::isnan(ratios[i])) {
      ++cert.skipped;
      continue;
    }
    ++cert.samples;
    if (best == pairs.size() || ratios[i] < ratios[best]) best = i;
    if (i >= crossing_begin && i < crossing_end) {
      ++cert.crossing_samples;
      cert.crossing_min = std::min(cert.crossing_min, ratios[i]);
    }
  }
  if (best == pairs.size()) throw Error(ErrorKind::DegenerateMap, "every sampled pair collapsed");
  cert.delta_hat = ratios[best];
  cert.witness = pairs[best];
  return cert;
}

nlohmann::json to_json(const DeltaCertificate& cert) {
  return {{"delta_hat", cert.delta_hat},
          {"witness", {{"a", to_json_array(cert.witness.first)}, {"b", to_json_array(cert.witness.second)}}},
          {"samples", cert.samples},
          {"skipped", cert.skipped},
          {"crossing_samples", cert.crossing_samples},
          {"crossing_min", cert.crossing_min},
          {"seed", cert.seed}};
}

// ---------------------------------------------------------------------------
// Matrix constants

namespace {

constexpr int kSweep = 4096;
constexpr int kRestarts = 512;
constexpr int kRefined = 16;
constexpr std::uint64_t kMatrixDeltaSeed = 0x9e3779b97f4a7c15ULL;

struct DeltaObjective {
  const SquareMatrix& a;
  double tiny;

  // NaN when Av vanishes
  double operator()(const Eigen::VectorXd& v) const {
    const Eigen::VectorXd av = a * v;
    const double len = av.norm();
    if (len <= tiny * v.norm()) return std::numeric_limits<double>::quiet_NaN();
    return std::clamp(v.dot(av) / (len * v.norm()), -1.0, 1.0);
  }

  // gradient of the degree-0 homogeneous ratio at unit v (already tangent)
  Eigen::VectorXd gradient(const Eigen::VectorXd& v) const {
    const Eigen::VectorXd av = a * v;
    const double len = av.norm();
    const double q = v.dot(av);
    return (av + a.transpose() * v) / len - q * (a.transpose() * av / (len * len * len) + v / len);
  }
};

double sweep_plane(const DeltaObjective& obj) {
  auto at = [&](double th) {
    Eigen::Vector2d v(std::cos(th), std::sin(th));
    return obj(v);
  };
  const double step = std::numbers::pi / kSweep;
  double best = std::numeric_limits<double>::infinity();
  int best_k = -1;
  for (int k = 0; k < kSweep; ++k) {
    const double val = at(k * step);
    if (!std::isnan(val) && val < best) {
      best = val;
      best_k = k;
    }
  }
  if (best_k < 0) throw Error(ErrorKind::ZeroMatrix, "Av vanishes in every direction");
  // golden-section refinement inside the neighbouring cells
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = (best_k - 1) * step;
  double hi = (best_k + 1) * step;
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  auto safe = [&](double th) {
    const double val = at(th);
    return std::isnan(val) ? std::numeric_limits<double>::infinity() : val;
  };
  double fc = safe(c);
  double fd = safe(d);
  for (int it = 0; it < 80; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = safe(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = safe(d);
    }
  }
  return std::min({best, fc, fd});
}

double multistart(const DeltaObjective& obj, Eigen::Index dim) {
  Rng rng(kMatrixDeltaSeed);
  std::vector<std::pair<double, Eigen::VectorXd>> starts;
  starts.reserve(kRestarts);
  for (int k = 0; k < kRestarts; ++k) {
    Eigen::VectorXd v = random_unit(rng, dim);
    const double val = obj(v);
    if (!std::isnan(val)) starts.emplace_back(val, std::move(v));
  }
  if (starts.empty()) throw Error(ErrorKind::ZeroMatrix, "Av vanishes in every sampled direction");
  const std::size_t keep = std::min<std::size_t>(kRefined, starts.size());
  std::partial_sort(starts.begin(), starts.begin() + static_cast<std::ptrdiff_t>(keep), starts.end(),
                    [](const auto& l, const auto& r) { return l.first < r.first; });
  double best = starts.front().first;
  for (std::size_t s = 0; s < keep; ++s) {
    Eigen::VectorXd v = starts[s].second;
    double val = starts[s].first;
    double step = 0.5;
    for (int it = 0; it < 200; ++it) {
      const Eigen::VectorXd g = obj.gradient(v);
      if (g.norm() < 1e-13) break;
      bool moved = false;
      while (step > 1e-14) {
        const Eigen::VectorXd trial = (v - step * g).normalized();
        const double tv = obj(trial);
        if (!std::isnan(tv) && tv < val) {
          v = trial;
          val = tv;
          step *= 2.0;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    best = std::min(best, val);
  }
  return best;
}

void require_nonzero(const SquareMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": matrix must be square");
  }
  if (!a.allFinite()) throw Error(ErrorKind::InvalidParameter, std::string(what) + ": non-finite matrix");
  if (a.isZero(0.0)) throw Error(ErrorKind::ZeroMatrix, std::string(what) + ": zero matrix");
}

}  // namespace

double matrix_delta(const SquareMatrix& a) {
  require_nonzero(a, "matrix_delta");
  const DeltaObjective obj{a, 1e-13 * a.norm()};
  if (a.rows() == 1) return a(0, 0) > 0.0 ? 1.0 : -1.0;
  if (a.rows() == 2) return sweep_plane(obj);
  return multistart(obj, a.rows());
}

double matrix_gamma(const SquareMatrix& a) {
  require_nonzero(a, "matrix_gamma");
  const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  const double lambda_min = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym).eigenvalues()(0);
  return lambda_min / spectral_norm(a);
}

double claim_constant(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw Error(ErrorKind::OutOfRange, "claim_constant needs 0 < delta <= 1");
  const double k = 1.0 / delta + 1.0;
  // k - sqrt(k^2 - 1), written without cancellation
  const double lambda = 1.0 / (k + std::sqrt(k * k - 1.0));
  return lambda * lambda;
}

double qc_distortion(const SquareMatrix& a, int n) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::DimensionMismatch, "qc_distortion: matrix must be square");
  const double det = a.determinant();
  if (!(det > 0.0)) throw Error(ErrorKind::NonpositiveDeterminant, "qc_distortion needs det A > 0");
  return std::pow(spectral_norm(a), n) / det;
}

// ---------------------------------------------------------------------------
// Claim brute force

namespace {

Eigen::MatrixXd random_delta_candidate(Rng& rng, int dim) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = normal(rng);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  Eigen::VectorXd lambda(dim);
  for (int i = 0; i < dim; ++i) lambda(i) = std::exp(3.0 * unit(rng) - 1.5);
  const Eigen::MatrixXd spd = q * lambda.asDiagonal() * q.transpose();
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = normal(rng);
  const Eigen::MatrixXd skew = 0.5 * (g - g.transpose());
  Eigen::MatrixXd noise(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) noise(i, j) = normal(rng);
  const double scale = lambda.mean();
  return spd + scale * (2.0 * unit(rng)) * skew + scale * 0.3 * unit(rng) * noise;
}

}  // namespace

std::size_t ClaimCheckReport::total_violations() const {
  std::size_t total = 0;
  for (const auto& d : dims) total += d.violations + d.chain_violations;
  return total;
}

ClaimCheckReport run_claim_check(const ClaimCheckConfig& config) {
  ClaimCheckReport report;
  report.config = config;
  for (std::size_t di = 0; di < config.dims.size(); ++di) {
    const int dim = config.dims[di];
    if (dim < 1) throw Error(ErrorKind::InvalidParameter, "claim check dimension must be >= 1");
    Rng rng(config.seed + 0x1000193ULL * (di + 1));

    // Generate candidates sequentially in batches and evaluate them in parallel;
    // accepted matrices are taken in generation order.
    ClaimCheckDimension out;
    out.dim = dim;
    out.min_slack = std::numeric_limits<double>::infinity();
    constexpr std::size_t kBatch = 512;
    while (out.matrices < config.matrices_per_dim) {
      std::vector<Eigen::MatrixXd> batch;
      for (std::size_t k = 0; k < kBatch; ++k) batch.push_back(random_delta_candidate(rng, dim));
      std::vector<double> deltas(batch.size());
      std::vector<double> gammas(batch.size());
      std::vector<Eigen::VectorXd> sv(batch.size());
      parallel_for(batch.size(), [&](std::size_t k) {
        deltas[k] = matrix_delta(batch[k]);
        if (deltas[k] >= config.min_delta) {
          gammas[k] = matrix_gamma(batch[k]);
          sv[k] = Eigen::JacobiSVD<Eigen::MatrixXd>(batch[k]).singularValues();
        }
      });
      for (std::size_t k = 0; k < batch.size() && out.matrices < config.matrices_per_dim; ++k) {
        ++out.generated;
        const double delta = deltas[k];
        if (delta < config.min_delta) continue;
        ++out.matrices;
        const double c = claim_constant(std::min(delta, 1.0));
        const double sigma_max = sv[k](0);
        const double sigma_min = sv[k](dim - 1);
        if (sigma_min < c * sigma_max) ++out.violations;
        const double gamma = gammas[k];
        if (gamma < delta * c - 1e-12 || delta < gamma - 1e-12) ++out.chain_violations;
        const double slack = (sigma_min / sigma_max) / c;
        if (slack < out.min_slack) {
          out.min_slack = slack;
          out.worst = batch[k];
        }
        out.min_delta = std::min(out.min_delta, delta);
      }
    }
    report.dims.push_back(std::move(out));
  }
  return report;
}

nlohmann::json to_json(const ClaimCheckReport& report) {
  nlohmann::json dims = nlohmann::json::array();
  for (const auto& d : report.dims) {
    dims.push_back({{"dim", d.dim},
                    {"matrices", d.matrices},
                    {"generated", d.generated},
                    {"violations", d.violations},
                    {"chain_violations", d.chain_violations},
                    {"min_slack", d.min_slack},
                    {"min_delta", d.min_delta},
                    {"worst_matrix", to_json_matrix(d.worst)}});
  }
  return {{"seed", report.config.seed},
          {"matrices_per_dim", report.config.matrices_per_dim},
          {"min_delta", report.config.min_delta},
          {"claim_constant_at_1", claim_constant(1.0)},
          {"violations", report.total_violations()},
          {"dims", dims}};
}

// ---------------------------------------------------------------------------
// Quasisymmetry profile

EtaProfile quasisymmetry_profile(const MapSpec& spec, const TripleSamplerConfig& config) {
  if (config.buckets < 1 || !(config.min_ratio > 0.0) || !(config.max_ratio > config.min_ratio)) {
    throw Error(ErrorKind::InvalidParameter, "quasisymmetry_profile: bad bucket range");
  }
  const int n = spec.dim();
  Rng rng(config.seed);
  struct Triple {
    Eigen::VectorXd x, y, z;
  };
  std::vector<Triple> triples;
  triples.reserve(config.triples);
  for (std::size_t i = 0; i < config.triples; ++i) {
    Eigen::VectorXd z = random_in_box(rng, n, config.box);
    const double ry = log_uniform(rng, 1e-2, 1e1);
    const double s = log_uniform(rng, config.min_ratio, config.max_ratio);
    Eigen::VectorXd y = z + ry * random_unit(rng, n);
    Eigen::VectorXd x = z + s * ry * random_unit(rng, n);
    triples.push_back({std::move(x), std::move(y), std::move(z)});
  }

  std::vector<EtaSample> samples(triples.size());
  parallel_for(triples.size(), [&](std::size_t i) {
    const auto& [x, y, z] = triples[i];
    const Eigen::VectorXd fz = evaluate_map(spec, z);
    const double dyz = (y - z).norm();
    const double fyz = (evaluate_map(spec, y) - fz).norm();
    if (dyz == 0.0 || fyz == 0.0) {
      samples[i] = {std::numeric_limits<double>::quiet_NaN(), 0.0};
      return;
    }
    samples[i] = {(x - z).norm() / dyz, (evaluate_map(spec, x) - fz).norm() / fyz};
  });

  EtaProfile profile;
  profile.seed = config.seed;
  const int nb = config.buckets;
  const double log_lo = std::log(config.min_ratio);
  const double log_hi = std::log(config.max_ratio);
  for (int b = 0; b <= nb; ++b) profile.bucket_edges.push_back(std::exp(log_lo + (log_hi - log_lo) * b / nb));
  profile.bucket_max.assign(static_cast<std::size_t>(nb), 0.0);
  for (const auto& sample : samples) {
    if (std::isnan(sample.s)) {
      ++profile.degenerate;
      continue;
    }
    profile.samples.push_back(sample);
    const double pos = (std::log(sample.s) - log_lo) / (log_hi - log_lo) * nb;
    const int b = std::clamp(static_cast<int>(std::floor(pos)), 0, nb - 1);
    auto& slot = profile.bucket_max[static_cast<std::size_t>(b)];
    slot = std::max(slot, sample.q);
  }
  if (static_cast<double>(profile.degenerate) > 0.01 * static_cast<double>(triples.size())) {
    throw Error(ErrorKind::DegenerateTriple, std::to_string(profile.degenerate) + " of " +
                                                 std::to_string(triples.size()) + " triples collapsed");
  }
  double running = 0.0;
  for (double m : profile.bucket_max) {
    running = std::max(running, m);
    profile.envelope.push_back(running);
  }
  return profile;
}

std::string profile_to_csv(const EtaProfile& profile) {
  std::string out = "# seed=" + std::to_string(profile.seed) + "\ns,q\n";
  for (const auto& sample : profile.samples) {
    out += format_double(sample.s) + "," + format_double(sample.q) + "\n";
  }
  return out;
}

nlohmann::json to_json(const EtaProfile& profile) {
  nlohmann::json buckets = nlohmann::json::array();
  for (std::size_t b = 0; b < profile.bucket_max.size(); ++b) {
    buckets.push_back({{"s_lo", profile.bucket_edges[b]},
                       {"s_hi", profile.bucket_edges[b + 1]},
                       {"max_q", profile.bucket_max[b]},
                       {"envelope", profile.envelope[b]}});
  }
  return {{"seed", profile.seed},
          {"samples", profile.samples.size()},
          {"degenerate", profile.degenerate},
          {"buckets", buckets}};
}

// ---------------------------------------------------------------------------
// Composition demo

CompositionReport composition_monotonicity_demo(double theta1, double theta2, std::uint64_t seed) {
  CompositionReport report;
  report.theta1 = theta1;
  report.theta2 = theta2;
  const MapSpec r1 = MapSpec::planar_rotation(2, theta1);
  const MapSpec r2 = MapSpec::planar_rotation(2, theta2);
  const Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  report.delta1 = matrix_delta(evaluate_map_jacobian(r1, origin));
  report.delta2 = matrix_delta(evaluate_map_jacobian(r2, origin));
  const MapSpec composed = MapSpec::composition({r1, r2});
  report.delta_composed = matrix_delta(evaluate_map_jacobian(composed, origin));
  report.non_monotone = std::abs(theta1 + theta2) >= std::numbers::pi / 2;

  PairSamplerConfig config;
  config.seed = seed;
  config.pairs = 2000;
  report.composed_certificate = two_point_delta(
      [&](const Eigen::VectorXd& x) { return evaluate_map(composed, x); }, 2, config);
  return report;
}

nlohmann::json to_json(const CompositionReport& report) {
  return {{"theta1", report.theta1},
          {"theta2", report.theta2},
          {"delta1", report.delta1},
          {"delta2", report.delta2},
          {"delta_composed", report.delta_composed},
          {"non_monotone", report.non_monotone},
          {"composed_certificate", to_json(report.composed_certificate)}};
}

}  // namespace qcext
