#include "qcext/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qcext/differential.hpp"
#include "qcext/format.hpp"
#include "qcext/parallel.hpp"

namespace qcext {

Density lebesgue_density(int dim) {
  return {dim, [](const Eigen::VectorXd&) { return 1.0; }, "lebesgue"};
}

Density jacobian_norm_density(const MapSpec& spec) {
  return {spec.dim(),
          [spec](const Eigen::VectorXd& x) { return spectral_norm(evaluate_map_jacobian(spec, x)); },
          "jacobian_norm:" + canonical_text(spec)};
}

double ball_mass(const Density& density, const Eigen::VectorXd& center, double radius) {
  require_same_dim(density.dim, center.size(), "ball_mass");
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidParameter, "ball radius must be positive");
  const BallRule& rule = unit_ball_rule(density.dim);
  double sum = 0.0;
  Eigen::VectorXd z(center.size());
  for (Eigen::Index k = 0; k < rule.weights.size(); ++k) {
    z = center + radius * rule.nodes.col(k);
    const double rho = density.rho(z);
    if (!(rho >= 0.0) || !std::isfinite(rho)) {
      throw Error(ErrorKind::NonFiniteEvaluation, "density must be finite and nonnegative");
    }
    sum += rule.weights(k) * rho;
  }
  return std::pow(radius, density.dim) * sum;
}

DoublingReport doubling_report(const Density& density, const std::vector<Eigen::VectorXd>& centers,
                               const std::vector<double>& radii) {
  DoublingReport report;
  report.density = density.label;
  report.balls.resize(centers.size() * radii.size());
  parallel_for(report.balls.size(), [&](std::size_t i) {
    DoublingBall& ball = report.balls[i];
    ball.center = centers[i / radii.size()];
    ball.radius = radii[i % radii.size()];
    ball.mass = ball_mass(density, ball.center, ball.radius);
    ball.mass2x = ball_mass(density, ball.center, 2.0 * ball.radius);
    const double scale = std::pow(ball.radius, density.dim);
    if (!(ball.mass > 1e-300 * std::max(1.0, scale)) || ball.mass < 1e-14 * ball.mass2x) {
      throw Error(ErrorKind::ZeroMass, "ball has zero mass");
    }
    ball.ratio = ball.mass2x / ball.mass;
  });
  for (const auto& ball : report.balls) report.constant_hat = std::max(report.constant_hat, ball.ratio);
  return report;
}

std::string doubling_to_csv(const DoublingReport& report) {
  std::string out;
  const int n = report.balls.empty() ? 0 : static_cast<int>(report.balls.front().center.size());
  for (int i = 1; i <= n; ++i) out += "c" + std::to_string(i) + ",";
  out += "r,mass,mass2x,ratio\n";
  for (const auto& ball : report.balls) {
    out += format_csv_row(ball.center) + "," + format_double(ball.radius) + "," + format_double(ball.mass) +
           "," + format_double(ball.mass2x) + "," + format_double(ball.ratio) + "\n";
  }
  return out;
}

nlohmann::json to_json(const DoublingReport& report) {
  nlohmann::json balls = nlohmann::json::array();
  for (const auto& ball : report.balls) {
    balls.push_back({{"center", to_json_array(ball.center)},
                     {"radius", ball.radius},
                     {"mass", ball.mass},
                     {"mass2x", ball.mass2x},
                     {"ratio", ball.ratio}});
  }
  return {{"density", report.density}, {"constant_hat", report.constant_hat}, {"balls", balls}};
}

MomentReport gaussian_moment_ratio(const Density& density, double p,
                                   const std::optional<Eigen::VectorXd>& halfspace_normal,
                                   const QuadratureScheme& scheme) {
  require_same_dim(density.dim, scheme.dim(), "gaussian_moment_ratio scheme");
  if (!(p >= 0.0)) throw Error(ErrorKind::InvalidParameter, "moment exponent must be >= 0");
  if (halfspace_normal) require_same_dim(density.dim, halfspace_normal->size(), "half-space normal");

  auto integrand = [&](const auto& y, Eigen::Ref<Eigen::VectorXd> g) {
    double indicator = 1.0;
    if (halfspace_normal) {
      const double side = y.dot(*halfspace_normal);
      indicator = side > 0.0 ? 1.0 : (side == 0.0 ? 0.5 : 0.0);
    }
    g(0) = indicator == 0.0 ? 0.0 : indicator * std::pow(y.norm(), p) * density.rho(y);
  };
  MomentReport report;
  report.integral = gaussian_sum(scheme, 1, integrand)(0);
  report.unit_ball_mass = ball_mass(density, Eigen::VectorXd::Zero(density.dim), 1.0);
  if (!(report.unit_ball_mass > 0.0)) throw Error(ErrorKind::ZeroMass, "unit ball has zero mass");
  report.ratio = report.integral / report.unit_ball_mass;
  return report;
}

nlohmann::json to_json(const MomentReport& report) {
  return {{"integral", report.integral}, {"unit_ball_mass", report.unit_ball_mass}, {"ratio", report.ratio}};
}

namespace {

// Unit-sphere sample: equiangular in the plane, low-discrepancy Gaussian directions otherwise.
Eigen::MatrixXd sphere_samples(int dim) {
  if (dim == 1) {
    Eigen::MatrixXd pts(1, 2);
    pts << -1.0, 1.0;
    return pts;
  }
  constexpr int count = 720;
  Eigen::MatrixXd pts(dim, count);
  for (int k = 0; k < count; ++k) {
    if (dim == 2) {
      const double th = 2.0 * std::numbers::pi * k / count;
      pts(0, k) = std::cos(th);
      pts(1, k) = std::sin(th);
    } else {
      for (int d = 0; d < dim; ++d) {
        pts(d, k) = inverse_normal_cdf(radical_inverse(static_cast<std::uint64_t>(k) + 1, nth_prime(d)));
      }
      pts.col(k).normalize();
    }
  }
  return pts;
}

}  // namespace

BoxRatio box_ratio(const MapSpec& spec, const Eigen::VectorXd& center, double radius) {
  const int n = spec.dim();
  require_same_dim(n, center.size(), "box_ratio");
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidParameter, "ball radius must be positive");

  const BallRule& rule = unit_ball_rule(n);
  const Eigen::MatrixXd boundary = sphere_samples(n);
  const Eigen::Index stride = std::max<Eigen::Index>(1, rule.weights.size() / 512);
  std::vector<Eigen::VectorXd> images;
  for (Eigen::Index k = 0; k < boundary.cols(); ++k) {
    images.push_back(evaluate_map(spec, (center + radius * boundary.col(k)).eval()));
  }
  for (Eigen::Index k = 0; k < rule.weights.size(); k += stride) {
    images.push_back(evaluate_map(spec, (center + radius * rule.nodes.col(k)).eval()));
  }
  double diam = 0.0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = i + 1; j < images.size(); ++j) diam = std::max(diam, (images[i] - images[j]).norm());
  }
  const double scale = std::max(1.0, evaluate_map(spec, center).norm());
  if (!(diam > 1e-14 * scale)) throw Error(ErrorKind::DegenerateImage, "image of the ball is degenerate");

  BoxRatio out;
  const double volume = unit_ball_volume(n) * std::pow(radius, n);
  out.average_norm = ball_mass(jacobian_norm_density(spec), center, radius) / volume;
  out.diameter_ratio = diam / (2.0 * radius);
  out.ratio = out.average_norm / out.diameter_ratio;
  return out;
}

}  // namespace qcext
