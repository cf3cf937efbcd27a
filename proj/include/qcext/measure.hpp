#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcext/map_spec.hpp"
#include "qcext/quadrature.hpp"

namespace qcext {

/// Nonnegative density rho of a measure mu = rho dx on R^n.
struct Density {
  int dim = 0;
  std::function<double(const Eigen::VectorXd&)> rho;
  std::string label;
};

Density lebesgue_density(int dim);

/// rho(x) = ||Df(x)||.
Density jacobian_norm_density(const MapSpec& spec);

/// mu(B(center, radius)) with the unit-ball rule scaled onto the ball.
double ball_mass(const Density& density, const Eigen::VectorXd& center, double radius);

struct DoublingBall {
  Eigen::VectorXd center;
  double radius = 0.0;
  double mass = 0.0;    // mu(B)
  double mass2x = 0.0;  // mu(2B)
  double ratio = 0.0;
};

struct DoublingReport {
  std::string density;
  double constant_hat = 0.0;  // max ratio over the sampled balls
  std::vector<DoublingBall> balls;
};

/// mu(2B) / mu(B) for every ball B(c, r), c in centers, r in radii.
DoublingReport doubling_report(const Density& density, const std::vector<Eigen::VectorXd>& centers,
                               const std::vector<double>& radii);

std::string doubling_to_csv(const DoublingReport& report);
nlohmann::json to_json(const DoublingReport& report);

struct MomentReport {
  double integral = 0.0;        // int_Omega |y|^p phi(y) dmu(y)
  double unit_ball_mass = 0.0;  // mu(B(0,1))
  double ratio = 0.0;
};

/// Omega is R^n, or {<y, normal> >= 0} when a normal is given. Nodes on the
/// boundary hyperplane count with weight 1/2.
MomentReport gaussian_moment_ratio(const Density& density, double p,
                                   const std::optional<Eigen::VectorXd>& halfspace_normal,
                                   const QuadratureScheme& scheme);

nlohmann::json to_json(const MomentReport& report);

struct BoxRatio {
  double average_norm = 0.0;    // (1/|B|) int_B ||Df||
  double diameter_ratio = 0.0;  // diam f(B) / diam B
  double ratio = 0.0;
};

/// Average Jacobian norm over B against diam f(B) / diam B; diam f(B) is the
/// largest pairwise distance over boundary and interior samples of B.
BoxRatio box_ratio(const MapSpec& spec, const Eigen::VectorXd& center, double radius);

}  // namespace qcext
