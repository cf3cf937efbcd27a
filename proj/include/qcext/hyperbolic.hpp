#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcext/differential.hpp"

namespace qcext {

/// Distance in H^{n+1} with the metric |dx| / x_{n+1}:
/// arccosh(1 + |p - q|^2 / (2 t_p t_q)), evaluated as 2 asinh(|p - q| / (2 sqrt(t_p t_q))).
double hyperbolic_distance(const HalfSpacePoint& p, const HalfSpacePoint& q);

/// Lattice with per_axis points per coordinate on [-half_width, half_width]^n
/// crossed with the given heights.
std::vector<HalfSpacePoint> lattice_grid(int dim, int per_axis, double half_width,
                                         const std::vector<double>& heights);

/// 9 points per axis on [-2, 2]^n and t in {0.25, 0.5, 1, 2}.
std::vector<HalfSpacePoint> default_hyperbolic_grid(int dim);

/// 17 points per axis and seven log-spaced heights from 0.25 to 2; contains
/// the default grid.
std::vector<HalfSpacePoint> refined_hyperbolic_grid(int dim);

struct VerticalSample {
  HalfSpacePoint point;
  double norm_df = 0.0;  // ||DF(x,t)||
  double fvert = 0.0;    // F^{n+1}(x,t)
  double ratio = 0.0;    // ||DF|| t / F^{n+1}
};

struct HyperbolicReport {
  std::vector<VerticalSample> samples;
  double min = 0.0;
  double max = 0.0;
  double spread = 0.0;  // max / min
};

HyperbolicReport vertical_comparison(const ExtensionField& field, const std::vector<HalfSpacePoint>& grid);

std::string hyperbolic_to_csv(const HyperbolicReport& report);
nlohmann::json to_json(const HyperbolicReport& report);

using HalfSpacePair = std::pair<HalfSpacePoint, HalfSpacePoint>;

/// Pairs with bases uniform in [-half_width, half_width]^n and log-uniform
/// heights in [min_height, max_height]; coincident pairs are never emitted.
std::vector<HalfSpacePair> sample_halfspace_pairs(int dim, std::size_t count, std::uint64_t seed,
                                                  double min_height = 0.1, double max_height = 10.0,
                                                  double half_width = 2.0);

struct BilipschitzReport {
  std::vector<double> ratios;  // d(F p, F q) / d(p, q), in pair order
  double min = 0.0;
  double max = 0.0;
  double spread = 0.0;
};

BilipschitzReport bilipschitz_sample(const ExtensionField& field, const std::vector<HalfSpacePair>& pairs);

nlohmann::json to_json(const BilipschitzReport& report);

}  // namespace qcext
