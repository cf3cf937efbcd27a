#include "qcext/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qcext/format.hpp"
#include "qcext/parallel.hpp"

namespace qcext {

double hyperbolic_distance(const HalfSpacePoint& p, const HalfSpacePoint& q) {
  require_same_dim(p.base.size(), q.base.size(), "hyperbolic_distance");
  if (!(p.height > 0.0) || !(q.height > 0.0)) {
    throw Error(ErrorKind::NonpositiveHeight, "hyperbolic_distance needs positive heights");
  }
  const double euclid = std::hypot((p.base - q.base).norm(), p.height - q.height);
  return 2.0 * std::asinh(euclid / (2.0 * std::sqrt(p.height * q.height)));
}

std::vector<HalfSpacePoint> lattice_grid(int dim, int per_axis, double half_width,
                                         const std::vector<double>& heights) {
  if (dim < 1 || per_axis < 1) throw Error(ErrorKind::InvalidParameter, "lattice_grid: bad size");
  std::vector<HalfSpacePoint> grid;
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  const double step = per_axis > 1 ? 2.0 * half_width / (per_axis - 1) : 0.0;
  for (double t : heights) {
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      Eigen::VectorXd x(dim);
      for (int d = 0; d < dim; ++d) {
        x(d) = per_axis > 1 ? -half_width + step * idx[static_cast<std::size_t>(d)] : 0.0;
      }
      grid.push_back({x, t});
      int d = 0;
      for (; d < dim; ++d) {
        if (++idx[static_cast<std::size_t>(d)] < per_axis) break;
        idx[static_cast<std::size_t>(d)] = 0;
      }
      if (d == dim) break;
    }
  }
  return grid;
}

std::vector<HalfSpacePoint> default_hyperbolic_grid(int dim) {
  return lattice_grid(dim, 9, 2.0, {0.25, 0.5, 1.0, 2.0});
}

std::vector<HalfSpacePoint> refined_hyperbolic_grid(int dim) {
  std::vector<double> heights;
  for (int k = 0; k <= 6; ++k) heights.push_back(0.25 * std::pow(2.0, k / 2.0));
  heights[2] = 0.5;
  heights[4] = 1.0;
  heights[6] = 2.0;
  return lattice_grid(dim, 17, 2.0, heights);
}

HyperbolicReport vertical_comparison(const ExtensionField& field, const std::vector<HalfSpacePoint>& grid) {
  HyperbolicReport report;
  report.samples.resize(grid.size());
  const int n = field.dim();
  parallel_for(grid.size(), [&](std::size_t i) {
    const HalfSpacePoint& p = grid[i];
    if (!(p.height > 0.0)) throw Error(ErrorKind::NonpositiveHeight, "vertical_comparison needs t > 0");
    VerticalSample& s = report.samples[i];
    s.point = p;
    const Eigen::VectorXd image = extend_point(field, p);
    s.fvert = image(n);
    if (!(s.fvert > 1e-14 * std::max(1.0, image.head(n).norm()))) {
      throw Error(ErrorKind::VanishingVertical, "F^{n+1} vanishes at grid point " + std::to_string(i));
    }
    s.norm_df = spectral_norm(extension_jacobian(field, p));
    s.ratio = s.norm_df * p.height / s.fvert;
  });
  if (!report.samples.empty()) {
    auto [lo, hi] = std::minmax_element(report.samples.begin(), report.samples.end(),
                                        [](const auto& a, const auto& b) { return a.ratio < b.ratio; });
    report.min = lo->ratio;
    report.max = hi->ratio;
    report.spread = report.max / report.min;
  }
  return report;
}

std::string hyperbolic_to_csv(const HyperbolicReport& report) {
  std::string out;
  const Eigen::Index n = report.samples.empty() ? 0 : report.samples.front().point.base.size();
  for (Eigen::Index i = 1; i <= n; ++i) out += "x" + std::to_string(i) + ",";
  out += "t,norm_df,fvert,ratio\n";
  for (const auto& s : report.samples) {
    out += format_csv_row(s.point.base) + "," + format_double(s.point.height) + "," + format_double(s.norm_df) +
           "," + format_double(s.fvert) + "," + format_double(s.ratio) + "\n";
  }
  return out;
}

nlohmann::json to_json(const HyperbolicReport& report) {
  return {{"points", report.samples.size()},
          {"min", report.min},
          {"max", report.max},
          {"spread", report.spread}};
}

std::vector<HalfSpacePair> sample_halfspace_pairs(int dim, std::size_t count, std::uint64_t seed,
                                                  double min_height, double max_height, double half_width) {
  if (!(min_height > 0.0) || !(max_height >= min_height)) {
    throw Error(ErrorKind::NonpositiveHeight, "sample_halfspace_pairs: heights must be positive");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-half_width, half_width);
  std::uniform_real_distribution<double> log_height(std::log(min_height), std::log(max_height));
  auto draw = [&] {
    HalfSpacePoint p{Eigen::VectorXd(dim), 0.0};
    for (int d = 0; d < dim; ++d) p.base(d) = coord(rng);
    p.height = std::exp(log_height(rng));
    return p;
  };
  std::vector<HalfSpacePair> pairs;
  pairs.reserve(count);
  while (pairs.size() < count) {
    HalfSpacePoint p = draw();
    HalfSpacePoint q = draw();
    if (p.base == q.base && p.height == q.height) continue;
    pairs.emplace_back(std::move(p), std::move(q));
  }
  return pairs;
}

BilipschitzReport bilipschitz_sample(const ExtensionField& field, const std::vector<HalfSpacePair>& pairs) {
  BilipschitzReport report;
  report.ratios.resize(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto& [p, q] = pairs[i];
    const double d = hyperbolic_distance(p, q);
    if (d == 0.0) throw Error(ErrorKind::InvalidParameter, "coincident pair " + std::to_string(i));
    const HalfSpacePoint fp = HalfSpacePoint::from_lifted(extend_point(field, p));
    const HalfSpacePoint fq = HalfSpacePoint::from_lifted(extend_point(field, q));
    if (!(fp.height > 0.0) || !(fq.height > 0.0)) {
      throw Error(ErrorKind::VanishingVertical, "F^{n+1} <= 0 at pair " + std::to_string(i));
    }
    report.ratios[i] = hyperbolic_distance(fp, fq) / d;
  });
  if (!report.ratios.empty()) {
    auto [lo, hi] = std::minmax_element(report.ratios.begin(), report.ratios.end());
    report.min = *lo;
    report.max = *hi;
    report.spread = report.max / report.min;
  }
  return report;
}

nlohmann::json to_json(const BilipschitzReport& report) {
  return {{"pairs", report.ratios.size()}, {"min", report.min}, {"max", report.max}, {"spread", report.spread}};
}

}  // namespace qcext
