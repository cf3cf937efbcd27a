#include <doctest.h>

#include <numbers>

#include "qcext/hyperbolic.hpp"
#include "support.hpp"

using namespace qcext;
using support::error_kind;

namespace {

ExtensionField field_of(const MapSpec& spec) { return ExtensionField(spec, default_scheme(spec.dim())); }

// arccosh form, independent of the library's asinh evaluation
double distance_acosh(const HalfSpacePoint& p, const HalfSpacePoint& q) {
  const double d2 = (p.lifted() - q.lifted()).squaredNorm();
  return std::acosh(1.0 + d2 / (2.0 * p.height * q.height));
}

}  // namespace

TEST_CASE("distance examples") {
  const double e = std::numbers::e;
  const HalfSpacePoint a{Eigen::Vector2d(0, 0), 1.0};
  CHECK(hyperbolic_distance(a, {Eigen::Vector2d(0, 0), e}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(hyperbolic_distance(a, a) == 0.0);
  CHECK(hyperbolic_distance(a, {Eigen::Vector2d(0, 0), e * e}) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(error_kind([&] { hyperbolic_distance(a, {Eigen::Vector2d(0, 0), 0.0}); }) == ErrorKind::NonpositiveHeight);
  CHECK(error_kind([&] { hyperbolic_distance(a, {Eigen::Vector3d(0, 0, 0), 1.0}); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("property: hyperbolic distance is a metric") {
  support::Gen gen(71);
  for (int k = 0; k < 1000; ++k) {
    const int n = 1 + k % 3;
    const HalfSpacePoint p{gen.vector(n, 3.0), gen.log_uniform(0.01, 10.0)};
    const HalfSpacePoint q{gen.vector(n, 3.0), gen.log_uniform(0.01, 10.0)};
    const HalfSpacePoint r{gen.vector(n, 3.0), gen.log_uniform(0.01, 10.0)};
    const double pq = hyperbolic_distance(p, q);
    CHECK(pq == hyperbolic_distance(q, p));
    CHECK(pq <= hyperbolic_distance(p, r) + hyperbolic_distance(r, q) + 1e-12);
    CHECK(pq == doctest::Approx(distance_acosh(p, q)).epsilon(1e-9));
    // horizontal translation and dilation are isometries
    const double s = gen.log_uniform(0.1, 10.0);
    const Eigen::VectorXd shift = gen.vector(n, 5.0);
    CHECK(hyperbolic_distance({s * (p.base + shift), s * p.height}, {s * (q.base + shift), s * q.height}) ==
          doctest::Approx(pq).epsilon(1e-9));
  }
}

TEST_CASE("grids") {
  CHECK(default_hyperbolic_grid(2).size() == 81 * 4);
  CHECK(refined_hyperbolic_grid(2).size() == 289 * 7);
  const auto coarse = default_hyperbolic_grid(2);
  const auto fine = refined_hyperbolic_grid(2);
  for (const auto& p : coarse) {
    const bool found = std::any_of(fine.begin(), fine.end(), [&](const HalfSpacePoint& q) {
      return (q.base - p.base).norm() < 1e-12 && std::abs(q.height - p.height) < 1e-12;
    });
    CHECK(found);
  }
  CHECK(lattice_grid(3, 1, 2.0, {1.0}).front().base.isZero());
  CHECK(error_kind([] { lattice_grid(2, 0, 1.0, {1.0}); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("vertical comparison closed forms") {
  const HyperbolicReport id = vertical_comparison(field_of(MapSpec::identity(2)), default_hyperbolic_grid(2));
  for (const auto& s : id.samples) CHECK(std::abs(s.ratio - 1.0) <= 1e-8);
  CHECK(id.spread == doctest::Approx(1.0).epsilon(1e-8));
  const HyperbolicReport lin =
      vertical_comparison(field_of(MapSpec::linear(Eigen::Vector2d(2, 3).asDiagonal())), default_hyperbolic_grid(2));
  for (const auto& s : lin.samples) CHECK(std::abs(s.ratio - 1.0) <= 1e-8);
  CHECK(error_kind([] {
          vertical_comparison(field_of(MapSpec::identity(2)), {{Eigen::Vector2d(0, 0), 0.0}});
        }) == ErrorKind::NonpositiveHeight);
  CHECK(error_kind([] {
          vertical_comparison(field_of(MapSpec::linear(-Eigen::Matrix2d::Identity())), {{Eigen::Vector2d(0, 0), 1.0}});
        }) == ErrorKind::VanishingVertical);
  CHECK(hyperbolic_to_csv(id).rfind("x1,x2,t,norm_df,fvert,ratio\n", 0) == 0);
}

TEST_CASE("power_radial vertical comparison is stable under refinement") {
  const ExtensionField pr = field_of(MapSpec::power_radial(2, 1.0));
  const HyperbolicReport coarse = vertical_comparison(pr, default_hyperbolic_grid(2));
  const HyperbolicReport fine = vertical_comparison(pr, refined_hyperbolic_grid(2));
  CHECK(std::isfinite(coarse.spread));
  CHECK(coarse.min > 0.0);
  CHECK(std::abs(fine.spread / coarse.spread - 1.0) <= 0.1);
  MESSAGE("power_radial ratio in [" << coarse.min << ", " << coarse.max << "]");
}

TEST_CASE("bi-Lipschitz samples") {
  const double e = std::numbers::e;
  const BilipschitzReport id = bilipschitz_sample(
      field_of(MapSpec::identity(2)), {{{Eigen::Vector2d(0, 0), 1.0}, {Eigen::Vector2d(0, 0), e}}});
  CHECK(id.ratios.front() == doctest::Approx(1.0).epsilon(1e-10));

  const auto pairs = sample_halfspace_pairs(2, 1000, 5);
  for (const auto& [p, q] : pairs) {
    CHECK(hyperbolic_distance(p, q) > 0.0);
    CHECK(p.height >= 0.1);
    CHECK(p.height <= 10.0);
  }
  CHECK(error_kind([] {
          bilipschitz_sample(field_of(MapSpec::identity(2)), {{{Eigen::Vector2d(0, 0), 1.0}, {Eigen::Vector2d(0, 0), 1.0}}});
        }) == ErrorKind::InvalidParameter);
}

TEST_CASE("property: gallery bi-Lipschitz spreads are finite and stable") {
  for (const auto& entry : support::gallery(2)) {
    CAPTURE(entry.name);
    const ExtensionField field = field_of(entry.spec);
    const BilipschitzReport small = bilipschitz_sample(field, sample_halfspace_pairs(2, 1000, 9));
    const BilipschitzReport big = bilipschitz_sample(field, sample_halfspace_pairs(2, 2000, 9));
    CHECK(small.min > 0.0);
    CHECK(std::isfinite(small.max));
    MESSAGE(entry.name << " spread " << small.spread << " -> " << big.spread);
    CHECK(std::abs(big.spread / small.spread - 1.0) <= 0.1);
  }
}
