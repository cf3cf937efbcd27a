#include <doctest.h>

#include <numbers>

#include "oracles.hpp"
#include "qcext/format.hpp"
#include "qcext/hashing.hpp"
#include "qcext/map_spec.hpp"
#include "qcext/parallel.hpp"
#include "support.hpp"

using namespace qcext;
using support::error_kind;

TEST_CASE("parse identity and rotation specs") {
  const MapSpec id = parse_map_spec(R"({"kind":"identity","dim":2})");
  CHECK(id.kind() == MapKind::Identity);
  CHECK(id.dim() == 2);

  const MapSpec rot = parse_map_spec(R"({"kind":"planar_rotation","dim":2,"params":{"theta":0.7853981633974}})");
  CHECK(rot.kind() == MapKind::PlanarRotation);
  CHECK(rot.theta() == doctest::Approx(0.7853981633974));
}

TEST_CASE("parse errors") {
  CHECK(error_kind([] { parse_map_spec(R"({"kind":"power_radial","dim":2,"params":{"p":-1.5}})"); }) ==
        ErrorKind::InvalidParameter);
  CHECK(error_kind([] { parse_map_spec("{not json"); }) == ErrorKind::MalformedSyntax);
  CHECK(error_kind([] { parse_map_spec(R"({"kind":"bogus","dim":2})"); }) == ErrorKind::MalformedSyntax);
  CHECK(error_kind([] { parse_map_spec(R"({"kind":"identity"})"); }) == ErrorKind::MalformedSyntax);
  CHECK(error_kind([] { parse_map_spec(R"({"kind":"identity","dim":0})"); }) == ErrorKind::InvalidParameter);
  CHECK(error_kind([] { parse_map_spec(R"({"kind":"planar_rotation","dim":1,"params":{"theta":1}})"); }) ==
        ErrorKind::InvalidParameter);
  CHECK(error_kind([] {
          parse_map_spec(R"({"kind":"composition","dim":2,"compose":[{"kind":"identity","dim":2},{"kind":"identity","dim":3}]})");
        }) == ErrorKind::DimensionMismatch);
  CHECK(error_kind([] { MapSpec::convex_gradient_quartic(2, 0.0, 1.0); }) == ErrorKind::InvalidParameter);
  CHECK(error_kind([] { MapSpec::linear(Eigen::MatrixXd::Ones(2, 3)); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("json round trip keeps the canonical text") {
  for (const auto& entry : support::gallery(3)) {
    CAPTURE(entry.name);
    const MapSpec back = map_spec_from_json(to_json(entry.spec));
    CHECK(canonical_text(back) == canonical_text(entry.spec));
  }
  const MapSpec aff = MapSpec::affine(Eigen::Matrix2d::Identity(), Eigen::Vector2d(1, -2));
  CHECK(canonical_text(parse_map_spec(to_json(aff).dump())) == canonical_text(aff));
}

TEST_CASE("evaluate examples") {
  CHECK(evaluate_map(MapSpec::identity(2), Eigen::Vector2d(3, -1)).isApprox(Eigen::Vector2d(3, -1)));
  const MapSpec pr = MapSpec::power_radial(2, 1.0);
  CHECK(evaluate_map(pr, Eigen::Vector2d(1, 0)).isApprox(Eigen::Vector2d(1, 0)));
  CHECK(evaluate_map(pr, Eigen::Vector2d(2, 0)).isApprox(Eigen::Vector2d(4, 0)));
  const Eigen::VectorXd q = evaluate_map(MapSpec::planar_rotation(2, std::numbers::pi / 2), Eigen::Vector2d(1, 0));
  CHECK(q(0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(q(1) == doctest::Approx(1.0));
  CHECK(error_kind([&] { evaluate_map(pr, Eigen::Vector3d(1, 0, 0)); }) == ErrorKind::DimensionMismatch);

  // composition applies the rightmost factor first
  const MapSpec comp = MapSpec::composition({MapSpec::translation(Eigen::Vector2d(1, 0)), pr});
  CHECK(evaluate_map(comp, Eigen::Vector2d(2, 0)).isApprox(Eigen::Vector2d(5, 0)));
}

TEST_CASE("jacobian examples") {
  CHECK(evaluate_map_jacobian(MapSpec::identity(3), Eigen::Vector3d(1, 2, 3)).isIdentity());
  Eigen::Matrix2d expect;
  expect << 2, 0, 0, 1;
  CHECK(evaluate_map_jacobian(MapSpec::power_radial(2, 1.0), Eigen::Vector2d(1, 0)).isApprox(expect));
  const double th = 0.3;
  CHECK(evaluate_map_jacobian(MapSpec::planar_rotation(2, th), Eigen::Vector2d(5, 7)).isApprox(support::rotation(th)));
  CHECK(error_kind([] { evaluate_map_jacobian(MapSpec::power_radial(2, -0.5), Eigen::Vector2d::Zero().eval()); }) ==
        ErrorKind::SingularPoint);
  CHECK(evaluate_map_jacobian(MapSpec::power_radial(2, 1.0), Eigen::Vector2d::Zero().eval()).isZero());
}

TEST_CASE("growth exponents") {
  CHECK(MapSpec::identity(2).growth_exponent() == 1.0);
  CHECK(MapSpec::planar_rotation(2, 1.0).growth_exponent() == 1.0);
  CHECK(MapSpec::power_radial(2, 0.5).growth_exponent() == 1.5);
}

TEST_CASE("property: analytic jacobian matches fourth-order differences") {
  support::Gen gen(11);
  for (int n : {2, 3}) {
    for (const auto& entry : support::gallery(n)) {
      CAPTURE(entry.name);
      double worst = 0.0;
      for (int k = 0; k < 1000; ++k) {
        const Eigen::VectorXd x = gen.vector(n, 3.0);
        const Eigen::MatrixXd ref = oracle::jacobian_4th(
            [&](const Eigen::VectorXd& v) { return evaluate_map(entry.spec, v); }, x, 1e-3 * std::max(1.0, x.norm()));
        worst = std::max(worst, oracle::rel_frobenius(evaluate_map_jacobian(entry.spec, x), ref));
        const Eigen::MatrixXd cd = central_difference_map_jacobian(entry.spec, x);
        worst = std::max(worst, oracle::rel_frobenius(cd, ref));
      }
      CHECK(worst <= 1e-5);
    }
  }
}

TEST_CASE("property: gradient maps have symmetric jacobians") {
  support::Gen gen(12);
  for (const MapSpec& spec : {MapSpec::power_radial(3, 1.0), MapSpec::power_radial(2, 0.5),
                              MapSpec::convex_gradient_quartic(3, 0.7, 1.3)}) {
    CHECK(spec.is_gradient_map());
    for (int k = 0; k < 200; ++k) {
      const Eigen::MatrixXd j = evaluate_map_jacobian(spec, gen.vector(spec.dim(), 4.0));
      CHECK((j - j.transpose()).norm() <= 1e-14 * j.norm());
    }
  }
}

TEST_CASE("property: rotations have two-point ratio cos theta") {
  support::Gen gen(13);
  for (double th : {0.0, 0.3, std::numbers::pi / 4, 1.4, -1.2}) {
    const MapSpec rot = MapSpec::planar_rotation(2, th);
    for (int k = 0; k < 500; ++k) {
      const Eigen::VectorXd x = gen.vector(2, 10.0);
      const Eigen::VectorXd y = gen.vector(2, 10.0);
      const Eigen::VectorXd d = evaluate_map(rot, x) - evaluate_map(rot, y);
      const double ratio = d.dot(x - y) / (d.norm() * (x - y).norm());
      CHECK(std::abs(ratio - std::cos(th)) <= 1e-12);
    }
  }
}

TEST_CASE("property: power_radial is homogeneous of degree p+1") {
  support::Gen gen(14);
  for (int k = 0; k < 200; ++k) {
    const double p = gen.uniform(-0.9, 2.0);
    const double s = gen.log_uniform(0.1, 10.0);
    const MapSpec spec = MapSpec::power_radial(3, p);
    const Eigen::VectorXd x = gen.vector(3, 2.0);
    CHECK(evaluate_map(spec, (s * x).eval()).isApprox(std::pow(s, p + 1) * evaluate_map(spec, x), 1e-12));
  }
}

TEST_CASE("evaluation is scalar-generic") {
  const MapSpec spec = MapSpec::convex_gradient_quartic(2, 1.0, 0.5);
  const Eigen::Matrix<long double, 2, 1> x(0.3L, -1.1L);
  const auto fx = evaluate_map(spec, x);
  const Eigen::VectorXd fd = evaluate_map(spec, x.cast<double>().eval());
  CHECK(static_cast<double>(fx(0)) == doctest::Approx(fd(0)).epsilon(1e-15));
  const auto jx = evaluate_map_jacobian(spec, x);
  CHECK(jx.cast<double>().isApprox(evaluate_map_jacobian(spec, x.cast<double>().eval())));
}

TEST_CASE("hashing and formatting") {
  static_assert(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex_digest("a") == "af63dc4c8601ec8c");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(0.9999999999999999) == "1");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_csv_row(Eigen::Vector3d(1, 2.5, -3)) == "1,2.5,-3");
  CHECK(vector_from_json_array(to_json_array(Eigen::Vector2d(1.25, -4))).isApprox(Eigen::Vector2d(1.25, -4)));
  CHECK(error_kind([] { vector_from_json_array(nlohmann::json::parse(R"([1,"x"])")); }) == ErrorKind::MalformedSyntax);
}

TEST_CASE("parallel_for runs every index once and rethrows the lowest failure") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));

  try {
    parallel_for(100, [](std::size_t i) {
      if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "17");
  }
}
