#include "qcext/extension.hpp"

#include <cmath>

#include "qcext/format.hpp"
#include "qcext/parallel.hpp"

namespace qcext {

ExtensionField::ExtensionField(MapSpec spec, QuadratureScheme scheme)
    : spec_(std::move(spec)), scheme_(std::move(scheme)) {
  require_same_dim(spec_.dim(), scheme_.dim(), "ExtensionField scheme");
}

namespace {

template <typename Sum>
Eigen::VectorXd lift(const ExtensionField& field, const HalfSpacePoint& p, Sum&& sum) {
  const int n = field.dim();
  require_same_dim(n, p.base.size(), "extend_point");
  Eigen::VectorXd out(n + 1);
  if (p.height == 0.0) {
    out.head(n) = evaluate_map(field.spec(), p.base);
    out(n) = 0.0;
    return out;
  }
  const double t = std::abs(p.height);
  const Eigen::VectorXd& x = p.base;
  Eigen::VectorXd z(n);
  Eigen::VectorXd fz(n);
  auto integrand = [&](const auto& y, Eigen::Ref<Eigen::VectorXd> g) {
    z = x + t * y;
    detail::evaluate_into<double>(field.spec(), z, fz);
    g.head(n) = fz;
    g(n) = fz.dot(y);
  };
  out = sum(integrand);
  if (p.height < 0.0) out(n) = -out(n);
  return out;
}

}  // namespace

Eigen::VectorXd extend_point(const ExtensionField& field, const HalfSpacePoint& p) {
  return lift(field, p, [&](auto& g) { return gaussian_sum(field.scheme(), field.dim() + 1, g); });
}

IntegrationResult extend_point_with_spread(const ExtensionField& field, const HalfSpacePoint& p) {
  IntegrationResult result;
  result.value = lift(field, p, [&](auto& g) {
    auto r = integrate_gaussian(field.scheme(), field.dim() + 1, g);
    result.spread = r.spread;
    return r.value;
  });
  return result;
}

Eigen::VectorXd extend_lifted(const ExtensionField& field, const Eigen::VectorXd& lifted) {
  require_same_dim(field.dim() + 1, lifted.size(), "extend_lifted");
  return extend_point(field, HalfSpacePoint::from_lifted(lifted));
}

Eigen::VectorXd trivial_extension(const MapSpec& spec, const HalfSpacePoint& p) {
  require_same_dim(spec.dim(), p.base.size(), "trivial_extension");
  Eigen::VectorXd out(spec.dim() + 1);
  out.head(spec.dim()) = evaluate_map(spec, p.base);
  out(spec.dim()) = p.height;
  return out;
}

std::vector<GridRow> extend_grid(const ExtensionField& field, const std::vector<HalfSpacePoint>& grid) {
  std::vector<GridRow> rows(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    try {
      rows[i] = {grid[i], extend_point(field, grid[i])};
    } catch (const Error& e) {
      throw Error(e.kind(), "row " + std::to_string(i) + ": " + e.what());
    }
  });
  return rows;
}

std::string grid_to_csv(const std::vector<GridRow>& rows, int dim) {
  std::string out;
  for (int i = 1; i <= dim; ++i) out += "x" + std::to_string(i) + ",";
  out += "t";
  for (int i = 1; i <= dim; ++i) out += ",F" + std::to_string(i);
  out += ",Fn1\n";
  for (const auto& row : rows) {
    Eigen::VectorXd line(2 * dim + 2);
    line << row.input.base, row.input.height, row.output;
    out += format_csv_row(line);
    out += '\n';
  }
  return out;
}

nlohmann::json grid_to_json(const std::vector<GridRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : rows) {
    out.push_back({{"x", to_json_array(row.input.base)},
                   {"t", row.input.height},
                   {"F", to_json_array(row.output)}});
  }
  return out;
}

std::string_view to_string(FactorClass c) noexcept {
  return c == FactorClass::BiLipschitz ? "bilipschitz" : "delta_monotone";
}

FactorClass factor_class_from_string(std::string_view name) {
  if (name == "bilipschitz") return FactorClass::BiLipschitz;
  if (name == "delta_monotone") return FactorClass::DeltaMonotone;
  throw Error(ErrorKind::MalformedSyntax, "unknown factor tag \"" + std::string(name) + "\"");
}

Eigen::VectorXd compose_qcd_extension(const std::vector<QcdFactor>& factors,
                                      const QuadratureScheme& scheme, const HalfSpacePoint& p) {
  if (factors.empty()) throw Error(ErrorKind::InvalidParameter, "no factors to compose");
  const int n = factors.front().spec.dim();
  for (const auto& f : factors) require_same_dim(n, f.spec.dim(), "compose_qcd_extension factor");
  require_same_dim(n, p.base.size(), "compose_qcd_extension point");
  require_same_dim(n, scheme.dim(), "compose_qcd_extension scheme");

  HalfSpacePoint current = p;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    const Eigen::VectorXd image = it->tag == FactorClass::DeltaMonotone
                                      ? extend_point(ExtensionField(it->spec, scheme), current)
                                      : trivial_extension(it->spec, current);
    current = HalfSpacePoint::from_lifted(image);
  }
  return current.lifted();
}

}  // namespace qcext
