#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qcext/map_spec.hpp"
#include "qcext/quadrature.hpp"

namespace qcext {

/// The Gaussian lift F: R^{n+1} -> R^{n+1} of a base map f: R^n -> R^n.
///
///   F^i(x,t)     = int f^i(x + t y) phi(y) dy            i = 1..n
///   F^{n+1}(x,t) = int <f(x + t y), y> phi(y) dy
///
/// for t > 0, F(x,0) = (f(x), 0), and F is reflected to t < 0 (horizontal
/// components even in t, vertical component odd).
class ExtensionField {
 public:
  ExtensionField(MapSpec spec, QuadratureScheme scheme);

  const MapSpec& spec() const noexcept { return spec_; }
  const QuadratureScheme& scheme() const noexcept { return scheme_; }
  int dim() const noexcept { return spec_.dim(); }

 private:
  MapSpec spec_;
  QuadratureScheme scheme_;
};

/// F(x,t) as a vector of R^{n+1}.
Eigen::VectorXd extend_point(const ExtensionField& field, const HalfSpacePoint& p);

/// Same as extend_point, but also returns the half-resolution spread.
IntegrationResult extend_point_with_spread(const ExtensionField& field, const HalfSpacePoint& p);

/// F evaluated on a lifted point (x, t) in R^{n+1}.
Eigen::VectorXd extend_lifted(const ExtensionField& field, const Eigen::VectorXd& lifted);

/// (x,t) -> (f(x), t). Keeps bi-Lipschitz maps bi-Lipschitz, but not
/// delta-monotone ones.
Eigen::VectorXd trivial_extension(const MapSpec& spec, const HalfSpacePoint& p);

struct GridRow {
  HalfSpacePoint input;
  Eigen::VectorXd output;
};

/// Row-per-point evaluation in input order. Failures are rethrown with the
/// offending row index in the message.
std::vector<GridRow> extend_grid(const ExtensionField& field, const std::vector<HalfSpacePoint>& grid);

/// Header x1..xn,t,F1..Fn,Fn1 followed by one line per row.
std::string grid_to_csv(const std::vector<GridRow>& rows, int dim);
nlohmann::json grid_to_json(const std::vector<GridRow>& rows);

enum class FactorClass { BiLipschitz, DeltaMonotone };

std::string_view to_string(FactorClass c) noexcept;
FactorClass factor_class_from_string(std::string_view name);

struct QcdFactor {
  FactorClass tag;
  MapSpec spec;
};

/// Extension of f = f_1 o ... o f_k: delta-monotone factors are lifted by the
/// Gaussian extension, bi-Lipschitz ones trivially; applied right to left.
Eigen::VectorXd compose_qcd_extension(const std::vector<QcdFactor>& factors,
                                      const QuadratureScheme& scheme, const HalfSpacePoint& p);

}  // namespace qcext
