#include "qcext/differential.hpp"

#include <cmath>

#include "qcext/format.hpp"

namespace qcext {

SquareMatrix extension_jacobian(const ExtensionField& field, const HalfSpacePoint& p) {
  const int n = field.dim();
  require_same_dim(n, p.base.size(), "extension_jacobian");
  if (!(p.height > 0.0)) throw Error(ErrorKind::OutOfRange, "extension_jacobian needs t > 0");
  const double t = p.height;
  const int m = n + 1;
  Eigen::VectorXd z(n);
  Eigen::MatrixXd a(n, n);
  auto integrand = [&](const auto& y, Eigen::Ref<Eigen::VectorXd> g) {
    z = p.base + t * y;
    detail::jacobian_into<double>(field.spec(), z, a);
    Eigen::Map<Eigen::MatrixXd>(g.data(), m, m) = block_matrix(a, y);
  };
  const Eigen::VectorXd flat = gaussian_sum(field.scheme(), m * m, integrand);
  return Eigen::Map<const Eigen::MatrixXd>(flat.data(), m, m);
}

SquareMatrix finite_difference_jacobian(const PointMap& map, const Eigen::VectorXd& p, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidParameter, "finite difference step must be positive");
  const Eigen::VectorXd f0 = map(p);
  SquareMatrix jac(f0.size(), p.size());
  Eigen::VectorXd q = p;
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    q(j) = p(j) + h;
    const Eigen::VectorXd fp = map(q);
    q(j) = p(j) - h;
    const Eigen::VectorXd fm = map(q);
    q(j) = p(j);
    jac.col(j) = (fp - fm) / (2.0 * h);
  }
  if (!jac.allFinite()) throw Error(ErrorKind::NonFiniteEvaluation, "map is not finite near p");
  return jac;
}

double operator_norm(const SquareMatrix& m) {
  if (!m.allFinite()) throw Error(ErrorKind::InvalidParameter, "operator_norm of a non-finite matrix");
  const Eigen::Index n = m.cols();
  if (n == 0) return 0.0;
  // start vector with distinct entries, so it is not orthogonal to axis-aligned singular vectors
  Eigen::VectorXd v(n);
  for (Eigen::Index j = 0; j < n; ++j) v(j) = 1.0 + 0.1 * static_cast<double>(j);
  v.normalize();
  const Eigen::MatrixXd gram = m.transpose() * m;
  double lambda = 0.0;
  for (int it = 0; it < kOperatorNormMaxIterations; ++it) {
    const Eigen::VectorXd w = gram * v;
    const double next = v.dot(w);
    const double len = w.norm();
    if (len == 0.0) return 0.0;
    v = w / len;
    if (it > 0 && std::abs(next - lambda) <= kOperatorNormTolerance * std::abs(next)) {
      return std::sqrt(std::max(next, v.dot(gram * v)));
    }
    lambda = next;
  }
  throw Error(ErrorKind::NoConvergence, "power iteration did not converge");
}

double spectral_norm(const SquareMatrix& m) {
  try {
    return operator_norm(m);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoConvergence) throw;
    return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
  }
}

AlphaAverage unit_ball_norm_average(const ExtensionField& field, const HalfSpacePoint& p) {
  const int n = field.dim();
  require_same_dim(n, p.base.size(), "unit_ball_norm_average");
  if (!(p.height > 0.0)) throw Error(ErrorKind::OutOfRange, "unit_ball_norm_average needs t > 0");
  const BallRule& rule = unit_ball_rule(n);
  Eigen::VectorXd z(n);
  Eigen::MatrixXd a(n, n);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < rule.weights.size(); ++k) {
    z = p.base + p.height * rule.nodes.col(k);
    detail::jacobian_into<double>(field.spec(), z, a);
    sum += rule.weights(k) * spectral_norm(a);
  }
  AlphaAverage out;
  out.value = sum;
  out.center = p;
  out.scheme = n == 2 ? "polar 32x64" : (n == 1 ? "gauss-legendre 32" : "halton-ball 32768");
  return out;
}

std::string jacobian_to_csv(const SquareMatrix& m, const HalfSpacePoint& p, const std::string& spec_hash,
                            const std::string& scheme_hash) {
  std::string out = "# x=" + format_csv_row(p.base) + " t=" + format_double(p.height) +
                    " spec_hash=" + spec_hash + " scheme_hash=" + scheme_hash + "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out += format_csv_row(m.row(r).transpose());
    out += '\n';
  }
  return out;
}

}  // namespace qcext
