#include "qcext/format.hpp"

#include <cstdio>

namespace qcext {

std::string format_double(double v) {
  if (v == 0.0) return "0";  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string format_csv_row(const Eigen::Ref<const Eigen::VectorXd>& values) {
  std::string out;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values(i));
  }
  return out;
}

nlohmann::json to_json_array(const Eigen::Ref<const Eigen::VectorXd>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

nlohmann::json to_json_matrix(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json_array(m.row(r).transpose()));
  return out;
}

Eigen::VectorXd vector_from_json_array(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorKind::MalformedSyntax, "expected a JSON array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorKind::MalformedSyntax, "expected a JSON array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

}  // namespace qcext
