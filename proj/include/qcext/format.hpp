#pragma once

#include <string>

#include <json.hpp>

#include "qcext/types.hpp"

namespace qcext {

/// Fixed "%.15g" rendering used by every CSV writer, so repeated runs are
/// byte-identical and values like 0.9999999999999999 print as 1.
std::string format_double(double v);

/// Comma-joined format_double of the entries (no newline).
std::string format_csv_row(const Eigen::Ref<const Eigen::VectorXd>& values);

nlohmann::json to_json_array(const Eigen::Ref<const Eigen::VectorXd>& v);
nlohmann::json to_json_matrix(const Eigen::Ref<const Eigen::MatrixXd>& m);
Eigen::VectorXd vector_from_json_array(const nlohmann::json& j);

}  // namespace qcext
