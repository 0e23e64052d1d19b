#pragma once

// Byte-stable report serialization: every double is printed with %.17g and
// object keys come out sorted.

#include <string>

#include <json.hpp>

#include "solitonlab/curvature.hpp"
#include "solitonlab/fd_oracle.hpp"
#include "solitonlab/ode_reduction.hpp"

namespace solitonlab {

/// %.17g; non-finite values become "nan", "inf", "-inf".
std::string format_double(double v);

/// Pretty-printed JSON with fixed float formatting. Non-finite numbers are
/// written as null.
std::string dump_json(const nlohmann::json& j, int indent = 2);

nlohmann::json to_json(const CurvatureBundle& b);
nlohmann::json to_json(const OracleReport& r);
nlohmann::json to_json(const ConvergenceReport& r);
nlohmann::json to_json(const ReducedState& st);

/// Columns: s, a, b, fp, h, diagnostic, then one column per identity
/// residual ("NA" where inapplicable).
std::string trajectory_csv(const Trajectory& tr);
nlohmann::json trajectory_json(const Trajectory& tr);

/// Flattens a JSON report into "path,value" CSV rows.
std::string flat_csv(const nlohmann::json& j);

}  // namespace solitonlab
