#include "solitonlab/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace solitonlab {

namespace {

void write_string(std::ostringstream& os, const std::string& s) {
    // nlohmann's escaping, without its number formatting
    os << nlohmann::json(s).dump();
}

void write(std::ostringstream& os, const nlohmann::json& j, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{" << nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << "," << nl;
                first = false;
                os << pad;
                write_string(os, it.key());
                os << (indent > 0 ? ": " : ":");
                write(os, it.value(), indent, depth + 1);
            }
            os << nl << close_pad << "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << "[" << nl;
            bool first = true;
            for (const auto& v : j) {
                if (!first) os << "," << nl;
                first = false;
                os << pad;
                write(os, v, indent, depth + 1);
            }
            os << nl << close_pad << "]";
            return;
        }
        case nlohmann::json::value_t::number_float: {
            const double v = j.get<double>();
            if (std::isfinite(v)) {
                os << format_double(v);
            } else {
                os << "null";
            }
            return;
        }
        default:
            os << j.dump();
    }
}

std::string csv_cell(double v) { return format_double(v); }

const char* const kIdentityTags[] = {"fprime_relation", "lambda_balance", "b_riccati", "aprime_relation",
                                     "branch_cubic"};

void flatten(const nlohmann::json& j, const std::string& path, std::ostringstream& os) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), os);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", os);
    } else if (j.is_number_float()) {
        os << path << "," << format_double(j.get<double>()) << "\n";
    } else if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s.find_first_of(",\"\n") != std::string::npos) {
            std::string q = "\"";
            for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
            s = q + "\"";
        }
        os << path << "," << s << "\n";
    } else {
        os << path << "," << j.dump() << "\n";
    }
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string dump_json(const nlohmann::json& j, int indent) {
    std::ostringstream os;
    write(os, j, indent, 0);
    os << "\n";
    return os.str();
}

nlohmann::json to_json(const CurvatureBundle& b) {
    nlohmann::json j;
    j["frame"] = {{"kind", b.frame.kind() == FrameKind::orthonormal ? "orthonormal" : "coordinate"},
                  {"labels", b.frame.labels()}};
    std::vector<double> g, ric;
    for (int i = 0; i < kDim; ++i)
        for (int k = i; k < kDim; ++k) {
            g.push_back(b.metric(i, k));
            ric.push_back(b.ric(i, k));
        }
    j["metric"] = g;
    j["ricci"] = ric;
    j["scalar"] = b.scalar;
    j["weyl_norm_sq"] = tensor_norm(b.weyl, b.metric);
    j["codazzi_norm_sq"] = tensor_norm(b.codazzi_residual, b.metric);
    std::vector<double> gam, riem;
    for (int a = 0; a < kDim; ++a)
        for (int c = 0; c < kDim; ++c)
            for (int d = 0; d < kDim; ++d) {
                gam.push_back(b.christoffel(a, c, d));
                for (int e = 0; e < kDim; ++e) riem.push_back(b.riem(a, c, d, e));
            }
    j["christoffel"] = gam;
    j["riemann"] = riem;
    return j;
}

nlohmann::json to_json(const OracleReport& r) {
    return {{"family", r.family},
            {"nodes_per_axis", r.nodes_per_axis},
            {"box_lo", r.lo},
            {"box_hi", r.hi},
            {"ricci_nodes", r.ricci_nodes},
            {"codazzi_nodes", r.codazzi_nodes},
            {"ricci_rel", r.ricci_rel},
            {"scalar_rel", r.scalar_rel},
            {"worst_point", r.worst_point},
            {"codazzi_fd", r.codazzi_fd},
            {"codazzi_closed", r.codazzi_closed},
            {"codazzi_diff", r.codazzi_diff}};
}

nlohmann::json to_json(const ConvergenceReport& r) {
    return {{"coarse_rel", r.coarse_rel}, {"fine_rel", r.fine_rel}, {"ratio", r.ratio}};
}

nlohmann::json to_json(const ReducedState& st) {
    return {{"s", st.s}, {"a", st.a}, {"b", st.b}, {"fp", st.fp}, {"h", st.h}, {"lambda", st.lambda}, {"k", st.k}};
}

std::string trajectory_csv(const Trajectory& tr) {
    std::ostringstream os;
    os << "s,a,b,fp,h,diagnostic";
    for (const char* t : kIdentityTags) os << "," << t;
    os << "\n";
    for (const ReducedState& st : tr.states) {
        const ReducedDeriv d = dw_rhs(st);
        const auto ids = reduced_identity_residuals(st, d.a);
        os << csv_cell(st.s) << "," << csv_cell(st.a) << "," << csv_cell(st.b) << "," << csv_cell(st.fp) << ","
           << csv_cell(st.h) << "," << csv_cell(d.diagnostic);
        for (const char* t : kIdentityTags) {
            auto it = ids.find(t);
            os << ",";
            if (it == ids.end() || !it->second.applicable) {
                os << "NA";
            } else {
                os << csv_cell(it->second.value);
            }
        }
        os << "\n";
    }
    return os.str();
}

nlohmann::json trajectory_json(const Trajectory& tr) {
    nlohmann::json rows = nlohmann::json::array();
    for (const ReducedState& st : tr.states) {
        const ReducedDeriv d = dw_rhs(st);
        nlohmann::json row = to_json(st);
        row["diagnostic"] = d.diagnostic;
        nlohmann::json ids = nlohmann::json::object();
        for (const auto& [tag, r] : reduced_identity_residuals(st, d.a)) {
            ids[tag] = r.applicable ? nlohmann::json(r.value) : nlohmann::json(nullptr);
        }
        row["identities"] = ids;
        rows.push_back(row);
    }
    return rows;
}

std::string flat_csv(const nlohmann::json& j) {
    std::ostringstream os;
    os << "key,value\n";
    flatten(j, "", os);
    return os.str();
}

}  // namespace solitonlab
