#pragma once

// `solitonlab <command> [flags]` as a library call, so it can be driven from
// tests as well as from the executable.

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "solitonlab/ansatz.hpp"

namespace solitonlab {

enum class Command { verify, integrate, oracle, classify, report };

std::string to_string(Command c);

/// Exit codes.
inline constexpr int kExitPass = 0;
inline constexpr int kExitBreach = 1;
inline constexpr int kExitUsage = 2;

struct JobSpec {
    Command command = Command::verify;
    /// Named family, or a full family object (MetricFamily::from_json).
    std::string family = "singular-steady";
    std::optional<nlohmann::json> family_spec;
    std::optional<double> lambda;
    /// Potential {"f": profile, "lambda": value}; defaults to the canonical one.
    std::optional<nlohmann::json> potential;
    std::optional<Interval> s_range;
    int samples = 64;
    /// Main tolerance; the per-command default applies when absent.
    std::optional<double> tol;

    double from = 1.0;
    double to = 2.0;
    double step = 1e-3;
    double endpoint_tol = 1e-9;
    /// Explicit initial state {"a","b","fp","h","lambda","k"} for integrate.
    std::optional<nlohmann::json> initial;

    int nodes = 129;
    unsigned threads = 0;

    /// Sample file for classify (JSON array of sample records).
    std::optional<std::string> sample_file;
    std::optional<std::string> expect;

    std::string out;
    std::string format = "json";
};

/// Reads the JSON job-file form; throws InputError on malformed input.
JobSpec job_from_json(const nlohmann::json& j);

struct JobResult {
    nlohmann::json report;
    bool pass = false;
    /// Serialized report in the requested format.
    std::string text;
};

/// Runs a validated job. Throws InputError / DomainError on invalid specs.
JobResult run_job(const JobSpec& job);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace solitonlab
