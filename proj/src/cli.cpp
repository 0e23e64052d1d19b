#include "solitonlab/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "solitonlab/classifier.hpp"
#include "solitonlab/curvature.hpp"
#include "solitonlab/errors.hpp"
#include "solitonlab/fd_oracle.hpp"
#include "solitonlab/ode_reduction.hpp"
#include "solitonlab/report_io.hpp"
#include "solitonlab/soliton_verify.hpp"

namespace solitonlab {

namespace {

using json = nlohmann::json;

constexpr double kVerifyTol = 1e-10;
constexpr double kIntegrateTol = 1e-10;
constexpr double kOracleRicciTol = 1e-6;
constexpr double kOracleCodazziTol = 1e-5;
constexpr double kOracleMinRatio = 12.0;

Command parse_command(const std::string& s) {
    if (s == "verify") return Command::verify;
    if (s == "integrate") return Command::integrate;
    if (s == "oracle") return Command::oracle;
    if (s == "classify") return Command::classify;
    if (s == "report") return Command::report;
    throw InputError("unknown command '" + s + "'");
}

Interval parse_range(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw InputError("range must be lo:hi, got '" + s + "'");
    try {
        std::size_t used = 0;
        const std::string a = s.substr(0, colon), b = s.substr(colon + 1);
        const double lo = std::stod(a, &used);
        if (used != a.size()) throw InputError("bad range bound '" + a + "'");
        const double hi = std::stod(b, &used);
        if (used != b.size()) throw InputError("bad range bound '" + b + "'");
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw InputError("range must be lo:hi, got '" + s + "'");
    }
}

/// Pass/fail record carrying the threshold it was judged against.
struct Checks {
    json items = json::object();
    bool pass = true;

    void below(const std::string& name, double value, double threshold) {
        const bool ok = value <= threshold;
        items[name] = {{"value", value}, {"threshold", threshold}, {"rule", "<="}, {"pass", ok}};
        pass = pass && ok;
    }
    void above(const std::string& name, double value, double threshold) {
        const bool ok = value >= threshold;
        items[name] = {{"value", value}, {"threshold", threshold}, {"rule", ">="}, {"pass", ok}};
        pass = pass && ok;
    }
    void flag(const std::string& name, bool ok) {
        items[name] = {{"pass", ok}};
        pass = pass && ok;
    }
};

MetricFamily resolve_family(const JobSpec& job) {
    if (job.family_spec) return MetricFamily::from_json(*job.family_spec);
    return MetricFamily::by_name(job.family, job.lambda);
}

std::optional<SolitonData> resolve_potential(const JobSpec& job, const MetricFamily& m) {
    if (job.potential) {
        try {
            return SolitonData{Profile::from_json(job.potential->at("f")), job.potential->at("lambda").get<double>()};
        } catch (const json::exception& e) {
            throw InputError(std::string("malformed potential: ") + e.what());
        }
    }
    if (m.canonical() == Canonical::none) return std::nullopt;
    return canonical_soliton_for(m);
}

Interval resolve_range(const JobSpec& job, const MetricFamily& m) {
    const Interval dom = m.domain();
    const Interval r = job.s_range.value_or(dom);
    if (!(r.lo < r.hi)) throw InputError("s-range must satisfy lo < hi");
    if (r.lo < dom.lo || r.hi > dom.hi) throw InputError("s-range lies outside the family domain");
    if (job.samples < 3) throw InputError("sample count must be at least 3");
    return r;
}

json job_echo(const JobSpec& job, const MetricFamily* m) {
    json j;
    j["command"] = to_string(job.command);
    if (m) j["family"] = m->to_json();
    if (job.s_range) j["s_range"] = {job.s_range->lo, job.s_range->hi};
    j["samples"] = job.samples;
    if (job.tol) j["tol"] = *job.tol;
    return j;
}

json run_verify(const JobSpec& job, const MetricFamily& m, Checks& checks) {
    const Interval range = resolve_range(job, m);
    const double tol = job.tol.value_or(kVerifyTol);
    const auto pts = family_samples(m, range, job.samples);
    json res;
    res["s_range"] = {range.lo, range.hi};

    const ResidualReport cod = codazzi_residual_closed(m, pts);
    res["codazzi"] = to_json(cod);
    checks.below("codazzi_residual", cod.max_abs, tol);

    if (const auto sol = resolve_potential(job, m)) {
        const ResidualReport sr = soliton_residual(m, *sol, pts);
        const ResidualReport hr = hamilton_check(m, *sol, s_samples(range, job.samples));
        res["soliton_lambda"] = sol->lambda;
        res["soliton"] = to_json(sr);
        res["hamilton"] = to_json(hr);
        checks.below("soliton_residual", sr.max_abs, tol);
        checks.below("hamilton_conservation", hr.per_equation.at("conservation"), tol);
        checks.below("hamilton_gradient", hr.per_equation.at("gradient"), tol);
    } else {
        res["soliton"] = nullptr;
        res["hamilton"] = nullptr;
        res["note"] = "no potential for this family; soliton and Hamilton checks skipped";
    }
    return res;
}

ReducedState state_from_json(const json& j) {
    try {
        ReducedState st;
        st.a = j.at("a").get<double>();
        st.b = j.at("b").get<double>();
        st.fp = j.at("fp").get<double>();
        st.h = j.at("h").get<double>();
        st.lambda = j.value("lambda", 0.0);
        st.k = j.value("k", 0.0);
        return st;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed initial state: ") + e.what());
    }
}

json run_integrate(const JobSpec& job, const std::optional<MetricFamily>& m, Checks& checks,
                   Trajectory& tr_out) {
    if (!(job.step > 0.0)) throw InputError("step must be positive");
    const double tol = job.tol.value_or(kIntegrateTol);

    ReducedState st0;
    std::optional<SolitonData> sol;
    if (job.initial) {
        st0 = state_from_json(*job.initial);
        st0.s = job.from;
    } else {
        if (!m || !m->is_doubly_warped()) throw InputError("integrate needs a doubly-warped family or an initial state");
        sol = resolve_potential(job, *m);
        if (!sol) throw InputError("integrate needs a potential for family '" + m->name() + "'");
        m->check_s(job.from);
        const Jet p = m->p()(job.from), h = m->h()(job.from);
        st0 = {job.from, p.d1 / p.v, h.d1 / h.v, sol->f(job.from).d1, h.v, sol->lambda, m->k()};
    }

    const Trajectory tr = integrate(st0, job.to, job.step);
    json res;
    res["initial"] = to_json(st0);
    res["endpoint"] = to_json(tr.states.back());
    res["steps"] = tr.states.size() - 1;
    res["truncated"] = tr.truncated;
    res["stop_reason"] = tr.stop_reason;
    const auto branch = detect_branch(tr);
    res["branch"] = branch;

    std::map<std::string, double> worst;
    double diag = 0.0;
    for (const ReducedState& st : tr.states) {
        const ReducedDeriv d = dw_rhs(st);
        diag = std::max(diag, d.diagnostic);
        for (const auto& [tag, r] : reduced_identity_residuals(st, d.a)) {
            if (!r.applicable) continue;
            worst[tag] = std::max(worst[tag], std::abs(r.value));
        }
    }
    res["identity_max"] = worst;
    res["diagnostic_max"] = diag;
    checks.flag("not_truncated", !tr.truncated);
    checks.below("diagnostic", diag, tol);
    for (const auto& [tag, v] : worst) checks.below("identity_" + tag, v, tol);

    if (sol && m && !tr.truncated) {
        const double s = tr.states.back().s;
        const Jet p = m->p()(s), h = m->h()(s);
        const ReducedState& e = tr.states.back();
        const json err = {{"a", std::abs(e.a - p.d1 / p.v)},
                          {"b", std::abs(e.b - h.d1 / h.v)},
                          {"fp", std::abs(e.fp - sol->f(s).d1)},
                          {"h", std::abs(e.h - h.v)}};
        res["endpoint_error"] = err;
        for (const auto& [k, v] : err.items()) checks.below("endpoint_" + k, v.get<double>(), job.endpoint_tol);
    }
    tr_out = tr;
    return res;
}

json run_oracle(const JobSpec& job, const MetricFamily& m, Checks& checks) {
    const double tol = job.tol.value_or(kOracleRicciTol);
    OracleOptions opt;
    opt.nodes_per_axis = job.nodes;
    opt.threads = job.threads;
    if (job.nodes < 33 || job.nodes % 2 == 0) throw InputError("--nodes must be odd and at least 33");
    const OracleReport rep = oracle_crosscheck(m, opt);
    const ConvergenceReport conv = oracle_convergence(m, job.nodes, job.threads);
    checks.below("oracle_ricci", rep.ricci_rel, tol);
    checks.below("oracle_scalar", rep.scalar_rel, tol);
    checks.below("oracle_codazzi", rep.codazzi_fd, kOracleCodazziTol);
    checks.above("convergence_ratio", conv.ratio, kOracleMinRatio);
    return {{"crosscheck", to_json(rep)}, {"convergence", to_json(conv)}};
}

std::vector<ClassifierSample> samples_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read sample file '" + path + "'");
    try {
        const json j = json::parse(in);
        const json& arr = j.is_object() ? j.at("samples") : j;
        std::vector<ClassifierSample> xs;
        for (const auto& r : arr) {
            ClassifierSample x;
            x.s = r.at("s").get<double>();
            const auto e = r.at("eigen").get<std::vector<double>>();
            if (e.size() != 4) throw InputError("each sample needs 4 eigenvalues");
            std::copy(e.begin(), e.end(), x.eigen.begin());
            x.fprime = r.at("fprime").get<double>();
            x.scalar = r.at("scalar").get<double>();
            x.weyl_sq = r.at("weyl_sq").get<double>();
            if (r.contains("h")) x.h = r.at("h").get<double>();
            if (r.contains("hprime")) x.hprime = r.at("hprime").get<double>();
            xs.push_back(x);
        }
        return xs;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed sample file: ") + e.what());
    }
}

json run_classify(const JobSpec& job, const std::optional<MetricFamily>& m, Checks& checks) {
    ClassifyOptions opt;
    opt.tol = job.tol.value_or(kClosedFormClassifyTol);
    std::vector<ClassifierSample> xs;
    if (job.sample_file) {
        xs = samples_from_file(*job.sample_file);
    } else {
        if (!m) throw InputError("classify needs a family or a sample file");
        const Interval range = resolve_range(job, *m);
        const auto sol = resolve_potential(job, *m);
        if (!sol) throw InputError("classify needs a potential for family '" + m->name() + "'");
        xs = sample_family(*m, *sol, range, job.samples);
    }
    const TypeVerdict v = classify(xs, opt);
    checks.flag("classified", v.label != TypeLabel::Unknown);
    if (job.expect) checks.flag("expected_label", to_string(v.label) == *job.expect);
    return to_json(v);
}

void apply_json(JobSpec& job, const json& j) {
    if (j.contains("command")) job.command = parse_command(j.at("command").get<std::string>());
    if (j.contains("family")) {
        const auto& f = j.at("family");
        if (f.is_string()) {
            job.family = f.get<std::string>();
        } else {
            job.family_spec = f;
        }
    }
    if (j.contains("lambda")) job.lambda = j.at("lambda").get<double>();
    if (j.contains("potential")) job.potential = j.at("potential");
    if (j.contains("s")) {
        const auto& s = j.at("s");
        if (s.is_string()) {
            job.s_range = parse_range(s.get<std::string>());
        } else {
            if (!s.is_array() || s.size() != 2) throw InputError("\"s\" must be [lo, hi] or \"lo:hi\"");
            job.s_range = Interval{s[0].get<double>(), s[1].get<double>()};
        }
    }
    if (j.contains("samples")) job.samples = j.at("samples").get<int>();
    if (j.contains("tol")) job.tol = j.at("tol").get<double>();
    if (j.contains("from")) job.from = j.at("from").get<double>();
    if (j.contains("to")) job.to = j.at("to").get<double>();
    if (j.contains("step")) job.step = j.at("step").get<double>();
    if (j.contains("endpoint_tol")) job.endpoint_tol = j.at("endpoint_tol").get<double>();
    if (j.contains("initial")) job.initial = j.at("initial");
    if (j.contains("nodes")) job.nodes = j.at("nodes").get<int>();
    if (j.contains("threads")) job.threads = j.at("threads").get<unsigned>();
    if (j.contains("sample_file")) job.sample_file = j.at("sample_file").get<std::string>();
    if (j.contains("expect")) job.expect = j.at("expect").get<std::string>();
    if (j.contains("out")) job.out = j.at("out").get<std::string>();
    if (j.contains("format")) job.format = j.at("format").get<std::string>();
}

}  // namespace

std::string to_string(Command c) {
    switch (c) {
        case Command::verify: return "verify";
        case Command::integrate: return "integrate";
        case Command::oracle: return "oracle";
        case Command::classify: return "classify";
        case Command::report: return "report";
    }
    return "verify";
}

JobSpec job_from_json(const json& j) {
    if (!j.is_object()) throw InputError("job file must hold a JSON object");
    JobSpec job;
    try {
        apply_json(job, j);
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed job: ") + e.what());
    }
    return job;
}

JobResult run_job(const JobSpec& job) {
    if (job.format != "json" && job.format != "csv") throw InputError("--format must be json or csv");
    if (job.tol && !(*job.tol > 0.0)) throw InputError("tolerance must be positive");

    std::optional<MetricFamily> m;
    const bool needs_family = !(job.command == Command::integrate && job.initial) &&
                              !(job.command == Command::classify && job.sample_file);
    if (needs_family) m = resolve_family(job);

    Checks checks;
    json results;
    Trajectory tr;
    switch (job.command) {
        case Command::verify: results = run_verify(job, *m, checks); break;
        case Command::integrate: results = run_integrate(job, m, checks, tr); break;
        case Command::oracle: results = run_oracle(job, *m, checks); break;
        case Command::classify: results = run_classify(job, m, checks); break;
        case Command::report:
            results["verify"] = run_verify(job, *m, checks);
            results["classify"] = run_classify(job, m, checks);
            results["oracle"] = run_oracle(job, *m, checks);
            break;
    }

    JobResult r;
    r.pass = checks.pass;
    r.report = {{"job", job_echo(job, m ? &*m : nullptr)},
                {"results", results},
                {"checks", checks.items},
                {"pass", checks.pass}};
    if (job.command == Command::integrate) r.report["results"]["trajectory"] = trajectory_json(tr);

    if (job.format == "csv") {
        r.text = job.command == Command::integrate ? trajectory_csv(tr) : flat_csv(r.report);
    } else {
        r.text = dump_json(r.report);
    }
    return r;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Verification and exploration of 4-dimensional gradient Ricci solitons", "solitonlab"};
    std::string command;
    std::string family, s_range, format, job_file, out_path, sample_file, expect;
    double lambda = 0, tol = 0, from = 0, to = 0, step = 0, endpoint_tol = 0;
    int samples = 0, nodes = 0;
    unsigned threads = 0;

    app.add_option("command", command, "verify | integrate | oracle | classify | report");
    auto* o_family = app.add_option("--family", family, "named family");
    auto* o_lambda = app.add_option("--lambda", lambda, "soliton constant for families that take one");
    auto* o_s = app.add_option("--s", s_range, "s-range lo:hi");
    auto* o_samples = app.add_option("--samples", samples, "number of s samples");
    auto* o_tol = app.add_option("--tol", tol, "main residual threshold");
    auto* o_from = app.add_option("--from", from, "integration start");
    auto* o_to = app.add_option("--to", to, "integration end");
    auto* o_step = app.add_option("--step", step, "RK4 step");
    auto* o_etol = app.add_option("--endpoint-tol", endpoint_tol, "integration endpoint threshold");
    auto* o_nodes = app.add_option("--nodes", nodes, "oracle lattice nodes per axis");
    auto* o_threads = app.add_option("--threads", threads, "oracle worker threads (0 = all cores)");
    auto* o_input = app.add_option("--input", sample_file, "classify: JSON sample file");
    auto* o_expect = app.add_option("--expect", expect, "classify: required label");
    auto* o_out = app.add_option("--out", out_path, "report path (default stdout)");
    auto* o_format = app.add_option("--format", format, "json | csv");
    auto* o_job = app.add_option("--job", job_file, "JSON job file; flags override its fields");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << "solitonlab: " << e.what() << "\n";
        return kExitUsage;
    }

    JobSpec job;
    try {
        if (o_job->count()) {
            std::ifstream in(job_file);
            if (!in) throw InputError("cannot read job file '" + job_file + "'");
            json j;
            try {
                j = json::parse(in);
            } catch (const json::exception& e) {
                throw InputError(std::string("job file is not valid JSON: ") + e.what());
            }
            job = job_from_json(j);
        } else if (command.empty()) {
            throw InputError("missing command");
        }
        if (!command.empty()) job.command = parse_command(command);
        if (o_family->count()) {
            job.family = family;
            job.family_spec.reset();
        }
        if (o_lambda->count()) job.lambda = lambda;
        if (o_s->count()) job.s_range = parse_range(s_range);
        if (o_samples->count()) job.samples = samples;
        if (o_tol->count()) job.tol = tol;
        if (o_from->count()) job.from = from;
        if (o_to->count()) job.to = to;
        if (o_step->count()) job.step = step;
        if (o_etol->count()) job.endpoint_tol = endpoint_tol;
        if (o_nodes->count()) job.nodes = nodes;
        if (o_threads->count()) job.threads = threads;
        if (o_input->count()) job.sample_file = sample_file;
        if (o_expect->count()) job.expect = expect;
        if (o_out->count()) job.out = out_path;
        if (o_format->count()) job.format = format;
    } catch (const std::exception& e) {
        err << "solitonlab: " << e.what() << "\n";
        return kExitUsage;
    }

    JobResult result;
    try {
        result = run_job(job);
    } catch (const InputError& e) {
        err << "solitonlab: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "solitonlab: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "solitonlab: job failed: " << e.what() << "\n";
        return kExitUsage;
    }

    if (job.out.empty()) {
        out << result.text;
    } else {
        std::ofstream f(job.out, std::ios::binary);
        if (!f) {
            err << "solitonlab: cannot write '" << job.out << "'\n";
            return kExitUsage;
        }
        f << result.text;
    }
    return result.pass ? kExitPass : kExitBreach;
}

}  // namespace solitonlab
