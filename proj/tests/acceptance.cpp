// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "solitonlab/classifier.hpp"
#include "solitonlab/curvature.hpp"
#include "solitonlab/fd_oracle.hpp"
#include "solitonlab/ode_reduction.hpp"
#include "solitonlab/soliton_verify.hpp"

using namespace solitonlab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
    int id;
    std::string title;
    bool pass = true;
    std::vector<std::string> detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        detail.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

std::vector<Criterion> results;

Criterion& open(int id, const std::string& title) {
    results.push_back({id, title, true, {}});
    return results.back();
}

const char* const kCanonical[] = {"singular-steady", "product", "gaussian", "cylinder", "einstein-sphere"};

void curvature_table() {
    Criterion& c = open(1, "singular steady curvature table");
    const auto t0 = Clock::now();
    const Profile p = Profile::power(1.0, 1.0 / 3.0);
    const Profile h = Profile::power(1.0, 2.0 / 3.0);
    double worst = 0.0;
    for (double s : {0.5, 1.0, 2.0}) {
        const DiagRicci r = dw_ricci(p, h, 0.0, s);
        const double s2 = s * s;
        const double want[5] = {2.0 / (3 * s2), -2.0 / (9 * s2), -4.0 / (9 * s2), -4.0 / (9 * s2), -4.0 / (9 * s2)};
        const double got[5] = {r.eigen[0], r.eigen[1], r.eigen[2], r.eigen[3], r.scalar};
        for (int i = 0; i < 5; ++i) worst = std::max(worst, std::abs(got[i] - want[i]) / std::abs(want[i]));
    }
    const double dt = seconds_since(t0);
    c.require(worst <= 1e-12, fmt("max relative error %.3g <= 1e-12", worst));
    c.require(dt < 1.0, fmt("runtime %.3g s < 1 s", dt));
}

struct OracleRun {
    std::string family;
    OracleReport rep;
    ConvergenceReport conv;
    double seconds = 0.0;
};

std::vector<OracleRun> oracle_runs;

void oracle_agreement() {
    Criterion& c = open(2, "finite-difference oracle agreement (129 nodes per axis)");
    for (const char* name : kCanonical) {
        const MetricFamily m = MetricFamily::by_name(name);
        const auto t0 = Clock::now();
        OracleRun run{name, oracle_crosscheck(m), oracle_convergence(m, 129), 0.0};
        run.seconds = seconds_since(t0);
        c.require(run.rep.ricci_rel <= 1e-6 && run.rep.scalar_rel <= 1e-6,
                  std::string(name) + fmt(": Ricci %.3g, scalar %.3g <= 1e-6", run.rep.ricci_rel, run.rep.scalar_rel));
        c.require(run.conv.ratio >= 12.0,
                  std::string(name) + fmt(": halving spacing improves %.4gx >= 12x", run.conv.ratio));
        c.require(run.seconds < 60.0, std::string(name) + fmt(": runtime %.3g s < 60 s", run.seconds));
        oracle_runs.push_back(run);
    }
}

void soliton_residuals() {
    Criterion& c = open(3, "soliton equation residual and lambda control");
    for (const char* name : kCanonical) {
        const MetricFamily m = MetricFamily::by_name(name);
        const SolitonData sol = canonical_soliton_for(m);
        const auto pts = family_samples(m, m.domain(), 64);
        const double r = soliton_residual(m, sol, pts).max_abs;
        c.require(r <= 1e-10, std::string(name) + fmt(": ||Hess f + Ric - lambda g|| = %.3g <= 1e-10 (64 samples)", r));
        const double dl = 1.0;
        const double off = soliton_residual(m, SolitonData{sol.f, sol.lambda + dl}, pts).max_abs;
        c.require(std::abs(off - dl) <= 1e-14,
                  std::string(name) + fmt(": lambda + 1 control residual %.17g = 1 within %.2g", off, std::abs(off - dl)));
    }
}

void harmonic_weyl() {
    Criterion& c = open(4, "harmonic Weyl curvature and Weyl norms");
    for (const char* name : kCanonical) {
        const MetricFamily m = MetricFamily::by_name(name);
        const double r = codazzi_residual_closed(m, family_samples(m, m.domain(), 64)).max_abs;
        c.require(r <= 1e-10, std::string(name) + fmt(": closed-form Codazzi residual %.3g <= 1e-10", r));
    }
    for (const OracleRun& run : oracle_runs)
        c.require(run.rep.codazzi_fd <= 1e-5,
                  run.family + fmt(": finite-difference Codazzi residual %.3g <= 1e-5", run.rep.codazzi_fd));

    const MetricFamily broken = MetricFamily::broken_product();
    const double rb = codazzi_residual_closed(broken, family_samples(broken, broken.domain(), 64)).max_abs;
    c.require(rb > kBrokenCodazziThreshold,
              fmt("broken-product: Codazzi residual %.3g > pinned %.3g", rb, kBrokenCodazziThreshold));

    const MetricFamily ss = MetricFamily::singular_steady();
    const CurvatureBundle b = family_bundle(ss, ss.default_point(1.0));
    const double w = tensor_norm(b.weyl, b.metric);
    c.require(w > 1e-3, fmt("singular-steady: |W|^2(s=1) = %.4g > 1e-3", w));

    for (const char* name : {"gaussian", "cylinder"}) {
        const MetricFamily m = MetricFamily::by_name(name);
        double wmax = 0.0;
        for (const Vec4& x : family_samples(m, m.domain(), 64)) {
            const CurvatureBundle bw = family_bundle(m, x);
            wmax = std::max(wmax, tensor_norm(bw.weyl, bw.metric));
        }
        c.require(wmax <= 1e-10, std::string(name) + fmt(": max |W|^2 = %.3g <= 1e-10", wmax));
    }
}

void hamilton() {
    Criterion& c = open(5, "Hamilton identities");
    for (const char* name : kCanonical) {
        const MetricFamily m = MetricFamily::by_name(name);
        const ResidualReport r = hamilton_check(m, canonical_soliton_for(m), s_samples({0.5, 2.0}, 64));
        const double cons = r.per_equation.at("conservation");
        const double grad = r.per_equation.at("gradient");
        c.require(cons <= 1e-10 && grad <= 1e-10,
                  std::string(name) + fmt(": conservation %.3g, gradient %.3g <= 1e-10", cons, grad));
        if (std::string(name) == "singular-steady") {
            const double mean = r.info.at("conserved_mean");
            c.require(std::abs(mean) <= 1e-12, fmt("singular-steady: R + f'^2 - 2 lambda f = %.3g, |.| <= 1e-12", mean));
        }
    }
}

ReducedState steady_state(double s) {
    return {s, 1.0 / (3.0 * s), 2.0 / (3.0 * s), 2.0 / (3.0 * s), std::pow(s, 2.0 / 3.0), 0.0, 0.0};
}

double steady_endpoint_error(const Trajectory& tr) {
    const ReducedState& e = tr.states.back();
    const double s = e.s;
    return std::max({std::abs(e.a - 1.0 / (3 * s)), std::abs(e.b - 2.0 / (3 * s)), std::abs(e.fp - 2.0 / (3 * s))});
}

void ode_fidelity() {
    Criterion& c = open(6, "RK4 reduction fidelity");
    const Trajectory tr = integrate(steady_state(1.0), 2.0, 1e-3);
    const double err = steady_endpoint_error(tr);
    c.require(!tr.truncated && tr.states.back().s == 2.0 && err <= 1e-8,
              fmt("endpoint s = %.17g, max |(a, b, f') - exact| = %.3g <= 1e-8", tr.states.back().s, err));
    double worst = 0.0;
    for (const ReducedState& st : tr.states)
        for (const auto& [tag, r] : reduced_identity_residuals(st, dw_rhs(st).a))
            if (r.applicable) worst = std::max(worst, std::abs(r.value));
    c.require(worst <= 1e-10, fmt("identity residuals along %.0f states: max %.3g <= 1e-10",
                                  static_cast<double>(tr.states.size()), worst));
    const double e1 = steady_endpoint_error(integrate(steady_state(1.0), 2.0, 0.05));
    const double e2 = steady_endpoint_error(integrate(steady_state(1.0), 2.0, 0.0125));
    c.require(e1 / e2 >= 200.0, fmt("step 0.05 -> 0.0125: error %.3g -> %.3g, ratio %.4g >= 200", e1, e2, e1 / e2));
}

double min_gap(double a, double b, double c) {
    return std::min({std::abs(a - b), std::abs(b - c), std::abs(a - c)});
}

/// Third value that makes the symmetric numerator vanish:
/// (a + b) c^2 + (a^2 + b^2 - 6ab) c + ab(a + b) = 0.
bool zero_fprime_c(double a, double b, double& c) {
    const double qa = a + b, qb = a * a + b * b - 6 * a * b, qc = a * b * (a + b);
    const double disc = qb * qb - 4 * qa * qc;
    if (std::abs(qa) < 0.1 || disc < 0.0) return false;
    const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
    c = q / qa;
    for (int i = 0; i < 2; ++i) {
        const double n = distinct_numerator(a, b, c);
        const double dn = 2 * qa * c + qb;
        if (dn == 0.0) return false;
        c -= n / dn;
    }
    return std::isfinite(c);
}

void distinct_property_suite() {
    Criterion& c = open(7, "pairwise-distinct property suite (10^4 triples)");
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    constexpr double kGap = 0.05;
    constexpr double kFprimeZero = 1e-12;
    constexpr double kExclusionZero = 1e-12;
    int triples = 0, zero_side = 0, mismatches = 0;
    double worst_num = 0.0, worst_ratio = 0.0, worst_zero_excl = 0.0, min_nonzero_excl = 1e300;
    while (triples < 10000) {
        double a = u(rng), b = u(rng), cc = u(rng);
        const bool want_zero = triples % 2 == 0;
        if (want_zero && !zero_fprime_c(a, b, cc)) continue;
        if (min_gap(a, b, cc) < kGap || std::abs(cc) > 10.0) continue;
        const double fp = distinct_fprime(a, b, cc);
        if (!want_zero && std::abs(fp) < 1e-6) continue;
        ++triples;

        const double excl = exclusion_residual(a, b, cc);
        const bool excl_zero = std::abs(excl) <= kExclusionZero;
        const bool fp_zero = std::abs(fp) <= kFprimeZero;
        if (excl_zero != fp_zero) ++mismatches;
        if (fp_zero) {
            ++zero_side;
            worst_zero_excl = std::max(worst_zero_excl, std::abs(excl));
        } else {
            min_nonzero_excl = std::min(min_nonzero_excl, std::abs(excl));
        }

        const double n = distinct_numerator(a, b, cc);
        const double expanded =
            a * a * b + a * b * b + a * a * cc + a * cc * cc + b * b * cc + b * cc * cc - 6 * a * b * cc;
        const double grouped = a * (b - cc) * (b - cc) + b * (cc - a) * (cc - a) + cc * (a - b) * (a - b);
        const double nscale = std::max({1.0, std::abs(a), std::abs(b), std::abs(cc)});
        worst_num = std::max({worst_num, std::abs(n - expanded) / (nscale * nscale * nscale),
                              std::abs(grouped - expanded) / (nscale * nscale * nscale)});

        // alpha = 1: the first two frame relations fix beta and gamma
        const double r1 = (a - cc) / (b - cc);
        const double r2 = (b - a) / (cc - a);
        const double m11 = 1 - r1, m12 = -1 + r1, v1 = 1 + r1;
        const double m21 = -1 - r2, m22 = 1 - r2, v2 = 1 - r2;
        const double det = m11 * m22 - m12 * m21;
        const double beta = (v1 * m22 - m12 * v2) / det;
        const double gamma = (m11 * v2 - v1 * m21) / det;
        const DistinctRelations rel = distinct_frame_relations(a, b, cc);
        worst_ratio = std::max({worst_ratio, std::abs(rel.beta_over_alpha - beta) / std::max(1.0, std::abs(beta)),
                                std::abs(rel.gamma_over_alpha - gamma) / std::max(1.0, std::abs(gamma))});
    }
    c.require(mismatches == 0,
              fmt("exclusion_residual = 0 <=> |f'| <= 1e-12: %.0f mismatches (%.0f zero-f' triples)",
                  mismatches, zero_side));
    c.detail.push_back(fmt("     zero side max |residual| %.3g, nonzero side min |residual| %.3g",
                           worst_zero_excl, min_nonzero_excl));
    c.require(worst_num <= 1e-12, fmt("numerator identity relative error %.3g <= 1e-12", worst_num));
    c.require(worst_ratio <= 1e-13, fmt("beta/alpha, gamma/alpha vs linear solve: %.3g <= 1e-13", worst_ratio));
}

void classifier_stability() {
    Criterion& c = open(8, "classifier labels under noise (20 seeds per family)");
    struct Want {
        const char* family;
        TypeLabel label;
    };
    const Want wants[] = {{"singular-steady", TypeLabel::SingularSteady_iii},
                          {"product", TypeLabel::Product_ii},
                          {"gaussian", TypeLabel::WarpedLCF_iv},
                          {"cylinder", TypeLabel::WarpedLCF_iv},
                          {"einstein-sphere", TypeLabel::Einstein_i}};
    const double tol = kClosedFormClassifyTol;
    for (const Want& w : wants) {
        const MetricFamily m = MetricFamily::by_name(w.family);
        const auto xs = sample_family(m, canonical_soliton_for(m), m.domain(), 16);
        int below_ok = 0, above_ok = 0;
        for (unsigned seed = 0; seed < 20; ++seed) {
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            auto quiet = xs;
            auto loud = xs;
            for (std::size_t k = 0; k < xs.size(); ++k) {
                double sc = 1.0;
                for (double e : xs[k].eigen) sc = std::max(sc, std::abs(e));
                for (std::size_t i = 0; i < 4; ++i) {
                    quiet[k].eigen[i] += 0.1 * tol * sc * u(rng);
                    const double sign = u(rng) < 0.0 ? -1.0 : 1.0;
                    loud[k].eigen[i] += sign * 10.0 * tol * sc * static_cast<double>(i + 1) * (1.0 + 0.1 * std::abs(u(rng)));
                }
            }
            below_ok += classify(quiet).label == w.label;
            above_ok += classify(loud).label == TypeLabel::Unknown;
        }
        c.require(below_ok == 20 && above_ok == 20,
                  std::string(w.family) + " -> " + to_string(w.label) +
                      fmt(": noise tol/10 kept %.0f/20, noise 10 tol Unknown %.0f/20", below_ok, above_ok));
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void cli_determinism() {
    Criterion& c = open(9, "byte-identical reports from repeated CLI runs");
    const std::string exe = SOLITONLAB_CLI;
    const std::string dir = SOLITONLAB_ACCEPT_TMP;
    const std::vector<std::string> jobs = {
        "verify --family singular-steady --s 0.5:2.0 --samples 64 --tol 1e-9",
        "verify --family broken-product",
        "integrate --family singular-steady --from 1 --to 2 --step 1e-3",
        "integrate --family product --lambda -1 --step 1e-2 --format csv",
        "classify --family cylinder",
        "oracle --family gaussian --nodes 65",
        "report --family product --nodes 33 --format csv",
    };
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        std::string outs[2];
        int codes[2];
        for (int k = 0; k < 2; ++k) {
            const std::string path = dir + "/determinism_" + std::to_string(j) + "_" + std::to_string(k);
            std::remove(path.c_str());
            const std::string cmd = "\"" + exe + "\" " + jobs[j] + " --out \"" + path + "\"";
            codes[k] = std::system(cmd.c_str());
            outs[k] = slurp(path);
        }
        const bool same = codes[0] == codes[1] && !outs[0].empty() && outs[0] == outs[1];
        c.require(same, jobs[j] + fmt(" (%.0f bytes)", static_cast<double>(outs[0].size())));
    }
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    curvature_table();
    oracle_agreement();
    soliton_residuals();
    harmonic_weyl();
    hamilton();
    ode_fidelity();
    distinct_property_suite();
    classifier_stability();
    cli_determinism();

    bool all = true;
    for (const Criterion& c : results) {
        std::printf("[%s] criterion %d: %s\n", c.pass ? "PASS" : "FAIL", c.id, c.title.c_str());
        for (const std::string& d : c.detail) std::printf("         %s\n", d.c_str());
        all = all && c.pass;
    }
    std::printf("%s (%.1f s)\n", all ? "all criteria pass" : "some criteria FAILED", seconds_since(t0));
    return all ? 0 : 1;
}
