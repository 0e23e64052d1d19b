#include "solitonlab/ode_reduction.hpp"

#include <algorithm>
#include <cmath>

#include "solitonlab/errors.hpp"

namespace solitonlab {

namespace {

ReducedState advance(const ReducedState& st, const ReducedDeriv& d, double dt) {
    ReducedState out = st;
    out.s = st.s + dt;
    out.a = st.a + dt * d.a;
    out.b = st.b + dt * d.b;
    out.fp = st.fp + dt * d.fp;
    out.h = st.h + dt * d.h;
    return out;
}

const char* blowup(const ReducedState& st) {
    for (double v : {st.a, st.b, st.fp, st.h}) {
        if (!std::isfinite(v)) return "non-finite state";
        if (std::abs(v) > kBlowupBound) return "state exceeded blowup bound";
    }
    if (st.h < kMinWarp) return "warping function collapsed";
    return nullptr;
}

void require_distinct(double a, double b, double c) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b), std::abs(c)});
    const double tol = 1e-14 * scale;
    if (std::abs(a - b) <= tol || std::abs(b - c) <= tol || std::abs(a - c) <= tol) {
        throw DomainError("zeta values must be pairwise distinct");
    }
}

}  // namespace

ReducedDeriv dw_rhs(const ReducedState& st) {
    const double a = st.a, b = st.b, fp = st.fp, lam = st.lambda;
    const double q = st.k / (st.h * st.h);
    ReducedDeriv d;
    d.a = fp * a - a * a - 2.0 * a * b - lam;
    d.b = d.a + a * a - b * b;
    d.fp = 3.0 * d.a + 3.0 * a * a + lam;
    d.h = b * st.h;
    d.diagnostic = std::abs(fp * b - (d.b + 2.0 * b * b + a * b - q + lam));
    return d;
}

Trajectory integrate(const ReducedState& st0, double s_end, double step) {
    if (!(step > 0.0) || !std::isfinite(step)) throw InputError("step must be positive");
    if (!std::isfinite(s_end)) throw InputError("s_end must be finite");
    Trajectory tr;
    tr.states.push_back(st0);
    if (const char* why = blowup(st0)) {
        tr.truncated = true;
        tr.stop_reason = why;
        return tr;
    }
    const double span = s_end - st0.s;
    if (span == 0.0) return tr;
    const auto n = static_cast<long>(std::max(1.0, std::ceil(std::abs(span) / step - 1e-9)));
    const double dt = span / static_cast<double>(n);

    ReducedState st = st0;
    for (long i = 0; i < n; ++i) {
        const ReducedDeriv k1 = dw_rhs(st);
        const ReducedDeriv k2 = dw_rhs(advance(st, k1, 0.5 * dt));
        const ReducedDeriv k3 = dw_rhs(advance(st, k2, 0.5 * dt));
        const ReducedDeriv k4 = dw_rhs(advance(st, k3, dt));
        ReducedDeriv inc;
        inc.a = (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a) / 6.0;
        inc.b = (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b) / 6.0;
        inc.fp = (k1.fp + 2.0 * k2.fp + 2.0 * k3.fp + k4.fp) / 6.0;
        inc.h = (k1.h + 2.0 * k2.h + 2.0 * k3.h + k4.h) / 6.0;
        st = advance(st, inc, dt);
        st.s = st0.s + dt * static_cast<double>(i + 1);
        if (i + 1 == n) st.s = s_end;
        tr.states.push_back(st);
        if (const char* why = blowup(st)) {
            tr.truncated = true;
            tr.stop_reason = why;
            break;
        }
    }
    return tr;
}

std::map<std::string, IdentityResidual> reduced_identity_residuals(const ReducedState& st, double aprime) {
    const double a = st.a, b = st.b, lam = st.lambda;
    const double q = st.k / (st.h * st.h);
    const double bprime = aprime + a * a - b * b;
    const bool distinct = std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});

    std::map<std::string, IdentityResidual> out;
    out["fprime_relation"] = {(a - b) * st.fp - b * (a - b) - q, true};
    out["lambda_balance"] = {(a - b) * (2.0 * a * b - b * b + lam) - (a + b) * q, true};
    out["b_riccati"] = {2.0 * (bprime + b * b) + b * b - q + lam, distinct};
    out["aprime_relation"] = {-(a + b) * aprime - (a * a * a + 2.0 * a * b * b + lam * b), distinct};
    if (st.k != 0.0) {
        out["branch_cubic"] = {b * (lam + 3.0 * a * b) * (lam - 2.0 * a * a + a * b), distinct};
    }
    for (auto& [tag, r] : out)
        if (!r.applicable) r.value = 0.0;
    return out;
}

std::vector<std::string> detect_branch(const Trajectory& tr, double tol) {
    double mb = 0.0, m1 = 0.0, m2 = 0.0;
    for (const ReducedState& st : tr.states) {
        mb = std::max(mb, std::abs(st.b));
        m1 = std::max(m1, std::abs(st.lambda + 3.0 * st.a * st.b));
        m2 = std::max(m2, std::abs(st.lambda - 2.0 * st.a * st.a + st.a * st.b));
    }
    std::vector<std::string> out;
    if (tr.states.empty()) return out;
    if (mb < tol) out.emplace_back("b");
    if (m1 < tol) out.emplace_back("lambda+3ab");
    if (m2 < tol) out.emplace_back("lambda-2a^2+ab");
    return out;
}

Warp3Deriv warp3_rhs(double h, double hp, double fp, double lambda, double k) {
    if (!(h > 0.0)) throw DomainError("h must be positive");
    const double b = hp / h;
    const double ratio = b * fp + 2.0 * k / (h * h) - 2.0 * b * b - lambda;
    return {h * ratio, lambda + 3.0 * ratio};
}

double distinct_p(double a, double b, double c) { return a * a + b * b + c * c - a * b - b * c - a * c; }

double distinct_numerator(double a, double b, double c) {
    return a * a * b + a * a * c + a * b * b + a * c * c + b * b * c + c * c * b - 6.0 * a * b * c;
}

double distinct_fprime(double a, double b, double c) {
    const double p = distinct_p(a, b, c);
    if (p == 0.0) throw DomainError("distinct_fprime undefined for a = b = c");
    return distinct_numerator(a, b, c) / (2.0 * p);
}

DistinctRelations distinct_frame_relations(double a, double b, double c) {
    require_distinct(a, b, c);
    const double p = distinct_p(a, b, c);
    const double ab2 = (a - b) * (a - b);
    return {ab2 * ab2 / (4.0 * p), (b - c) * (b - c) / ab2, (a - c) * (a - c) / ab2};
}

double exclusion_residual(double a, double b, double c) {
    require_distinct(a, b, c);
    const double p = distinct_p(a, b, c);
    // Only differences of the derivatives enter: b' - a' = a^2 - b^2, c' - a' = a^2 - c^2.
    const double dab = b * b - a * a;  // a' - b'
    const double dbc = c * c - b * b;  // b' - c'
    const double dca = a * a - c * c;  // c' - a'
    const double dp = (a - b) * dab + (b - c) * dbc + (c - a) * dca;
    const double d = a - b;
    const double d3 = d * d * d;
    const double d4 = d3 * d;
    const double e1 = d3 * dab / p - d4 * dp / (4.0 * p * p);
    const double e2 = -d4 * (a + b - c) / (2.0 * p);
    return e1 - e2;
}

}  // namespace solitonlab
