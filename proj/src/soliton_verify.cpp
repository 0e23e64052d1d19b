#include "solitonlab/soliton_verify.hpp"

#include <algorithm>
#include <cmath>

#include "solitonlab/curvature.hpp"
#include "solitonlab/errors.hpp"

namespace solitonlab {

namespace {

void note(ResidualReport& rep, const std::string& tag, double v) {
    auto [it, inserted] = rep.per_equation.emplace(tag, v);
    if (!inserted) it->second = std::max(it->second, v);
}

void record(ResidualReport& rep, double v, double scalar, const Vec4& x) {
    if (v > rep.max_abs || rep.samples == 0) {
        rep.max_abs = v;
        rep.worst_point = x;
    }
    rep.max_rel = std::max(rep.max_rel, v / std::max(std::abs(scalar), 1e-8));
    ++rep.samples;
}

}  // namespace

nlohmann::json to_json(const ResidualReport& r) {
    nlohmann::json j;
    j["max_abs"] = r.max_abs;
    j["max_rel"] = r.max_rel;
    j["worst_point"] = r.worst_point;
    j["per_equation"] = r.per_equation;
    if (!r.info.empty()) j["info"] = r.info;
    j["samples"] = r.samples;
    return j;
}

std::vector<double> s_samples(Interval range, int count) {
    if (count < 1) throw InputError("sample count must be positive");
    if (!(range.hi >= range.lo)) throw InputError("sample range must satisfy lo <= hi");
    if (count == 1) return {range.lo};
    std::vector<double> s(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) s[static_cast<std::size_t>(i)] = range.lo + (range.hi - range.lo) * i / (count - 1);
    s.back() = range.hi;
    return s;
}

std::vector<Vec4> family_samples(const MetricFamily& m, Interval range, int count) {
    std::vector<Vec4> pts;
    for (double s : s_samples(range, count)) pts.push_back(m.default_point(s));
    return pts;
}

ResidualReport soliton_residual(const MetricFamily& m, const SolitonData& sol, const std::vector<Vec4>& samples) {
    ResidualReport rep;
    for (const Vec4& x : samples) {
        const CurvatureBundle b = family_bundle(m, x);
        const auto zeta = frame_zeta(m, x[0]);
        const Jet f = sol.f(x[0]);
        const Sym2 hess = Sym2::diag(f.d2, zeta[0] * f.d1, zeta[1] * f.d1, zeta[2] * f.d1);
        const Sym2 res = hess + b.ric - sol.lambda * b.metric;

        double worst = 0.0;
        double offdiag = 0.0;
        for (int i = 0; i < kDim; ++i) {
            const double d = std::abs(res(i, i));
            note(rep, "soliton_" + std::to_string(i + 1) + std::to_string(i + 1), d);
            worst = std::max(worst, d);
            for (int j = i + 1; j < kDim; ++j) offdiag = std::max(offdiag, std::abs(res(i, j)));
        }
        note(rep, "soliton_offdiag", offdiag);
        record(rep, std::max(worst, offdiag), b.scalar, x);
    }
    return rep;
}

ResidualReport codazzi_residual_closed(const MetricFamily& m, const std::vector<Vec4>& samples) {
    ResidualReport rep;
    for (const Vec4& x : samples) {
        const CurvatureBundle b = family_bundle(m, x);
        const DiagRicciJet jet = family_ricci_jet(m, x[0]);
        const auto zeta = frame_zeta(m, x[0]);
        // nabla_1 R_ii + zeta_i (R_ii - R_11) - R'/6, i = 2, 3, 4
        for (std::size_t i = 1; i < kDim; ++i) {
            const double c = jet.deriv[i] + zeta[i - 1] * (jet.eigen[i] - jet.eigen[0]) - jet.scalar_deriv / 6.0;
            note(rep, "codazzi_1" + std::to_string(i + 1) + std::to_string(i + 1), std::abs(c));
        }
        const double all = b.codazzi_residual.max_abs();
        note(rep, "codazzi_all", all);
        record(rep, all, b.scalar, x);
    }
    return rep;
}

ResidualReport hamilton_check(const MetricFamily& m, const SolitonData& sol, const std::vector<double>& s) {
    if (s.size() < 3) throw InputError("hamilton_check needs at least 3 samples");
    ResidualReport rep;
    std::vector<double> q;
    std::vector<double> scal;
    double grad = 0.0;
    std::size_t grad_at = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const DiagRicciJet jet = family_ricci_jet(m, s[i]);
        const Jet f = sol.f(s[i]);
        q.push_back(jet.scalar + f.d1 * f.d1 - 2.0 * sol.lambda * f.v);
        scal.push_back(jet.scalar);
        const double g = std::abs(0.5 * jet.scalar_deriv - jet.eigen[0] * f.d1);
        if (g > grad) {
            grad = g;
            grad_at = i;
        }
    }
    double mean = 0.0;
    for (double v : q) mean += v;
    mean /= static_cast<double>(q.size());
    double cons = 0.0;
    std::size_t cons_at = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double d = std::abs(q[i] - mean);
        if (d > cons) {
            cons = d;
            cons_at = i;
        }
    }
    rep.per_equation["conservation"] = cons;
    rep.per_equation["gradient"] = grad;
    rep.info["conserved_mean"] = mean;
    rep.samples = s.size();
    const std::size_t at = cons >= grad ? cons_at : grad_at;
    rep.max_abs = std::max(cons, grad);
    rep.worst_point = m.default_point(s[at]);
    rep.max_rel = rep.max_abs / std::max(std::abs(scal[at]), 1e-8);
    return rep;
}

}  // namespace solitonlab
