#include "solitonlab/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "solitonlab/curvature.hpp"
#include "solitonlab/errors.hpp"
#include "solitonlab/soliton_verify.hpp"

namespace solitonlab {

namespace {

double curvature_scale(const std::array<double, 4>& v) {
    double m = 1.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::string majority(const std::vector<std::string>& sigs) {
    std::map<std::string, std::size_t> count;
    for (const auto& s : sigs) ++count[s];
    std::string best;
    std::size_t best_n = 0;
    // first occurrence wins ties
    for (const auto& s : sigs) {
        if (count[s] > best_n) {
            best = s;
            best_n = count[s];
        }
    }
    return best;
}

bool lambda_234_distinct(const std::string& sig) {
    // 2, 3 and 4 each sit in a different group
    return sig.find("2,3") == std::string::npos && sig.find("3,4") == std::string::npos &&
           sig.find("2,4") == std::string::npos;
}

std::string warped_sublabel(const std::vector<ClassifierSample>& xs, double tol) {
    for (const auto& x : xs)
        if (!x.h || !x.hprime) return "";
    double hp0 = 0.0, hp1 = 0.0;
    std::vector<double> shift;
    for (const auto& x : xs) {
        hp0 = std::max(hp0, std::abs(*x.hprime));
        hp1 = std::max(hp1, std::abs(*x.hprime - 1.0));
        shift.push_back(x.s - *x.h);
    }
    if (hp0 <= tol) return "cylinder";
    const auto [lo, hi] = std::minmax_element(shift.begin(), shift.end());
    if (hp1 <= tol && *hi - *lo <= tol * std::max(1.0, std::abs(*lo))) return "gaussian";
    return "";
}

}  // namespace

std::string EigenSignature::str() const {
    std::string out;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (g) out += ",";
        out += "{";
        for (std::size_t i = 0; i < groups[g].size(); ++i) {
            if (i) out += ",";
            out += std::to_string(groups[g][i]);
        }
        out += "}";
    }
    return out;
}

EigenSignature eigen_signature(const std::array<double, 4>& values, double tol) {
    if (!(tol > 0.0)) throw InputError("signature tolerance must be positive");
    std::array<int, 4> order{0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return values[static_cast<std::size_t>(a)] > values[static_cast<std::size_t>(b)];
    });
    const double thresh = tol * curvature_scale(values);

    std::vector<std::vector<int>> groups{{order[0]}};
    for (std::size_t i = 1; i < order.size(); ++i) {
        const double gap = values[static_cast<std::size_t>(order[i - 1])] - values[static_cast<std::size_t>(order[i])];
        if (gap <= thresh) {
            groups.back().push_back(order[i]);
        } else {
            groups.push_back({order[i]});
        }
    }
    for (auto& g : groups) std::sort(g.begin(), g.end());
    std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });

    EigenSignature sig;
    sig.tol = tol;
    for (const auto& g : groups) {
        double sum = 0.0;
        std::vector<int> one_based;
        for (int i : g) {
            sum += values[static_cast<std::size_t>(i)];
            one_based.push_back(i + 1);
        }
        sig.groups.push_back(one_based);
        sig.values.push_back(sum / static_cast<double>(g.size()));
    }
    return sig;
}

std::string to_string(TypeLabel l) {
    switch (l) {
        case TypeLabel::Einstein_i: return "Einstein_i";
        case TypeLabel::Product_ii: return "Product_ii";
        case TypeLabel::SingularSteady_iii: return "SingularSteady_iii";
        case TypeLabel::WarpedLCF_iv: return "WarpedLCF_iv";
        case TypeLabel::Unknown: return "Unknown";
    }
    return "Unknown";
}

nlohmann::json to_json(const TypeVerdict& v) {
    nlohmann::json j;
    j["label"] = to_string(v.label);
    j["sublabel"] = v.sublabel;
    j["tol"] = v.tol;
    j["majority_signature"] = v.majority_signature;
    j["signature_uniform"] = v.signature_uniform;
    j["sample_signatures"] = v.sample_signatures;
    nlohmann::json ev = nlohmann::json::object();
    for (const auto& [name, e] : v.evidence) {
        ev[name] = {{"residual", e.residual},
                    {"threshold", e.threshold},
                    {"expect_below", e.expect_below},
                    {"consistent", e.consistent()}};
    }
    j["evidence"] = ev;
    j["notes"] = v.notes;
    return j;
}

TypeVerdict classify(const std::vector<ClassifierSample>& xs, const ClassifyOptions& opt) {
    if (xs.size() < kMinClassifySamples) throw InputError("classify needs at least 8 samples");
    if (!(opt.tol > 0.0)) throw InputError("classify tolerance must be positive");
    const double tol = opt.tol;
    const auto [smin, smax] = std::minmax_element(xs.begin(), xs.end(),
                                                  [](const auto& a, const auto& b) { return a.s < b.s; });
    if (!(smax->s > smin->s)) throw InputError("classify samples must span an s-interval");

    TypeVerdict v;
    v.tol = tol;
    for (const auto& x : xs) v.sample_signatures.push_back(eigen_signature(x.eigen, tol).str());
    v.majority_signature = majority(v.sample_signatures);
    v.signature_uniform = std::all_of(v.sample_signatures.begin(), v.sample_signatures.end(),
                                      [&](const std::string& s) { return s == v.majority_signature; });
    const std::string& sig = v.majority_signature;
    auto unknown = [&](std::string why) {
        v.label = TypeLabel::Unknown;
        v.sublabel.clear();
        if (!why.empty()) v.notes.push_back(std::move(why));
        return v;
    };

    double changed = 0.0;
    for (const auto& s : v.sample_signatures) changed += s == sig ? 0.0 : 1.0;
    if (!v.signature_uniform) {
        v.notes.push_back("eigenvalue signature changes between samples");
        if (opt.require_uniform_signature) {
            v.evidence["signature_uniform"] = {changed / static_cast<double>(xs.size()), 0.0, true};
            return unknown("");
        }
    }

    double trace = 0.0;
    for (const auto& x : xs) {
        const double sum = x.eigen[0] + x.eigen[1] + x.eigen[2] + x.eigen[3];
        trace = std::max(trace, std::abs(x.scalar - sum) / curvature_scale(x.eigen));
    }
    v.evidence["trace_consistency"] = {trace, 4.0 * tol, true};
    if (trace > 4.0 * tol) return unknown("scalar curvature differs from the eigenvalue sum");

    // f' == 0: Einstein
    double fmax = 0.0;
    for (const auto& x : xs) fmax = std::max(fmax, std::abs(x.fprime));
    const bool steady_potential = fmax <= tol;
    v.evidence["fprime_zero"] = {fmax, tol, steady_potential};
    if (steady_potential) {
        double spread = 0.0;
        for (const auto& x : xs) {
            const auto [lo, hi] = std::minmax_element(x.eigen.begin(), x.eigen.end());
            spread = std::max(spread, (*hi - *lo) / curvature_scale(x.eigen));
        }
        v.evidence["einstein_spread"] = {spread, tol, true};
        if (spread > tol) return unknown("f' vanishes but Ricci is not a multiple of g");
        v.label = TypeLabel::Einstein_i;
        return v;
    }

    // |W|^2 == 0: locally conformally flat warped product
    double weyl = 0.0;
    for (const auto& x : xs) {
        const double c = curvature_scale(x.eigen);
        weyl = std::max(weyl, x.weyl_sq / (c * c));
    }
    const bool lcf = weyl <= tol;
    v.evidence["weyl_vanishes"] = {weyl, tol, lcf};
    if (lcf) {
        const bool sig_ok = sig == "{1,2,3,4}" || sig == "{1},{2,3,4}";
        v.evidence["warped_signature"] = {sig_ok ? 0.0 : 1.0, 0.5, true};
        if (!sig_ok) return unknown("conformally flat data with a signature other than {1},{2,3,4}");
        v.label = TypeLabel::WarpedLCF_iv;
        v.sublabel = warped_sublabel(xs, tol);
        return v;
    }

    double rmean = 0.0;
    for (const auto& x : xs) rmean += x.scalar;
    rmean /= static_cast<double>(xs.size());
    double rvar = 0.0;
    for (const auto& x : xs) rvar = std::max(rvar, std::abs(x.scalar - rmean));
    rvar /= 1.0 + std::abs(rmean);

    if (sig == "{1,2},{3,4}") {
        v.evidence["scalar_constant"] = {rvar, tol, true};
        if (rvar > tol) return unknown("product signature with non-constant scalar curvature");
        const double lam = rmean / 2.0;
        double pattern = 0.0;
        for (const auto& x : xs) {
            const double d = std::max({std::abs(x.eigen[0]), std::abs(x.eigen[1]), std::abs(x.eigen[2] - lam),
                                       std::abs(x.eigen[3] - lam)});
            pattern = std::max(pattern, d / curvature_scale(x.eigen));
        }
        v.evidence["product_eigenvalues"] = {pattern, tol, true};
        // f' = lambda (s - c) for some shift c
        double c = 0.0;
        double fscale = 1.0;
        for (const auto& x : xs) {
            c += x.fprime - lam * x.s;
            fscale = std::max(fscale, std::abs(x.fprime));
        }
        c /= static_cast<double>(xs.size());
        double slope = 0.0;
        for (const auto& x : xs) slope = std::max(slope, std::abs(x.fprime - lam * x.s - c) / fscale);
        v.evidence["product_fprime_slope"] = {slope, tol, true};
        if (pattern > tol || slope > tol) return unknown("product signature without the (0, 0, R/2, R/2) structure");
        v.label = TypeLabel::Product_ii;
        return v;
    }

    if (sig == "{1},{2},{3,4}") {
        v.evidence["scalar_constant"] = {rvar, tol, false};
        static constexpr std::array<double, 4> target{2.0 / 3.0, -2.0 / 9.0, -4.0 / 9.0, -4.0 / 9.0};
        double eig = 0.0, scal = 0.0, fp = 0.0;
        double fscale = 1.0;
        for (const auto& x : xs) fscale = std::max(fscale, std::abs(x.fprime * x.s));
        for (const auto& x : xs) {
            const double s2 = x.s * x.s;
            const double c = curvature_scale(x.eigen) * s2;
            for (std::size_t i = 0; i < 4; ++i) eig = std::max(eig, std::abs(x.eigen[i] * s2 - target[i]) / c);
            scal = std::max(scal, std::abs(x.scalar * s2 + 4.0 / 9.0) / c);
            fp = std::max(fp, std::abs(x.fprime * x.s - 2.0 / 3.0) / fscale);
        }
        v.evidence["steady_eigenvalues_s2"] = {eig, tol, true};
        v.evidence["steady_scalar_s2"] = {scal, 4.0 * tol, true};
        v.evidence["steady_fprime_s"] = {fp, tol, true};
        if (rvar <= tol || eig > tol || scal > 4.0 * tol || fp > tol) {
            return unknown("signature {1},{2},{3,4} without the singular steady profile");
        }
        v.label = TypeLabel::SingularSteady_iii;
        return v;
    }

    if (lambda_234_distinct(sig)) {
        return unknown("lambda_2, lambda_3, lambda_4 pairwise distinct with f' != 0: "
                       "excluded for gradient solitons with harmonic Weyl curvature");
    }
    return unknown("signature " + sig + " matches no type");
}

std::vector<ClassifierSample> sample_family(const MetricFamily& m, const SolitonData& sol, Interval range,
                                            int count) {
    std::vector<ClassifierSample> out;
    for (double s : s_samples(range, count)) {
        const DiagRicciJet jet = family_ricci_jet(m, s);
        const CurvatureBundle b = family_bundle(m, m.default_point(s));
        const Jet h = m.h()(s);
        ClassifierSample x;
        x.s = s;
        x.eigen = jet.eigen;
        x.fprime = sol.f(s).d1;
        x.scalar = jet.scalar;
        x.weyl_sq = tensor_norm(b.weyl, b.metric);
        x.h = h.v;
        x.hprime = h.d1;
        out.push_back(x);
    }
    return out;
}

}  // namespace solitonlab
