#include "solitonlab/ansatz.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <cmath>
#include <numbers>
#include <utility>

#include "solitonlab/errors.hpp"

namespace solitonlab {

using nlohmann::json;

namespace {

bool is_nonneg_integer(double e) { return e >= 0.0 && std::floor(e) == e; }

// n-th derivative of c*y^e, with exact zeros for polynomial terms.
double power_derivative(double c, double e, double y, int n) {
    double coef = c;
    for (int i = 0; i < n; ++i) coef *= (e - i);
    if (coef == 0.0) return 0.0;
    return coef * std::pow(y, e - n);
}

std::string normalize_name(std::string s) {
    std::replace(s.begin(), s.end(), '_', '-');
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return s;
}

}  // namespace

Profile::Profile(Fn fn, std::string label, std::optional<json> spec, std::optional<double> singular)
    : fn_(std::move(fn)), label_(std::move(label)), spec_(std::move(spec)), singular_(singular) {}

Profile Profile::power(double coef, double exponent, double shift) {
    auto fn = [coef, exponent, shift](double x) {
        const double y = x - shift;
        return Jet{power_derivative(coef, exponent, y, 0), power_derivative(coef, exponent, y, 1),
                   power_derivative(coef, exponent, y, 2), power_derivative(coef, exponent, y, 3)};
    };
    std::optional<double> singular;
    if (!is_nonneg_integer(exponent)) singular = shift;
    return Profile(fn, "power",
                   json{{"type", "power"}, {"coef", coef}, {"exponent", exponent}, {"shift", shift}},
                   singular);
}

Profile Profile::constant(double c) {
    return Profile([c](double) { return Jet{c, 0.0, 0.0, 0.0}; }, "constant",
                   json{{"type", "constant"}, {"value", c}}, std::nullopt);
}

Profile Profile::log(double coef, double shift) {
    auto fn = [coef, shift](double x) {
        const double y = x - shift;
        return Jet{coef * std::log(y), coef / y, -coef / (y * y), 2.0 * coef / (y * y * y)};
    };
    return Profile(fn, "log", json{{"type", "log"}, {"coef", coef}, {"shift", shift}}, shift);
}

Profile Profile::sine(double amp, double freq, double shift) {
    auto fn = [amp, freq, shift](double x) {
        const double sn = std::sin(freq * (x - shift));
        const double cs = std::cos(freq * (x - shift));
        return Jet{amp * sn, amp * freq * cs, -amp * freq * freq * sn, -amp * freq * freq * freq * cs};
    };
    return Profile(fn, "sin",
                   json{{"type", "sin"}, {"amp", amp}, {"freq", freq}, {"shift", shift}},
                   std::nullopt);
}

Profile Profile::sinh(double amp, double freq, double shift) {
    auto fn = [amp, freq, shift](double x) {
        const double sh = std::sinh(freq * (x - shift));
        const double ch = std::cosh(freq * (x - shift));
        return Jet{amp * sh, amp * freq * ch, amp * freq * freq * sh, amp * freq * freq * freq * ch};
    };
    return Profile(fn, "sinh",
                   json{{"type", "sinh"}, {"amp", amp}, {"freq", freq}, {"shift", shift}},
                   std::nullopt);
}

Profile Profile::custom(Fn fn, std::string label) {
    return Profile(std::move(fn), std::move(label), std::nullopt, std::nullopt);
}

Profile Profile::from_json(const json& j) {
    try {
        const std::string type = j.at("type").get<std::string>();
        const double shift = j.value("shift", 0.0);
        if (type == "power") return power(j.at("coef"), j.at("exponent"), shift);
        if (type == "constant") return constant(j.at("value"));
        if (type == "log") return log(j.at("coef"), shift);
        if (type == "sin") return sine(j.at("amp"), j.at("freq"), shift);
        if (type == "sinh") return sinh(j.at("amp"), j.at("freq"), shift);
        throw InputError("unknown profile type '" + type + "'");
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed profile: ") + e.what());
    }
}

json Profile::to_json() const {
    if (!spec_) throw UnsupportedError("profile '" + label_ + "' is not serializable");
    return *spec_;
}

double FiberProfile::r_max() const {
    if (k_ > 0.0) return std::numbers::pi / std::sqrt(k_);
    return std::numeric_limits<double>::infinity();
}

Jet FiberProfile::eval(double r) const {
    if (!(r >= kDomainMargin) || !(r <= r_max() - kDomainMargin)) {
        throw DomainError("fiber coordinate r = " + std::to_string(r) + " outside the chart");
    }
    if (k_ > 0.0) {
        const double w = std::sqrt(k_);
        const double u = std::sin(w * r) / w;
        const double up = std::cos(w * r);
        return Jet{u, up, -k_ * u, -k_ * up};
    }
    if (k_ < 0.0) {
        const double w = std::sqrt(-k_);
        const double u = std::sinh(w * r) / w;
        const double up = std::cosh(w * r);
        return Jet{u, up, -k_ * u, -k_ * up};
    }
    return Jet{r, 1.0, 0.0, 0.0};
}

Jet fiber_profile_eval(const FiberProfile& fp, double r) { return fp.eval(r); }

namespace {

void check_domain_against(const Profile& prof, Interval d, const std::string& what) {
    if (auto sp = prof.singular_point(); sp && d.lo - *sp < kDomainMargin) {
        throw DomainError("domain of " + what + " reaches the singular point s = " +
                          std::to_string(*sp));
    }
}

}  // namespace

MetricFamily MetricFamily::doubly_warped(Profile p, Profile h, double k, Interval domain) {
    if (!(domain.lo < domain.hi)) throw InputError("empty s-domain");
    check_domain_against(p, domain, "p");
    check_domain_against(h, domain, "h");
    MetricFamily m;
    m.kind_ = FamilyKind::doubly_warped;
    m.name_ = "doubly-warped";
    m.p_ = std::move(p);
    m.h_ = std::move(h);
    m.k_ = k;
    m.domain_ = domain;
    return m;
}

MetricFamily MetricFamily::warped3(Profile h, double k, Interval domain) {
    if (!(domain.lo < domain.hi)) throw InputError("empty s-domain");
    check_domain_against(h, domain, "h");
    MetricFamily m;
    m.kind_ = FamilyKind::warped3;
    m.name_ = "warped3";
    m.h_ = std::move(h);
    m.k_ = k;
    m.domain_ = domain;
    return m;
}

MetricFamily MetricFamily::product_R2xN(double lambda, Interval domain) {
    if (lambda == 0.0) throw InputError("product family needs lambda != 0");
    if (domain.lo < kDomainMargin) throw DomainError("product family domain must stay in s > 0");
    MetricFamily m = doubly_warped(Profile::power(1.0, 1.0), Profile::constant(1.0), lambda, domain);
    m.kind_ = FamilyKind::product_R2xN;
    m.canonical_ = Canonical::product;
    m.name_ = "product";
    m.lambda_ = lambda;
    return m;
}

MetricFamily MetricFamily::singular_steady(Interval domain) {
    MetricFamily m = doubly_warped(Profile::power(1.0, 1.0 / 3.0), Profile::power(1.0, 2.0 / 3.0),
                                   0.0, domain);
    m.kind_ = FamilyKind::singular_steady;
    m.canonical_ = Canonical::singular_steady;
    m.name_ = "singular-steady";
    m.lambda_ = 0.0;
    return m;
}

MetricFamily MetricFamily::gaussian(double lambda, Interval domain) {
    if (domain.lo < kDomainMargin) throw DomainError("gaussian chart needs s > 0");
    MetricFamily m = warped3(Profile::power(1.0, 1.0), 1.0, domain);
    m.canonical_ = Canonical::gaussian;
    m.name_ = "gaussian";
    m.lambda_ = lambda;
    return m;
}

MetricFamily MetricFamily::cylinder(double lambda, Interval domain) {
    if (!(lambda > 0.0)) throw InputError("cylinder R x M_{lambda/2} needs lambda > 0");
    MetricFamily m = warped3(Profile::constant(1.0), lambda / 2.0, domain);
    m.canonical_ = Canonical::cylinder;
    m.name_ = "cylinder";
    m.lambda_ = lambda;
    return m;
}

MetricFamily MetricFamily::einstein_sphere(Interval domain) {
    if (domain.lo < kDomainMargin || domain.hi > std::numbers::pi - kDomainMargin) {
        throw DomainError("sphere chart needs 0 < s < pi");
    }
    MetricFamily m = warped3(Profile::sine(1.0, 1.0), 1.0, domain);
    m.canonical_ = Canonical::einstein_sphere;
    m.name_ = "einstein-sphere";
    m.lambda_ = 3.0;
    return m;
}

MetricFamily MetricFamily::broken_product(Interval domain) {
    MetricFamily m = doubly_warped(Profile::power(1.0, 1.0), Profile::power(1.0, 0.5), 1.0, domain);
    m.name_ = "broken-product";
    return m;
}

MetricFamily MetricFamily::by_name(const std::string& raw, std::optional<double> lambda) {
    const std::string name = normalize_name(raw);
    if (name == "singular-steady") return singular_steady();
    if (name == "product" || name == "product-r2xn") return product_R2xN(lambda.value_or(-1.0));
    if (name == "gaussian") return gaussian(lambda.value_or(1.0));
    if (name == "cylinder") return cylinder(lambda.value_or(2.0));
    if (name == "einstein-sphere") return einstein_sphere();
    if (name == "broken-product") return broken_product();
    throw InputError("unknown family '" + raw + "'");
}

MetricFamily MetricFamily::from_json(const json& j) {
    try {
        Interval dom{0.5, 2.0};
        if (j.contains("domain")) {
            const auto& d = j.at("domain");
            if (!d.is_array() || d.size() != 2) throw InputError("domain must be [lo, hi]");
            dom = {d[0].get<double>(), d[1].get<double>()};
        }
        std::optional<double> lambda;
        if (j.contains("lambda") && !j.at("lambda").is_null()) lambda = j.at("lambda").get<double>();

        const std::string canon = j.value("canonical", std::string("none"));
        if (canon != "none") {
            const std::string n = normalize_name(canon);
            MetricFamily m = [&] {
                if (n == "product") return product_R2xN(lambda.value_or(-1.0), dom);
                if (n == "singular-steady") return singular_steady(dom);
                if (n == "gaussian") return gaussian(lambda.value_or(1.0), dom);
                if (n == "cylinder") return cylinder(lambda.value_or(2.0), dom);
                if (n == "einstein-sphere") return einstein_sphere(dom);
                throw InputError("unknown canonical family '" + canon + "'");
            }();
            return m;
        }
        // generic kinds carry their own profiles; only named instances go through by_name
        const std::string name = j.value("name", std::string());
        if (!name.empty() && name != "doubly-warped" && name != "warped3") {
            MetricFamily m = by_name(name, lambda);
            m.domain_ = dom;
            return m;
        }

        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "product_R2xN") return product_R2xN(lambda.value_or(-1.0), dom);
        if (kind == "singular_steady") return singular_steady(dom);
        if (kind == "doubly_warped") {
            MetricFamily m = doubly_warped(Profile::from_json(j.at("p")), Profile::from_json(j.at("h")),
                                           j.at("k").get<double>(), dom);
            m.lambda_ = lambda;
            return m;
        }
        if (kind == "warped3") {
            MetricFamily m = warped3(Profile::from_json(j.at("h")), j.at("k").get<double>(), dom);
            m.lambda_ = lambda;
            return m;
        }
        throw InputError("unknown family kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed family descriptor: ") + e.what());
    }
}

json MetricFamily::to_json() const {
    json j;
    j["kind"] = to_string(kind_);
    j["k"] = k_;
    j["lambda"] = lambda_ ? json(*lambda_) : json(nullptr);
    j["domain"] = {domain_.lo, domain_.hi};
    j["canonical"] = to_string(canonical_);
    j["name"] = name_;
    if (kind_ == FamilyKind::doubly_warped) j["p"] = p_->to_json();
    if (kind_ == FamilyKind::doubly_warped || kind_ == FamilyKind::warped3) j["h"] = h_.to_json();
    return j;
}

const Profile& MetricFamily::p() const {
    if (!p_) throw UnsupportedError("warped3 family has no p profile");
    return *p_;
}

void MetricFamily::check_s(double s) const {
    if (!std::isfinite(s) || s < domain_.lo || s > domain_.hi) {
        throw DomainError("s = " + std::to_string(s) + " outside the family domain");
    }
    auto check_prof = [s](const Profile& prof, const char* what) {
        if (auto sp = prof.singular_point(); sp && s - *sp < kDomainMargin) {
            throw DomainError(std::string("s too close to the singular point of ") + what);
        }
        if (!(prof(s).v > 0.0)) throw DomainError(std::string(what) + "(s) must be positive");
    };
    if (p_) check_prof(*p_, "p");
    check_prof(h_, "h");
}

void MetricFamily::check_point(const Vec4& x) const {
    check_s(x[0]);
    if (is_doubly_warped()) {
        (void)fiber().eval(x[2]);
    } else {
        (void)fiber().eval(x[1]);
        if (x[2] < kDomainMargin || x[2] > std::numbers::pi - kDomainMargin) {
            throw DomainError("polar angle outside (0, pi)");
        }
    }
}

Frame4 MetricFamily::coordinate_frame() const {
    if (is_doubly_warped()) return Frame4(FrameKind::coordinate, {"s", "t", "r", "theta"});
    return Frame4(FrameKind::coordinate, {"s", "r", "theta", "phi"});
}

Frame4 MetricFamily::orthonormal_frame() const {
    return Frame4(FrameKind::orthonormal, {"E1", "E2", "E3", "E4"});
}

Vec4 MetricFamily::default_point(double s) const {
    const double r = std::min(1.0, 0.5 * fiber().r_max());
    if (is_doubly_warped()) return {s, 0.5, r, 0.5};
    return {s, r, 1.0, 0.5};
}

Sym2 family_metric_at(const MetricFamily& m, const Vec4& x) {
    m.check_point(x);
    const double s = x[0];
    const double h = m.h()(s).v;
    if (m.is_doubly_warped()) {
        const double p = m.p()(s).v;
        const double u = m.fiber().eval(x[2]).v;
        return Sym2::diag(1.0, p * p, h * h, h * h * u * u);
    }
    const double u = m.fiber().eval(x[1]).v;
    const double sn = std::sin(x[2]);
    return Sym2::diag(1.0, h * h, h * h * u * u, h * h * u * u * sn * sn);
}

std::array<double, 3> frame_zeta(const MetricFamily& m, double s) {
    m.check_s(s);
    const Jet h = m.h()(s);
    const double b = h.d1 / h.v;
    if (m.is_doubly_warped()) {
        const Jet p = m.p()(s);
        return {p.d1 / p.v, b, b};
    }
    return {b, b, b};
}

SolitonData canonical_soliton_for(const MetricFamily& m) {
    switch (m.canonical()) {
        case Canonical::product:
        case Canonical::gaussian:
        case Canonical::cylinder: {
            const double lam = *m.lambda();
            return SolitonData{Profile::power(lam / 2.0, 2.0), lam};
        }
        case Canonical::singular_steady:
            return SolitonData{Profile::log(2.0 / 3.0), 0.0};
        case Canonical::einstein_sphere:
            return SolitonData{Profile::constant(0.0), 3.0};
        case Canonical::none:
            break;
    }
    throw UnsupportedError("family '" + m.name() + "' has no canonical potential");
}

std::string to_string(FamilyKind k) {
    switch (k) {
        case FamilyKind::product_R2xN: return "product_R2xN";
        case FamilyKind::singular_steady: return "singular_steady";
        case FamilyKind::doubly_warped: return "doubly_warped";
        case FamilyKind::warped3: return "warped3";
    }
    return "unknown";
}

std::string to_string(Canonical c) {
    switch (c) {
        case Canonical::none: return "none";
        case Canonical::product: return "product";
        case Canonical::singular_steady: return "singular_steady";
        case Canonical::gaussian: return "gaussian";
        case Canonical::cylinder: return "cylinder";
        case Canonical::einstein_sphere: return "einstein_sphere";
    }
    return "none";
}

}  // namespace solitonlab
