#pragma once

// Structured metric families and their profile functions.
//
// Coordinates:
//   doubly-warped  g = ds^2 + p(s)^2 dt^2 + h(s)^2 (dr^2 + u(r)^2 dtheta^2)   on (s, t, r, theta)
//   warped3        g = ds^2 + h(s)^2 (dr^2 + u(r)^2 (dtheta^2 + sin^2 theta dphi^2))   on (s, r, theta, phi)
// where u is the normalized constant-curvature profile u'' = -k u, u(0) = 0, u'(0) = 1.

#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

#include "solitonlab/frame_tensor.hpp"

namespace solitonlab {

/// Value and first three derivatives of a one-variable function.
struct Jet {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
};

/// A closed-form function of one variable with analytic derivatives.
///
/// Built-in shapes serialize to JSON; custom() profiles carry only the
/// callable and cannot be serialized.
class Profile {
public:
    using Fn = std::function<Jet(double)>;

    /// coef * (x - shift)^exponent, defined for x > shift.
    static Profile power(double coef, double exponent, double shift = 0.0);
    static Profile constant(double c);
    /// coef * ln(x - shift), defined for x > shift.
    static Profile log(double coef, double shift = 0.0);
    /// amp * sin(freq * (x - shift)).
    static Profile sine(double amp, double freq, double shift = 0.0);
    /// amp * sinh(freq * (x - shift)).
    static Profile sinh(double amp, double freq, double shift = 0.0);
    /// User-supplied profile; the callable must return all derivatives.
    static Profile custom(Fn fn, std::string label = "custom");

    static Profile from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    Jet operator()(double x) const { return fn_(x); }

    /// Left end of the natural domain (the singular point of power/log shapes).
    std::optional<double> singular_point() const noexcept { return singular_; }
    const std::string& label() const noexcept { return label_; }

private:
    Profile(Fn fn, std::string label, std::optional<nlohmann::json> spec,
            std::optional<double> singular);

    Fn fn_;
    std::string label_;
    std::optional<nlohmann::json> spec_;
    std::optional<double> singular_;
};

/// Minimum distance from a singular boundary at which evaluation is allowed.
inline constexpr double kDomainMargin = 1e-6;

/// Constant-curvature fiber profile u(r).
class FiberProfile {
public:
    explicit FiberProfile(double k) : k_(k) {}

    double k() const noexcept { return k_; }

    /// Open r-domain: (0, inf) for k <= 0, (0, pi/sqrt(k)) for k > 0.
    double r_max() const;

    /// (u, u', u'', u'''). Throws DomainError outside the r-domain.
    Jet eval(double r) const;

private:
    double k_;
};

/// Convenience wrapper matching the (u, u', u'') contract.
Jet fiber_profile_eval(const FiberProfile& fp, double r);

enum class FamilyKind { product_R2xN, singular_steady, doubly_warped, warped3 };

/// Named instances with a known potential.
enum class Canonical { none, product, singular_steady, gaussian, cylinder, einstein_sphere };

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

class MetricFamily {
public:
    /// ds^2 + s^2 dt^2 + N_lambda, fiber curvature lambda != 0.
    static MetricFamily product_R2xN(double lambda, Interval domain = {0.5, 2.0});
    /// ds^2 + s^{2/3} dt^2 + s^{4/3} (flat), lambda = 0.
    static MetricFamily singular_steady(Interval domain = {0.5, 2.0});
    static MetricFamily doubly_warped(Profile p, Profile h, double k, Interval domain);
    static MetricFamily warped3(Profile h, double k, Interval domain);

    /// ds^2 + s^2 g_{S^3}: flat space in polar form; any lambda.
    static MetricFamily gaussian(double lambda, Interval domain = {0.5, 2.0});
    /// R x M_{lambda/2}: h = 1 with fiber curvature lambda/2.
    static MetricFamily cylinder(double lambda, Interval domain = {0.5, 2.0});
    /// Round S^4 as ds^2 + sin^2(s) g_{S^3}; Einstein with Ric = 3g.
    static MetricFamily einstein_sphere(Interval domain = {0.5, 2.0});
    /// ds^2 + s^2 dt^2 + s g_{S^2}: violates the harmonic-Weyl condition.
    static MetricFamily broken_product(Interval domain = {0.5, 2.0});

    /// Look up one of the named instances above ("singular-steady", "product",
    /// "gaussian", "cylinder", "einstein-sphere", "broken-product").
    static MetricFamily by_name(const std::string& name, std::optional<double> lambda = {});

    static MetricFamily from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    FamilyKind kind() const noexcept { return kind_; }
    Canonical canonical() const noexcept { return canonical_; }
    const std::string& name() const noexcept { return name_; }
    bool is_doubly_warped() const noexcept { return kind_ != FamilyKind::warped3; }

    const Profile& p() const;  ///< only for doubly-warped kinds
    const Profile& h() const noexcept { return h_; }
    double k() const noexcept { return k_; }
    std::optional<double> lambda() const noexcept { return lambda_; }
    Interval domain() const noexcept { return domain_; }
    FiberProfile fiber() const { return FiberProfile(k_); }

    /// Throws DomainError unless s lies in the declared domain, away from
    /// profile singularities, with p, h > 0.
    void check_s(double s) const;
    /// Full point check including fiber chart coordinates.
    void check_point(const Vec4& x) const;

    Frame4 coordinate_frame() const;
    Frame4 orthonormal_frame() const;

    /// A fiber chart location well inside the chart, used when only s matters.
    Vec4 default_point(double s) const;

private:
    MetricFamily() = default;

    FamilyKind kind_ = FamilyKind::doubly_warped;
    Canonical canonical_ = Canonical::none;
    std::string name_;
    std::optional<Profile> p_;
    Profile h_ = Profile::constant(1.0);
    double k_ = 0.0;
    std::optional<double> lambda_;
    Interval domain_;
};

/// Coordinate components of the metric at a point.
Sym2 family_metric_at(const MetricFamily& m, const Vec4& x);

/// zeta_2, zeta_3, zeta_4 of the adapted frame: (p'/p, h'/h, h'/h) for the
/// doubly-warped kinds and (h'/h, h'/h, h'/h) for warped3.
std::array<double, 3> frame_zeta(const MetricFamily& m, double s);

/// Potential profile and soliton constant.
struct SolitonData {
    Profile f;
    double lambda = 0.0;

    /// zeta_i = (lambda - lambda_i) / |grad f| with |grad f| = f'.
    double zeta_from_ricci(double ricci_eigenvalue, double fprime) const {
        return (lambda - ricci_eigenvalue) / fprime;
    }
};

/// Potential and constant for a canonical family; additive constants in f
/// are normalized to zero. Throws UnsupportedError otherwise.
SolitonData canonical_soliton_for(const MetricFamily& m);

std::string to_string(FamilyKind k);
std::string to_string(Canonical c);

}  // namespace solitonlab
