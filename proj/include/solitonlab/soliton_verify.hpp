#pragma once

// Residuals of the gradient soliton equation, the Codazzi form of the
// harmonic-Weyl condition, and the two Hamilton identities.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "solitonlab/ansatz.hpp"
#include "solitonlab/frame_tensor.hpp"

namespace solitonlab {

inline constexpr double kSolitonTol = 1e-10;
inline constexpr double kCodazziTol = 1e-10;
inline constexpr double kHamiltonTol = 1e-10;
/// Measured Codazzi residual of the broken product family is about 0.33
/// (normalized) and never below 0.08 unnormalized on [0.5, 2].
inline constexpr double kBrokenCodazziThreshold = 1e-2;

struct ResidualReport {
    double max_abs = 0.0;
    /// max_abs relative to max(|R|, 1e-8) at the worst sample
    double max_rel = 0.0;
    Vec4 worst_point{};
    std::map<std::string, double> per_equation;
    /// Values that are not residuals (e.g. the conserved Hamilton quantity).
    std::map<std::string, double> info;
    std::size_t samples = 0;
};

nlohmann::json to_json(const ResidualReport& r);

/// `count` evenly spaced s values on [lo, hi], endpoints included.
std::vector<double> s_samples(Interval range, int count);

/// Sample points at the family's default fiber location.
std::vector<Vec4> family_samples(const MetricFamily& m, Interval range, int count);

/// ||Hess f + Ric - lambda g||_inf in the adapted frame.
ResidualReport soliton_residual(const MetricFamily& m, const SolitonData& sol, const std::vector<Vec4>& samples);

/// Codazzi residual of Ric - (R/6) g from the closed-form connection.
ResidualReport codazzi_residual_closed(const MetricFamily& m, const std::vector<Vec4>& samples);

/// per_equation: "conservation" = max deviation of R + f'^2 - 2 lambda f
/// from its sample mean; "gradient" = max |R'/2 - lambda_1 f'|.
ResidualReport hamilton_check(const MetricFamily& m, const SolitonData& sol, const std::vector<double>& s);

}  // namespace solitonlab
