#pragma once

// Ricci eigenvalue multiplicity signatures and the four-way type decision.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "solitonlab/ansatz.hpp"

namespace solitonlab {

struct EigenSignature {
    /// Partition of frame indices 1..4; each group sorted, groups ordered by
    /// their smallest index.
    std::vector<std::vector<int>> groups;
    double tol = 0.0;
    /// Mean eigenvalue of each group.
    std::vector<double> values;

    /// e.g. "{1},{2},{3,4}"
    std::string str() const;
};

/// Single-linkage grouping of the sorted values at tol * max(1, max |v|).
EigenSignature eigen_signature(const std::array<double, 4>& values, double tol);

struct ClassifierSample {
    double s = 0.0;
    /// Ricci eigenvalues in the adapted frame order E1..E4 (E1 along grad f).
    std::array<double, 4> eigen{};
    double fprime = 0.0;
    double scalar = 0.0;
    double weyl_sq = 0.0;
    /// Optional warping data for the warped sub-label.
    std::optional<double> h;
    std::optional<double> hprime;
};

enum class TypeLabel { Einstein_i, Product_ii, SingularSteady_iii, WarpedLCF_iv, Unknown };

std::string to_string(TypeLabel l);

struct Evidence {
    double residual = 0.0;
    double threshold = 0.0;
    /// true: the verdict needs residual <= threshold; false: it needs residual > threshold.
    bool expect_below = true;

    bool consistent() const { return expect_below ? residual <= threshold : residual > threshold; }
};

struct TypeVerdict {
    TypeLabel label = TypeLabel::Unknown;
    /// "gaussian" or "cylinder" for warped instances when h data identifies them.
    std::string sublabel;
    std::map<std::string, Evidence> evidence;
    std::vector<std::string> notes;
    std::vector<std::string> sample_signatures;
    std::string majority_signature;
    bool signature_uniform = true;
    double tol = 0.0;
};

nlohmann::json to_json(const TypeVerdict& v);

inline constexpr double kClosedFormClassifyTol = 1e-8;
inline constexpr double kOracleClassifyTol = 1e-4;
inline constexpr std::size_t kMinClassifySamples = 8;

struct ClassifyOptions {
    double tol = kClosedFormClassifyTol;
    /// When false, a signature change between samples is only noted and the
    /// majority signature is used.
    bool require_uniform_signature = true;
};

/// Throws InputError for fewer than 8 samples or a non-positive tol.
TypeVerdict classify(const std::vector<ClassifierSample>& samples, const ClassifyOptions& opt = {});

/// Closed-form samples of a family with the given potential.
std::vector<ClassifierSample> sample_family(const MetricFamily& m, const SolitonData& sol, Interval range,
                                            int count);

}  // namespace solitonlab
