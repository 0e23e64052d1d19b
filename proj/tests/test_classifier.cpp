#include <doctest.h>

#include <cmath>
#include <random>

#include "solitonlab/classifier.hpp"
#include "solitonlab/errors.hpp"

using namespace solitonlab;

namespace {

struct Case {
    const char* family;
    TypeLabel label;
    const char* sublabel;
};

const Case kCases[] = {
    {"singular-steady", TypeLabel::SingularSteady_iii, ""},
    {"product", TypeLabel::Product_ii, ""},
    {"gaussian", TypeLabel::WarpedLCF_iv, "gaussian"},
    {"cylinder", TypeLabel::WarpedLCF_iv, "cylinder"},
    {"einstein-sphere", TypeLabel::Einstein_i, ""},
};

std::vector<ClassifierSample> canonical_samples(const char* name) {
    MetricFamily m = MetricFamily::by_name(name);
    return sample_family(m, canonical_soliton_for(m), m.domain(), 16);
}

double eigen_scale(const ClassifierSample& x) {
    double sc = 1.0;
    for (double e : x.eigen) sc = std::max(sc, std::abs(e));
    return sc;
}

}  // namespace

TEST_CASE("eigen signatures") {
    CHECK(eigen_signature({1.0, 2.0, 3.0, 4.0}, 1e-8).str() == "{1},{2},{3},{4}");
    CHECK(eigen_signature({1.0, 1.0, 1.0, 1.0}, 1e-8).str() == "{1,2,3,4}");
    CHECK(eigen_signature({0.0, 0.0, -1.0, -1.0}, 1e-8).str() == "{1,2},{3,4}");
    CHECK(eigen_signature({2.0 / 3, -2.0 / 9, -4.0 / 9, -4.0 / 9}, 1e-8).str() == "{1},{2},{3,4}");
    CHECK(eigen_signature({0.0, 2.0, 0.0, 2.0}, 1e-8).str() == "{1,3},{2,4}");
    // single linkage chains values closer than tol
    CHECK(eigen_signature({0.0, 0.6e-8, 1.2e-8, 5.0}, 1e-8).str() == "{1,2,3},{4}");
    auto sig = eigen_signature({3.0, 3.0, 1.0, 1.0}, 1e-8);
    REQUIRE(sig.values.size() == 2);
    CHECK(sig.values[0] == 3.0);
    CHECK(sig.values[1] == 1.0);
    CHECK_THROWS_AS(eigen_signature({1.0, 2.0, 3.0, 4.0}, 0.0), InputError);
}

TEST_CASE("signatures are scale equivariant") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        std::array<double, 4> v{u(rng), u(rng), u(rng), u(rng)};
        if (i % 3 == 0) v[2] = v[1];
        const std::string base = eigen_signature(v, 1e-8).str();
        for (double c : {4.0, 1e3, 1e6}) {
            std::array<double, 4> w{};
            for (std::size_t k = 0; k < 4; ++k) w[k] = c * v[k];
            CHECK(eigen_signature(w, 1e-8).str() == base);
        }
    }
}

TEST_CASE("canonical families are labeled") {
    for (const Case& c : kCases) {
        CAPTURE(c.family);
        TypeVerdict v = classify(canonical_samples(c.family));
        CHECK(v.label == c.label);
        CHECK(v.sublabel == c.sublabel);
        CHECK(v.signature_uniform);
        for (const auto& [name, e] : v.evidence) {
            CAPTURE(name);
            CHECK(e.consistent());
        }
    }
}

TEST_CASE("labels survive noise below tol/10") {
    for (const Case& c : kCases) {
        const auto xs = canonical_samples(c.family);
        for (unsigned seed = 0; seed < 20; ++seed) {
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            auto ys = xs;
            for (auto& y : ys) {
                const double sc = eigen_scale(y);
                for (double& e : y.eigen) e += 0.1 * kClosedFormClassifyTol * sc * u(rng);
            }
            CHECK(classify(ys).label == c.label);
        }
    }
}

TEST_CASE("noise above 10 tol yields Unknown") {
    for (const Case& c : kCases) {
        const auto xs = canonical_samples(c.family);
        for (unsigned seed = 0; seed < 20; ++seed) {
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            auto ys = xs;
            for (auto& y : ys) {
                const double sc = eigen_scale(y);
                for (std::size_t i = 0; i < 4; ++i) {
                    const double sign = u(rng) < 0.0 ? -1.0 : 1.0;
                    y.eigen[i] += sign * 10.0 * kClosedFormClassifyTol * sc * static_cast<double>(i + 1) *
                                  (1.0 + 0.1 * std::abs(u(rng)));
                }
            }
            CHECK(classify(ys).label == TypeLabel::Unknown);
        }
    }
}

TEST_CASE("pairwise distinct lambda_2..4 with f' != 0 is excluded") {
    std::vector<ClassifierSample> xs;
    for (int i = 0; i < 8; ++i) {
        ClassifierSample x;
        x.s = 1.0 + 0.1 * i;
        x.eigen = {1.0, 0.5, -0.25, -1.0};
        x.scalar = 0.25;
        x.fprime = 0.7;
        x.weyl_sq = 0.3;
        xs.push_back(x);
    }
    TypeVerdict v = classify(xs);
    CHECK(v.label == TypeLabel::Unknown);
    REQUIRE_FALSE(v.notes.empty());
    CHECK(v.notes.back().find("pairwise distinct") != std::string::npos);
}

TEST_CASE("signature changes are reported") {
    auto xs = canonical_samples("product");
    xs[3].eigen[1] += 0.5;
    TypeVerdict strict = classify(xs);
    CHECK(strict.label == TypeLabel::Unknown);
    CHECK_FALSE(strict.signature_uniform);
    ClassifyOptions loose;
    loose.require_uniform_signature = false;
    TypeVerdict v = classify(xs, loose);
    CHECK(v.majority_signature == "{1,2},{3,4}");
    CHECK_FALSE(v.signature_uniform);
}

TEST_CASE("classify input validation") {
    auto xs = canonical_samples("cylinder");
    xs.resize(7);
    CHECK_THROWS_AS(classify(xs), InputError);
    auto ys = canonical_samples("cylinder");
    ClassifyOptions bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(classify(ys, bad), InputError);
    for (auto& y : ys) y.s = 1.0;
    CHECK_THROWS_AS(classify(ys), InputError);
}

TEST_CASE("verdict JSON") {
    nlohmann::json j = to_json(classify(canonical_samples("gaussian")));
    CHECK(j.at("label") == "WarpedLCF_iv");
    CHECK(j.at("sublabel") == "gaussian");
    CHECK(j.at("evidence").at("weyl_vanishes").at("consistent") == true);
}
