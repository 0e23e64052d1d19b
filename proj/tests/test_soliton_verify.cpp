#include <doctest.h>

#include <cmath>
#include <random>

#include "solitonlab/curvature.hpp"
#include "solitonlab/errors.hpp"
#include "solitonlab/fd_oracle.hpp"
#include "solitonlab/soliton_verify.hpp"

using namespace solitonlab;

namespace {

std::vector<MetricFamily> canonical_families() {
    return {MetricFamily::singular_steady(), MetricFamily::product_R2xN(-1.0), MetricFamily::gaussian(1.0),
            MetricFamily::cylinder(2.0), MetricFamily::einstein_sphere()};
}

SolitonData shifted(const SolitonData& sol, double c) {
    Profile f = sol.f;
    return SolitonData{Profile::custom([f, c](double s) {
                           Jet j = f(s);
                           j.v += c;
                           return j;
                       }),
                       sol.lambda};
}

}  // namespace

TEST_CASE("sample helpers") {
    auto s = s_samples({0.5, 2.0}, 4);
    REQUIRE(s.size() == 4);
    CHECK(s.front() == 0.5);
    CHECK(s.back() == 2.0);
    CHECK(s[1] == doctest::Approx(1.0));
    CHECK(s_samples({0.5, 2.0}, 1).size() == 1);
    CHECK_THROWS_AS(s_samples({0.5, 2.0}, 0), InputError);
    CHECK_THROWS_AS(s_samples({2.0, 0.5}, 4), InputError);
    auto pts = family_samples(MetricFamily::gaussian(1.0), {0.5, 2.0}, 8);
    CHECK(pts.size() == 8);
    CHECK(pts[7][0] == 2.0);
}

TEST_CASE("canonical families solve the soliton equation") {
    for (const MetricFamily& m : canonical_families()) {
        CAPTURE(m.name());
        SolitonData sol = canonical_soliton_for(m);
        auto pts = family_samples(m, m.domain(), 64);
        ResidualReport r = soliton_residual(m, sol, pts);
        CHECK(r.samples == 64);
        CHECK(r.max_abs <= kSolitonTol);
        CHECK(r.per_equation.count("soliton_11") == 1);
        CHECK(r.per_equation.count("soliton_offdiag") == 1);
        CHECK(codazzi_residual_closed(m, pts).max_abs <= kCodazziTol);
        ResidualReport h = hamilton_check(m, sol, s_samples(m.domain(), 64));
        CHECK(h.per_equation.at("conservation") <= kHamiltonTol);
        CHECK(h.per_equation.at("gradient") <= kHamiltonTol);
    }
}

TEST_CASE("singular steady conserved quantity is zero") {
    MetricFamily m = MetricFamily::singular_steady();
    ResidualReport h = hamilton_check(m, canonical_soliton_for(m), s_samples({0.5, 2.0}, 64));
    CHECK(std::abs(h.info.at("conserved_mean")) <= 1e-12);
}

TEST_CASE("perturbing lambda shows up as exactly that residual") {
    for (const MetricFamily& m : canonical_families()) {
        SolitonData sol = canonical_soliton_for(m);
        auto pts = family_samples(m, m.domain(), 64);
        for (double d : {1.0, -0.25, 1e-3}) {
            SolitonData off{sol.f, sol.lambda + d};
            ResidualReport r = soliton_residual(m, off, pts);
            CHECK(std::abs(r.max_abs - std::abs(d)) <= 1e-14);
        }
    }
}

TEST_CASE("residuals are invariant under additive constants in f") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    MetricFamily m = MetricFamily::product_R2xN(-1.0);
    SolitonData sol = canonical_soliton_for(m);
    auto pts = family_samples(m, m.domain(), 16);
    auto ss = s_samples(m.domain(), 16);
    const ResidualReport base = soliton_residual(m, sol, pts);
    const ResidualReport hbase = hamilton_check(m, sol, ss);
    for (int i = 0; i < 100; ++i) {
        SolitonData sh = shifted(sol, u(rng));
        CHECK(soliton_residual(m, sh, pts).max_abs == base.max_abs);
        CHECK(std::abs(hamilton_check(m, sh, ss).per_equation.at("conservation") -
                       hbase.per_equation.at("conservation")) <= 1e-12);
    }
}

TEST_CASE("a wrong potential is detected") {
    MetricFamily m = MetricFamily::singular_steady();
    SolitonData bad{Profile::log(0.5), 0.0};
    auto pts = family_samples(m, m.domain(), 16);
    CHECK(soliton_residual(m, bad, pts).max_abs > 1e-2);
    CHECK(hamilton_check(m, bad, s_samples(m.domain(), 16)).max_abs > 1e-3);
    CHECK_THROWS_AS(hamilton_check(m, bad, {1.0, 1.5}), InputError);
}

TEST_CASE("broken product fails the harmonic Weyl condition") {
    MetricFamily m = MetricFamily::broken_product();
    auto pts = family_samples(m, m.domain(), 64);
    ResidualReport c = codazzi_residual_closed(m, pts);
    CHECK(c.max_abs > kBrokenCodazziThreshold);
    CHECK(c.per_equation.count("codazzi_all") == 1);
}

TEST_CASE("closed Codazzi residual agrees with the finite-difference one") {
    for (const MetricFamily& m : {MetricFamily::broken_product(), MetricFamily::singular_steady()}) {
        const double h = 1.5 / 128.0;
        const Vec4 x = m.default_point(1.0);
        MetricGrid grid = MetricGrid::patch(m, x, {h, h, h, h}, 2 * kStencilHalfWidth);
        CurvatureBundle fd = fd_curvature(grid, grid.center());
        Rank3 fd_frame = to_frame(fd.codazzi_residual, orthonormal_vielbein(fd.metric));
        CurvatureBundle closed = family_bundle(m, x);
        double diff = 0.0;
        for (int i = 0; i < kDim; ++i)
            for (int j = 0; j < kDim; ++j)
                for (int k = 0; k < kDim; ++k)
                    diff = std::max(diff, std::abs(fd_frame(i, j, k) - closed.codazzi_residual(i, j, k)));
        CHECK(diff <= 1e-5);
    }
}

TEST_CASE("residual report JSON") {
    MetricFamily m = MetricFamily::cylinder(2.0);
    ResidualReport r = soliton_residual(m, canonical_soliton_for(m), family_samples(m, m.domain(), 8));
    nlohmann::json j = to_json(r);
    CHECK(j.at("samples") == 8);
    CHECK(j.at("per_equation").contains("soliton_22"));
    CHECK(j.at("max_abs").get<double>() == r.max_abs);
}
