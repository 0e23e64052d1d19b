#include "solitonlab/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "solitonlab/errors.hpp"

namespace solitonlab {

namespace {

struct DWScalars {
    double a, b, A, B, A3, B3, q;
};

DWScalars dw_scalars(const Jet& p, const Jet& h, double k) {
    return {p.d1 / p.v, h.d1 / h.v, p.d2 / p.v, h.d2 / h.v, p.d3 / p.v, h.d3 / h.v, k / (h.v * h.v)};
}

double dw_constraint_residual(const Jet& p, const Jet& h) { return std::abs(p.d2 / p.v - h.d2 / h.v); }

void require_dw_constraint(const Jet& p, const Jet& h, double s) {
    const double res = dw_constraint_residual(p, h);
    const double scale = std::max({1.0, std::abs(p.d2 / p.v), std::abs(h.d2 / h.v)});
    if (res > kDWConstraintTol * scale) {
        throw PreconditionError("p''/p != h''/h at s = " + std::to_string(s) +
                                    " (residual " + std::to_string(res) + ")",
                                res);
    }
}

DiagRicciJet dw_ricci_jet(const Jet& p, const Jet& h, double k) {
    const auto [a, b, A, B, A3, B3, q] = dw_scalars(p, h, k);
    const double Ap = A3 - a * A;
    const double Bp = B3 - b * B;
    const double ap = A - a * a;
    const double bp = B - b * b;
    const double qp = -2.0 * b * q;
    const double abp = ap * b + a * bp;

    DiagRicciJet r;
    r.eigen[0] = -A - 2.0 * B;
    r.eigen[1] = -A - 2.0 * a * b;
    r.eigen[2] = r.eigen[3] = -B - a * b - b * b + q;
    r.deriv[0] = -Ap - 2.0 * Bp;
    r.deriv[1] = -Ap - 2.0 * abp;
    r.deriv[2] = r.deriv[3] = -Bp - abp - 2.0 * b * bp + qp;
    r.scalar = r.eigen[0] + r.eigen[1] + r.eigen[2] + r.eigen[3];
    r.scalar_deriv = r.deriv[0] + r.deriv[1] + r.deriv[2] + r.deriv[3];
    return r;
}

DiagRicciJet warp3_ricci_jet(const Jet& h, double k) {
    const double b = h.d1 / h.v;
    const double B = h.d2 / h.v;
    const double Bp = h.d3 / h.v - b * B;
    const double bp = B - b * b;
    const double q = k / (h.v * h.v);
    const double qp = -2.0 * b * q;

    DiagRicciJet r;
    r.eigen[0] = -3.0 * B;
    r.eigen[1] = r.eigen[2] = r.eigen[3] = -B - 2.0 * b * b + 2.0 * q;
    r.deriv[0] = -3.0 * Bp;
    r.deriv[1] = r.deriv[2] = r.deriv[3] = -Bp - 4.0 * b * bp + 2.0 * qp;
    r.scalar = r.eigen[0] + 3.0 * r.eigen[1];
    r.scalar_deriv = r.deriv[0] + 3.0 * r.deriv[1];
    return r;
}

// Sets christoffel(k, j, i) = v and the metric-compatible partner (k, i, j) = -v.
void set_pair(Rank3& g, int k, int j, int i, double v) {
    g(k, j, i) = v;
    g(k, i, j) = -v;
}

void set_dpair(Riem4& d, int m, int k, int j, int i, double v) {
    d(m, k, j, i) = v;
    d(m, k, i, j) = -v;
}

CurvatureBundle assemble(const Rank3& gamma, const Riem4& dgamma, const DiagRicciJet& jet) {
    CurvatureBundle out;
    out.christoffel = gamma;
    out.riem = frame_riemann(gamma, dgamma);
    out.ric = ricci_contraction(out.riem, out.metric);
    out.scalar = out.ric.trace();
    out.weyl = weyl_from_riemann(out.riem, out.ric, out.scalar, out.metric);
    out.codazzi_residual = frame_codazzi_residual(gamma, jet);
    return out;
}

CurvatureBundle dw_bundle_unchecked(const Profile& p, const Profile& h, double k, const Vec4& x) {
    const Jet P = p(x[0]);
    const Jet H = h(x[0]);
    const Jet U = FiberProfile(k).eval(x[2]);
    const double a = P.d1 / P.v;
    const double b = H.d1 / H.v;
    const double beta = U.d1 / (H.v * U.v);

    Rank3 gamma;
    set_pair(gamma, 1, 0, 1, a);
    set_pair(gamma, 2, 0, 2, b);
    set_pair(gamma, 3, 0, 3, b);
    set_pair(gamma, 3, 2, 3, beta);

    const double da = P.d2 / P.v - a * a;
    const double db = H.d2 / H.v - b * b;
    const double dbeta_s = -b * beta;
    const double dbeta_r = (U.d2 / U.v - (U.d1 / U.v) * (U.d1 / U.v)) / (H.v * H.v);

    Riem4 dgamma;
    set_dpair(dgamma, 0, 1, 0, 1, da);
    set_dpair(dgamma, 0, 2, 0, 2, db);
    set_dpair(dgamma, 0, 3, 0, 3, db);
    set_dpair(dgamma, 0, 3, 2, 3, dbeta_s);
    set_dpair(dgamma, 2, 3, 2, 3, dbeta_r);

    return assemble(gamma, dgamma, dw_ricci_jet(P, H, k));
}

CurvatureBundle warp3_bundle_unchecked(const Profile& h, double k, const Vec4& x) {
    const Jet H = h(x[0]);
    const Jet U = FiberProfile(k).eval(x[1]);
    const double theta = x[2];
    const double b = H.d1 / H.v;
    const double hu = H.v * U.v;
    const double beta = U.d1 / hu;
    const double gam = std::cos(theta) / (std::sin(theta) * hu);

    Rank3 gamma;
    for (int i = 1; i < kDim; ++i) set_pair(gamma, i, 0, i, b);
    set_pair(gamma, 2, 1, 2, beta);
    set_pair(gamma, 3, 1, 3, beta);
    set_pair(gamma, 3, 2, 3, gam);

    const double db = H.d2 / H.v - b * b;
    const double dbeta_r = (U.d2 / U.v - (U.d1 / U.v) * (U.d1 / U.v)) / (H.v * H.v);
    const double sn = std::sin(theta);

    Riem4 dgamma;
    for (int i = 1; i < kDim; ++i) set_dpair(dgamma, 0, i, 0, i, db);
    for (int i : {2, 3}) {
        set_dpair(dgamma, 0, i, 1, i, -b * beta);
        set_dpair(dgamma, 1, i, 1, i, dbeta_r);
    }
    set_dpair(dgamma, 0, 3, 2, 3, -b * gam);
    set_dpair(dgamma, 1, 3, 2, 3, -beta * gam);
    set_dpair(dgamma, 2, 3, 2, 3, -1.0 / (sn * sn * hu * hu));

    return assemble(gamma, dgamma, warp3_ricci_jet(H, k));
}

}  // namespace

DWConnection dw_connection(const Profile& p, const Profile& h, double k, double s, double r) {
    const Jet P = p(s);
    const Jet H = h(s);
    const Jet U = FiberProfile(k).eval(r);
    return {P.d1 / P.v, H.d1 / H.v, U.d1 / (H.v * U.v)};
}

DiagRicci dw_ricci(const Profile& p, const Profile& h, double k, double s) {
    const Jet P = p(s);
    const Jet H = h(s);
    if (!(P.v > 0.0) || !(H.v > 0.0)) throw DomainError("p and h must be positive");
    require_dw_constraint(P, H, s);

    const auto [a, b, A, B, A3, B3, q] = dw_scalars(P, H, k);
    (void)A;
    (void)A3;
    (void)B3;
    DiagRicci r;
    r.eigen[0] = -3.0 * B;
    r.eigen[1] = -B - 2.0 * a * b;
    r.eigen[2] = r.eigen[3] = -B - a * b - b * b + q;
    r.scalar = -6.0 * B - 4.0 * a * b - 2.0 * b * b + 2.0 * q;
    return r;
}

CurvatureBundle dw_full_bundle(const Profile& p, const Profile& h, double k, const Vec4& point) {
    const Jet P = p(point[0]);
    const Jet H = h(point[0]);
    if (!(P.v > 0.0) || !(H.v > 0.0)) throw DomainError("p and h must be positive");
    require_dw_constraint(P, H, point[0]);
    return dw_bundle_unchecked(p, h, k, point);
}

Warp3Ricci warp3_ricci(const Profile& h, double k, double s) {
    const Jet H = h(s);
    if (!(H.v > 0.0)) throw DomainError("h must be positive");
    const double b = H.d1 / H.v;
    const double B = H.d2 / H.v;
    Warp3Ricci r;
    r.lambda1 = -3.0 * B;
    r.lambda_fiber = -B - 2.0 * b * b + 2.0 * k / (H.v * H.v);
    r.scalar = r.lambda1 + 3.0 * r.lambda_fiber;
    return r;
}

CurvatureBundle warp3_full_bundle(const Profile& h, double k, const Vec4& point) {
    if (!(h(point[0]).v > 0.0)) throw DomainError("h must be positive");
    return warp3_bundle_unchecked(h, k, point);
}

DiagRicciJet family_ricci_jet(const MetricFamily& m, double s) {
    m.check_s(s);
    if (m.is_doubly_warped()) return dw_ricci_jet(m.p()(s), m.h()(s), m.k());
    return warp3_ricci_jet(m.h()(s), m.k());
}

CurvatureBundle family_bundle(const MetricFamily& m, const Vec4& point) {
    m.check_point(point);
    if (m.is_doubly_warped()) return dw_bundle_unchecked(m.p(), m.h(), m.k(), point);
    return warp3_bundle_unchecked(m.h(), m.k(), point);
}

Riem4 frame_riemann(const Rank3& gam, const Riem4& dg) {
    Riem4 r;
    for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j)
            for (int k = 0; k < kDim; ++k)
                for (int l = 0; l < kDim; ++l) {
                    double v = dg(i, j, k, l) - dg(j, i, k, l);
                    for (int m = 0; m < kDim; ++m) {
                        v += gam(j, k, m) * gam(i, m, l) - gam(i, k, m) * gam(j, m, l) -
                             (gam(i, j, m) - gam(j, i, m)) * gam(m, k, l);
                    }
                    r(i, j, k, l) = v;
                }
    return r;
}

Rank3 frame_codazzi_residual(const Rank3& gam, const DiagRicciJet& ric) {
    // (nabla_k Ric)_{ij} = delta_ij E_k(lambda_i) - Gamma(k,i,j) lambda_j - Gamma(k,j,i) lambda_i
    auto nabla_ric = [&](int k, int i, int j) {
        double v = -gam(k, i, j) * ric.eigen[static_cast<std::size_t>(j)] -
                   gam(k, j, i) * ric.eigen[static_cast<std::size_t>(i)];
        if (i == j && k == 0) v += ric.deriv[static_cast<std::size_t>(i)];
        return v;
    };
    auto dR = [&](int k) { return k == 0 ? ric.scalar_deriv : 0.0; };

    Rank3 c;
    for (int k = 0; k < kDim; ++k)
        for (int i = 0; i < kDim; ++i)
            for (int j = 0; j < kDim; ++j) {
                double v = nabla_ric(k, i, j) - nabla_ric(i, k, j);
                if (k == j) v += dR(i) / 6.0;
                if (i == j) v -= dR(k) / 6.0;
                c(k, i, j) = v;
            }
    return c;
}

}  // namespace solitonlab
