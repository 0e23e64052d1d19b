#pragma once

// Closed-form connection and curvature of the doubly-warped and warped3
// ansatze in the adapted orthonormal frame
//   doubly-warped: E1 = d_s, E2 = p^{-1} d_t, E3 = h^{-1} d_r, E4 = (h u)^{-1} d_theta
//   warped3:       E1 = d_s, E2 = h^{-1} d_r, E3 = (h u)^{-1} d_theta, E4 = (h u sin theta)^{-1} d_phi
//
// Connection coefficients are stored as christoffel(k, j, i) = < nabla_{E_k} E_j , E_i >.

#include <array>
#include <optional>

#include "solitonlab/ansatz.hpp"
#include "solitonlab/frame_tensor.hpp"

namespace solitonlab {

/// Connection data of the doubly-warped frame.
struct DWConnection {
    double zeta2 = 0.0;  ///< p'/p
    double zeta3 = 0.0;  ///< h'/h (= zeta4)
    double beta4 = 0.0;  ///< u'(r) / (h u(r))
};

DWConnection dw_connection(const Profile& p, const Profile& h, double k, double s, double r);

struct CurvatureBundle {
    Frame4 frame{FrameKind::orthonormal, {"E1", "E2", "E3", "E4"}};
    Sym2 metric = Sym2::identity();  ///< components of g in `frame`
    Rank3 christoffel;
    Riem4 riem;
    Sym2 ric;
    double scalar = 0.0;
    Riem4 weyl;
    /// C_{kij} = nabla_k R_ij - nabla_i R_kj + (R_i/6) g_kj - (R_k/6) g_ij
    Rank3 codazzi_residual;
};

/// Frame-diagonal Ricci eigenvalues (E1..E4 order) and scalar curvature.
struct DiagRicci {
    std::array<double, 4> eigen{};
    double scalar = 0.0;
};

/// Adapted-frame Ricci eigenvalues and their s-derivatives.
struct DiagRicciJet {
    std::array<double, 4> eigen{};
    std::array<double, 4> deriv{};
    double scalar = 0.0;
    double scalar_deriv = 0.0;
};

/// Tolerance on |p''/p - h''/h| (relative to max(1, |p''/p|, |h''/h|)).
inline constexpr double kDWConstraintTol = 1e-9;

/// Curvature table of the doubly-warped soliton ansatz. Requires
/// p''/p = h''/h at s; throws PreconditionError carrying the residual.
DiagRicci dw_ricci(const Profile& p, const Profile& h, double k, double s);

/// Full closed-form bundle at a point (s, t, r, theta). Same precondition.
CurvatureBundle dw_full_bundle(const Profile& p, const Profile& h, double k, const Vec4& point);

struct Warp3Ricci {
    double lambda1 = 0.0;
    double lambda_fiber = 0.0;
    double scalar = 0.0;
};

/// Warped product over a 3-dimensional fiber of constant curvature k.
Warp3Ricci warp3_ricci(const Profile& h, double k, double s);

CurvatureBundle warp3_full_bundle(const Profile& h, double k, const Vec4& point);

/// Ricci eigenvalues and derivatives for any family, without the
/// doubly-warped soliton constraint (general warped-product formulas).
DiagRicciJet family_ricci_jet(const MetricFamily& m, double s);

/// Bundle for any family at a point; unlike dw_full_bundle this does not
/// enforce p''/p = h''/h, so non-soliton families can be inspected.
CurvatureBundle family_bundle(const MetricFamily& m, const Vec4& point);

/// R_{ijkl} from orthonormal-frame connection coefficients and their
/// directional derivatives dgamma(m, k, j, i) = E_m( christoffel(k, j, i) ).
Riem4 frame_riemann(const Rank3& christoffel, const Riem4& dgamma);

/// Codazzi residual of Ric - (R/6) g in an orthonormal frame where Ricci is
/// diagonal and depends on s only (E1 = d_s).
Rank3 frame_codazzi_residual(const Rank3& christoffel, const DiagRicciJet& ricci);

}  // namespace solitonlab
