#pragma once

// Reduced ODEs for the doubly-warped and warped soliton ansatze, their
// algebraic side conditions, and the algebra of the pairwise-distinct case.

#include <map>
#include <string>
#include <vector>

namespace solitonlab {

/// a = p'/p, b = h'/h, fp = f', h; parameters lambda and fiber curvature k.
struct ReducedState {
    double s = 0.0;
    double a = 0.0;
    double b = 0.0;
    double fp = 0.0;
    double h = 1.0;
    double lambda = 0.0;
    double k = 0.0;
};

struct ReducedDeriv {
    double a = 0.0;
    double b = 0.0;
    double fp = 0.0;
    double h = 0.0;
    /// |fp b - (b' + 2b^2 + ab - k/h^2 + lambda)|, redundant with the others.
    double diagnostic = 0.0;
};

ReducedDeriv dw_rhs(const ReducedState& st);

struct Trajectory {
    std::vector<ReducedState> states;
    bool truncated = false;
    std::string stop_reason;
};

inline constexpr double kBlowupBound = 1e8;
inline constexpr double kMinWarp = 1e-8;

/// Classical RK4 from st0.s to s_end (either direction) with n = ceil(L/step)
/// equal steps. Stops early, keeping the partial trajectory, on blowup.
Trajectory integrate(const ReducedState& st0, double s_end, double step);

struct IdentityResidual {
    double value = 0.0;
    bool applicable = true;
};

/// Side conditions of the reduced system, keyed by:
///   "fprime_relation"  (a-b) f' - b(a-b) - k/h^2
///   "b_riccati"        2(b' + b^2) + b^2 - k/h^2 + lambda
///   "lambda_balance"   (a-b)(2ab - b^2 + lambda) - (a+b) k/h^2
///   "aprime_relation"  -(a+b) a' - (a^3 + 2ab^2 + lambda b)
///   "branch_cubic"     b (lambda + 3ab)(lambda - 2a^2 + ab), only for k != 0
/// b' is taken from a' via b' = a' + a^2 - b^2. Identities that need a != b are
/// marked inapplicable when |a - b| <= 1e-12 max(1, |a|, |b|).
std::map<std::string, IdentityResidual> reduced_identity_residuals(const ReducedState& st, double aprime);

inline constexpr double kBranchTol = 1e-8;

/// Factors of the branch cubic whose running max along the trajectory stays
/// below tol: any of "b", "lambda+3ab", "lambda-2a^2+ab". Empty if none.
std::vector<std::string> detect_branch(const Trajectory& tr, double tol = kBranchTol);

struct Warp3Deriv {
    double hpp = 0.0;
    double fpp = 0.0;
};

/// h'' and f'' for g = ds^2 + h^2 g_k over a 3-dimensional fiber.
Warp3Deriv warp3_rhs(double h, double hp, double fp, double lambda, double k);

/// f' forced by three pairwise-distinct zeta values. Throws DomainError when
/// a = b = c.
double distinct_fprime(double a, double b, double c);

/// a^2 + b^2 + c^2 - ab - bc - ac
double distinct_p(double a, double b, double c);

/// Symmetric numerator of distinct_fprime.
double distinct_numerator(double a, double b, double c);

struct DistinctRelations {
    double alpha_sq = 0.0;
    double beta_over_alpha = 0.0;
    double gamma_over_alpha = 0.0;
};

/// Throws DomainError unless a, b, c are pairwise distinct.
DistinctRelations distinct_frame_relations(double a, double b, double c);

/// Difference of the two expressions for 2 alpha alpha'; equals
/// -(a-b)^4 / (2P) * distinct_fprime(a, b, c).
double exclusion_residual(double a, double b, double c);

}  // namespace solitonlab
