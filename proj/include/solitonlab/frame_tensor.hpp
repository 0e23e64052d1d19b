#pragma once

// Fixed-size tensor containers for a 4-dimensional frame.
//
// Index convention: frame/coordinate indices are 0-based in code; index 0 is
// E_1 = d/ds (the normalized gradient direction of the potential).
//
// Curvature sign convention:
//   R_{ijkl} = < nabla_i nabla_j E_k - nabla_j nabla_i E_k - nabla_[E_i,E_j] E_k , E_l >
// so R_{ijji} is the sectional curvature of the (i,j) plane and
//   Ric_{jl} = g^{ik} R_{ijlk}.

#include <array>
#include <cstddef>
#include <string>

namespace solitonlab {

inline constexpr int kDim = 4;

using Vec4 = std::array<double, kDim>;

enum class FrameKind { orthonormal, coordinate };

/// Names the four basis directions a tensor is expressed in.
class Frame4 {
public:
    Frame4(FrameKind kind, std::array<std::string, kDim> labels);

    FrameKind kind() const noexcept { return kind_; }
    const std::array<std::string, kDim>& labels() const noexcept { return labels_; }

private:
    FrameKind kind_;
    std::array<std::string, kDim> labels_;
};

/// Symmetric rank-2 tensor. Writes go through set(), which keeps both
/// triangles identical.
class Sym2 {
public:
    Sym2() { c_.fill(0.0); }

    static Sym2 identity();
    static Sym2 diag(double d0, double d1, double d2, double d3);

    double operator()(int i, int j) const { return c_[static_cast<std::size_t>(i * kDim + j)]; }
    void set(int i, int j, double v) {
        c_[static_cast<std::size_t>(i * kDim + j)] = v;
        c_[static_cast<std::size_t>(j * kDim + i)] = v;
    }
    void add(int i, int j, double v) { set(i, j, (*this)(i, j) + v); }

    double trace() const;
    double max_abs() const;
    const std::array<double, kDim * kDim>& data() const noexcept { return c_; }

private:
    std::array<double, kDim * kDim> c_;
};

Sym2 operator+(const Sym2& a, const Sym2& b);
Sym2 operator-(const Sym2& a, const Sym2& b);
Sym2 operator*(double s, const Sym2& a);

/// Rank-3 array, used for connection coefficients and Codazzi residuals.
class Rank3 {
public:
    Rank3() { c_.fill(0.0); }

    double& operator()(int i, int j, int k) { return c_[idx(i, j, k)]; }
    double operator()(int i, int j, int k) const { return c_[idx(i, j, k)]; }

    double max_abs() const;

private:
    static std::size_t idx(int i, int j, int k) {
        return static_cast<std::size_t>((i * kDim + j) * kDim + k);
    }
    std::array<double, kDim * kDim * kDim> c_;
};

/// Rank-4 curvature-type tensor indexed (i,j,k,l).
class Riem4 {
public:
    Riem4() { c_.fill(0.0); }

    double& operator()(int i, int j, int k, int l) { return c_[idx(i, j, k, l)]; }
    double operator()(int i, int j, int k, int l) const { return c_[idx(i, j, k, l)]; }

    double max_abs() const;

private:
    static std::size_t idx(int i, int j, int k, int l) {
        return static_cast<std::size_t>(((i * kDim + j) * kDim + k) * kDim + l);
    }
    std::array<double, kDim * kDim * kDim * kDim> c_;
};

/// Largest violation of the algebraic curvature symmetries: antisymmetry in
/// (i,j) and (k,l), pair symmetry, and the first Bianchi identity.
struct SymmetryDefect {
    double antisym_ij = 0.0;
    double antisym_kl = 0.0;
    double pair = 0.0;
    double bianchi = 0.0;

    double max() const;
};

SymmetryDefect symmetry_defect(const Riem4& r);

struct Mat4 {
    std::array<std::array<double, kDim>, kDim> m{};

    double& operator()(int i, int j) { return m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
    double operator()(int i, int j) const { return m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
};

/// Lower-triangular Cholesky factor of a positive-definite g. Throws
/// DomainError when g is not positive definite.
Mat4 cholesky(const Sym2& g);

Sym2 inverse(const Sym2& g);

struct EigenPair {
    double value = 0.0;
    Vec4 vector{};
};

/// Generalized symmetric eigenproblem t v = lambda g v. Returns g-orthonormal
/// eigenvectors, eigenvalues sorted descending.
std::array<EigenPair, kDim> sym_eigen(const Sym2& t, const Sym2& g);

/// Ric_{jl} = g^{ik} R_{ijlk}.
Sym2 ricci_contraction(const Riem4& riem, const Sym2& g);

double scalar_contraction(const Sym2& ric, const Sym2& g);

/// Four-dimensional Weyl tensor, written for the sign convention above
/// (space forms have R_{ijkl} = K (g_il g_jk - g_ik g_jl)).
Riem4 weyl_from_riemann(const Riem4& riem, const Sym2& ric, double scalar, const Sym2& g);

/// g-norm squared with every index raised by g^{-1}.
double tensor_norm(const Sym2& t, const Sym2& g);
double tensor_norm(const Rank3& t, const Sym2& g);
double tensor_norm(const Riem4& t, const Sym2& g);

/// Frame vectors of the Gram-Schmidt orthonormalization of the coordinate
/// basis: E_a = sum_mu e(a, mu) d_mu. For diagonal g this is d_mu / sqrt(g_mumu).
Mat4 orthonormal_vielbein(const Sym2& g);

Sym2 to_frame(const Sym2& t, const Mat4& e);
Rank3 to_frame(const Rank3& t, const Mat4& e);
Riem4 to_frame(const Riem4& t, const Mat4& e);

}  // namespace solitonlab
