#include "solitonlab/frame_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "solitonlab/errors.hpp"

namespace solitonlab {

Frame4::Frame4(FrameKind kind, std::array<std::string, kDim> labels)
    : kind_(kind), labels_(std::move(labels)) {
    const std::set<std::string> unique(labels_.begin(), labels_.end());
    if (unique.size() != labels_.size()) {
        throw InputError("Frame4 labels must be distinct");
    }
}

Sym2 Sym2::identity() { return diag(1.0, 1.0, 1.0, 1.0); }

Sym2 Sym2::diag(double d0, double d1, double d2, double d3) {
    Sym2 s;
    s.set(0, 0, d0);
    s.set(1, 1, d1);
    s.set(2, 2, d2);
    s.set(3, 3, d3);
    return s;
}

double Sym2::trace() const {
    double t = 0.0;
    for (int i = 0; i < kDim; ++i) t += (*this)(i, i);
    return t;
}

double Sym2::max_abs() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
}

Sym2 operator+(const Sym2& a, const Sym2& b) {
    Sym2 r;
    for (int i = 0; i < kDim; ++i)
        for (int j = i; j < kDim; ++j) r.set(i, j, a(i, j) + b(i, j));
    return r;
}

Sym2 operator-(const Sym2& a, const Sym2& b) {
    Sym2 r;
    for (int i = 0; i < kDim; ++i)
        for (int j = i; j < kDim; ++j) r.set(i, j, a(i, j) - b(i, j));
    return r;
}

Sym2 operator*(double s, const Sym2& a) {
    Sym2 r;
    for (int i = 0; i < kDim; ++i)
        for (int j = i; j < kDim; ++j) r.set(i, j, s * a(i, j));
    return r;
}

double Rank3::max_abs() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
}

double Riem4::max_abs() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
}

double SymmetryDefect::max() const { return std::max({antisym_ij, antisym_kl, pair, bianchi}); }

SymmetryDefect symmetry_defect(const Riem4& r) {
    SymmetryDefect d;
    for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j)
            for (int k = 0; k < kDim; ++k)
                for (int l = 0; l < kDim; ++l) {
                    d.antisym_ij = std::max(d.antisym_ij, std::abs(r(i, j, k, l) + r(j, i, k, l)));
                    d.antisym_kl = std::max(d.antisym_kl, std::abs(r(i, j, k, l) + r(i, j, l, k)));
                    d.pair = std::max(d.pair, std::abs(r(i, j, k, l) - r(k, l, i, j)));
                    d.bianchi = std::max(
                        d.bianchi, std::abs(r(i, j, k, l) + r(j, k, i, l) + r(k, i, j, l)));
                }
    return d;
}

Mat4 cholesky(const Sym2& g) {
    Mat4 l;
    for (int j = 0; j < kDim; ++j) {
        double diag = g(j, j);
        for (int k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (!(diag > 0.0) || !std::isfinite(diag)) {
            throw DomainError("metric is not positive definite");
        }
        l(j, j) = std::sqrt(diag);
        for (int i = j + 1; i < kDim; ++i) {
            double v = g(i, j);
            for (int k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
            l(i, j) = v / l(j, j);
        }
    }
    return l;
}

namespace {

// Inverse of a lower-triangular matrix.
Mat4 invert_lower(const Mat4& l) {
    Mat4 inv;
    for (int i = 0; i < kDim; ++i) {
        inv(i, i) = 1.0 / l(i, i);
        for (int j = 0; j < i; ++j) {
            double s = 0.0;
            for (int k = j; k < i; ++k) s += l(i, k) * inv(k, j);
            inv(i, j) = -s / l(i, i);
        }
    }
    return inv;
}

}  // namespace

Sym2 inverse(const Sym2& g) {
    const Mat4 linv = invert_lower(cholesky(g));
    // g^{-1} = L^{-T} L^{-1}
    Sym2 r;
    for (int i = 0; i < kDim; ++i)
        for (int j = i; j < kDim; ++j) {
            double s = 0.0;
            for (int k = std::max(i, j); k < kDim; ++k) s += linv(k, i) * linv(k, j);
            r.set(i, j, s);
        }
    return r;
}

std::array<EigenPair, kDim> sym_eigen(const Sym2& t, const Sym2& g) {
    const Mat4 linv = invert_lower(cholesky(g));

    // c = L^{-1} t L^{-T}
    Mat4 c;
    for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j) {
            double s = 0.0;
            for (int a = 0; a <= i; ++a)
                for (int b = 0; b <= j; ++b) s += linv(i, a) * t(a, b) * linv(j, b);
            c(i, j) = s;
        }
    for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < i; ++j) c(i, j) = c(j, i) = 0.5 * (c(i, j) + c(j, i));

    Mat4 v;
    for (int i = 0; i < kDim; ++i) v(i, i) = 1.0;

    double frob = 0.0;
    for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j) frob += c(i, j) * c(i, j);
    frob = std::sqrt(frob);

    // Cyclic Jacobi sweeps.
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < kDim; ++p)
            for (int q = p + 1; q < kDim; ++q) off += c(p, q) * c(p, q);
        off = std::sqrt(2.0 * off);
        if (off <= 1e-14 * frob || off == 0.0) break;

        for (int p = 0; p < kDim - 1; ++p) {
            for (int q = p + 1; q < kDim; ++q) {
                const double apq = c(p, q);
                if (apq == 0.0) continue;
                const double theta = (c(q, q) - c(p, p)) / (2.0 * apq);
                const double tn = std::copysign(1.0, theta) /
                                  (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cs = 1.0 / std::sqrt(tn * tn + 1.0);
                const double sn = tn * cs;
                for (int k = 0; k < kDim; ++k) {
                    const double ckp = c(k, p);
                    const double ckq = c(k, q);
                    c(k, p) = cs * ckp - sn * ckq;
                    c(k, q) = sn * ckp + cs * ckq;
                }
                for (int k = 0; k < kDim; ++k) {
                    const double cpk = c(p, k);
                    const double cqk = c(q, k);
                    c(p, k) = cs * cpk - sn * cqk;
                    c(q, k) = sn * cpk + cs * cqk;
                }
                for (int k = 0; k < kDim; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = cs * vkp - sn * vkq;
                    v(k, q) = sn * vkp + cs * vkq;
                }
            }
        }
    }

    std::array<EigenPair, kDim> out;
    for (int n = 0; n < kDim; ++n) {
        auto& pair = out[static_cast<std::size_t>(n)];
        pair.value = c(n, n);
        // v = L^{-T} y
        for (int i = 0; i < kDim; ++i) {
            double s = 0.0;
            for (int k = i; k < kDim; ++k) s += linv(k, i) * v(k, n);
            pair.vector[static_cast<std::size_t>(i)] = s;
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const EigenPair& a, const EigenPair& b) { return a.value > b.value; });
    return out;
}

Sym2 ricci_contraction(const Riem4& riem, const Sym2& g) {
    const Sym2 ginv = inverse(g);
    Sym2 ric;
    for (int j = 0; j < kDim; ++j)
        for (int l = j; l < kDim; ++l) {
            double s = 0.0;
            for (int i = 0; i < kDim; ++i)
                for (int k = 0; k < kDim; ++k) s += ginv(i, k) * riem(i, j, l, k);
            ric.set(j, l, s);
        }
    return ric;
}

double scalar_contraction(const Sym2& ric, const Sym2& g) {
    const Sym2 ginv = inverse(g);
    double s = 0.0;
    for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j) s += ginv(i, j) * ric(i, j);
    return s;
}

Riem4 weyl_from_riemann(const Riem4& riem, const Sym2& ric, double scalar, const Sym2& g) {
    Riem4 w;
    const double r6 = scalar / 6.0;
    for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j)
            for (int k = 0; k < kDim; ++k)
                for (int l = 0; l < kDim; ++l) {
                    const double kn = g(i, k) * ric(j, l) - g(i, l) * ric(j, k) +
                                      g(j, l) * ric(i, k) - g(j, k) * ric(i, l);
                    const double gg = g(i, k) * g(j, l) - g(i, l) * g(j, k);
                    w(i, j, k, l) = riem(i, j, k, l) + 0.5 * kn - r6 * gg;
                }
    return w;
}

double tensor_norm(const Sym2& t, const Sym2& g) {
    const Sym2 gi = inverse(g);
    double s = 0.0;
    for (int a = 0; a < kDim; ++a)
        for (int b = 0; b < kDim; ++b)
            for (int c = 0; c < kDim; ++c)
                for (int d = 0; d < kDim; ++d) s += t(a, b) * t(c, d) * gi(a, c) * gi(b, d);
    return std::max(s, 0.0);
}

double tensor_norm(const Rank3& t, const Sym2& g) {
    const Sym2 gi = inverse(g);
    Rank3 up = t;
    for (int slot = 0; slot < 3; ++slot) {
        Rank3 next;
        for (int i = 0; i < kDim; ++i)
            for (int j = 0; j < kDim; ++j)
                for (int k = 0; k < kDim; ++k) {
                    double s = 0.0;
                    for (int m = 0; m < kDim; ++m) {
                        if (slot == 0) s += gi(i, m) * up(m, j, k);
                        if (slot == 1) s += gi(j, m) * up(i, m, k);
                        if (slot == 2) s += gi(k, m) * up(i, j, m);
                    }
                    next(i, j, k) = s;
                }
        up = next;
    }
    double s = 0.0;
    for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j)
            for (int k = 0; k < kDim; ++k) s += t(i, j, k) * up(i, j, k);
    return std::max(s, 0.0);
}

double tensor_norm(const Riem4& t, const Sym2& g) {
    const Sym2 gi = inverse(g);
    Riem4 up = t;
    for (int slot = 0; slot < 4; ++slot) {
        Riem4 next;
        for (int i = 0; i < kDim; ++i)
            for (int j = 0; j < kDim; ++j)
                for (int k = 0; k < kDim; ++k)
                    for (int l = 0; l < kDim; ++l) {
                        double s = 0.0;
                        for (int m = 0; m < kDim; ++m) {
                            switch (slot) {
                                case 0: s += gi(i, m) * up(m, j, k, l); break;
                                case 1: s += gi(j, m) * up(i, m, k, l); break;
                                case 2: s += gi(k, m) * up(i, j, m, l); break;
                                default: s += gi(l, m) * up(i, j, k, m); break;
                            }
                        }
                        next(i, j, k, l) = s;
                    }
        up = next;
    }
    double s = 0.0;
    for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j)
            for (int k = 0; k < kDim; ++k)
                for (int l = 0; l < kDim; ++l) s += t(i, j, k, l) * up(i, j, k, l);
    return std::max(s, 0.0);
}

Mat4 orthonormal_vielbein(const Sym2& g) { return invert_lower(cholesky(g)); }

Sym2 to_frame(const Sym2& t, const Mat4& e) {
    Sym2 r;
    for (int a = 0; a < kDim; ++a)
        for (int b = a; b < kDim; ++b) {
            double s = 0.0;
            for (int m = 0; m < kDim; ++m)
                for (int n = 0; n < kDim; ++n) s += e(a, m) * e(b, n) * t(m, n);
            r.set(a, b, s);
        }
    return r;
}

Rank3 to_frame(const Rank3& t, const Mat4& e) {
    Rank3 r;
    for (int a = 0; a < kDim; ++a)
        for (int b = 0; b < kDim; ++b)
            for (int c = 0; c < kDim; ++c) {
                double s = 0.0;
                for (int m = 0; m < kDim; ++m)
                    for (int n = 0; n < kDim; ++n)
                        for (int p = 0; p < kDim; ++p) s += e(a, m) * e(b, n) * e(c, p) * t(m, n, p);
                r(a, b, c) = s;
            }
    return r;
}

Riem4 to_frame(const Riem4& t, const Mat4& e) {
    // One slot at a time.
    Riem4 cur = t;
    for (int slot = 0; slot < 4; ++slot) {
        Riem4 next;
        for (int i = 0; i < kDim; ++i)
            for (int j = 0; j < kDim; ++j)
                for (int k = 0; k < kDim; ++k)
                    for (int l = 0; l < kDim; ++l) {
                        double s = 0.0;
                        for (int m = 0; m < kDim; ++m) {
                            switch (slot) {
                                case 0: s += e(i, m) * cur(m, j, k, l); break;
                                case 1: s += e(j, m) * cur(i, m, k, l); break;
                                case 2: s += e(k, m) * cur(i, j, m, l); break;
                                default: s += e(l, m) * cur(i, j, k, m); break;
                            }
                        }
                        next(i, j, k, l) = s;
                    }
        cur = next;
    }
    return cur;
}

}  // namespace solitonlab
