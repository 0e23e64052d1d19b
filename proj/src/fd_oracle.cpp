#include "solitonlab/fd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include "solitonlab/errors.hpp"

namespace solitonlab {

namespace {

constexpr std::array<double, 5> kD1 = {1.0, -8.0, 0.0, 8.0, -1.0};     // / 12h
constexpr std::array<double, 5> kD2 = {-1.0, 16.0, -30.0, 16.0, -1.0};  // / 12h^2

GridNode shifted(GridNode n, int axis, int by) {
    n[static_cast<std::size_t>(axis)] += by;
    return n;
}

template <class T, class Get>
T stencil(const Get& get, const GridNode& n, int axis, const std::array<double, 5>& w, double denom) {
    T acc{};
    for (int o = -2; o <= 2; ++o) {
        const double c = w[static_cast<std::size_t>(o + 2)];
        if (c != 0.0) acc = acc + c * get(shifted(n, axis, o));
    }
    return (1.0 / denom) * acc;
}

template <class T, class Get>
T d1(const Get& get, const GridNode& n, int axis, double h) {
    return stencil<T>(get, n, axis, kD1, 12.0 * h);
}

template <class T, class Get>
T d2(const Get& get, const GridNode& n, int axis, double h) {
    return stencil<T>(get, n, axis, kD2, 12.0 * h * h);
}

/// Christoffel symbols gamma(m, n, r) = Gamma^r_{mn} and their partials
/// dgamma(a, m, n, r) = d_a Gamma^r_{mn} from g, dg, ddg at a node.
struct ConnectionData {
    Sym2 g;
    Sym2 ginv;
    Rank3 gamma;
    Riem4 dgamma;
};

ConnectionData connection_at(const MetricGrid& grid, const GridNode& node) {
    auto get = [&](const GridNode& n) { return grid.g(n); };
    ConnectionData c;
    c.g = grid.g(node);
    c.ginv = inverse(c.g);

    std::array<Sym2, kDim> dg;
    std::array<std::array<Sym2, kDim>, kDim> ddg;
    for (int a = 0; a < kDim; ++a) {
        const std::size_t ua = static_cast<std::size_t>(a);
        dg[ua] = d1<Sym2>(get, node, a, grid.spacing(a));
        ddg[ua][ua] = d2<Sym2>(get, node, a, grid.spacing(a));
    }
    for (int a = 0; a < kDim; ++a)
        for (int b = a + 1; b < kDim; ++b) {
            auto inner = [&](const GridNode& n) { return d1<Sym2>(get, n, b, grid.spacing(b)); };
            const Sym2 v = d1<Sym2>(inner, node, a, grid.spacing(a));
            ddg[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = v;
            ddg[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = v;
        }

    // first-kind symbols [mn, l] and their partials
    auto first_kind = [&](int m, int n, int l) {
        const auto um = static_cast<std::size_t>(m), un = static_cast<std::size_t>(n),
                   ul = static_cast<std::size_t>(l);
        return 0.5 * (dg[um](l, n) + dg[un](l, m) - dg[ul](m, n));
    };
    auto d_first_kind = [&](int a, int m, int n, int l) {
        const auto& dd = ddg[static_cast<std::size_t>(a)];
        return 0.5 * (dd[static_cast<std::size_t>(m)](l, n) + dd[static_cast<std::size_t>(n)](l, m) -
                      dd[static_cast<std::size_t>(l)](m, n));
    };

    // d_a g^{rl} = -g^{rp} (d_a g_pq) g^{ql}
    std::array<Sym2, kDim> dginv;
    for (int a = 0; a < kDim; ++a)
        for (int r = 0; r < kDim; ++r)
            for (int l = r; l < kDim; ++l) {
                double v = 0.0;
                for (int p = 0; p < kDim; ++p)
                    for (int q = 0; q < kDim; ++q)
                        v -= c.ginv(r, p) * dg[static_cast<std::size_t>(a)](p, q) * c.ginv(q, l);
                dginv[static_cast<std::size_t>(a)].set(r, l, v);
            }

    for (int m = 0; m < kDim; ++m)
        for (int n = 0; n < kDim; ++n)
            for (int r = 0; r < kDim; ++r) {
                double v = 0.0;
                for (int l = 0; l < kDim; ++l) v += c.ginv(r, l) * first_kind(m, n, l);
                c.gamma(m, n, r) = v;
                for (int a = 0; a < kDim; ++a) {
                    double dv = 0.0;
                    for (int l = 0; l < kDim; ++l) {
                        dv += dginv[static_cast<std::size_t>(a)](r, l) * first_kind(m, n, l) +
                              c.ginv(r, l) * d_first_kind(a, m, n, l);
                    }
                    c.dgamma(a, m, n, r) = dv;
                }
            }
    return c;
}

struct NodeCurvature {
    ConnectionData conn;
    Riem4 riem;
    Sym2 ric;
    double scalar = 0.0;
};

NodeCurvature curvature_at(const MetricGrid& grid, const GridNode& node) {
    NodeCurvature nc;
    nc.conn = connection_at(grid, node);
    const Rank3& G = nc.conn.gamma;
    const Riem4& dG = nc.conn.dgamma;
    // R_{ijkl} = g_{l r} ( d_i G^r_{jk} - d_j G^r_{ik} + G^r_{i m} G^m_{jk} - G^r_{j m} G^m_{ik} )
    for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j)
            for (int k = 0; k < kDim; ++k) {
                Vec4 up{};
                for (int r = 0; r < kDim; ++r) {
                    double v = dG(i, j, k, r) - dG(j, i, k, r);
                    for (int m = 0; m < kDim; ++m) v += G(i, m, r) * G(j, k, m) - G(j, m, r) * G(i, k, m);
                    up[static_cast<std::size_t>(r)] = v;
                }
                for (int l = 0; l < kDim; ++l) {
                    double v = 0.0;
                    for (int r = 0; r < kDim; ++r) v += nc.conn.g(l, r) * up[static_cast<std::size_t>(r)];
                    nc.riem(i, j, k, l) = v;
                }
            }
    nc.ric = ricci_contraction(nc.riem, nc.conn.g);
    nc.scalar = scalar_contraction(nc.ric, nc.conn.g);
    return nc;
}

struct RicciScalar {
    Sym2 ric;
    double scalar = 0.0;
};

RicciScalar operator+(const RicciScalar& a, const RicciScalar& b) { return {a.ric + b.ric, a.scalar + b.scalar}; }
RicciScalar operator*(double s, const RicciScalar& a) { return {s * a.ric, s * a.scalar}; }

void require_reach(const MetricGrid& grid, const GridNode& node, int reach) {
    if (!grid.has_reach(node, reach)) {
        throw DomainError("node within " + std::to_string(reach) + " nodes of the grid boundary");
    }
}

/// Patch of a lattice: indices node - reach .. node + reach on every axis.
MetricGrid lattice_patch(const MetricFamily& m, const std::array<Interval, kDim>& box, int n,
                         const GridNode& node, int reach) {
    std::array<std::vector<double>, kDim> axes;
    for (int a = 0; a < kDim; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        const double lo = box[ua].lo;
        const double hi = box[ua].hi;
        for (int o = -reach; o <= reach; ++o) {
            const int i = node[ua] + o;
            axes[ua].push_back(i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1));
        }
    }
    return MetricGrid::from_family(m, std::move(axes));
}

std::vector<int> sample_indices(int n, int reach, int stride, bool varying) {
    if (!varying) return {n / 2};
    std::vector<int> out{reach};
    for (int i = stride; i < n - 1 - reach; i += stride)
        if (i > reach) out.push_back(i);
    out.push_back(n - 1 - reach);
    return out;
}

std::vector<GridNode> product_nodes(const std::array<std::vector<int>, kDim>& idx) {
    std::vector<GridNode> out;
    for (int a : idx[0])
        for (int b : idx[1])
            for (int c : idx[2])
                for (int d : idx[3]) out.push_back({a, b, c, d});
    return out;
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, const Fn& fn) {
    unsigned t = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    t = static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(count, 1)));
    std::vector<std::exception_ptr> errors(t);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < t; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += t) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

struct RicciDeviation {
    double ricci = 0.0;
    double scalar = 0.0;
};

RicciDeviation ricci_deviation(const MetricFamily& m, const std::array<Interval, kDim>& box, int n,
                               const GridNode& node) {
    const MetricGrid patch = lattice_patch(m, box, n, node, kStencilHalfWidth);
    const GridNode c = patch.center();
    const NodeCurvature fd = curvature_at(patch, c);
    const Sym2 fd_ric = to_frame(fd.ric, orthonormal_vielbein(fd.conn.g));
    const CurvatureBundle closed = family_bundle(m, patch.point(c));
    const double scale = std::max(1.0, closed.ric.max_abs());
    return {(fd_ric - closed.ric).max_abs() / scale, std::abs(fd.scalar - closed.scalar) / scale};
}

}  // namespace

MetricGrid::MetricGrid(std::array<std::vector<double>, kDim> axes, std::vector<Sym2> g, int margin)
    : axes_(std::move(axes)), g_(std::move(g)), margin_(margin) {
    if (margin_ < kStencilHalfWidth) throw InputError("grid margin must be at least 2");
    std::size_t total = 1;
    for (int a = 0; a < kDim; ++a) {
        const auto& x = axes_[static_cast<std::size_t>(a)];
        if (x.size() < 2) throw InputError("every grid axis needs at least 2 nodes");
        const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
        if (!(h > 0.0)) throw InputError("grid axes must be strictly increasing");
        const double tol = 1e-12 * std::max(1.0, std::abs(x.back()) + std::abs(x.front()));
        for (std::size_t i = 1; i < x.size(); ++i) {
            if (std::abs((x[i] - x[i - 1]) - h) > tol) throw InputError("grid axis spacing is not uniform");
        }
        shape_[static_cast<std::size_t>(a)] = static_cast<int>(x.size());
        spacing_[static_cast<std::size_t>(a)] = h;
        total *= x.size();
    }
    if (g_.size() != total) throw InputError("metric sample count does not match the axes");
    for (const Sym2& gi : g_) (void)cholesky(gi);
}

MetricGrid MetricGrid::from_family(const MetricFamily& m, std::array<std::vector<double>, kDim> axes) {
    std::vector<Sym2> g;
    g.reserve(axes[0].size() * axes[1].size() * axes[2].size() * axes[3].size());
    for (double x0 : axes[0])
        for (double x1 : axes[1])
            for (double x2 : axes[2])
                for (double x3 : axes[3]) g.push_back(family_metric_at(m, {x0, x1, x2, x3}));
    return MetricGrid(std::move(axes), std::move(g));
}

MetricGrid MetricGrid::patch(const MetricFamily& m, const Vec4& center, const Vec4& spacing, int reach) {
    if (reach < 1) throw InputError("patch reach must be positive");
    std::array<std::vector<double>, kDim> axes;
    for (std::size_t a = 0; a < kDim; ++a) {
        for (int o = -reach; o <= reach; ++o) axes[a].push_back(center[a] + o * spacing[a]);
    }
    return from_family(m, std::move(axes));
}

MetricGrid MetricGrid::from_json(const nlohmann::json& j) {
    try {
        std::array<std::vector<double>, kDim> axes;
        const auto& ja = j.at("axes");
        if (!ja.is_array() || ja.size() != kDim) throw InputError("grid \"axes\" must hold 4 arrays");
        for (std::size_t a = 0; a < kDim; ++a) axes[a] = ja[a].get<std::vector<double>>();
        const auto flat = j.at("g").get<std::vector<double>>();
        if (flat.size() % 10 != 0) throw InputError("grid \"g\" length must be a multiple of 10");
        std::vector<Sym2> g(flat.size() / 10);
        for (std::size_t n = 0; n < g.size(); ++n) {
            std::size_t c = 10 * n;
            for (int i = 0; i < kDim; ++i)
                for (int k = i; k < kDim; ++k) g[n].set(i, k, flat[c++]);
        }
        return MetricGrid(std::move(axes), std::move(g), j.value("margin", kStencilHalfWidth));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed metric grid: ") + e.what());
    }
}

nlohmann::json MetricGrid::to_json() const {
    nlohmann::json j;
    j["axes"] = nlohmann::json::array();
    for (const auto& x : axes_) j["axes"].push_back(x);
    std::vector<double> flat;
    flat.reserve(10 * g_.size());
    for (const Sym2& gi : g_)
        for (int i = 0; i < kDim; ++i)
            for (int k = i; k < kDim; ++k) flat.push_back(gi(i, k));
    j["g"] = std::move(flat);
    j["margin"] = margin_;
    return j;
}

std::size_t MetricGrid::index(const GridNode& n) const {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < kDim; ++a) {
        if (n[a] < 0 || n[a] >= shape_[a]) throw DomainError("grid node index out of range");
        idx = idx * static_cast<std::size_t>(shape_[a]) + static_cast<std::size_t>(n[a]);
    }
    return idx;
}

Vec4 MetricGrid::point(const GridNode& n) const {
    Vec4 x{};
    for (std::size_t a = 0; a < kDim; ++a) x[a] = axes_[a].at(static_cast<std::size_t>(n[a]));
    return x;
}

bool MetricGrid::has_reach(const GridNode& n, int reach) const {
    for (std::size_t a = 0; a < kDim; ++a) {
        if (n[a] < reach || n[a] > shape_[a] - 1 - reach) return false;
    }
    return true;
}

GridNode MetricGrid::center() const {
    return {shape_[0] / 2, shape_[1] / 2, shape_[2] / 2, shape_[3] / 2};
}

double fd_partial(const std::vector<double>& field, const MetricGrid& grid, int axis, int order,
                  const GridNode& node) {
    if (axis < 0 || axis >= kDim) throw InputError("axis must be 0..3");
    if (order != 1 && order != 2) throw InputError("derivative order must be 1 or 2");
    if (field.size() != grid.size()) throw InputError("field size does not match the grid");
    require_reach(grid, node, grid.margin());
    auto get = [&](const GridNode& n) { return field[grid.index(n)]; };
    return order == 1 ? d1<double>(get, node, axis, grid.spacing(axis))
                      : d2<double>(get, node, axis, grid.spacing(axis));
}

CurvatureBundle fd_curvature(const MetricGrid& grid, const GridNode& node, bool with_codazzi) {
    const int reach = with_codazzi ? 2 * grid.margin() : grid.margin();
    require_reach(grid, node, reach);

    const NodeCurvature nc = curvature_at(grid, node);
    CurvatureBundle out;
    out.frame = Frame4(FrameKind::coordinate, {"x0", "x1", "x2", "x3"});
    out.metric = nc.conn.g;
    out.christoffel = nc.conn.gamma;
    out.riem = nc.riem;
    out.ric = nc.ric;
    out.scalar = nc.scalar;
    out.weyl = weyl_from_riemann(nc.riem, nc.ric, nc.scalar, nc.conn.g);
    if (!with_codazzi) return out;

    auto ricci = [&](const GridNode& n) {
        const NodeCurvature c = curvature_at(grid, n);
        return RicciScalar{c.ric, c.scalar};
    };
    std::array<RicciScalar, kDim> d;
    for (int k = 0; k < kDim; ++k) d[static_cast<std::size_t>(k)] = d1<RicciScalar>(ricci, node, k, grid.spacing(k));

    const Rank3& G = nc.conn.gamma;
    const Sym2& R = nc.ric;
    auto nabla = [&](int k, int i, int j) {
        double v = d[static_cast<std::size_t>(k)].ric(i, j);
        for (int m = 0; m < kDim; ++m) v -= G(k, i, m) * R(m, j) + G(k, j, m) * R(i, m);
        return v;
    };
    const Sym2& g = nc.conn.g;
    for (int k = 0; k < kDim; ++k)
        for (int i = 0; i < kDim; ++i)
            for (int j = 0; j < kDim; ++j) {
                out.codazzi_residual(k, i, j) = nabla(k, i, j) - nabla(i, k, j) +
                                                d[static_cast<std::size_t>(i)].scalar / 6.0 * g(k, j) -
                                                d[static_cast<std::size_t>(k)].scalar / 6.0 * g(i, j);
            }
    return out;
}

std::array<Interval, kDim> oracle_box(const MetricFamily& m) {
    const Interval s = m.domain();
    // Polar charts: stay in the middle half of a closed fiber, and away from
    // the origin of an open one.
    const double r_max = m.fiber().r_max();
    const Interval r = std::isfinite(r_max) ? Interval{0.25 * r_max, 0.75 * r_max} : Interval{0.5, 2.0};
    if (m.is_doubly_warped()) return {s, Interval{0.0, 1.0}, r, Interval{0.0, 1.0}};
    return {s, r, Interval{std::numbers::pi / 4, 3 * std::numbers::pi / 4}, Interval{0.0, 1.0}};
}

std::array<bool, kDim> oracle_varying_axes(const MetricFamily& m) {
    if (m.is_doubly_warped()) return {true, false, true, false};
    return {true, true, true, false};
}

OracleReport oracle_crosscheck(const MetricFamily& m, const OracleOptions& opt) {
    const int n = opt.nodes_per_axis;
    if (n < 2 * (2 * kStencilHalfWidth) + 1) throw InputError("oracle lattice needs at least 9 nodes per axis");
    if (opt.stride < 1 || opt.codazzi_stride < 1) throw InputError("oracle strides must be positive");
    const auto box = oracle_box(m);
    const auto varying = oracle_varying_axes(m);

    OracleReport rep;
    rep.family = m.name();
    rep.nodes_per_axis = n;
    for (std::size_t a = 0; a < kDim; ++a) {
        rep.lo[a] = box[a].lo;
        rep.hi[a] = box[a].hi;
    }

    std::array<std::vector<int>, kDim> idx;
    for (std::size_t a = 0; a < kDim; ++a) idx[a] = sample_indices(n, kStencilHalfWidth, opt.stride, varying[a]);
    const auto nodes = product_nodes(idx);
    std::vector<RicciDeviation> dev(nodes.size());
    parallel_for(nodes.size(), opt.threads, [&](std::size_t i) { dev[i] = ricci_deviation(m, box, n, nodes[i]); });
    rep.ricci_nodes = nodes.size();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (dev[i].ricci > rep.ricci_rel) {
            rep.ricci_rel = dev[i].ricci;
            for (std::size_t a = 0; a < kDim; ++a)
                rep.worst_point[a] = box[a].lo + (box[a].hi - box[a].lo) * nodes[i][a] / (n - 1);
        }
        rep.scalar_rel = std::max(rep.scalar_rel, dev[i].scalar);
    }

    if (!opt.codazzi) return rep;
    const int reach = 2 * kStencilHalfWidth;
    std::array<std::vector<int>, kDim> cidx;
    for (std::size_t a = 0; a < kDim; ++a) cidx[a] = sample_indices(n, reach, opt.codazzi_stride, varying[a]);
    const auto cnodes = product_nodes(cidx);
    struct CodazziDev {
        double fd = 0.0, closed = 0.0, diff = 0.0;
    };
    std::vector<CodazziDev> cdev(cnodes.size());
    parallel_for(cnodes.size(), opt.threads, [&](std::size_t i) {
        const MetricGrid patch = lattice_patch(m, box, n, cnodes[i], reach);
        const GridNode c = patch.center();
        const CurvatureBundle fd = fd_curvature(patch, c, true);
        const Rank3 fd_frame = to_frame(fd.codazzi_residual, orthonormal_vielbein(fd.metric));
        const CurvatureBundle closed = family_bundle(m, patch.point(c));
        const double scale = std::max(1.0, closed.ric.max_abs());
        Rank3 diff;
        for (int a = 0; a < kDim; ++a)
            for (int b = 0; b < kDim; ++b)
                for (int e = 0; e < kDim; ++e) diff(a, b, e) = fd_frame(a, b, e) - closed.codazzi_residual(a, b, e);
        cdev[i] = {fd_frame.max_abs() / scale, closed.codazzi_residual.max_abs() / scale, diff.max_abs() / scale};
    });
    rep.codazzi_nodes = cnodes.size();
    for (const auto& c : cdev) {
        rep.codazzi_fd = std::max(rep.codazzi_fd, c.fd);
        rep.codazzi_closed = std::max(rep.codazzi_closed, c.closed);
        rep.codazzi_diff = std::max(rep.codazzi_diff, c.diff);
    }
    return rep;
}

ConvergenceReport oracle_convergence(const MetricFamily& m, int fine_nodes, unsigned threads) {
    if (fine_nodes < 33 || fine_nodes % 2 == 0) throw InputError("fine lattice needs an odd node count >= 33");
    const int coarse_nodes = (fine_nodes + 1) / 2;
    const auto box = oracle_box(m);
    const auto varying = oracle_varying_axes(m);

    // Common nodes: every 4th coarse node, i.e. every 8th fine node.
    std::array<std::vector<int>, kDim> cidx;
    for (std::size_t a = 0; a < kDim; ++a) {
        if (!varying[a]) {
            cidx[a] = {coarse_nodes / 2};
            continue;
        }
        for (int i = 4; i <= coarse_nodes - 5; i += 4) cidx[a].push_back(i);
    }
    const auto coarse = product_nodes(cidx);
    std::vector<double> dc(coarse.size()), df(coarse.size());
    parallel_for(coarse.size(), threads, [&](std::size_t i) {
        GridNode fine{};
        for (std::size_t a = 0; a < kDim; ++a) fine[a] = 2 * coarse[i][a];
        dc[i] = ricci_deviation(m, box, coarse_nodes, coarse[i]).ricci;
        df[i] = ricci_deviation(m, box, fine_nodes, fine).ricci;
    });
    ConvergenceReport rep;
    rep.coarse_rel = *std::max_element(dc.begin(), dc.end());
    rep.fine_rel = *std::max_element(df.begin(), df.end());
    rep.ratio = rep.fine_rel > 0.0 ? rep.coarse_rel / rep.fine_rel : std::numeric_limits<double>::infinity();
    return rep;
}

}  // namespace solitonlab
