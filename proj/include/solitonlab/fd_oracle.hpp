#pragma once

// Finite-difference curvature on uniform coordinate grids.
//
// Everything is computed from the sampled metric components alone: 4th-order
// central differences for first and second partials, Christoffel symbols and
// Riemann from those, Ricci/scalar/Weyl by contraction, and the Codazzi
// residual from a second difference pass over neighbouring Ricci tensors.

#include <array>
#include <cstddef>
#include <vector>

#include <json.hpp>

#include "solitonlab/ansatz.hpp"
#include "solitonlab/curvature.hpp"
#include "solitonlab/frame_tensor.hpp"

namespace solitonlab {

using GridNode = std::array<int, kDim>;

/// 5-point stencil half-width.
inline constexpr int kStencilHalfWidth = 2;

class MetricGrid {
public:
    /// Nodes are stored row-major with axis 0 slowest. Throws InputError on
    /// non-uniform axes or size mismatch, DomainError on a non-PD metric.
    MetricGrid(std::array<std::vector<double>, kDim> axes, std::vector<Sym2> g,
               int margin = kStencilHalfWidth);

    /// Sample a family on the tensor product of the given axes.
    static MetricGrid from_family(const MetricFamily& m, std::array<std::vector<double>, kDim> axes);

    /// (2 reach + 1)^4 nodes centred on `center` with per-axis spacing.
    static MetricGrid patch(const MetricFamily& m, const Vec4& center, const Vec4& spacing, int reach);

    static MetricGrid from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    const std::array<std::vector<double>, kDim>& axes() const noexcept { return axes_; }
    GridNode shape() const noexcept { return shape_; }
    double spacing(int axis) const { return spacing_[static_cast<std::size_t>(axis)]; }
    int margin() const noexcept { return margin_; }
    std::size_t size() const noexcept { return g_.size(); }

    std::size_t index(const GridNode& n) const;
    const Sym2& g(const GridNode& n) const { return g_[index(n)]; }
    Vec4 point(const GridNode& n) const;

    /// True when every axis index is at least `reach` from both ends.
    bool has_reach(const GridNode& n, int reach) const;
    GridNode center() const;

private:
    std::array<std::vector<double>, kDim> axes_;
    std::vector<Sym2> g_;
    GridNode shape_{};
    Vec4 spacing_{};
    int margin_;
};

/// 4th-order central difference of a scalar nodal field (one value per node,
/// same ordering as the grid). order 1 or 2. Throws DomainError when the
/// node lies within the grid margin of the boundary.
double fd_partial(const std::vector<double>& field, const MetricGrid& grid, int axis, int order,
                  const GridNode& node);

/// Coordinate-frame bundle at a node; christoffel(k, j, i) = Gamma^i_{kj}.
/// The Codazzi residual needs twice the stencil reach; with
/// with_codazzi = false only the stencil reach is required.
CurvatureBundle fd_curvature(const MetricGrid& grid, const GridNode& node, bool with_codazzi = true);

/// Per-axis sampling for a lattice cross-check against the closed forms.
struct OracleOptions {
    int nodes_per_axis = 129;
    /// Lattice stride between checked nodes along varying axes; the nodes
    /// closest to each boundary that still have full reach are always added.
    int stride = 8;
    int codazzi_stride = 16;
    bool codazzi = true;
    /// 0 = hardware concurrency.
    unsigned threads = 0;
};

struct OracleReport {
    std::string family;
    int nodes_per_axis = 0;
    Vec4 lo{};
    Vec4 hi{};
    std::size_t ricci_nodes = 0;
    std::size_t codazzi_nodes = 0;
    /// max |fd - closed| / max(1, max |closed Ricci|), orthonormal frame
    double ricci_rel = 0.0;
    double scalar_rel = 0.0;
    Vec4 worst_point{};
    /// |C| (g-norm) over the same curvature scale
    double codazzi_fd = 0.0;
    double codazzi_closed = 0.0;
    double codazzi_diff = 0.0;
};

/// Coordinate box of the lattice used for a family: s over the family domain,
/// polar axes bounded away from chart singularities, ignorable axes on [0, 1].
std::array<Interval, kDim> oracle_box(const MetricFamily& m);

/// Axes along which the family's metric actually varies.
std::array<bool, kDim> oracle_varying_axes(const MetricFamily& m);

/// Compare fd_curvature with the closed forms on an n-node-per-axis lattice.
/// Only local patches around the checked nodes are materialized.
OracleReport oracle_crosscheck(const MetricFamily& m, const OracleOptions& opt = {});

struct ConvergenceReport {
    double coarse_rel = 0.0;
    double fine_rel = 0.0;
    double ratio = 0.0;
};

/// Ricci deviation on an (n+1)/2 lattice versus an n lattice at common nodes.
ConvergenceReport oracle_convergence(const MetricFamily& m, int fine_nodes = 129, unsigned threads = 0);

}  // namespace solitonlab
