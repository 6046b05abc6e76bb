#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "bound.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "norms.hpp"
#include "series.hpp"
#include "sets.hpp"

namespace mrpi {

/// Certified outer approximation of the series limit: the explicit truncation
/// E_N padded by a ||.||_P ball holding the dropped tail,
///   Z = E_N (+) { d : ||d||_P <= tail_radius }.
/// Supports are exact: h_Z(u) = h_{E_N}(u) + tail_radius * ||u||_P*.
struct OuterSet {
    Zonotope core;
    double tail_radius = 0.0;
    QuadNorm norm;
    int truncation = 0;
    double gamma = 0.0;
    double r_w = 0.0;

    std::size_t dim() const { return core.dim(); }
};

inline double support(const OuterSet& z, const Vec& u) {
    return support(z.core, u) + z.tail_radius * z.norm.dual_norm(u);
}

/// Build the certified set from precomputed blocks. The tail radius is the
/// closed-form certificate r_w * gamma^n / (1 - gamma).
inline OuterSet certified_outer_set(const SeriesBlocks& blocks, int n, const QuadNorm& norm,
                                    double gamma, double r_w,
                                    TailExponent convention = TailExponent::kSeriesLength) {
    if (norm.dim() != blocks.dim()) throw DimensionMismatch("certified_outer_set: norm dimension");
    Zonotope core = assemble_truncation(blocks, n);
    const double tail = tail_bound(r_w, gamma, n, convention);
    return OuterSet{std::move(core), tail, norm, n, gamma, r_w};
}

/// Convenience wrapper that derives gamma and r_w from the shaped norm and
/// the box disturbance set, then truncates at the requested length.
inline OuterSet certified_outer_set(const Matrix& a, const Box& w, const ShapedNorm& shaped,
                                    int n, TailExponent convention = TailExponent::kSeriesLength) {
    require_contraction(shaped.gamma, "certified_outer_set");
    const RadiusBound r = disturbance_radius(shaped.norm, w);
    SeriesBlocks blocks = compute_blocks(a, Zonotope::from_box(w), n);
    return certified_outer_set(blocks, n, shaped.norm, shaped.gamma, r.value, convention);
}

/// Tightest axis-aligned box containing the certified set: the core's hull
/// padded per axis by the tail ball's reach tail_radius * ||e_j||_P*.
inline Box interval_hull(const OuterSet& z) {
    Box core_hull = interval_hull(z.core);
    Vec hw = core_hull.halfwidth;
    for (std::size_t j = 0; j < z.dim(); ++j) {
        Vec e(z.dim(), 0.0);
        e[j] = 1.0;
        hw[j] += z.tail_radius * z.norm.dual_norm(e);
    }
    return Box(core_hull.center, std::move(hw));
}

/// Sampled membership certificate: u^T x <= h_Z(u) over every direction.
/// Necessary for membership and, over a rich direction set, the standard
/// outer check.
inline bool contains_sampled(const OuterSet& z, const Vec& x, const std::vector<Vec>& dirs,
                             double tol = 1e-9) {
    if (x.size() != z.dim()) throw DimensionMismatch("contains_sampled: point size");
    if (dirs.empty()) throw InvalidArgument("contains_sampled: empty direction set");
    for (const Vec& u : dirs)
        if (dot(u, x) > support(z, u) + tol) return false;
    return true;
}

/// Invariance check for the closed loop x+ = A x + w over sampled directions.
/// Both sides are exact support values:
///   h_{A Z (+) W}(u) = h_Z(A^T u) + h_W(u)  vs  h_Z(u).
/// For the certified set the containment holds with equality in the worst
/// case, so the slack parameter absorbs only roundoff.
inline bool is_invariant_sampled(const OuterSet& z, const Matrix& a, const Zonotope& w,
                                 const std::vector<Vec>& dirs, double slack = 1e-9) {
    if (!a.is_square() || a.rows() != z.dim())
        throw DimensionMismatch("is_invariant_sampled: dynamics shape");
    if (w.dim() != z.dim()) throw DimensionMismatch("is_invariant_sampled: disturbance dimension");
    if (dirs.empty()) throw InvalidArgument("is_invariant_sampled: empty direction set");
    const Matrix at = a.transpose();
    for (const Vec& u : dirs) {
        const double lhs = support(z, at * u) + support(w, u);
        const double rhs = support(z, u);
        if (lhs > rhs + slack * std::max(1.0, std::abs(rhs))) return false;
    }
    return true;
}

}  // namespace mrpi
