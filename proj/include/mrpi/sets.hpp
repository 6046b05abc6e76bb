#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "rng.hpp"

namespace mrpi {

/// Hard cap on stored generators. Sums that would exceed it raise
/// CapacityExceeded; generators are never merged or dropped, so every stored
/// set is exact.
inline constexpr std::size_t kGeneratorCapacity = 100000;

/// Axis-aligned box { c + d : |d_j| <= halfwidth_j }.
struct Box {
    Vec center;
    Vec halfwidth;

    Box() = default;
    Box(Vec c, Vec h) : center(std::move(c)), halfwidth(std::move(h)) {
        if (center.size() != halfwidth.size()) throw DimensionMismatch("Box: center/halfwidth sizes");
        if (center.empty()) throw InvalidArgument("Box: dimension must be positive");
        for (double w : halfwidth)
            if (w < 0.0) throw InvalidArgument("Box: negative halfwidth");
    }

    static Box centered(Vec halfwidths) {
        Vec c(halfwidths.size(), 0.0);
        return Box(std::move(c), std::move(halfwidths));
    }

    std::size_t dim() const { return center.size(); }

    bool contains(const Vec& x, double tol = 0.0) const {
        if (x.size() != dim()) throw DimensionMismatch("Box::contains point size");
        for (std::size_t j = 0; j < dim(); ++j)
            if (std::abs(x[j] - center[j]) > halfwidth[j] + tol) return false;
        return true;
    }

    double volume() const {
        double v = 1.0;
        for (double w : halfwidth) v *= 2.0 * w;
        return v;
    }

    Vec sample(Rng& rng) const {
        Vec x(dim());
        for (std::size_t j = 0; j < dim(); ++j)
            x[j] = center[j] + rng.uniform(-halfwidth[j], halfwidth[j]);
        return x;
    }
};

/// Zonotope { c + sum_i a_i g_i : |a_i| <= 1 }. Generators may be empty
/// (a single point); they are stored verbatim, never reduced.
struct Zonotope {
    Vec center;
    std::vector<Vec> generators;

    Zonotope() = default;

    explicit Zonotope(Vec c, std::vector<Vec> gens = {})
        : center(std::move(c)), generators(std::move(gens)) {
        if (center.empty()) throw InvalidArgument("Zonotope: dimension must be positive");
        for (const Vec& g : generators)
            if (g.size() != center.size()) throw DimensionMismatch("Zonotope: generator size");
        if (generators.size() > kGeneratorCapacity)
            throw CapacityExceeded("Zonotope: generator cap " + std::to_string(kGeneratorCapacity));
    }

    static Zonotope from_box(const Box& b) {
        std::vector<Vec> gens;
        for (std::size_t j = 0; j < b.dim(); ++j) {
            if (b.halfwidth[j] == 0.0) continue;
            Vec g(b.dim(), 0.0);
            g[j] = b.halfwidth[j];
            gens.push_back(std::move(g));
        }
        return Zonotope(b.center, std::move(gens));
    }

    static Zonotope point(Vec c) { return Zonotope(std::move(c)); }

    std::size_t dim() const { return center.size(); }
    std::size_t num_generators() const { return generators.size(); }
};

/// Support function h(u) = u^T c + sum_i |u^T g_i|.
inline double support(const Zonotope& z, const Vec& u) {
    if (u.size() != z.dim()) throw DimensionMismatch("support: direction size");
    double h = dot(u, z.center);
    for (const Vec& g : z.generators) h += std::abs(dot(u, g));
    return h;
}

inline Zonotope minkowski_sum(const Zonotope& a, const Zonotope& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("minkowski_sum: dimensions differ");
    if (a.num_generators() + b.num_generators() > kGeneratorCapacity)
        throw CapacityExceeded("minkowski_sum: generator cap " + std::to_string(kGeneratorCapacity));
    Zonotope s;
    s.center = a.center + b.center;
    s.generators = a.generators;
    s.generators.insert(s.generators.end(), b.generators.begin(), b.generators.end());
    return s;
}

inline Zonotope linear_map(const Matrix& m, const Zonotope& z) {
    if (m.cols() != z.dim()) throw DimensionMismatch("linear_map: matrix columns");
    Zonotope out;
    out.center = m * z.center;
    out.generators.reserve(z.num_generators());
    for (const Vec& g : z.generators) out.generators.push_back(m * g);
    return out;
}

inline Zonotope translate(Zonotope z, const Vec& t) {
    z.center = z.center + t;
    return z;
}

inline Zonotope scale(Zonotope z, double s) {
    for (double& c : z.center) c *= s;
    for (Vec& g : z.generators) g = s * std::move(g);
    return z;
}

/// Tightest axis-aligned box containing the zonotope:
/// center_j +- sum_i |g_i[j]|.
inline Box interval_hull(const Zonotope& z) {
    Vec hw(z.dim(), 0.0);
    for (const Vec& g : z.generators)
        for (std::size_t j = 0; j < z.dim(); ++j) hw[j] += std::abs(g[j]);
    return Box(z.center, std::move(hw));
}

/// Pontryagin difference of a box and a zonotope: the largest box B' with
/// B' + Z inside the original box. Exact for axis-aligned minuends because
/// the erosion per axis is the zonotope's axis extent. Raises EmptyDifference
/// when an axis erodes past zero.
inline Box pontryagin_diff(const Box& b, const Zonotope& z) {
    if (b.dim() != z.dim()) throw DimensionMismatch("pontryagin_diff: dimensions differ");
    Box hull = interval_hull(z);
    Vec center(b.dim());
    Vec hw(b.dim());
    for (std::size_t j = 0; j < b.dim(); ++j) {
        hw[j] = b.halfwidth[j] - hull.halfwidth[j];
        if (hw[j] < 0.0)
            throw EmptyDifference("pontryagin_diff: axis " + std::to_string(j) +
                                  " erodes below zero");
        center[j] = b.center[j] - hull.center[j];
    }
    return Box(std::move(center), std::move(hw));
}

/// Direction set for sampled support computations: the 2*dim signed axis
/// directions first, then `count` independent Gaussian draws normalized to the
/// unit sphere. One-dimensional sets are covered exactly by {+1, -1}, so the
/// random block is skipped there.
inline std::vector<Vec> sample_unit_directions(std::size_t dim, std::size_t count, Rng& rng) {
    if (dim == 0) throw InvalidArgument("sample_unit_directions: dimension must be positive");
    std::vector<Vec> dirs;
    if (dim == 1) {
        dirs.push_back({1.0});
        dirs.push_back({-1.0});
        return dirs;
    }
    dirs.reserve(2 * dim + count);
    for (std::size_t j = 0; j < dim; ++j) {
        Vec plus(dim, 0.0), minus(dim, 0.0);
        plus[j] = 1.0;
        minus[j] = -1.0;
        dirs.push_back(std::move(plus));
        dirs.push_back(std::move(minus));
    }
    std::size_t made = 0;
    while (made < count) {
        Vec u(dim);
        for (double& x : u) x = rng.gaussian();
        const double n = norm2(u);
        if (n < 1e-12) continue;
        for (double& x : u) x /= n;
        dirs.push_back(std::move(u));
        ++made;
    }
    return dirs;
}

/// max_u |h_A(u) - h_B(u)| over the given directions: the sampled symmetric
/// support deviation used by the metric-property checks.
inline double support_gap(const Zonotope& a, const Zonotope& b, const std::vector<Vec>& dirs) {
    if (a.dim() != b.dim()) throw DimensionMismatch("support_gap: dimensions differ");
    if (dirs.empty()) throw InvalidArgument("support_gap: empty direction set");
    double gap = 0.0;
    for (const Vec& u : dirs) gap = std::max(gap, std::abs(support(a, u) - support(b, u)));
    return gap;
}

/// Sampled Hausdorff distance for a nested pair (inner inside outer): the
/// worst support surplus of the outer set. A deficit beyond nested_tol means
/// the pair is not nested and raises NotNested; roundoff-scale deficits clamp
/// to zero.
inline double hausdorff_nested(const Zonotope& outer, const Zonotope& inner,
                               const std::vector<Vec>& dirs, double nested_tol = 1e-10) {
    if (outer.dim() != inner.dim()) throw DimensionMismatch("hausdorff_nested: dimensions differ");
    if (dirs.empty()) throw InvalidArgument("hausdorff_nested: empty direction set");
    double worst = 0.0;
    for (const Vec& u : dirs) {
        const double gap = support(outer, u) - support(inner, u);
        if (gap < -nested_tol)
            throw NotNested("hausdorff_nested: inner support exceeds outer by " +
                            std::to_string(-gap));
        worst = std::max(worst, gap);
    }
    return worst;
}

}  // namespace mrpi
