#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "norms.hpp"
#include "sets.hpp"

namespace mrpi {

/// The per-term blocks A^i W of the reachable-set series, stored separately
/// so any truncation length and any support value can be assembled without
/// recomputation. blocks[i] holds A^i W.
struct SeriesBlocks {
    std::size_t dimension = 0;
    std::vector<Zonotope> blocks;

    std::size_t count() const { return blocks.size(); }
    std::size_t dim() const { return dimension; }
};

/// Compute blocks A^i W for i = 0 .. count-1 by repeated mapping. The total
/// generator budget count * |W| is checked up front so a doomed request fails
/// before any work.
inline SeriesBlocks compute_blocks(const Matrix& a, const Zonotope& w, int count) {
    if (count < 0) throw InvalidArgument("compute_blocks: negative count");
    if (!a.is_square() || a.rows() != w.dim())
        throw DimensionMismatch("compute_blocks: dynamics/set dimensions");
    const std::size_t total = static_cast<std::size_t>(count) * w.num_generators();
    if (total > kGeneratorCapacity)
        throw CapacityExceeded("compute_blocks: " + std::to_string(total) +
                               " generators exceed cap " + std::to_string(kGeneratorCapacity));
    SeriesBlocks s;
    s.dimension = w.dim();
    s.blocks.reserve(static_cast<std::size_t>(count));
    Zonotope term = w;
    for (int i = 0; i < count; ++i) {
        if (i > 0) term = linear_map(a, term);
        s.blocks.push_back(term);
    }
    return s;
}

/// Assemble the length-n truncation E_n = block_0 + ... + block_{n-1}
/// (Minkowski). n = 0 gives the origin.
inline Zonotope assemble_truncation(const SeriesBlocks& s, int n) {
    if (n < 0 || static_cast<std::size_t>(n) > s.count())
        throw InvalidArgument("assemble_truncation: length " + std::to_string(n) +
                              " outside stored range");
    if (s.dim() == 0) throw InvalidArgument("assemble_truncation: uninitialized blocks");
    Zonotope e = Zonotope::point(Vec(s.dim(), 0.0));
    for (int i = 0; i < n; ++i) e = minkowski_sum(e, s.blocks[static_cast<std::size_t>(i)]);
    return e;
}

/// Support values of every truncation at once: out[n] = h_{E_n}(u) for
/// n = 0 .. count, using additivity of support under Minkowski sums.
inline std::vector<double> prefix_supports(const SeriesBlocks& s, const Vec& u) {
    std::vector<double> out(s.count() + 1, 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < s.count(); ++i) {
        acc += support(s.blocks[i], u);
        out[i + 1] = acc;
    }
    return out;
}

/// One row of the numeric convergence curve.
struct ErrorPoint {
    int n = 0;
    double d_num = 0.0;
};

/// Sampled distance from each truncation E_n (n = 1 .. n_max) to the deep
/// reference truncation E_ref, measured in the norm that the directions were
/// dual-normalized for. Truncations are nested, so the distance is the worst
/// support surplus of the reference.
inline std::vector<ErrorPoint> error_curve(const SeriesBlocks& s, int n_max, int ref,
                                           const std::vector<Vec>& dirs) {
    if (ref <= 0 || static_cast<std::size_t>(ref) > s.count())
        throw InvalidArgument("error_curve: reference length outside stored range");
    if (n_max < 1 || n_max > ref) throw InvalidArgument("error_curve: n_max outside [1, ref]");
    if (dirs.empty()) throw InvalidArgument("error_curve: empty direction set");

    std::vector<ErrorPoint> out(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) out[static_cast<std::size_t>(n) - 1].n = n;
    for (const Vec& u : dirs) {
        const std::vector<double> h = prefix_supports(s, u);
        const double h_ref = h[static_cast<std::size_t>(ref)];
        for (int n = 1; n <= n_max; ++n) {
            auto& pt = out[static_cast<std::size_t>(n) - 1];
            pt.d_num = std::max(pt.d_num, h_ref - h[static_cast<std::size_t>(n)]);
        }
    }
    return out;
}

}  // namespace mrpi
