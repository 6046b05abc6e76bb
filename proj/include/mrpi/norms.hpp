#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "rng.hpp"
#include "sets.hpp"

namespace mrpi {

/// Quadratic norm ||x||_P = sqrt(x^T P x) for symmetric positive definite P,
/// together with its dual norm and the induced matrix norm. The weight is
/// factored once at construction.
class QuadNorm {
public:
    explicit QuadNorm(Matrix p, const Tolerances& tols = default_tolerances())
        : p_(std::move(p)), factor_(cholesky(p_, tols)), tols_(tols) {}

    static QuadNorm euclidean(std::size_t n) { return QuadNorm(Matrix::identity(n)); }

    static QuadNorm diagonal(const Vec& d) {
        for (double v : d)
            if (v <= 0.0) throw NotPositiveDefinite("QuadNorm::diagonal: nonpositive entry");
        return QuadNorm(Matrix::diagonal(d));
    }

    /// Weight from the discrete Lyapunov equation A^T P A - P = -Q. With
    /// Q >= I the induced norm of A is guaranteed below one.
    static QuadNorm lyapunov(const Matrix& a, const Matrix& q,
                             const Tolerances& tols = default_tolerances()) {
        return QuadNorm(solve_discrete_lyapunov(a, q, tols), tols);
    }

    static QuadNorm lyapunov(const Matrix& a, const Tolerances& tols = default_tolerances()) {
        return lyapunov(a, Matrix::identity(a.rows()), tols);
    }

    std::size_t dim() const { return p_.rows(); }
    const Matrix& weight() const { return p_; }

    double norm(const Vec& x) const {
        if (x.size() != dim()) throw DimensionMismatch("QuadNorm::norm size");
        return std::sqrt(std::max(0.0, dot(x, p_ * x)));
    }

    /// Dual norm sqrt(u^T P^{-1} u); the support of the unit ball of ||.||_P
    /// in direction u.
    double dual_norm(const Vec& u) const {
        if (u.size() != dim()) throw DimensionMismatch("QuadNorm::dual_norm size");
        return std::sqrt(std::max(0.0, dot(u, factor_.solve(u))));
    }

    /// Induced norm ||A||_P = max_x ||Ax||_P / ||x||_P. With P = L L^T this is
    /// the square root of the top eigenvalue of L^{-1} (A^T P A) L^{-T}.
    double induced_norm(const Matrix& a) const {
        if (a.rows() != dim() || a.cols() != dim())
            throw DimensionMismatch("QuadNorm::induced_norm shape");
        const std::size_t n = dim();
        Matrix b = a.transpose() * p_ * a;
        // X = L^{-1} B, column by column.
        Matrix x(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            Vec col(n);
            for (std::size_t i = 0; i < n; ++i) col[i] = b(i, j);
            Vec sol = factor_.forward_solve(col);
            for (std::size_t i = 0; i < n; ++i) x(i, j) = sol[i];
        }
        // M = X L^{-T}; compute M^T = L^{-1} X^T the same way and transpose.
        Matrix m(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            Vec col(n);
            for (std::size_t i = 0; i < n; ++i) col[i] = x(j, i);
            Vec sol = factor_.forward_solve(col);
            for (std::size_t i = 0; i < n; ++i) m(j, i) = sol[i];
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = 0.5 * (m(i, j) + m(j, i));
                m(i, j) = v;
                m(j, i) = v;
            }
        return std::sqrt(std::max(0.0, sym_eig_max(m, tols_)));
    }

private:
    Matrix p_;
    SpdFactor factor_;
    Tolerances tols_;
};

/// Rescale directions so each has unit dual norm. Support gaps measured over
/// such directions are distances in ||.||_P, which keeps numerator and
/// denominator of every bound comparison in the same unit.
inline std::vector<Vec> normalize_dual(const QuadNorm& norm, std::vector<Vec> dirs) {
    for (Vec& u : dirs) {
        const double d = norm.dual_norm(u);
        if (d <= 0.0) throw InvalidArgument("normalize_dual: zero direction");
        for (double& x : u) x /= d;
    }
    return dirs;
}

/// Radius of the smallest ||.||_P ball containing a box. Exact by vertex
/// enumeration up to 16 axes; beyond that a conservative closed form
/// sqrt(sum_ij |P_ij| h_i h_j) + ||c||_P is used and flagged, except that
/// diagonal weights stay exact at every size.
struct RadiusBound {
    double value = 0.0;
    bool exact = true;
};

inline RadiusBound disturbance_radius(const QuadNorm& norm, const Box& w) {
    if (norm.dim() != w.dim()) throw DimensionMismatch("disturbance_radius: dimensions differ");
    const std::size_t n = w.dim();
    const Matrix& p = norm.weight();

    bool diagonal = true;
    for (std::size_t i = 0; i < n && diagonal; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && p(i, j) != 0.0) {
                diagonal = false;
                break;
            }
    if (diagonal) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double reach = std::abs(w.center[j]) + w.halfwidth[j];
            s += p(j, j) * reach * reach;
        }
        return {std::sqrt(s), true};
    }

    if (n <= 16) {
        double best = 0.0;
        Vec v(n);
        for (std::size_t code = 0; code < (std::size_t{1} << n); ++code) {
            for (std::size_t j = 0; j < n; ++j)
                v[j] = w.center[j] + (((code >> j) & 1) ? w.halfwidth[j] : -w.halfwidth[j]);
            best = std::max(best, norm.norm(v));
        }
        return {best, true};
    }

    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            s += std::abs(p(i, j)) * w.halfwidth[i] * w.halfwidth[j];
    return {std::sqrt(s) + norm.norm(w.center), false};
}

/// A norm chosen to make the dynamics contract, with the achieved factor.
struct ShapedNorm {
    QuadNorm norm;
    double gamma = 0.0;
};

inline ShapedNorm shape_euclidean(const Matrix& a, const Tolerances& tols = default_tolerances()) {
    QuadNorm n = QuadNorm::euclidean(a.rows());
    const double g = n.induced_norm(a);
    return {std::move(n), g};
}

/// Candidate diagonals for the scaling search: the full grid {1,3,9,27,81}^n
/// when it is small enough, otherwise the all-ones diagonal plus seeded
/// log-uniform draws from [1, 100].
inline std::vector<Vec> diagonal_candidates(std::size_t dim, Rng& rng,
                                            std::size_t random_count = 200) {
    if (dim == 0) throw InvalidArgument("diagonal_candidates: dimension must be positive");
    std::vector<Vec> cands;
    if (dim <= 4) {
        const Vec levels{1.0, 3.0, 9.0, 27.0, 81.0};
        std::size_t total = 1;
        for (std::size_t j = 0; j < dim; ++j) total *= levels.size();
        for (std::size_t code = 0; code < total; ++code) {
            std::size_t c = code;
            Vec d(dim);
            for (std::size_t j = 0; j < dim; ++j) {
                d[j] = levels[c % levels.size()];
                c /= levels.size();
            }
            cands.push_back(std::move(d));
        }
        return cands;
    }
    cands.push_back(Vec(dim, 1.0));
    for (std::size_t k = 0; k < random_count; ++k) {
        Vec d(dim);
        for (double& v : d) v = std::pow(10.0, rng.uniform(0.0, 2.0));
        cands.push_back(std::move(d));
    }
    return cands;
}

/// Pick the candidate diagonal weight whose induced norm of A is smallest.
inline ShapedNorm shape_diagonal(const Matrix& a, const std::vector<Vec>& candidates,
                                 const Tolerances& tols = default_tolerances()) {
    if (candidates.empty()) throw InvalidArgument("shape_diagonal: no candidates");
    bool have = false;
    Vec best_d;
    double best_g = 0.0;
    for (const Vec& d : candidates) {
        if (d.size() != a.rows()) throw DimensionMismatch("shape_diagonal: candidate size");
        QuadNorm n = QuadNorm::diagonal(d);
        const double g = n.induced_norm(a);
        if (!have || g < best_g) {
            have = true;
            best_g = g;
            best_d = d;
        }
    }
    return {QuadNorm::diagonal(best_d), best_g};
}

/// Lyapunov-shaped norm with Q = I. Contraction below one is guaranteed for
/// any Schur-stable A, so a factor at or above one indicates numerical failure
/// and raises NotContractive.
inline ShapedNorm shape_lyapunov(const Matrix& a, const Tolerances& tols = default_tolerances()) {
    QuadNorm n = QuadNorm::lyapunov(a, tols);
    const double g = n.induced_norm(a);
    if (g >= 1.0)
        throw NotContractive("shape_lyapunov: induced norm came out at " + std::to_string(g));
    return {std::move(n), g};
}

}  // namespace mrpi
