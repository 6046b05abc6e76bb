#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bound.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "norms.hpp"
#include "outer_set.hpp"
#include "rng.hpp"
#include "series.hpp"
#include "sets.hpp"

namespace mrpi {

/// Discrete-time controlled plant x+ = A x + B u (+ w).
struct Plant {
    Matrix a;
    Matrix b;

    Plant(Matrix a_in, Matrix b_in) : a(std::move(a_in)), b(std::move(b_in)) {
        if (!a.is_square()) throw InvalidArgument("Plant: A must be square");
        if (b.rows() != a.rows()) throw DimensionMismatch("Plant: B rows");
        if (b.cols() == 0) throw InvalidArgument("Plant: B needs at least one input");
    }

    std::size_t dim_x() const { return a.rows(); }
    std::size_t dim_u() const { return b.cols(); }
};

/// Infinite-horizon discrete LQR gain by Riccati value iteration from P = Q,
/// converged to relative tolerance 1e-10 (cap 10,000 sweeps). Returns K with
/// u = K x and A + B K Schur stable; a diverging iteration reports the pair
/// as not stabilizable.
inline Matrix dlqr_gain(const Plant& plant, const Matrix& q, const Matrix& r,
                        const Tolerances& tols = default_tolerances()) {
    const std::size_t n = plant.dim_x();
    const std::size_t m = plant.dim_u();
    if (q.rows() != n || q.cols() != n) throw DimensionMismatch("dlqr_gain: Q shape");
    if (r.rows() != m || r.cols() != m) throw DimensionMismatch("dlqr_gain: R shape");
    require_symmetric(q, tols.symmetry_rtol, "dlqr_gain(Q)");
    cholesky(r, tols);  // R must be positive definite

    const Matrix& a = plant.a;
    const Matrix& b = plant.b;
    const Matrix at = a.transpose();
    const Matrix bt = b.transpose();

    Matrix p = q;
    Matrix k(m, n);
    bool converged = false;
    for (int it = 0; it < 10000; ++it) {
        // K = (R + B^T P B)^{-1} B^T P A, then P+ = Q + A^T P (A - B K).
        Matrix s = r + bt * p * b;
        Matrix rhs = bt * p * a;
        k = solve_linear_multi(s, rhs, tols);
        Matrix p_next = q + at * p * (a - b * k);
        // Symmetrize against drift.
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = 0.5 * (p_next(i, j) + p_next(j, i));
                p_next(i, j) = v;
                p_next(j, i) = v;
            }
        const double diff = (p_next - p).max_abs();
        const double scale = std::max(1.0, p_next.max_abs());
        p = std::move(p_next);
        if (p.max_abs() > 1e100)
            throw NotStabilizable("dlqr_gain: Riccati iteration diverged");
        if (diff <= 1e-10 * scale) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NoConvergence("dlqr_gain: Riccati iteration cap reached");

    k *= -1.0;  // convention u = K x
    const Matrix a_cl = a + b * k;
    if (spectral_radius(a_cl, tols) >= 1.0 - tols.schur_margin)
        throw NotStabilizable("dlqr_gain: closed loop failed the stability check");
    return k;
}

enum class TubeMethod { kBaseline, kCertified };

inline const char* tube_method_name(TubeMethod m) {
    return m == TubeMethod::kBaseline ? "baseline" : "certified";
}

/// Cross-section of the classical design: no explicit truncation, just the
/// worst-case ball of radius r_w / (1 - gamma). Identical to the certified
/// set at truncation length zero.
inline OuterSet baseline_cross_section(const Matrix& a_cl, const Box& w,
                                       const ShapedNorm& shaped,
                                       TailExponent convention = TailExponent::kSeriesLength) {
    return certified_outer_set(a_cl, w, shaped, 0, convention);
}

/// Tightened state and input boxes for a tube with cross-section Z:
///   x_tight = X (-) Z,   u_tight = U (-) K Z.
/// Box minuends make the erosion exact per axis: the upper face moves in by
/// h_Z(e_j) and the lower face by h_Z(-e_j). For the input box the direction
/// is K^T e_j, which maps the core exactly and charges the tail ball its dual
/// norm — for one input this is exactly the spec of |K e| over the ball.
struct TightenedBoxes {
    Box x_tight;
    Box u_tight;
};

inline Box erode_box(const Box& outer, const std::vector<Vec>& face_dirs, const OuterSet& z,
                     const char* what) {
    Vec lo(outer.dim()), hi(outer.dim());
    for (std::size_t j = 0; j < outer.dim(); ++j) {
        hi[j] = outer.center[j] + outer.halfwidth[j] - support(z, face_dirs[2 * j]);
        lo[j] = outer.center[j] - outer.halfwidth[j] + support(z, face_dirs[2 * j + 1]);
        if (hi[j] < lo[j])
            throw InfeasibleTightening(std::string(what) + ": axis " + std::to_string(j) +
                                       " erodes to emptiness");
    }
    Vec center(outer.dim()), hw(outer.dim());
    for (std::size_t j = 0; j < outer.dim(); ++j) {
        center[j] = 0.5 * (lo[j] + hi[j]);
        hw[j] = 0.5 * (hi[j] - lo[j]);
    }
    return Box(std::move(center), std::move(hw));
}

inline TightenedBoxes tighten(const Box& x, const Box& u, const Matrix& k_gain,
                              const OuterSet& z) {
    if (x.dim() != z.dim()) throw DimensionMismatch("tighten: state box dimension");
    if (k_gain.cols() != z.dim() || k_gain.rows() != u.dim())
        throw DimensionMismatch("tighten: gain shape");

    std::vector<Vec> x_dirs;
    for (std::size_t j = 0; j < x.dim(); ++j) {
        Vec plus(x.dim(), 0.0), minus(x.dim(), 0.0);
        plus[j] = 1.0;
        minus[j] = -1.0;
        x_dirs.push_back(std::move(plus));
        x_dirs.push_back(std::move(minus));
    }
    Box x_tight = erode_box(x, x_dirs, z, "tighten(state)");

    const Matrix kt = k_gain.transpose();
    std::vector<Vec> u_dirs;
    for (std::size_t j = 0; j < u.dim(); ++j) {
        Vec e(u.dim(), 0.0);
        e[j] = 1.0;
        u_dirs.push_back(kt * e);
        e[j] = -1.0;
        u_dirs.push_back(kt * e);
    }
    Box u_tight = erode_box(u, u_dirs, z, "tighten(input)");
    return {std::move(x_tight), std::move(u_tight)};
}

/// A complete tube design: feedback gain, invariant cross-section, and the
/// constraint boxes the nominal problem must respect.
struct TubeDesign {
    std::string name;
    TubeMethod method = TubeMethod::kCertified;
    Matrix k_gain;
    Matrix a_cl;
    OuterSet cross_section;
    Box x_tight;
    Box u_tight;
};

/// Assemble a design from a stabilizing gain and a shaped norm. truncation is
/// ignored for the baseline method (its cross-section is the length-zero
/// certificate).
inline TubeDesign make_tube_design(const Plant& plant, const Matrix& k_gain,
                                   const ShapedNorm& shaped, const Box& x, const Box& u,
                                   const Box& w, TubeMethod method, int truncation,
                                   TailExponent convention = TailExponent::kSeriesLength) {
    Matrix a_cl = plant.a + plant.b * k_gain;
    const int n = method == TubeMethod::kBaseline ? 0 : truncation;
    OuterSet z = certified_outer_set(a_cl, w, shaped, n, convention);
    TightenedBoxes tight = tighten(x, u, k_gain, z);
    return TubeDesign{tube_method_name(method), method,        k_gain,
                      std::move(a_cl),          std::move(z),  std::move(tight.x_tight),
                      std::move(tight.u_tight)};
}

// ---------------------------------------------------------------------------
// Nominal MPC
// ---------------------------------------------------------------------------

struct MpcConfig {
    int horizon = 10;
    Matrix q;
    Matrix r;
};

struct NominalSolution {
    std::vector<Vec> v;      // horizon entries
    std::vector<Vec> u_nom;  // horizon entries, u_k = K x_k + v_k
    std::vector<Vec> x_nom;  // horizon + 1 entries
};

namespace detail {

/// Per-step admissible boxes for v under the pre-stabilized parameterization:
/// any v with v_k in box k keeps every x_k in x_tight and every u_k in
/// u_tight, proven by interval arithmetic. Two passes keep the conservatism
/// mild. Pass one steers a single center path through the exact per-step
/// rooms (empty room => infeasible). Pass two grows symmetric widths around
/// that path: the interval envelope they induce is linear in a common scale
/// factor, so the largest sound factor is a closed-form minimum of
/// margin/slope ratios over every face of every step. A one-step horizon has
/// no envelope feedback, so its box is the exact admissible interval.
inline std::vector<Box> admissible_input_boxes(const Matrix& a_cl, const Matrix& b,
                                               const Matrix& k_gain, const Box& x_tight,
                                               const Box& u_tight, const Vec& x0, int horizon) {
    const std::size_t n = x_tight.dim();
    const std::size_t m = u_tight.dim();
    const std::size_t h = static_cast<std::size_t>(horizon);

    // ---- Pass 1: center path and maximal point-envelope rooms. -------------
    std::vector<Vec> centers(h, Vec(m, 0.0));
    std::vector<Vec> widths(h, Vec(m, 0.0));  // room halfwidths around the center
    {
        Vec sc = x0;
        for (std::size_t k = 0; k < h; ++k) {
            Vec lo(m), hi(m);
            for (std::size_t j = 0; j < m; ++j) {
                double kc = 0.0;
                for (std::size_t i = 0; i < n; ++i) kc += k_gain(j, i) * sc[i];
                hi[j] = u_tight.center[j] + u_tight.halfwidth[j] - kc;
                lo[j] = u_tight.center[j] - u_tight.halfwidth[j] - kc;
            }
            if (m == 1) {
                for (std::size_t i = 0; i < n; ++i) {
                    double ac = 0.0;
                    for (std::size_t jj = 0; jj < n; ++jj) ac += a_cl(i, jj) * sc[jj];
                    const double bi = b(i, 0);
                    const double room_hi = x_tight.center[i] + x_tight.halfwidth[i] - ac;
                    const double room_lo = x_tight.center[i] - x_tight.halfwidth[i] - ac;
                    if (bi == 0.0) {
                        if (room_hi < 0.0 || room_lo > 0.0)
                            throw InfeasibleTightening(
                                "nominal center path exits the state box at step " +
                                std::to_string(k));
                        continue;
                    }
                    double vlo = room_lo / bi;
                    double vhi = room_hi / bi;
                    if (bi < 0.0) std::swap(vlo, vhi);
                    lo[0] = std::max(lo[0], vlo);
                    hi[0] = std::min(hi[0], vhi);
                }
                if (hi[0] < lo[0])
                    throw InfeasibleTightening("no admissible nominal input at step " +
                                               std::to_string(k));
                centers[k][0] = 0.5 * (lo[0] + hi[0]);
                widths[k][0] = 0.5 * (hi[0] - lo[0]);
            } else {
                for (std::size_t j = 0; j < m; ++j) {
                    if (hi[j] < lo[j])
                        throw InfeasibleTightening("no admissible nominal input at step " +
                                                   std::to_string(k));
                    centers[k][j] = 0.5 * (lo[j] + hi[j]);
                    widths[k][j] = 0.5 * (hi[j] - lo[j]);
                }
                // Shrink toward the center until every state row accepts the
                // whole box (conservative for coupled inputs).
                double lambda = 1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    double ac = 0.0;
                    for (std::size_t jj = 0; jj < n; ++jj) ac += a_cl(i, jj) * sc[jj];
                    double bc = 0.0, bw = 0.0;
                    for (std::size_t j = 0; j < m; ++j) {
                        bc += b(i, j) * centers[k][j];
                        bw += std::abs(b(i, j)) * widths[k][j];
                    }
                    const double room_hi =
                        x_tight.center[i] + x_tight.halfwidth[i] - ac - bc;
                    const double room_lo =
                        ac + bc - (x_tight.center[i] - x_tight.halfwidth[i]);
                    if (room_hi < 0.0 || room_lo < 0.0)
                        throw InfeasibleTightening(
                            "nominal center path exits the state box at step " +
                            std::to_string(k));
                    if (bw > 0.0) lambda = std::min({lambda, room_hi / bw, room_lo / bw});
                }
                for (std::size_t j = 0; j < m; ++j) widths[k][j] *= lambda;
            }
            // Advance the center path.
            Vec next(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                double c = 0.0;
                for (std::size_t jj = 0; jj < n; ++jj) c += a_cl(i, jj) * sc[jj];
                for (std::size_t j = 0; j < m; ++j) c += b(i, j) * centers[k][j];
                next[i] = c;
            }
            sc = std::move(next);
        }
    }

    // ---- Pass 2: the largest common width scale the envelope tolerates. ----
    // With v_k = centers[k] +- alpha * widths[k], the state-envelope spread is
    // alpha * spread_k with spread_0 = 0 and
    //   spread_{k+1} = |A_cl| spread_k + |B| widths_k.
    // Every face constraint is then margin >= alpha * slope.
    double alpha = 1.0;
    {
        Vec sc = x0;
        Vec spread(n, 0.0);  // per unit alpha
        for (std::size_t k = 0; k < h; ++k) {
            for (std::size_t j = 0; j < m; ++j) {
                double kc = 0.0, kw = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    kc += k_gain(j, i) * sc[i];
                    kw += std::abs(k_gain(j, i)) * spread[i];
                }
                const double up =
                    u_tight.center[j] + u_tight.halfwidth[j] - kc - centers[k][j];
                const double dn =
                    kc + centers[k][j] - (u_tight.center[j] - u_tight.halfwidth[j]);
                const double slope = kw + widths[k][j];
                if (slope > 0.0) alpha = std::min({alpha, up / slope, dn / slope});
            }
            for (std::size_t i = 0; i < n; ++i) {
                double ac = 0.0, aw = 0.0;
                for (std::size_t jj = 0; jj < n; ++jj) {
                    ac += a_cl(i, jj) * sc[jj];
                    aw += std::abs(a_cl(i, jj)) * spread[jj];
                }
                double bc = 0.0, bw = 0.0;
                for (std::size_t j = 0; j < m; ++j) {
                    bc += b(i, j) * centers[k][j];
                    bw += std::abs(b(i, j)) * widths[k][j];
                }
                const double up = x_tight.center[i] + x_tight.halfwidth[i] - ac - bc;
                const double dn = ac + bc - (x_tight.center[i] - x_tight.halfwidth[i]);
                const double slope = aw + bw;
                if (slope > 0.0) alpha = std::min({alpha, up / slope, dn / slope});
            }
            // Advance the center path and the unit-alpha spread.
            Vec next_c(n, 0.0), next_s(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                double c = 0.0, s = 0.0;
                for (std::size_t jj = 0; jj < n; ++jj) {
                    c += a_cl(i, jj) * sc[jj];
                    s += std::abs(a_cl(i, jj)) * spread[jj];
                }
                for (std::size_t j = 0; j < m; ++j) {
                    c += b(i, j) * centers[k][j];
                    s += std::abs(b(i, j)) * widths[k][j];
                }
                next_c[i] = c;
                next_s[i] = s;
            }
            sc = std::move(next_c);
            spread = std::move(next_s);
        }
    }
    alpha = std::max(0.0, alpha);

    std::vector<Box> out;
    out.reserve(h);
    for (std::size_t k = 0; k < h; ++k) {
        Vec hw(m);
        for (std::size_t j = 0; j < m; ++j) hw[j] = alpha * widths[k][j];
        out.emplace_back(centers[k], std::move(hw));
    }
    return out;
}

}  // namespace detail

/// Finite-horizon nominal problem in the pre-stabilized parameterization
/// u_k = K x_k + v_k: minimize the stage cost sum over the horizon subject to
/// the tightened boxes, condensed to a box QP in the stacked v. State boxes
/// are enforced through the admissible input boxes, so every QP-feasible v is
/// trajectory-feasible by construction.
inline NominalSolution solve_nominal_mpc(const Plant& plant, const Matrix& k_gain,
                                         const MpcConfig& cfg, const Box& x_tight,
                                         const Box& u_tight, const Vec& x0,
                                         const Tolerances& tols = default_tolerances()) {
    const std::size_t n = plant.dim_x();
    const std::size_t m = plant.dim_u();
    if (cfg.horizon < 1) throw InvalidArgument("solve_nominal_mpc: horizon must be >= 1");
    if (x0.size() != n) throw DimensionMismatch("solve_nominal_mpc: x0 size");
    if (!x_tight.contains(x0, 1e-12))
        throw InfeasibleTightening("solve_nominal_mpc: initial nominal state outside x_tight");
    if (k_gain.rows() != m || k_gain.cols() != n)
        throw DimensionMismatch("solve_nominal_mpc: gain shape");

    const int h = cfg.horizon;
    const Matrix a_cl = plant.a + plant.b * k_gain;
    const std::vector<Box> vboxes =
        detail::admissible_input_boxes(a_cl, plant.b, k_gain, x_tight, u_tight, x0, h);

    // Powers of the closed loop and the input-to-state map blocks.
    std::vector<Matrix> phi(static_cast<std::size_t>(h) + 1, Matrix::identity(n));
    for (int k = 1; k <= h; ++k) phi[static_cast<std::size_t>(k)] = a_cl * phi[static_cast<std::size_t>(k) - 1];

    const std::size_t nv = static_cast<std::size_t>(h) * m;
    // gamma_blocks[k][j] = phi[k-1-j] * B for j < k; x_k = phi[k] x0 + sum_j block v_j.
    auto gamma_block = [&](int k, int j) { return phi[static_cast<std::size_t>(k - 1 - j)] * plant.b; };

    Matrix hess(nv, nv);
    Vec grad(nv, 0.0);

    // Stage terms: x_k^T Q x_k + u_k^T R u_k for k = 0 .. h-1.
    for (int k = 0; k < h; ++k) {
        // Theta_k maps stacked v to u_k: K * gamma_block(k, j) for j < k, plus
        // identity at block k. x-part Gamma_k: gamma_block(k, j) for j < k.
        std::vector<Matrix> theta(static_cast<std::size_t>(h), Matrix(m, m));
        std::vector<Matrix> gma(static_cast<std::size_t>(h), Matrix(n, m));
        for (int j = 0; j < k; ++j) {
            gma[static_cast<std::size_t>(j)] = gamma_block(k, j);
            theta[static_cast<std::size_t>(j)] = k_gain * gma[static_cast<std::size_t>(j)];
        }
        theta[static_cast<std::size_t>(k)] = Matrix::identity(m);

        const Vec xk_free = phi[static_cast<std::size_t>(k)] * x0;
        const Vec uk_free = k_gain * xk_free;

        for (int j1 = 0; j1 <= k; ++j1) {
            const Matrix qg = (j1 < k) ? cfg.q * gma[static_cast<std::size_t>(j1)] : Matrix(n, m);
            const Matrix rt = cfg.r * theta[static_cast<std::size_t>(j1)];
            for (int j2 = 0; j2 <= k; ++j2) {
                Matrix contrib(m, m);
                if (j1 < k && j2 < k)
                    contrib += gma[static_cast<std::size_t>(j2)].transpose() * qg;
                contrib += theta[static_cast<std::size_t>(j2)].transpose() * rt;
                // hess block (j2, j1) accumulates 2 * contrib^T? Quadratic form
                // v^T M v with M = sum blocks; keep symmetric accumulation.
                for (std::size_t r0 = 0; r0 < m; ++r0)
                    for (std::size_t c0 = 0; c0 < m; ++c0)
                        hess(static_cast<std::size_t>(j2) * m + r0,
                             static_cast<std::size_t>(j1) * m + c0) += 2.0 * contrib(r0, c0);
            }
            // Gradient: 2 * (Gamma^T Q x_free + Theta^T R u_free).
            Vec gq(m, 0.0);
            if (j1 < k) {
                const Vec qx = cfg.q * xk_free;
                for (std::size_t r0 = 0; r0 < m; ++r0)
                    for (std::size_t i = 0; i < n; ++i)
                        gq[r0] += gma[static_cast<std::size_t>(j1)](i, r0) * qx[i];
            }
            const Vec ru = cfg.r * uk_free;
            for (std::size_t r0 = 0; r0 < m; ++r0)
                for (std::size_t i = 0; i < m; ++i)
                    gq[r0] += theta[static_cast<std::size_t>(j1)](i, r0) * ru[i];
            for (std::size_t r0 = 0; r0 < m; ++r0)
                grad[static_cast<std::size_t>(j1) * m + r0] += 2.0 * gq[r0];
        }
    }
    // Exact symmetrization against accumulation roundoff.
    for (std::size_t i = 0; i < nv; ++i)
        for (std::size_t j = i + 1; j < nv; ++j) {
            const double v = 0.5 * (hess(i, j) + hess(j, i));
            hess(i, j) = v;
            hess(j, i) = v;
        }

    Vec lo(nv), hi(nv);
    for (int k = 0; k < h; ++k)
        for (std::size_t j = 0; j < m; ++j) {
            lo[static_cast<std::size_t>(k) * m + j] =
                vboxes[static_cast<std::size_t>(k)].center[j] -
                vboxes[static_cast<std::size_t>(k)].halfwidth[j];
            hi[static_cast<std::size_t>(k) * m + j] =
                vboxes[static_cast<std::size_t>(k)].center[j] +
                vboxes[static_cast<std::size_t>(k)].halfwidth[j];
        }

    const Vec vflat = solve_qp(hess, grad, lo, hi, tols);

    NominalSolution sol;
    sol.v.resize(static_cast<std::size_t>(h), Vec(m));
    sol.u_nom.resize(static_cast<std::size_t>(h), Vec(m));
    sol.x_nom.resize(static_cast<std::size_t>(h) + 1);
    sol.x_nom[0] = x0;
    for (int k = 0; k < h; ++k) {
        for (std::size_t j = 0; j < m; ++j)
            sol.v[static_cast<std::size_t>(k)][j] = vflat[static_cast<std::size_t>(k) * m + j];
        sol.u_nom[static_cast<std::size_t>(k)] =
            k_gain * sol.x_nom[static_cast<std::size_t>(k)] + sol.v[static_cast<std::size_t>(k)];
        sol.x_nom[static_cast<std::size_t>(k) + 1] =
            plant.a * sol.x_nom[static_cast<std::size_t>(k)] +
            plant.b * sol.u_nom[static_cast<std::size_t>(k)];
    }
    return sol;
}

// ---------------------------------------------------------------------------
// Closed-loop simulation
// ---------------------------------------------------------------------------

struct StepRecord {
    int k = 0;
    Vec x_real;
    Vec x_nom;
    Vec u_nom;
    Vec u_applied;
    Vec w;
};

struct TrajectoryLog {
    int rollout = 0;
    std::vector<StepRecord> steps;
    int violations = 0;          // steps where x_real left X or u_applied left U
    double max_error_norm = 0.0; // worst ||x_real - x_nom||_P over the rollout
    bool error_contained = true; // sampled membership of the error in Z at every step
};

/// Receding-horizon tube rollouts. Each rollout r draws its disturbances from
/// sub-seed (seed + r); the nominal trajectory evolves under its own model and
/// the real system receives u = u_nom + K (x_real - x_nom).
inline std::vector<TrajectoryLog> simulate_closed_loop(
    const Plant& plant, const TubeDesign& design, const MpcConfig& cfg, const Box& x_box,
    const Box& u_box, const Box& w_box, const Vec& x0, int steps, int rollouts,
    std::uint64_t seed, const std::vector<Vec>& membership_dirs,
    const Tolerances& tols = default_tolerances()) {
    if (steps < 1 || rollouts < 1)
        throw InvalidArgument("simulate_closed_loop: steps and rollouts must be positive");
    if (w_box.dim() != plant.dim_x())
        throw DimensionMismatch("simulate_closed_loop: disturbance dimension");

    std::vector<TrajectoryLog> logs;
    logs.reserve(static_cast<std::size_t>(rollouts));
    for (int r = 0; r < rollouts; ++r) {
        Rng rng(seed + static_cast<std::uint64_t>(r));
        TrajectoryLog log;
        log.rollout = r;
        Vec x_real = x0;
        Vec x_nom = x0;
        for (int k = 0; k < steps; ++k) {
            const NominalSolution sol = solve_nominal_mpc(plant, design.k_gain, cfg,
                                                          design.x_tight, design.u_tight,
                                                          x_nom, tols);
            const Vec& u_nom = sol.u_nom.front();
            Vec error = x_real - x_nom;
            Vec u_applied = u_nom + design.k_gain * error;
            Vec w = w_box.sample(rng);

            StepRecord rec;
            rec.k = k;
            rec.x_real = x_real;
            rec.x_nom = x_nom;
            rec.u_nom = u_nom;
            rec.u_applied = u_applied;
            rec.w = w;
            log.steps.push_back(std::move(rec));

            if (!x_box.contains(x_real, 1e-9) || !u_box.contains(u_applied, 1e-9))
                ++log.violations;
            log.max_error_norm =
                std::max(log.max_error_norm, design.cross_section.norm.norm(error));
            if (!contains_sampled(design.cross_section, error, membership_dirs))
                log.error_contained = false;

            x_real = plant.a * x_real + plant.b * u_applied + w;
            x_nom = plant.a * x_nom + plant.b * u_nom;
        }
        logs.push_back(std::move(log));
    }
    return logs;
}

// ---------------------------------------------------------------------------
// Feasible-set comparison
// ---------------------------------------------------------------------------

struct DesignReport {
    std::string design;
    Box x_tight;
    double volume = 0.0;
};

inline std::vector<DesignReport> feasible_set_report(const std::vector<TubeDesign>& designs) {
    if (designs.size() < 2)
        throw InvalidArgument("feasible_set_report: needs at least two designs");
    std::vector<DesignReport> out;
    out.reserve(designs.size());
    for (const TubeDesign& d : designs)
        out.push_back(DesignReport{d.name, d.x_tight, d.x_tight.volume()});
    return out;
}

}  // namespace mrpi
