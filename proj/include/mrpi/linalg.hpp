#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace mrpi {

using Vec = std::vector<double>;

/// Numerical tolerances shared by the dense kernels. One record, defaults
/// chosen for the n <= 32 regime this library targets.
struct Tolerances {
    double pivot_min = 1e-12;        // Gaussian elimination pivot floor
    double symmetry_rtol = 1e-10;    // accepted asymmetry, relative to max entry
    double eig_resid_rtol = 1e-10;   // eigen-solve off-diagonal stop, relative to ||S||_F
    double rho_rtol = 1e-9;          // spectral-radius successive-estimate gap
    double schur_margin = 1e-10;     // rho(A) must stay below 1 - schur_margin
    double qp_kkt = 1e-6;            // KKT residual certified by solve_qp
    int iteration_cap = 10000;
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tols{};
    return tols;
}

/// Dense row-major matrix of doubles. Value semantics throughout; the library
/// works at desk scale (n <= 32 for eigen-extremes, n <= 20 for Lyapunov).
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    Matrix(std::initializer_list<std::initializer_list<double>> init) {
        rows_ = init.size();
        cols_ = rows_ == 0 ? 0 : init.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw DimensionMismatch("ragged initializer list");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix diagonal(const Vec& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix& operator+=(const Matrix& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }

    Matrix& operator-=(const Matrix& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }

    Matrix& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shapes");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const double aik = a(i, k);
                if (aik == 0.0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        }
        return c;
    }

    friend Vec operator*(const Matrix& a, const Vec& x) {
        if (a.cols_ != x.size()) throw DimensionMismatch("matrix-vector shapes");
        Vec y(a.rows_, 0.0);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < a.cols_; ++j) s += a(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double v : data_) s += v * v;
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    /// Induced infinity norm (max absolute row sum).
    double inf_norm() const {
        double m = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
            m = std::max(m, s);
        }
        return m;
    }

    bool is_square() const { return rows_ == cols_; }

private:
    void require_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix shapes differ");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// ---------------------------------------------------------------------------
// Vector helpers
// ---------------------------------------------------------------------------

inline double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot product sizes");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

inline double norm_inf(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline Vec operator+(Vec a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector sum sizes");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

inline Vec operator-(Vec a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector difference sizes");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

inline Vec operator*(double s, Vec v) {
    for (double& x : v) x *= s;
    return v;
}

// ---------------------------------------------------------------------------
// Linear solves
// ---------------------------------------------------------------------------

/// Solve A * X = B by Gaussian elimination with partial pivoting, one column
/// of X per column of B. Pivots below tols.pivot_min raise SingularMatrix.
inline Matrix solve_linear_multi(Matrix a, Matrix b,
                                 const Tolerances& tols = default_tolerances()) {
    if (!a.is_square()) throw InvalidArgument("solve_linear: A must be square");
    if (a.rows() != b.rows()) throw DimensionMismatch("solve_linear: rhs rows");
    const std::size_t n = a.rows();
    const std::size_t m = b.cols();

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot_row = col;
        double pivot_mag = std::abs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double mag = std::abs(a(r, col));
            if (mag > pivot_mag) {
                pivot_mag = mag;
                pivot_row = r;
            }
        }
        if (pivot_mag <= tols.pivot_min)
            throw SingularMatrix("solve_linear: pivot below threshold at column " +
                                 std::to_string(col));
        if (pivot_row != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot_row, j));
            for (std::size_t j = 0; j < m; ++j) std::swap(b(col, j), b(pivot_row, j));
        }
        const double inv_pivot = 1.0 / a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a(r, col) * inv_pivot;
            if (f == 0.0) continue;
            a(r, col) = 0.0;
            for (std::size_t j = col + 1; j < n; ++j) a(r, j) -= f * a(col, j);
            for (std::size_t j = 0; j < m; ++j) b(r, j) -= f * b(col, j);
        }
    }
    // Back substitution.
    Matrix x(n, m);
    for (std::size_t ri = n; ri-- > 0;) {
        for (std::size_t j = 0; j < m; ++j) {
            double s = b(ri, j);
            for (std::size_t k = ri + 1; k < n; ++k) s -= a(ri, k) * x(k, j);
            x(ri, j) = s / a(ri, ri);
        }
    }
    return x;
}

inline Vec solve_linear(const Matrix& a, const Vec& b,
                        const Tolerances& tols = default_tolerances()) {
    Matrix rhs(b.size(), 1);
    for (std::size_t i = 0; i < b.size(); ++i) rhs(i, 0) = b[i];
    Matrix x = solve_linear_multi(a, rhs, tols);
    Vec out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = x(i, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Cholesky factorization
// ---------------------------------------------------------------------------

/// Lower-triangular Cholesky factor L with P = L * L^T.
struct SpdFactor {
    Matrix lower_triangular;

    std::size_t dim() const { return lower_triangular.rows(); }

    /// Solve L * y = b.
    Vec forward_solve(const Vec& b) const {
        const Matrix& l = lower_triangular;
        if (b.size() != l.rows()) throw DimensionMismatch("forward_solve size");
        Vec y(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) {
            double s = b[i];
            for (std::size_t j = 0; j < i; ++j) s -= l(i, j) * y[j];
            y[i] = s / l(i, i);
        }
        return y;
    }

    /// Solve L^T * x = y.
    Vec back_solve(const Vec& y) const {
        const Matrix& l = lower_triangular;
        if (y.size() != l.rows()) throw DimensionMismatch("back_solve size");
        Vec x(y.size());
        for (std::size_t ii = y.size(); ii-- > 0;) {
            double s = y[ii];
            for (std::size_t j = ii + 1; j < y.size(); ++j) s -= l(j, ii) * x[j];
            x[ii] = s / l(ii, ii);
        }
        return x;
    }

    /// Solve P * x = b via the two triangular solves.
    Vec solve(const Vec& b) const { return back_solve(forward_solve(b)); }
};

inline void require_symmetric(const Matrix& p, double rtol, const char* who) {
    if (!p.is_square()) throw InvalidArgument(std::string(who) + ": matrix must be square");
    const double scale = std::max(p.max_abs(), 1e-300);
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = i + 1; j < p.cols(); ++j)
            if (std::abs(p(i, j) - p(j, i)) > rtol * scale)
                throw InvalidArgument(std::string(who) + ": matrix not symmetric");
}

inline SpdFactor cholesky(const Matrix& p, const Tolerances& tols = default_tolerances()) {
    require_symmetric(p, tols.symmetry_rtol, "cholesky");
    const std::size_t n = p.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = p(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (d <= 0.0) throw NotPositiveDefinite("cholesky: nonpositive pivot at " + std::to_string(j));
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = p(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return SpdFactor{std::move(l)};
}

// ---------------------------------------------------------------------------
// Eigen-extremes
// ---------------------------------------------------------------------------

namespace detail {

/// Cyclic Jacobi eigenvalue iteration: two-sided Givens rotations annihilate
/// one off-diagonal pair at a time until the off-diagonal Frobenius mass falls
/// below rtol * ||S||_F. Converges unconditionally for symmetric input (the
/// off-diagonal mass shrinks monotonically), so every eigenvalue lands within
/// rtol * ||S||_F of the truth; the diagonal is the spectrum.
inline Vec jacobi_eigenvalues(Matrix s, double rtol, int sweep_cap) {
    const std::size_t n = s.rows();
    const double frob = s.frobenius_norm();
    if (frob == 0.0) {
        Vec zero(n, 0.0);
        return zero;
    }
    const double stop = rtol * frob;
    for (int sweep = 0; sweep < sweep_cap; ++sweep) {
        double off2 = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off2 += 2.0 * s(i, j) * s(i, j);
        if (std::sqrt(off2) <= stop) {
            Vec diag(n);
            for (std::size_t i = 0; i < n; ++i) diag[i] = s(i, i);
            return diag;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = s(p, q);
                if (apq == 0.0) continue;
                const double theta = (s(q, q) - s(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = s(k, p);
                    const double akq = s(k, q);
                    s(k, p) = c * akp - sn * akq;
                    s(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = s(p, k);
                    const double aqk = s(q, k);
                    s(p, k) = c * apk - sn * aqk;
                    s(q, k) = sn * apk + c * aqk;
                }
                s(p, q) = 0.0;
                s(q, p) = 0.0;
            }
        }
    }
    throw NoConvergence("jacobi_eigenvalues: sweep cap reached");
}

}  // namespace detail

/// Largest eigenvalue of a symmetric matrix, from the full Jacobi spectrum.
/// Jacobi is immune to the clustered-eigenvalue stagnation that defeats
/// power-type iterations, and at this library's sizes (n <= 32) a handful of
/// O(n^3) sweeps is negligible.
inline double sym_eig_max(const Matrix& s, const Tolerances& tols = default_tolerances()) {
    require_symmetric(s, tols.symmetry_rtol, "sym_eig_max");
    const Vec spectrum = detail::jacobi_eigenvalues(s, tols.eig_resid_rtol, tols.iteration_cap);
    double best = -std::numeric_limits<double>::infinity();
    for (double v : spectrum) best = std::max(best, v);
    return best;
}

/// Smallest eigenvalue of a symmetric matrix, via sym_eig_max on shift*I - S.
inline double sym_eig_min(const Matrix& s, const Tolerances& tols = default_tolerances()) {
    require_symmetric(s, tols.symmetry_rtol, "sym_eig_min");
    const double shift = s.inf_norm();
    Matrix m(s.rows(), s.rows());
    for (std::size_t i = 0; i < s.rows(); ++i)
        for (std::size_t j = 0; j < s.cols(); ++j) m(i, j) = (i == j ? shift : 0.0) - s(i, j);
    return shift - sym_eig_max(m, tols);
}

/// Spectral radius of a general square matrix via the norm-of-powers limit
/// rho(A) = lim ||A^k||^(1/k), evaluated at k = 2^m by repeated squaring with
/// running renormalization. The estimate decreases to rho from above; complex
/// dominant pairs and defective matrices are handled uniformly, and nilpotent
/// matrices terminate with an exact zero.
inline double spectral_radius(const Matrix& a, const Tolerances& tols = default_tolerances()) {
    if (!a.is_square()) throw InvalidArgument("spectral_radius: matrix must be square");
    const double f0 = a.frobenius_norm();
    if (f0 == 0.0) return 0.0;
    if (!std::isfinite(f0)) throw NoConvergence("spectral_radius: nonfinite input");

    Matrix c = a;
    c *= 1.0 / f0;
    double log_norm = std::log(f0);  // log ||A^k||_F
    double k = 1.0;
    double est_prev = f0;
    const int min_squarings = 30;
    for (int m = 1; m <= 64; ++m) {
        Matrix d = c * c;
        const double f = d.frobenius_norm();
        if (f == 0.0) return 0.0;  // nilpotent
        if (!std::isfinite(f)) throw NoConvergence("spectral_radius: overflow during squaring");
        log_norm = 2.0 * log_norm + std::log(f);
        k *= 2.0;
        d *= 1.0 / f;
        c = std::move(d);
        const double est = std::exp(log_norm / k);
        if (m >= min_squarings && std::abs(est - est_prev) <= tols.rho_rtol * std::max(est, 1e-300))
            return est;
        est_prev = est;
    }
    return est_prev;
}

/// Random square matrix with iid uniform[-1, 1] entries, rescaled so its
/// spectral radius equals rho_target. Draws again on the (measure-zero) event
/// of a numerically nilpotent draw.
inline Matrix random_schur_matrix(std::size_t n, double rho_target, Rng& rng,
                                  const Tolerances& tols = default_tolerances()) {
    if (n == 0) throw InvalidArgument("random_schur_matrix: dimension must be positive");
    if (rho_target <= 0.0) throw InvalidArgument("random_schur_matrix: target radius must be positive");
    for (int attempt = 0; attempt < 100; ++attempt) {
        Matrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
        const double rho = spectral_radius(a, tols);
        if (rho <= 1e-8) continue;
        a *= rho_target / rho;
        return a;
    }
    throw NoConvergence("random_schur_matrix: repeated numerically nilpotent draws");
}

/// Random orthogonal matrix: Gaussian draw orthonormalized column by column
/// with twice-applied modified Gram-Schmidt. Deterministic given the stream.
inline Matrix random_orthogonal_matrix(std::size_t n, Rng& rng) {
    if (n == 0) throw InvalidArgument("random_orthogonal_matrix: dimension must be positive");
    for (int attempt = 0; attempt < 100; ++attempt) {
        Matrix g(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.gaussian();
        bool ok = true;
        for (std::size_t j = 0; j < n && ok; ++j) {
            Vec col(n);
            for (std::size_t i = 0; i < n; ++i) col[i] = g(i, j);
            for (int sweep = 0; sweep < 2; ++sweep)
                for (std::size_t p = 0; p < j; ++p) {
                    double proj = 0.0;
                    for (std::size_t i = 0; i < n; ++i) proj += g(i, p) * col[i];
                    for (std::size_t i = 0; i < n; ++i) col[i] -= proj * g(i, p);
                }
            const double len = norm2(col);
            if (len < 1e-8) {
                ok = false;  // degenerate draw; retry the whole matrix
                break;
            }
            for (std::size_t i = 0; i < n; ++i) g(i, j) = col[i] / len;
        }
        if (ok) return g;
    }
    throw NoConvergence("random_orthogonal_matrix: repeated degenerate draws");
}

/// Random normal Schur matrix with every singular value equal to rho: a
/// scaled random orthogonal matrix. Its spectral radius, Euclidean induced
/// norm, and asymptotic decay rate all coincide at rho, which makes it the
/// reference generator for slope-vs-contraction checks.
inline Matrix random_normal_schur_matrix(std::size_t n, double rho, Rng& rng) {
    if (rho <= 0.0)
        throw InvalidArgument("random_normal_schur_matrix: target radius must be positive");
    Matrix a = random_orthogonal_matrix(n, rng);
    a *= rho;
    return a;
}

// ---------------------------------------------------------------------------
// Discrete Lyapunov equation
// ---------------------------------------------------------------------------

namespace detail {

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double aij = a(i, j);
            if (aij == 0.0) continue;
            for (std::size_t r = 0; r < b.rows(); ++r)
                for (std::size_t c = 0; c < b.cols(); ++c)
                    k(i * b.rows() + r, j * b.cols() + c) = aij * b(r, c);
        }
    return k;
}

}  // namespace detail

/// Solve A^T P A - P = -Q for P, via the vectorized n^2 x n^2 linear system
/// (I - A^T (x) A^T) vec(P) = vec(Q). Requires rho(A) < 1 and Q symmetric
/// positive definite; the result is symmetrized against roundoff.
inline Matrix solve_discrete_lyapunov(const Matrix& a, const Matrix& q,
                                      const Tolerances& tols = default_tolerances()) {
    if (!a.is_square()) throw InvalidArgument("solve_discrete_lyapunov: A must be square");
    if (q.rows() != a.rows() || q.cols() != a.cols())
        throw DimensionMismatch("solve_discrete_lyapunov: Q shape");
    require_symmetric(q, tols.symmetry_rtol, "solve_discrete_lyapunov");
    const double rho = spectral_radius(a, tols);
    if (rho >= 1.0 - tols.schur_margin)
        throw NotSchurStable("solve_discrete_lyapunov: rho(A) = " + std::to_string(rho));

    const std::size_t n = a.rows();
    const Matrix at = a.transpose();
    Matrix system = detail::kron(at, at);
    for (std::size_t i = 0; i < n * n; ++i)
        for (std::size_t j = 0; j < n * n; ++j) system(i, j) = (i == j ? 1.0 : 0.0) - system(i, j);

    // Column-major vec; the Kronecker identity vec(A^T P A) = (A^T (x) A^T) vec(P).
    Vec rhs(n * n);
    for (std::size_t col = 0; col < n; ++col)
        for (std::size_t row = 0; row < n; ++row) rhs[col * n + row] = q(row, col);
    Vec sol = solve_linear(system, rhs, tols);

    Matrix p(n, n);
    for (std::size_t col = 0; col < n; ++col)
        for (std::size_t row = 0; row < n; ++row) p(row, col) = sol[col * n + row];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (p(i, j) + p(j, i));
            p(i, j) = v;
            p(j, i) = v;
        }
    return p;
}

// ---------------------------------------------------------------------------
// Box-constrained quadratic program
// ---------------------------------------------------------------------------

/// Minimize 0.5 z^T H z + g^T z subject to lower <= z <= upper, H symmetric
/// positive definite. Primal active-set walk: solve the equality QP on the
/// free variables, step along the segment to the first blocking bound, and
/// release the bound with the most negative multiplier once stationary.
/// Infinite bounds are permitted. Variables with lower == upper are fixed up
/// front.
inline Vec solve_qp(const Matrix& h, const Vec& g, const Vec& lower, const Vec& upper,
                    const Tolerances& tols = default_tolerances()) {
    const std::size_t n = g.size();
    if (!h.is_square() || h.rows() != n) throw DimensionMismatch("solve_qp: H shape");
    if (lower.size() != n || upper.size() != n) throw DimensionMismatch("solve_qp: bound sizes");
    require_symmetric(h, tols.symmetry_rtol, "solve_qp");
    for (std::size_t i = 0; i < n; ++i)
        if (lower[i] > upper[i]) throw Infeasible("solve_qp: lower bound exceeds upper bound");

    enum class State { Free, AtLower, AtUpper, Fixed };
    std::vector<State> state(n, State::Free);
    Vec z(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (lower[i] == upper[i]) {
            state[i] = State::Fixed;
            z[i] = lower[i];
        } else {
            z[i] = std::clamp(0.0, lower[i], upper[i]);
            if (z[i] == lower[i] && std::isfinite(lower[i])) state[i] = State::AtLower;
            else if (z[i] == upper[i] && std::isfinite(upper[i])) state[i] = State::AtUpper;
        }
    }

    const double grad_scale = std::max({h.max_abs(), norm_inf(g), 1.0});
    const double release_tol = 1e-12 * grad_scale;
    const int cap = 100 + 20 * static_cast<int>(n);

    for (int it = 0; it < cap; ++it) {
        std::vector<std::size_t> free;
        for (std::size_t i = 0; i < n; ++i)
            if (state[i] == State::Free) free.push_back(i);

        // Equality-QP target on the free set: H_ff z* = -(g_f + H_fa z_a).
        Vec target = z;
        if (!free.empty()) {
            Matrix hff(free.size(), free.size());
            Vec rhs(free.size());
            for (std::size_t r = 0; r < free.size(); ++r) {
                double s = -g[free[r]];
                for (std::size_t j = 0; j < n; ++j)
                    if (state[j] != State::Free) s -= h(free[r], j) * z[j];
                rhs[r] = s;
                for (std::size_t c = 0; c < free.size(); ++c) hff(r, c) = h(free[r], free[c]);
            }
            Vec zf = solve_linear(hff, rhs, tols);
            for (std::size_t r = 0; r < free.size(); ++r) target[free[r]] = zf[r];
        }

        // Step toward the target, stopping at the first blocking bound.
        double alpha = 1.0;
        std::size_t blocker = n;
        State blocker_state = State::Free;
        for (std::size_t r = 0; r < free.size(); ++r) {
            const std::size_t i = free[r];
            const double d = target[i] - z[i];
            if (d > 0.0 && std::isfinite(upper[i])) {
                const double a = (upper[i] - z[i]) / d;
                if (a < alpha) {
                    alpha = a;
                    blocker = i;
                    blocker_state = State::AtUpper;
                }
            } else if (d < 0.0 && std::isfinite(lower[i])) {
                const double a = (lower[i] - z[i]) / d;
                if (a < alpha) {
                    alpha = a;
                    blocker = i;
                    blocker_state = State::AtLower;
                }
            }
        }
        for (std::size_t r = 0; r < free.size(); ++r) {
            const std::size_t i = free[r];
            z[i] += alpha * (target[i] - z[i]);
        }
        if (blocker < n) {
            z[blocker] = blocker_state == State::AtUpper ? upper[blocker] : lower[blocker];
            state[blocker] = blocker_state;
            continue;
        }

        // Stationary on the working set; check multipliers of the active bounds.
        Vec grad = h * z;
        for (std::size_t i = 0; i < n; ++i) grad[i] += g[i];
        double worst = -release_tol;
        std::size_t release = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (state[i] == State::AtLower && grad[i] < worst) {
                worst = grad[i];
                release = i;
            } else if (state[i] == State::AtUpper && -grad[i] < worst) {
                worst = -grad[i];
                release = i;
            }
        }
        if (release == n) return z;
        state[release] = State::Free;
    }
    throw NoConvergence("solve_qp: active-set iteration cap reached");
}

}  // namespace mrpi
