#pragma once

#include <cmath>
#include <string>

#include "errors.hpp"

namespace mrpi {

/// Which power of the contraction factor a length-N truncation charges.
/// kSeriesLength uses gamma^N, matching the tail that starts at term N;
/// kShifted uses gamma^(N+1) for consumers that index the tail from the
/// following term.
enum class TailExponent { kSeriesLength, kShifted };

inline const char* tail_exponent_name(TailExponent c) {
    return c == TailExponent::kSeriesLength ? "N" : "N+1";
}

inline void require_contraction(double gamma, const char* who) {
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw InvalidContraction(std::string(who) + ": contraction factor " +
                                 std::to_string(gamma) + " outside (0, 1)");
}

/// Closed-form distance certificate for a length-n truncation of the series:
/// every dropped term i >= n contributes at most r_w * gamma^i, so the whole
/// dropped tail fits in a ball of radius r_w * gamma^n / (1 - gamma).
inline double tail_bound(double r_w, double gamma, int n,
                         TailExponent convention = TailExponent::kSeriesLength) {
    require_contraction(gamma, "tail_bound");
    if (r_w < 0.0) throw InvalidArgument("tail_bound: negative radius");
    if (n < 0) throw InvalidArgument("tail_bound: negative truncation length");
    const int e = convention == TailExponent::kSeriesLength ? n : n + 1;
    return r_w * std::pow(gamma, e) / (1.0 - gamma);
}

/// Radius of the classical outer ball for the full series limit,
/// r_w / (1 - gamma). Equals tail_bound at n = 0.
inline double limit_radius(double r_w, double gamma) {
    require_contraction(gamma, "limit_radius");
    if (r_w < 0.0) throw InvalidArgument("limit_radius: negative radius");
    return r_w / (1.0 - gamma);
}

/// Smallest n with tail_bound(r_w, gamma, n) <= epsilon. The closed-form
/// logarithm gives the candidate; a one-step walk in each direction absorbs
/// floating-point edge cases so the bracketing
///   tail_bound(n) <= epsilon < tail_bound(n - 1)   (for n >= 1)
/// holds exactly in double arithmetic.
inline int truncation_index(double epsilon, double gamma, double r_w,
                            TailExponent convention = TailExponent::kSeriesLength) {
    if (!(epsilon > 0.0)) throw InvalidTolerance("truncation_index: tolerance must be positive");
    require_contraction(gamma, "truncation_index");
    if (r_w < 0.0) throw InvalidArgument("truncation_index: negative radius");
    if (r_w == 0.0) return 0;

    const double ratio = epsilon * (1.0 - gamma) / r_w;
    double cand;
    if (ratio >= 1.0) {
        cand = 0.0;
    } else {
        cand = std::ceil(std::log(ratio) / std::log(gamma));
        if (convention == TailExponent::kShifted) cand -= 1.0;
    }
    long long n = std::llround(std::max(0.0, cand));
    // Floating-point safety: walk to the exact boundary.
    while (n > 0 && tail_bound(r_w, gamma, static_cast<int>(n) - 1, convention) <= epsilon) --n;
    while (tail_bound(r_w, gamma, static_cast<int>(n), convention) > epsilon) ++n;
    return static_cast<int>(n);
}

}  // namespace mrpi
