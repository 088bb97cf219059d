#pragma once

// Closed-form guarantees on Tr(A_sigma^-1) for the greedy removal runs.

#include <cmath>
#include <string>
#include <string_view>

#include "subsel/error.hpp"
#include "subsel/linalg.hpp"
#include "subsel/tolerances.hpp"

namespace subsel {

enum class BoundName { theorem1, theorem2, corollary3, corollary6 };

constexpr std::string_view to_string(BoundName b) noexcept {
    switch (b) {
    case BoundName::theorem1: return "theorem1";
    case BoundName::theorem2: return "theorem2";
    case BoundName::corollary3: return "corollary3";
    case BoundName::corollary6: return "corollary6";
    }
    return "unknown";
}

/// floor(x + floor_guard): values just below an integer are promoted.
inline long guarded_floor(double x) { return static_cast<long>(std::floor(x + tol::floor_guard)); }

/// Smallest admissible subset size n - floor(Tr(A^-1 B)), clamped at 0.
inline long admissible_min_k(long n, double trAinvB) {
    const long k = n - guarded_floor(trAinvB);
    return k < 0 ? 0 : k;
}

/// Size-n selection from m rank-one columns: (m - n + 1) Tr(A^-1).
inline double bound_theorem1(long m, long n, double trAinv) {
    if (n < 1 || m < n || !(trAinv > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "bound_theorem1 requires m >= n >= 1 and Tr(A^-1) > 0");
    }
    return static_cast<double>(m - n + 1) * trAinv;
}

/// General bound with fixed block B:
///   Tr(A^-1) (m - n + T + 1) / (k - n + 1 + T) - (m - k) Tr(A^-2 B) / (k - n + 1 + T)
/// with T = Tr(A^-1 B).
inline double bound_theorem2(long m, long n, long k, const TraceFunctionals& tf) {
    if (n < 1 || m < 1) {
        throw Error(ErrorKind::InvalidArgument, "bound_theorem2 requires m, n >= 1");
    }
    if (k > m || k < admissible_min_k(n, tf.trAinvB)) {
        throw Error(ErrorKind::KOutOfRange, "k = " + std::to_string(k) + " outside admissible range [" +
                                                std::to_string(admissible_min_k(n, tf.trAinvB)) + ", " + std::to_string(m) + "]");
    }
    const double t = tf.trAinvB;
    const double denom = static_cast<double>(k - n + 1) + t;
    if (!(denom > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "bound_theorem2 denominator k - n + 1 + Tr(A^-1 B) is not positive");
    }
    return tf.trAinv * (static_cast<double>(m - n + 1) + t) / denom - static_cast<double>(m - k) * tf.trA2invB / denom;
}

/// Isotropic case UU^t = Id keeping r unit-norm columns: (m - n)(n - r) + n.
inline double bound_corollary3(long m, long n, long r) {
    if (r < 0 || r > n || n > m) {
        throw Error(ErrorKind::InvalidArgument, "bound_corollary3 requires 0 <= r <= n <= m");
    }
    return static_cast<double>((m - n) * (n - r) + n);
}

/// No fixed block: (m - n + 1) / (k - n + 1) Tr(A^-1).
inline double bound_corollary6(long m, long n, long k, double trAinv) {
    if (n < 1 || k < n || m < k) {
        throw Error(ErrorKind::InvalidArgument, "bound_corollary6 requires m >= k >= n >= 1");
    }
    return static_cast<double>(m - n + 1) / static_cast<double>(k - n + 1) * trAinv;
}

} // namespace subsel
