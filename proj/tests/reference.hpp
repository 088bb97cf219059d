#pragma once

// Test-only reference computations. Everything here uses full-pivot LU
// inverses and explicitly formed matrices so it shares no code path with
// the Cholesky/Woodbury machinery it checks.

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/LU>

namespace ref {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline std::optional<Matrix> inverse(const Matrix& a) {
    Eigen::FullPivLU<Matrix> lu(a);
    lu.setThreshold(1e-11);
    if (!lu.isInvertible()) {
        return std::nullopt;
    }
    return lu.inverse();
}

inline double trace_inverse(const Matrix& a) {
    const auto inv = inverse(a);
    return inv ? inv->trace() : std::numeric_limits<double>::infinity();
}

inline double max_rel_diff(const Matrix& x, const Matrix& y) {
    const double scale = std::max(y.cwiseAbs().maxCoeff(), 1e-300);
    return (x - y).cwiseAbs().maxCoeff() / scale;
}

struct Margins {
    double alpha = 0.0;
    std::vector<double> margin; // indexed like `active`
};

/// alpha and certificate margins from explicitly formed A^-1 and A^-2.
inline Margins margins(const Matrix& a, const Matrix& fixed, const std::vector<Matrix>& blocks, const std::vector<int>& active) {
    const Matrix ainv = *inverse(a);
    const Matrix a2 = ainv * ainv;
    const double n = static_cast<double>(a.rows());
    const double p = static_cast<double>(active.size());
    Margins out;
    out.alpha = (ainv.trace() - (a2 * fixed).trace()) / (p - n + (ainv * fixed).trace());
    for (int j : active) {
        out.margin.push_back((a2 * blocks[j]).trace() - out.alpha * (1.0 - (ainv * blocks[j]).trace()));
    }
    return out;
}

struct Best {
    std::vector<int> subset;
    double value = std::numeric_limits<double>::infinity();
};

/// Minimum Tr((fixed + sum_{subset} blocks)^-1) over size-k subsets, by
/// bitmask enumeration.
inline Best brute_force(const Matrix& fixed, const std::vector<Matrix>& blocks, int k) {
    const int m = static_cast<int>(blocks.size());
    Best best;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        if (__builtin_popcount(mask) != k) {
            continue;
        }
        Matrix a = fixed;
        std::vector<int> subset;
        for (int i = 0; i < m; ++i) {
            if (mask & (1u << i)) {
                a += blocks[i];
                subset.push_back(i);
            }
        }
        const double v = trace_inverse(a);
        if (v < best.value) {
            best = {subset, v};
        }
    }
    return best;
}

} // namespace ref
