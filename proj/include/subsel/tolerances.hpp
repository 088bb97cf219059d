#pragma once

#include <cmath>
#include <cstddef>

namespace subsel::tol {

// Relative to the largest absolute entry.
inline constexpr double sym = 1e-10;
// Relative to the largest eigenvalue.
inline constexpr double psd = 1e-10;
// Smallest eigenvalue must exceed rank * largest eigenvalue.
inline constexpr double rank = 1e-12;
// Smallest eigenvalue of Id - F^t Ainv F.
inline constexpr double capacitance = 1e-10;
inline constexpr double bound_slack = 1e-8;
inline constexpr double recon = 1e-8;
inline constexpr double floor_guard = 1e-9;

inline constexpr std::size_t refactor_every = 32;

/// ||A * Ainv - I||_max allowed for an n x n inverse.
inline constexpr double inverse(std::size_t n) { return 1e-8 * static_cast<double>(n); }

/// Slack on the averaging certificate for a step with parameter alpha.
inline double certificate(double alpha) { return 1e-9 * (1.0 + std::abs(alpha)); }

} // namespace subsel::tol
