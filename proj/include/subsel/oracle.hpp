#pragma once

// Exhaustive reference for small instances: enumerate every size-k subset
// and evaluate Tr((B + sum_{i in subset} B_i)^-1) by a fresh factorization.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "subsel/error.hpp"
#include "subsel/linalg.hpp"
#include "subsel/problem.hpp"
#include "subsel/selection.hpp"
#include "subsel/tolerances.hpp"

namespace subsel {

struct OracleResult {
    std::vector<Index> bestSubset; // 0-based, sorted
    double bestValue = std::numeric_limits<double>::infinity();
    std::uint64_t feasibleCount = 0;
    std::uint64_t enumerated = 0;
};

inline constexpr std::uint64_t default_enum_cap = 1'000'000;

/// C(m, k), saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t m, std::uint64_t k) {
    if (k > m) {
        return 0;
    }
    k = std::min(k, m - k);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        const std::uint64_t num = m - k + i;
        // result * num / i is exact at every step; guard the product.
        if (result > std::numeric_limits<std::uint64_t>::max() / num) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        result = result * num / i;
    }
    return result;
}

/// Advances `idx` to the next k-combination of {0..m-1} in lexicographic
/// order; returns false after the last one.
inline bool next_combination(std::vector<Index>& idx, Index m) {
    const auto k = static_cast<Index>(idx.size());
    Index i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) {
        --i;
    }
    if (i < 0) {
        return false;
    }
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) {
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return true;
}

inline OracleResult exhaustive_min_trace(const BlockProblem& problem, long k, std::uint64_t enum_cap = default_enum_cap) {
    require_valid(problem);
    const Index m = problem.m();
    if (k < 0 || k > static_cast<long>(m)) {
        throw Error(ErrorKind::KOutOfRange, "k = " + std::to_string(k) + " outside [0, " + std::to_string(m) + "]");
    }
    const std::uint64_t count = binomial(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(k));
    if (count > enum_cap) {
        throw Error(ErrorKind::TooLarge, "C(" + std::to_string(m) + ", " + std::to_string(k) + ") = " + std::to_string(count) +
                                             " exceeds enumeration cap " + std::to_string(enum_cap));
    }

    std::vector<Matrix> dense;
    dense.reserve(problem.candidates.size());
    for (const auto& c : problem.candidates) {
        dense.push_back(c.dense());
    }
    const Matrix fixed = problem.fixed.dense();

    OracleResult result;
    std::vector<Index> subset(static_cast<std::size_t>(k));
    for (Index i = 0; i < static_cast<Index>(k); ++i) {
        subset[static_cast<std::size_t>(i)] = i;
    }
    do {
        ++result.enumerated;
        Matrix a = fixed;
        for (Index i : subset) {
            a += dense[static_cast<std::size_t>(i)];
        }
        double value = 0.0;
        try {
            value = trace_of_inverse(SymMatrix(a));
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::SingularMatrix) {
                continue;
            }
            throw;
        }
        ++result.feasibleCount;
        // Strict comparison keeps the lexicographically first minimizer.
        if (value < result.bestValue) {
            result.bestValue = value;
            result.bestSubset = subset;
        }
    } while (next_combination(subset, m));

    if (result.feasibleCount == 0) {
        throw Error(ErrorKind::Infeasible, "no size-" + std::to_string(k) + " subset yields a full-rank sum");
    }
    return result;
}

struct VerificationSummary {
    bool oracleBelow = false;   // oracle minimum <= achieved trace
    bool boundAbove = false;    // achieved trace <= bound * (1 + slack)
    bool recomputeMatch = false; // fresh trace on the chosen set matches
    double oracleValue = 0.0;
    double recomputedTrace = 0.0;

    bool ok() const { return oracleBelow && boundAbove && recomputeMatch; }
};

/// Checks a block-selection report against the exhaustive oracle and a
/// from-scratch evaluation of its chosen set.
inline VerificationSummary verify_report(const BlockProblem& problem, long k, const SelectionReport& report,
                                         std::uint64_t enum_cap = default_enum_cap) {
    VerificationSummary v;
    const OracleResult oracle = exhaustive_min_trace(problem, k, enum_cap);
    v.oracleValue = oracle.bestValue;
    v.oracleBelow = oracle.bestValue <= report.achievedTrace + 1e-10;
    v.boundAbove = report.achievedTrace <= report.bound * (1.0 + tol::bound_slack);

    bool indices_ok = static_cast<long>(report.chosen.size()) == k;
    for (Index i : report.chosen) {
        indices_ok = indices_ok && i >= 0 && i < problem.m();
    }
    if (indices_ok) {
        try {
            v.recomputedTrace = trace_of_inverse(SymMatrix(problem.partial_sum(report.chosen)));
            v.recomputeMatch = std::abs(v.recomputedTrace - report.achievedTrace) <= 1e-9 * std::abs(v.recomputedTrace);
        } catch (const Error&) {
            v.recomputeMatch = false;
        }
    }
    return v;
}

} // namespace subsel
