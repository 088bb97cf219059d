#pragma once

// Greedy removal: start from the full candidate set and repeatedly drop
// the candidate whose removal passes the averaging certificate
//
//     Tr(A_p^-2 B_j) <= alpha * (1 - Tr(A_p^-1 B_j)),
//     alpha = (Tr(A_p^-1) - Tr(A_p^-2 B)) / (p - n + Tr(A_p^-1 B)),
//
// which keeps A_p - B_j of full rank and raises Tr(A^-1) by at most alpha.
// The maintained inverse is downdated with Sherman-Morrison-Woodbury and
// refreshed by a full factorization every tol::refactor_every steps and at
// the last step.

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "subsel/bounds.hpp"
#include "subsel/error.hpp"
#include "subsel/linalg.hpp"
#include "subsel/problem.hpp"
#include "subsel/tolerances.hpp"

namespace subsel {

struct StepRecord {
    Index removedIndex = 0; // candidate index (column index on the column path)
    double alpha = 0.0;
    double margin = 0.0;
    double traceBefore = 0.0;
    double traceAfter = 0.0; // from the downdated inverse
    Index activeCount = 0;   // candidates left after the removal
};

struct SelectionReport {
    std::vector<Index> chosen; // sorted, 0-based
    double achievedTrace = 0.0;
    double bound = 0.0;
    BoundName boundName = BoundName::theorem2;
    std::vector<StepRecord> steps;
    std::size_t refactorizations = 0;
    long k = 0;
    Index n = 0;
    Index m = 0;
    // Largest ||A_p * Ainv - I||_max of a downdated inverse at a checkpoint.
    double maxInverseResidual = 0.0;
};

struct RemovalChoice {
    Index index = 0;
    double alpha = 0.0;
    double margin = 0.0;
};

namespace detail {

inline RemovalChoice argmin_margin(std::span<const Index> active, double alpha, auto&& margin_of) {
    if (active.empty()) {
        throw Error(ErrorKind::NoCandidates, "no active candidates to remove");
    }
    RemovalChoice best{active[0], alpha, margin_of(active[0])};
    for (std::size_t i = 1; i < active.size(); ++i) {
        const double mj = margin_of(active[i]);
        if (mj < best.margin || (mj == best.margin && active[i] < best.index)) {
            best = {active[i], alpha, mj};
        }
    }
    if (best.margin > tol::certificate(alpha)) {
        throw Error(ErrorKind::CertificateViolated,
                    "smallest certificate margin " + std::to_string(best.margin) + " exceeds tolerance");
    }
    return best;
}

inline RemovalChoice choose_from_factors(const SymMatrix& ainv, const Matrix& fixed_factor, const std::vector<Matrix>& factors,
                                         std::span<const Index> active, Index n) {
    if (active.empty()) {
        throw Error(ErrorKind::NoCandidates, "no active candidates to remove");
    }
    const auto [tr_b, tr2_b] = factor_traces(ainv.matrix(), fixed_factor);
    const double p = static_cast<double>(active.size());
    const double denom = p - static_cast<double>(n) + tr_b;
    if (!(denom > 0.0)) {
        throw Error(ErrorKind::KOutOfRange, "p - n + Tr(A_p^-1 B) is not positive; removal would leave the admissible range");
    }
    const double alpha = (ainv.trace() - tr2_b) / denom;
    return argmin_margin(active, alpha, [&](Index j) {
        const auto [t1, t2] = factor_traces(ainv.matrix(), factors[static_cast<std::size_t>(j)]);
        return t2 - alpha * (1.0 - t1);
    });
}

inline void erase_index(std::vector<Index>& active, Index j) {
    active.erase(std::find(active.begin(), active.end(), j));
}

inline bool is_checkpoint(std::size_t step, std::size_t total) {
    return step == total || step % tol::refactor_every == 0;
}

/// Replaces a downdated inverse with a fresh one and records how far the
/// downdated one had drifted.
inline void refresh_inverse(SymMatrix& ainv, const Matrix& active_sum, SelectionReport& report) {
    const Index n = active_sum.rows();
    const double residual = (active_sum * ainv.matrix() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    report.maxInverseResidual = std::max(report.maxInverseResidual, residual);
    ainv = invert_psd(SymMatrix(active_sum));
    ++report.refactorizations;
}

} // namespace detail

/// One removal step for PSD blocks with fixed block B: the active index
/// with the smallest certificate margin (ties to the lowest index).
inline RemovalChoice choose_removal_block(const SymMatrix& ainv, const PsdBlock& fixed, const std::vector<PsdBlock>& candidates,
                                          std::span<const Index> active, Index n) {
    std::vector<Matrix> factors;
    factors.reserve(candidates.size());
    for (const auto& c : candidates) {
        factors.push_back(sym_sqrt(c));
    }
    return detail::choose_from_factors(ainv, sym_sqrt(fixed), factors, active, n);
}

/// One removal step among rank-one columns with no fixed block;
/// alpha = Tr(A_p^-1) / (p - n).
inline RemovalChoice choose_removal_column(const SymMatrix& ainv, const Matrix& u, std::span<const Index> active, Index n) {
    if (active.empty()) {
        throw Error(ErrorKind::NoCandidates, "no active columns to remove");
    }
    const auto p = static_cast<Index>(active.size());
    if (p <= n) {
        throw Error(ErrorKind::KOutOfRange, "column removal needs more than n active columns");
    }
    const double alpha = ainv.trace() / static_cast<double>(p - n);
    return detail::argmin_margin(active, alpha, [&](Index j) {
        const Vector w = ainv.matrix() * u.col(j);
        return w.squaredNorm() - alpha * (1.0 - u.col(j).dot(w));
    });
}

/// Greedy removal from m blocks down to k, preserving the fixed block.
inline SelectionReport run_block_selection(const BlockProblem& problem, long k) {
    require_valid(problem);
    const Index n = problem.n;
    const Index m = problem.m();

    const Matrix total = problem.total();
    SymMatrix ainv = invert_psd(SymMatrix(total));
    const TraceFunctionals tf0 = trace_functionals(ainv, problem.fixed);
    const long kmin = admissible_min_k(static_cast<long>(n), tf0.trAinvB);
    if (k < kmin || k > static_cast<long>(m)) {
        throw Error(ErrorKind::KOutOfRange, "k = " + std::to_string(k) + " outside admissible range [" + std::to_string(kmin) +
                                                ", " + std::to_string(m) + "]");
    }

    SelectionReport report;
    report.k = k;
    report.n = n;
    report.m = m;
    if (problem.fixed_is_zero()) {
        report.boundName = BoundName::corollary6;
        report.bound = bound_corollary6(static_cast<long>(m), static_cast<long>(n), k, tf0.trAinv);
    } else {
        report.boundName = BoundName::theorem2;
        report.bound = bound_theorem2(static_cast<long>(m), static_cast<long>(n), k, tf0);
    }

    std::vector<Index> active(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) {
        active[static_cast<std::size_t>(i)] = i;
    }
    const auto removals = static_cast<std::size_t>(m - k);
    if (removals > 0) {
        std::vector<Matrix> factors;
        factors.reserve(problem.candidates.size());
        for (const auto& c : problem.candidates) {
            factors.push_back(sym_sqrt(c));
        }
        const Matrix fixed_factor = sym_sqrt(problem.fixed);
        Matrix active_sum = total;

        for (std::size_t step = 1; step <= removals; ++step) {
            const RemovalChoice choice = detail::choose_from_factors(ainv, fixed_factor, factors, active, n);
            const auto j = static_cast<std::size_t>(choice.index);
            StepRecord rec;
            rec.removedIndex = choice.index;
            rec.alpha = choice.alpha;
            rec.margin = choice.margin;
            rec.traceBefore = ainv.trace();
            ainv = smw_downdate(ainv, factors[j]);
            rec.traceAfter = ainv.trace();
            detail::erase_index(active, choice.index);
            rec.activeCount = static_cast<Index>(active.size());
            report.steps.push_back(rec);

            active_sum -= factors[j] * factors[j].transpose();
            if (detail::is_checkpoint(step, removals)) {
                // Rebuild from the blocks to avoid accumulated cancellation.
                active_sum = problem.partial_sum(active);
                detail::refresh_inverse(ainv, active_sum, report);
            }
        }
    }
    report.achievedTrace = ainv.trace();
    report.chosen = active;
    return report;
}

namespace detail {

inline bool is_isotropic_with_unit_keep(const ColumnProblem& cp) {
    const Index n = cp.u.rows();
    const Matrix gram = cp.u * cp.u.transpose();
    if ((gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10) {
        return false;
    }
    return std::all_of(cp.keep.begin(), cp.keep.end(),
                       [&](Index j) { return std::abs(cp.u.col(j).squaredNorm() - 1.0) <= 1e-10; });
}

inline SelectionReport run_columns_without_keep(const ColumnProblem& cp, long k) {
    const Matrix& u = cp.u;
    const Index n = u.rows();
    const Index m = u.cols();
    if (k < static_cast<long>(n) || k > static_cast<long>(m)) {
        throw Error(ErrorKind::KOutOfRange, "k = " + std::to_string(k) + " outside admissible range [" + std::to_string(n) +
                                                ", " + std::to_string(m) + "]");
    }
    SymMatrix ainv = invert_psd(SymMatrix(u * u.transpose()));

    SelectionReport report;
    report.k = k;
    report.n = n;
    report.m = m;
    if (k == static_cast<long>(n)) {
        report.boundName = BoundName::theorem1;
        report.bound = bound_theorem1(static_cast<long>(m), static_cast<long>(n), ainv.trace());
    } else {
        report.boundName = BoundName::corollary6;
        report.bound = bound_corollary6(static_cast<long>(m), static_cast<long>(n), k, ainv.trace());
    }

    std::vector<Index> active(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) {
        active[static_cast<std::size_t>(i)] = i;
    }
    const auto removals = static_cast<std::size_t>(m - k);
    for (std::size_t step = 1; step <= removals; ++step) {
        const RemovalChoice choice = choose_removal_column(ainv, u, active, n);
        StepRecord rec;
        rec.removedIndex = choice.index;
        rec.alpha = choice.alpha;
        rec.margin = choice.margin;
        rec.traceBefore = ainv.trace();
        ainv = sherman_morrison_downdate(ainv, u.col(choice.index));
        rec.traceAfter = ainv.trace();
        erase_index(active, choice.index);
        rec.activeCount = static_cast<Index>(active.size());
        report.steps.push_back(rec);

        if (is_checkpoint(step, removals)) {
            Matrix sum = Matrix::Zero(n, n);
            for (Index j : active) {
                sum += u.col(j) * u.col(j).transpose();
            }
            refresh_inverse(ainv, sum, report);
        }
    }
    report.achievedTrace = ainv.trace();
    report.chosen = active;
    return report;
}

} // namespace detail

/// Column selection keeping the columns in `keep`; `k` counts the columns
/// picked from outside `keep`. The returned `chosen` includes `keep` and
/// step indices refer to columns of U.
inline SelectionReport run_column_selection(const ColumnProblem& cp, long k) {
    validate_column_problem(cp);
    if (cp.keep.empty()) {
        return detail::run_columns_without_keep(cp, k);
    }
    const ReducedColumns reduced = to_block_problem(cp);
    SelectionReport report = run_block_selection(reduced.problem, k);
    for (auto& idx : report.chosen) {
        idx = reduced.columns[static_cast<std::size_t>(idx)];
    }
    for (auto& step : report.steps) {
        step.removedIndex = reduced.columns[static_cast<std::size_t>(step.removedIndex)];
    }
    report.chosen.insert(report.chosen.end(), cp.keep.begin(), cp.keep.end());
    std::sort(report.chosen.begin(), report.chosen.end());
    report.m = cp.u.cols();

    const auto n = static_cast<long>(cp.u.rows());
    const auto r = static_cast<long>(cp.keep.size());
    if (r < n && k == n - r && detail::is_isotropic_with_unit_keep(cp)) {
        report.boundName = BoundName::corollary3;
        report.bound = bound_corollary3(static_cast<long>(cp.u.cols()), n, r);
    }
    return report;
}

} // namespace subsel
