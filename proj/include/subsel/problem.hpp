#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "subsel/bounds.hpp"
#include "subsel/error.hpp"
#include "subsel/linalg.hpp"
#include "subsel/tolerances.hpp"

namespace subsel {

/// Fixed block B plus candidates B_1..B_m; the selection works on
/// A = B + sum B_i.
struct BlockProblem {
    Index n = 0;
    PsdBlock fixed;
    std::vector<PsdBlock> candidates;
    // When present, validated against the sum of the blocks.
    std::optional<Matrix> supplied_total;

    BlockProblem(Index dim, std::vector<PsdBlock> cands)
        : n(dim), fixed(PsdBlock::zero(std::max<Index>(dim, 1))), candidates(std::move(cands)) {}

    BlockProblem(Index dim, PsdBlock fixed_block, std::vector<PsdBlock> cands)
        : n(dim), fixed(std::move(fixed_block)), candidates(std::move(cands)) {}

    Index m() const noexcept { return static_cast<Index>(candidates.size()); }

    bool fixed_is_zero() const {
        return !fixed.is_factor() && fixed.explicit_matrix().matrix().isZero(0.0);
    }

    /// B + sum of the candidates whose index appears in `subset`.
    template <typename Range>
    Matrix partial_sum(const Range& subset) const {
        Matrix a = fixed.dense();
        for (auto i : subset) {
            a += candidates[static_cast<std::size_t>(i)].dense();
        }
        return a;
    }

    Matrix total() const {
        Matrix a = fixed.dense();
        for (const auto& c : candidates) {
            a += c.dense();
        }
        return a;
    }
};

struct ValidationSummary {
    struct Check {
        std::string name;
        bool passed = true;
        std::string detail;
    };

    std::vector<Check> checks;

    bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
    }

    bool passed(const std::string& name) const {
        return std::all_of(checks.begin(), checks.end(), [&](const Check& c) { return c.name != name || c.passed; });
    }

    void add(std::string name, bool passed, std::string detail = {}) {
        checks.push_back({std::move(name), passed, std::move(detail)});
    }

    std::string describe() const {
        std::ostringstream os;
        for (const auto& c : checks) {
            if (!c.passed) {
                os << c.name << ": " << c.detail << "; ";
            }
        }
        std::string s = os.str();
        if (s.size() >= 2) {
            s.resize(s.size() - 2);
        }
        return s;
    }
};

inline ValidationSummary validate_block_problem(const BlockProblem& problem) {
    ValidationSummary out;
    const Index n = problem.n;

    out.add("candidates", problem.m() >= 1, problem.m() >= 1 ? "" : "no candidate blocks");

    std::string dim_detail;
    if (n < 1) {
        dim_detail = "n must be positive";
    }
    auto check_dim = [&](const PsdBlock& b, const std::string& name) {
        if (b.dim() != n) {
            dim_detail += name + " has dimension " + std::to_string(b.dim()) + " (expected " + std::to_string(n) + ") ";
        }
    };
    check_dim(problem.fixed, "fixed block");
    for (std::size_t i = 0; i < problem.candidates.size(); ++i) {
        check_dim(problem.candidates[i], "candidate " + std::to_string(i + 1));
    }
    const bool dims_ok = dim_detail.empty();
    out.add("dimension", dims_ok, dim_detail);

    std::string psd_detail;
    auto check_psd = [&](const PsdBlock& b, const std::string& name) {
        const double rel = b.relative_min_eigenvalue();
        if (rel < -tol::psd) {
            psd_detail += name + " has relative eigenvalue " + std::to_string(rel) + " ";
        }
    };
    check_psd(problem.fixed, "fixed block");
    for (std::size_t i = 0; i < problem.candidates.size(); ++i) {
        check_psd(problem.candidates[i], "candidate " + std::to_string(i + 1));
    }
    out.add("psd", psd_detail.empty(), psd_detail);

    if (!dims_ok) {
        return out;
    }

    const Matrix total = problem.total();
    if (problem.supplied_total) {
        const Matrix& a = *problem.supplied_total;
        bool ok = a.rows() == n && a.cols() == n;
        std::string detail = ok ? "" : "supplied total has wrong shape";
        if (ok) {
            const double err = (a - total).cwiseAbs().maxCoeff();
            const double scale = std::max(1.0, detail::max_abs(total));
            ok = err <= tol::recon * scale;
            if (!ok) {
                detail = "supplied total differs from block sum by " + std::to_string(err);
            }
        }
        out.add("reconstruction", ok, detail);
    }

    const Vector ev = detail::eigenvalues(total);
    const double top = ev.maxCoeff();
    const bool full_rank = top > 0.0 && ev.minCoeff() > tol::rank * top;
    out.add("rank", full_rank,
            full_rank ? "" : "A = B + sum B_i is rank deficient (eigenvalue range [" + std::to_string(ev.minCoeff()) + ", " +
                                 std::to_string(top) + "])");
    return out;
}

inline void require_valid(const BlockProblem& problem) {
    const auto summary = validate_block_problem(problem);
    if (!summary.ok()) {
        throw Error(ErrorKind::ValidationFailed, summary.describe());
    }
}

/// Trace functionals of the fixed block at the full sum A.
inline TraceFunctionals initial_functionals(const BlockProblem& problem) {
    const SymMatrix ainv = invert_psd(SymMatrix(problem.total()));
    return trace_functionals(ainv, problem.fixed);
}

/// n - floor(Tr(A^-1 B)), clamped at 0, with near-integer traces promoted.
inline long minimal_k(const BlockProblem& problem) {
    require_valid(problem);
    return admissible_min_k(static_cast<long>(problem.n), initial_functionals(problem).trAinvB);
}

/// n x m matrix of rank n and a set of column indices that must be kept.
struct ColumnProblem {
    Matrix u;
    std::vector<Index> keep; // 0-based
};

inline void validate_column_problem(const ColumnProblem& problem) {
    const Index n = problem.u.rows();
    const Index m = problem.u.cols();
    if (n < 1 || m < 1) {
        throw Error(ErrorKind::RankDeficient, "column matrix is empty");
    }
    if (!problem.u.allFinite()) {
        throw Error(ErrorKind::InvalidArgument, "column matrix has non-finite entries");
    }
    std::vector<Index> sorted = problem.keep;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error(ErrorKind::InvalidArgument, "kept column indices must be distinct");
    }
    for (Index j : sorted) {
        if (j < 0 || j >= m) {
            throw Error(ErrorKind::InvalidArgument, "kept column index " + std::to_string(j + 1) + " out of range");
        }
    }
    if (m < n) {
        throw Error(ErrorKind::RankDeficient, "U has fewer columns than rows");
    }
    // Squared singular values are the eigenvalues of U U^t.
    Eigen::JacobiSVD<Matrix> svd(problem.u);
    const Vector& s = svd.singularValues();
    const double top = s(0);
    const double bottom = s(s.size() - 1);
    if (!(top > 0.0) || !(bottom * bottom > tol::rank * top * top)) {
        throw Error(ErrorKind::RankDeficient, "U is not of full row rank (singular values " + std::to_string(bottom) + " .. " +
                                                  std::to_string(top) + ")");
    }
}

/// Column problem rewritten as blocks: B = U_keep U_keep^t, B_i = u_i u_i^t
/// for the remaining columns. `columns[i]` is the original column of
/// candidate i.
struct ReducedColumns {
    BlockProblem problem;
    std::vector<Index> columns;
};

inline ReducedColumns to_block_problem(const ColumnProblem& cp) {
    validate_column_problem(cp);
    const Index n = cp.u.rows();
    const Index m = cp.u.cols();
    std::vector<bool> kept(static_cast<std::size_t>(m), false);
    for (Index j : cp.keep) {
        kept[static_cast<std::size_t>(j)] = true;
    }
    std::vector<Index> keep_sorted = cp.keep;
    std::sort(keep_sorted.begin(), keep_sorted.end());

    std::vector<PsdBlock> cands;
    std::vector<Index> columns;
    for (Index j = 0; j < m; ++j) {
        if (!kept[static_cast<std::size_t>(j)]) {
            cands.push_back(PsdBlock::rank_one(cp.u.col(j), "column " + std::to_string(j + 1)));
            columns.push_back(j);
        }
    }
    PsdBlock fixed = PsdBlock::zero(n);
    if (!keep_sorted.empty()) {
        Matrix v(n, static_cast<Index>(keep_sorted.size()));
        for (std::size_t c = 0; c < keep_sorted.size(); ++c) {
            v.col(static_cast<Index>(c)) = cp.u.col(keep_sorted[c]);
        }
        fixed = PsdBlock::factor_form(std::move(v), "kept columns");
    }
    return {BlockProblem(n, std::move(fixed), std::move(cands)), std::move(columns)};
}

} // namespace subsel
