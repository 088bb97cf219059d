#pragma once

// Seeded random instances: Gaussian column matrices, low-rank PSD block
// problems, and isotropic (U U^t = Id) matrices with unit-norm columns.

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "subsel/linalg.hpp"
#include "subsel/problem.hpp"

namespace subsel::gen {

using Rng = std::mt19937_64;

inline Matrix gaussian(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            g(i, j) = normal(rng);
        }
    }
    return g;
}

inline Index uniform_index(Index lo, Index hi, Rng& rng) {
    return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

/// Random orthogonal n x n matrix.
inline Matrix orthogonal(Index n, Rng& rng) {
    Eigen::HouseholderQR<Matrix> qr(gaussian(n, n, rng));
    return qr.householderQ() * Matrix::Identity(n, n);
}

inline Matrix random_columns(Index n, Index m, Rng& rng) { return gaussian(n, m, rng); }

/// m candidates G_i G_i^t with G_i Gaussian of rank in [min_rank, max_rank];
/// the fixed block has rank `fixed_rank` (0 gives the zero block) and a
/// random scale in [0.25, 2].
inline BlockProblem random_block_problem(Index n, Index m, Index fixed_rank, Rng& rng, Index min_rank = 1, Index max_rank = 3) {
    std::vector<PsdBlock> cands;
    cands.reserve(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) {
        const Index r = uniform_index(min_rank, max_rank, rng);
        cands.push_back(PsdBlock::factor_form(gaussian(n, r, rng), "B" + std::to_string(i + 1)));
    }
    if (fixed_rank <= 0) {
        return BlockProblem(n, std::move(cands));
    }
    const double scale = std::uniform_real_distribution<double>(0.25, 2.0)(rng);
    return BlockProblem(n, PsdBlock::factor_form(scale * gaussian(n, fixed_rank, rng), "B"), std::move(cands));
}

/// n x m matrix with orthonormal rows and exactly r unit-norm columns,
/// which are listed in `keep`. Requires 0 <= r < n < m.
inline ColumnProblem isotropic_columns(Index n, Index m, Index r, Rng& rng) {
    Matrix core = Matrix::Zero(n, m);
    core.topLeftCorner(r, r).setIdentity();
    if (n > r) {
        Eigen::HouseholderQR<Matrix> qr(gaussian(m - r, n - r, rng));
        const Matrix q = qr.householderQ() * Matrix::Identity(m - r, n - r);
        core.bottomRightCorner(n - r, m - r) = q.transpose();
    }
    const Matrix rotated = orthogonal(n, rng) * core;

    std::vector<Index> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    ColumnProblem cp;
    cp.u.resize(n, m);
    for (Index j = 0; j < m; ++j) {
        cp.u.col(perm[static_cast<std::size_t>(j)]) = rotated.col(j);
    }
    for (Index j = 0; j < r; ++j) {
        cp.keep.push_back(perm[static_cast<std::size_t>(j)]);
    }
    std::sort(cp.keep.begin(), cp.keep.end());
    return cp;
}

} // namespace subsel::gen
