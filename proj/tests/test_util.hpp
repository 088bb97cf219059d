#pragma once

#include <initializer_list>
#include <vector>

#include <gtest/gtest.h>

#include "subsel/subsel.hpp"
#include "reference.hpp"

namespace testutil {

using subsel::Index;
using subsel::Matrix;

inline std::vector<Matrix> dense_blocks(const subsel::BlockProblem& p) {
    std::vector<Matrix> out;
    for (const auto& c : p.candidates) {
        out.push_back(c.dense());
    }
    return out;
}

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
    Index i = 0;
    for (const auto& row : rows) {
        Index j = 0;
        for (double v : row) {
            m(i, j++) = v;
        }
        ++i;
    }
    return m;
}

/// Kind of the subsel::Error thrown by `fn`.
inline subsel::ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const subsel::Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected subsel::Error";
    return subsel::ErrorKind::IoError;
}

inline bool rel_close(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

/// Full-rank C plus a rank-r block B, so that A = C + B stays invertible
/// after removing B.
struct DowndateCase {
    Matrix a;
    Matrix rest;
    Matrix factor;
};

inline DowndateCase random_downdate_case(Index n, Index r, subsel::gen::Rng& rng) {
    const Matrix h = subsel::gen::gaussian(n, n + 2, rng);
    DowndateCase c;
    c.rest = h * h.transpose() + 0.1 * Matrix::Identity(n, n);
    c.factor = subsel::gen::gaussian(n, r, rng);
    c.a = c.rest + c.factor * c.factor.transpose();
    return c;
}

} // namespace testutil
