#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace subsel;
using testutil::kind_of;

TEST(BoundTheorem1, Examples) {
    EXPECT_DOUBLE_EQ(bound_theorem1(3, 2, 1.5), 3.0);
    EXPECT_DOUBLE_EQ(bound_theorem1(4, 4, 2.75), 2.75);
    EXPECT_DOUBLE_EQ(bound_theorem1(2, 1, 0.5), 1.0);
}

TEST(BoundTheorem1, MatchesExhaustiveOnTwoEqualColumns) {
    // U = (1, 1): both single columns give Tr = 1.
    const BlockProblem p(1, {PsdBlock::rank_one(Vector::Ones(1)), PsdBlock::rank_one(Vector::Ones(1))});
    const auto best = ref::brute_force(p.fixed.dense(), testutil::dense_blocks(p), 1);
    EXPECT_DOUBLE_EQ(best.value, bound_theorem1(2, 1, 0.5));
}

TEST(BoundTheorem1, InvalidArguments) {
    EXPECT_EQ(kind_of([] { bound_theorem1(1, 2, 1.0); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { bound_theorem1(3, 0, 1.0); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { bound_theorem1(3, 2, 0.0); }), ErrorKind::InvalidArgument);
}

TEST(BoundTheorem2, Examples) {
    EXPECT_DOUBLE_EQ(bound_theorem2(6, 3, 2, {3.0, 1.0, 1.0}), 11.0);
    // Zero fixed block reduces to the B = 0 corollary.
    for (long k = 3; k <= 7; ++k) {
        EXPECT_DOUBLE_EQ(bound_theorem2(7, 3, k, {2.5, 0.0, 0.0}), bound_corollary6(7, 3, k, 2.5));
    }
}

TEST(BoundTheorem2, FullSetIsAtLeastTraceOfInverse) {
    // k = m: the -(m - k) term vanishes and the ratio is 1.
    for (double t : {0.0, 0.3, 1.7}) {
        const TraceFunctionals tf{4.0, t, 0.2};
        EXPECT_DOUBLE_EQ(bound_theorem2(9, 4, 9, tf), 4.0);
    }
}

TEST(BoundTheorem2, KOutOfRange) {
    EXPECT_EQ(kind_of([] { bound_theorem2(6, 3, 1, {3.0, 1.0, 1.0}); }), ErrorKind::KOutOfRange);
    EXPECT_EQ(kind_of([] { bound_theorem2(6, 3, 7, {3.0, 1.0, 1.0}); }), ErrorKind::KOutOfRange);
    EXPECT_EQ(kind_of([] { bound_theorem2(6, 3, 2, {3.0, 0.5, 0.1}); }), ErrorKind::KOutOfRange);
}

TEST(BoundCorollary3, Examples) {
    EXPECT_DOUBLE_EQ(bound_corollary3(6, 3, 1), 9.0);
    for (long m = 3; m <= 10; ++m) {
        EXPECT_DOUBLE_EQ(bound_corollary3(m, 3, 0), bound_theorem1(m, 3, 3.0));
        EXPECT_DOUBLE_EQ(bound_corollary3(3, 3, m % 4), 3.0);
    }
    EXPECT_EQ(kind_of([] { bound_corollary3(6, 3, 4); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { bound_corollary3(2, 3, 1); }), ErrorKind::InvalidArgument);
}

TEST(BoundCorollary3, EqualsTheorem2AtIdentity) {
    // A = Id and B = V V^t with r orthonormal columns: Tr(A^-1 B) = Tr(A^-2 B) = r,
    // with |nu^c| = m - r candidates and k = n - r.
    for (long n = 2; n <= 6; ++n) {
        for (long m = n + 1; m <= 12; ++m) {
            for (long r = 1; r < n; ++r) {
                const TraceFunctionals tf{static_cast<double>(n), static_cast<double>(r), static_cast<double>(r)};
                EXPECT_NEAR(bound_theorem2(m - r, n, n - r, tf), bound_corollary3(m, n, r), 1e-12);
            }
        }
    }
}

TEST(BoundCorollary6, Examples) {
    EXPECT_DOUBLE_EQ(bound_corollary6(20, 8, 8, 1.25), 13.0 * 1.25);
    EXPECT_DOUBLE_EQ(bound_corollary6(11, 4, 11, 0.7), 0.7);
    for (long m = 4; m <= 12; ++m) {
        EXPECT_DOUBLE_EQ(bound_corollary6(m, 4, 4, 0.9), bound_theorem1(m, 4, 0.9));
    }
    EXPECT_EQ(kind_of([] { bound_corollary6(5, 3, 2, 1.0); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { bound_corollary6(5, 3, 6, 1.0); }), ErrorKind::InvalidArgument);
}

TEST(GuardedFloor, SnapsNearIntegers) {
    EXPECT_EQ(guarded_floor(1.999999999), 2);
    EXPECT_EQ(guarded_floor(2.0000000001), 2);
    EXPECT_EQ(guarded_floor(1.99), 1);
    EXPECT_EQ(guarded_floor(0.0), 0);
    EXPECT_EQ(admissible_min_k(3, 1.999999999), 1);
    EXPECT_EQ(admissible_min_k(3, 1.5), 2);
    EXPECT_EQ(admissible_min_k(2, 2.0), 0);
}
