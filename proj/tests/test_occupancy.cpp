#include <gtest/gtest.h>

#include "occupancy/constructions.hpp"
#include "occupancy/family.hpp"
#include "occupancy/occupancy.hpp"

using namespace occupancy;

namespace {

GridSet rect_set(Index N, std::vector<Cell> cells) { return GridSet(N, std::move(cells)); }

} // namespace

TEST(Exact, Diagonal) {
    const GridSet diag = permutation_set(identity_perm(8));
    const auto r = max_tube_occupancy_exact(diag);
    EXPECT_EQ(r.max_count, 8);
    EXPECT_EQ(witness_count(r, diag), 8);
    EXPECT_EQ(count_incidences(GridLine::through(8, 0, 0, 1, 1), diag), 8);
}

TEST(Exact, SingleSquare) {
    const GridSet one(5, {{2, 3}});
    EXPECT_EQ(max_tube_occupancy_exact(one).max_count, 1);
}

TEST(Exact, SmallPermutationWithCornerChain) {
    // y = x passes through the shared corner of (1,2) and (2,1), so all four
    // squares lie on one line; only a measure-zero set of lines does this.
    const GridSet s = rect_set(4, {{0, 0}, {1, 2}, {2, 1}, {3, 3}});
    const auto r = max_tube_occupancy_exact(s);
    EXPECT_EQ(r.max_count, 4);
    EXPECT_EQ(max_occupancy_over_critical_lines(s).max_count, 4);
    EXPECT_EQ(max_occupancy_sampled(s, 1'000'000, 1).max_count, 3);
}

TEST(Exact, FullRowsColumnsDiagonals) {
    for (Index N : {1, 2, 5, 9}) {
        std::vector<Cell> row, col, anti;
        for (Index i = 0; i < N; ++i) {
            row.push_back({i, N / 2});
            col.push_back({N - 1, i});
            anti.push_back({i, N - 1 - i});
        }
        EXPECT_EQ(max_tube_occupancy_exact(rect_set(N, row)).max_count, N);
        EXPECT_EQ(max_tube_occupancy_exact(rect_set(N, col)).max_count, N);
        EXPECT_EQ(max_tube_occupancy_exact(rect_set(N, anti)).max_count, N);
    }
}

TEST(Exact, SweepMatchesCriticalLineEnumeration) {
    Rng rng(21);
    for (int trial = 0; trial < 150; ++trial) {
        const Index N = 2 + static_cast<Index>(rng.below(9));
        const Index k = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(N * N)));
        std::vector<Cell> cells;
        for (auto g : rng.subset(static_cast<std::uint64_t>(N * N), static_cast<std::uint64_t>(k)))
            cells.push_back({static_cast<Index>(g) % N, static_cast<Index>(g) / N});
        const GridSet s(N, cells);
        const auto fast = max_tube_occupancy_exact(s);
        const auto slow = max_occupancy_over_critical_lines(s);
        ASSERT_EQ(fast.max_count, slow.max_count);
        ASSERT_EQ(std::get<GridLine>(fast.witness), std::get<GridLine>(slow.witness));
        ASSERT_EQ(witness_count(fast, s), fast.max_count);
    }
}

TEST(Exact, SweepMatchesFullTubeFamily) {
    // Max over all tubes through full-grid corner pairs is a second oracle.
    for (Index N : {3, 4, 5}) {
        const SetFamily tubes = tube_family(N, 10'000'000);
        Rng rng(static_cast<std::uint64_t>(N));
        for (int trial = 0; trial < 20; ++trial) {
            const GridSet s = random_set(N, rng.next());
            std::vector<bool> in(static_cast<std::size_t>(N * N));
            for (const Cell& c : s.cells()) in[static_cast<std::size_t>(c.row * N + c.col)] = true;
            Index best = 0;
            for (const auto& t : tubes.members) {
                Index n = 0;
                for (Index g : t) n += in[static_cast<std::size_t>(g)];
                best = std::max(best, n);
            }
            EXPECT_EQ(max_tube_occupancy_exact(s).max_count, best);
        }
    }
}

TEST(Exact, SymmetryInvariant) {
    Rng rng(22);
    for (int trial = 0; trial < 10; ++trial) {
        const GridSet s = random_set(12, rng.next());
        const Index base = max_tube_occupancy_exact(s).max_count;
        for (int sym = 1; sym < 8; ++sym) EXPECT_EQ(max_tube_occupancy_exact(apply_symmetry(s, sym)).max_count, base);
    }
}

TEST(Exact, ThreadCountDoesNotChangeResult) {
    const GridSet s = permutation_set(quadratic_irrational_perm(64, kGoldenRatio));
    const auto a = max_tube_occupancy_exact(s, 1);
    const auto b = max_tube_occupancy_exact(s, 4);
    EXPECT_EQ(a.max_count, b.max_count);
    EXPECT_EQ(std::get<GridLine>(a.witness), std::get<GridLine>(b.witness));
}

TEST(Exact, EmptySetRejected) { EXPECT_THROW(max_tube_occupancy_exact(GridSet(3, {})), invalid_input); }

TEST(Sampled, DiagonalBracket) {
    const GridSet diag = permutation_set(identity_perm(8));
    const auto r = max_occupancy_sampled(diag, 10'000, 5);
    EXPECT_GE(r.max_count, 5);
    EXPECT_LE(r.max_count, 8);
    EXPECT_EQ(witness_count(r, diag), r.max_count);
}

TEST(Sampled, Deterministic) {
    const GridSet s = random_set(16, 3);
    const auto a = max_occupancy_sampled(s, 5000, 42);
    const auto b = max_occupancy_sampled(s, 5000, 42);
    EXPECT_EQ(a.max_count, b.max_count);
    const auto& la = std::get<RealLine>(a.witness);
    const auto& lb = std::get<RealLine>(b.witness);
    EXPECT_EQ(la.nx, lb.nx);
    EXPECT_EQ(la.ny, lb.ny);
    EXPECT_EQ(la.offset, lb.offset);
}

TEST(Sampled, NeverExceedsExactAndTracksIt) {
    const GridSet s = permutation_set(quadratic_irrational_perm(64, kGoldenRatio));
    const Index exact = max_tube_occupancy_exact(s).max_count;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Index v = max_occupancy_sampled(s, 20'000, seed).max_count;
        EXPECT_LE(v, exact);
        EXPECT_GE(2 * v, exact);
    }
}

TEST(Interval, Examples) {
    EXPECT_EQ(interval_occupancy(identity_perm(16)).max_count, 15);
    EXPECT_EQ(interval_occupancy(identity_perm(2)).max_count, 1);
    EXPECT_EQ(interval_occupancy(reversal_perm(10)).max_count, 9);
}

TEST(Interval, MonotoneInHalfWidth) {
    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Index> v(40);
        for (Index i = 0; i < 40; ++i) v[static_cast<std::size_t>(i)] = i;
        rng.shuffle(v);
        const auto pi = PermutationSpec::integer(v);
        Index prev = 0;
        for (double c : {0.25, 0.5, 1.0, 2.0, 4.0}) {
            const Index d = interval_occupancy(pi, c).max_count;
            EXPECT_GE(d, prev);
            prev = d;
        }
    }
}

TEST(Interval, WithinConstantFactorOfExact) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        std::vector<Index> v(64);
        for (Index i = 0; i < 64; ++i) v[static_cast<std::size_t>(i)] = i;
        rng.shuffle(v);
        const auto pi = PermutationSpec::integer(v);
        const Index exact = max_tube_occupancy_exact(permutation_set(pi)).max_count;
        const Index iv = interval_occupancy(pi, 1.0).max_count;
        EXPECT_LE(iv, 16 * exact) << seed;
        EXPECT_LE(exact, 16 * std::max<Index>(iv, 1)) << seed;
    }
}

TEST(Interval, ThreadCountDoesNotChangeResult) {
    const auto pi = quadratic_irrational_perm(128, kSqrt2);
    const auto a = interval_occupancy(pi, 2.0, 1);
    const auto b = interval_occupancy(pi, 2.0, 3);
    EXPECT_EQ(a.max_count, b.max_count);
    EXPECT_EQ(a.anchor, b.anchor);
}

TEST(Interval, RejectsNonFinite) {
    EXPECT_THROW(interval_occupancy(PermutationSpec::quasi({0.0, std::nan("")})), invalid_input);
    EXPECT_THROW(interval_occupancy(identity_perm(4), 0.0), invalid_input);
}
