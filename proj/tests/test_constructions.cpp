#include <gtest/gtest.h>

#include <set>

#include "occupancy/constructions.hpp"
#include "occupancy/occupancy.hpp"
#include "occupancy/registry.hpp"

using namespace occupancy;

namespace {

std::vector<Cell> cells_of(std::initializer_list<Cell> c) {
    std::vector<Cell> v(c);
    std::sort(v.begin(), v.end(), [](Cell a, Cell b) { return std::tie(a.col, a.row) < std::tie(b.col, b.row); });
    return v;
}

void expect_valid(const GridSet& s, Index N, Index size) {
    EXPECT_EQ(s.N(), N);
    EXPECT_EQ(static_cast<Index>(s.size()), size);
    std::set<std::pair<Index, Index>> seen;
    for (const Cell& c : s.cells()) {
        EXPECT_TRUE(c.col >= 0 && c.col < N && c.row >= 0 && c.row < N);
        EXPECT_TRUE(seen.insert({c.col, c.row}).second);
    }
}

std::vector<Index> rows(const GridSet& s) {
    std::vector<Index> r;
    for (const Cell& c : s.cells()) r.push_back(c.row);
    return r;
}

} // namespace

TEST(PermutationSet, IdentityAndReversal) {
    EXPECT_EQ(permutation_set(identity_perm(4)).cells(), cells_of({{0, 0}, {1, 1}, {2, 2}, {3, 3}}));
    EXPECT_EQ(permutation_set(reversal_perm(4)).cells(), cells_of({{0, 3}, {1, 2}, {2, 1}, {3, 0}}));
}

TEST(PermutationSet, GoldenRows) {
    // floor(8 {n phi}) for n = 1..8, evaluated in 40-digit decimal arithmetic.
    EXPECT_EQ(rows(permutation_set(quadratic_irrational_perm(8, kGoldenRatio))),
              (std::vector<Index>{4, 1, 6, 3, 0, 5, 2, 7}));
}

TEST(QuadraticIrrational, Values) {
    const auto g = quadratic_irrational_perm(5, kGoldenRatio);
    const std::vector<double> golden = {3.0901699437, 1.1803398874, 4.2705098312, 2.3606797749, 0.4508497187};
    ASSERT_EQ(g.values.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(g.values[i], golden[i], 1e-9);
    EXPECT_EQ(g.kind, PermutationKind::quasi_permutation);

    const auto r = quadratic_irrational_perm(8, kSqrt2);
    const std::vector<double> root2 = {3.3137084989, 6.6274169979, 1.9411254969, 5.2548339959,
                                       0.5685424949, 3.8822509939, 7.1959594928, 2.5096679918};
    for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(r.values[i], root2[i], 1e-9);
    EXPECT_EQ(rows(permutation_set(r)), (std::vector<Index>{3, 6, 1, 5, 0, 3, 7, 2}));
    EXPECT_EQ(row_collisions(r), 1);

    const auto one = quadratic_irrational_perm(1, 0.37);
    ASSERT_EQ(one.values.size(), 1u);
    EXPECT_NEAR(one.values[0], 0.37, 1e-12);
}

TEST(QuadraticIrrational, Separation) {
    for (Index N : {64, 256, 1024}) {
        const auto p = quadratic_irrational_perm(N, kGoldenRatio);
        double worst = 1e300;
        for (Index n = 0; n < N; ++n)
            for (Index m = n + 1; m < N; ++m)
                worst = std::min(worst, std::abs(p.values[n] - p.values[m]) / static_cast<double>(N) *
                                            static_cast<double>(m - n));
        EXPECT_GE(worst, 0.38) << N;
    }
}

TEST(QuadraticIrrational, ContinuedFraction) {
    EXPECT_NEAR(continued_fraction_value({1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1}),
                kGoldenRatio, 1e-12);
    EXPECT_NEAR(continued_fraction_value({1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2}), kSqrt2, 1e-12);
    EXPECT_EQ(row_collisions(quadratic_irrational_perm(64, 0.5)), 62);
}

TEST(BitReversal, Examples) {
    EXPECT_EQ(bit_reversal_perm(2).image(), (std::vector<Index>{0, 2, 1, 3}));
    const auto p3 = bit_reversal_perm(3).image();
    EXPECT_EQ(p3[1], 4);
    std::vector<Index> fixed;
    for (Index n = 0; n < 8; ++n)
        if (p3[static_cast<std::size_t>(n)] == n) fixed.push_back(n);
    EXPECT_EQ(fixed, (std::vector<Index>{0, 2, 5, 7}));
}

TEST(BitReversal, Involution) {
    for (int t = 1; t <= 12; ++t) {
        const auto p = bit_reversal_perm(t).image();
        for (std::size_t n = 0; n < p.size(); ++n) ASSERT_EQ(p[static_cast<std::size_t>(p[n])], static_cast<Index>(n));
    }
}

TEST(DigitScramble, SpecialOrders) {
    EXPECT_EQ(digit_permutation_perm({0, 1, 2, 3}).image(), identity_perm(16).image());
    EXPECT_EQ(digit_permutation_perm({4, 3, 2, 1, 0}).image(), bit_reversal_perm(5).image());
}

TEST(DigitScramble, BijectiveAndDeterministic) {
    const auto a = digit_scramble_perm(4, 1);
    EXPECT_EQ(a.image(), digit_scramble_perm(4, 1).image());
    std::vector<Index> sorted = a.image();
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, identity_perm(16).image());
    for (std::uint64_t seed = 0; seed < 50; ++seed)
        EXPECT_NO_THROW(digit_scramble_perm(1 + static_cast<int>(seed % 10), seed)); // integer() checks bijectivity
}

TEST(OnePerCell, Examples) {
    EXPECT_EQ(one_per_cell_set(4, CellPlacement::corner).cells(), cells_of({{0, 0}, {2, 0}, {0, 2}, {2, 2}}));
    EXPECT_EQ(one_per_cell_set(9, CellPlacement::center).cells(),
              cells_of({{1, 1}, {1, 4}, {1, 7}, {4, 1}, {4, 4}, {4, 7}, {7, 1}, {7, 4}, {7, 7}}));
    const GridSet r = one_per_cell_set(16, CellPlacement::random, 7);
    expect_valid(r, 16, 16);
    std::map<std::pair<Index, Index>, int> per_cell;
    for (const Cell& c : r.cells()) ++per_cell[{c.col / 4, c.row / 4}];
    EXPECT_EQ(per_cell.size(), 16u);
    for (const auto& [cell, n] : per_cell) EXPECT_EQ(n, 1);
    EXPECT_THROW(one_per_cell_set(8, CellPlacement::center), invalid_input);
}

TEST(Packed, Examples) {
    EXPECT_EQ(packed_cell_set(4).cells(), cells_of({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
    const GridSet nine = packed_cell_set(9);
    expect_valid(nine, 9, 9);
    for (const Cell& c : nine.cells()) EXPECT_TRUE(c.col < 3 && c.row < 3);
    EXPECT_GE(max_tube_occupancy_exact(packed_cell_set(16)).max_count, 4);
    EXPECT_THROW(packed_cell_set(10), invalid_input);
}

TEST(Curves, Examples) {
    // x = 1/8, 3/8, 5/8, 7/8; 4x^2 = 1/16, 9/16, 25/16, 49/16.
    const auto p = curve_set(4, CurveKind::parabola);
    EXPECT_EQ(p.set.cells(), cells_of({{0, 0}, {1, 0}, {2, 1}, {3, 3}}));
    EXPECT_EQ(p.duplicates, 0);
    for (auto kind : {CurveKind::parabola, CurveKind::circle_arc, CurveKind::sine})
        EXPECT_EQ(curve_set(2, kind).set.size(), 2u);
    const auto arc = curve_set(16, CurveKind::circle_arc);
    EXPECT_EQ(arc.set.size(), 16u);
    EXPECT_EQ(arc.duplicates, 0);
    // Columns are distinct, so duplicates never occur.
    for (Index N : {3, 50, 257}) EXPECT_EQ(curve_set(N, CurveKind::parabola).set.size(), static_cast<std::size_t>(N));
}

TEST(SelfSimilar, Examples) {
    const GridSet one(2, {{0, 0}});
    const GridSet c = self_similar_compose(one, one);
    EXPECT_EQ(c.N(), 4);
    EXPECT_EQ(c.cells(), cells_of({{0, 0}}));
    const GridSet a = permutation_set(quadratic_irrational_perm(4, kGoldenRatio));
    const GridSet aa = self_similar_compose(a, a);
    expect_valid(aa, 16, 16);
    const GridSet aaa = self_similar_compose(aa, a);
    expect_valid(aaa, 64, 64);
}

TEST(SelfSimilar, OccupancyIsSubmultiplicativeForOptimalBase) {
    const GridSet a = optimal_tube_set(4);
    EXPECT_EQ(a.size(), 4u);
    const Index occ_a = max_tube_occupancy_exact(a).max_count;
    const Index occ_aa = max_tube_occupancy_exact(self_similar_compose(a, a)).max_count;
    EXPECT_LE(occ_aa, occ_a * occ_a);
}

TEST(RandomSet, Basics) {
    expect_valid(random_set(1, 3), 1, 1);
    EXPECT_EQ(random_set(20, 99), random_set(20, 99));
    EXPECT_FALSE(random_set(20, 99) == random_set(20, 100));
}

TEST(RandomSet, InclusionFrequency) {
    // Per-square counts over 100 draws are Binomial(100, 1/N); aggregated per
    // row and per column they are Binomial(100 N, 1/N).
    const Index N = 256;
    const int draws = 100;
    std::vector<double> row_hits(N), col_hits(N);
    for (int seed = 0; seed < draws; ++seed) {
        const GridSet s = random_set(N, static_cast<std::uint64_t>(seed));
        ASSERT_EQ(static_cast<Index>(s.size()), N);
        for (const Cell& c : s.cells()) {
            ++row_hits[static_cast<std::size_t>(c.row)];
            ++col_hits[static_cast<std::size_t>(c.col)];
        }
    }
    const double p = 1.0 / static_cast<double>(N);
    const double trials = static_cast<double>(draws) * static_cast<double>(N);
    const double mean = trials * p, sigma = std::sqrt(trials * p * (1 - p));
    for (Index i = 0; i < N; ++i) {
        EXPECT_LE(std::abs(row_hits[static_cast<std::size_t>(i)] - mean), 5 * sigma) << "row " << i;
        EXPECT_LE(std::abs(col_hits[static_cast<std::size_t>(i)] - mean), 5 * sigma) << "col " << i;
    }
}

TEST(Generators, AllEmitValidSets) {
    for (const auto& id : construction_ids()) {
        const Index N = id == "selfsim" || id == "onecell" || id == "packed" ? 16 : 32;
        const Construction c = build_construction(id, N, {}, 5);
        expect_valid(c.set, N, N);
        if (c.perm && c.perm->kind == PermutationKind::integer_permutation) {
            std::set<Index> rs;
            for (const Cell& cell : c.set.cells()) rs.insert(cell.row);
            EXPECT_EQ(static_cast<Index>(rs.size()), N) << id;
        }
    }
    EXPECT_THROW(build_construction("nope", 8, {}, 0), invalid_input);
    EXPECT_THROW(build_construction("bitrev", 12, {}, 0), invalid_input);
}
