#include <gtest/gtest.h>

#include <set>

#include "occupancy/constructions.hpp"
#include "occupancy/family.hpp"
#include "occupancy/occupancy.hpp"

using namespace occupancy;

namespace {

std::vector<Index> sorted_subset(Rng& rng, Index M, Index N) {
    std::vector<Index> out;
    for (auto e : rng.subset(static_cast<std::uint64_t>(M), static_cast<std::uint64_t>(N))) out.push_back(static_cast<Index>(e));
    return out;
}

SetFamily random_family(Index M, Index N, Index count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<Index>> members;
    for (Index i = 0; i < count; ++i) members.push_back(sorted_subset(rng, M, N));
    return SetFamily::make(M, N, std::move(members));
}

Index naive_max(const SetFamily& f, const std::vector<Index>& sel) {
    Index best = 0;
    for (const auto& s : f.members) {
        Index n = 0;
        for (Index a : s)
            for (Index b : sel) n += a == b;
        best = std::max(best, n);
    }
    return best;
}

} // namespace

TEST(FamilyMaxIntersection, Examples) {
    const std::vector<Index> sel = {1, 5, 9, 12};
    EXPECT_EQ(family_max_intersection(SetFamily::make(16, 4, {sel}), sel).count, 4);
    const auto disjoint = SetFamily::make(16, 4, {{0, 2, 3, 4}, {6, 7, 8, 10}, {11, 13, 14, 15}});
    EXPECT_EQ(family_max_intersection(disjoint, sel).count, 0);
    EXPECT_EQ(family_max_intersection(disjoint, sel).witness, 0u);
    EXPECT_THROW(family_max_intersection(disjoint, {1, 2}), invalid_input);
}

TEST(FamilyMaxIntersection, MatchesNaiveRecount) {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const SetFamily f = random_family(256, 16, 40, rng.next());
        const auto sel = sorted_subset(rng, 256, 16);
        const auto r = family_max_intersection(f, sel);
        EXPECT_EQ(r.count, naive_max(f, sel));
        // First witness in member order.
        for (std::size_t j = 0; j < *r.witness; ++j) {
            std::vector<Index> inter;
            std::set_intersection(f.members[j].begin(), f.members[j].end(), sel.begin(), sel.end(), std::back_inserter(inter));
            EXPECT_LT(static_cast<Index>(inter.size()), r.count);
        }
    }
}

TEST(SetFamily, Validation) {
    EXPECT_THROW(SetFamily::make(4, 2, {{0, 0}}), invalid_input);
    EXPECT_THROW(SetFamily::make(4, 2, {{0, 4}}), invalid_input);
    EXPECT_THROW(SetFamily::make(4, 2, {{0, 1, 2}}), invalid_input);
    EXPECT_NO_THROW(SetFamily::make(4, 2, {{0, 1, 2}}, false));
    const auto f = SetFamily::make(4, 2, {{3, 1}, {1, 2}});
    EXPECT_EQ(f.members[0], (std::vector<Index>{1, 3}));
    const auto idx = f.element_index();
    EXPECT_EQ(idx[1], (std::vector<std::size_t>{0, 1}));
    EXPECT_TRUE(idx[0].empty());
}

namespace {

void check_greedy(const SetFamily& f, const GreedySelection& g) {
    ASSERT_EQ(static_cast<Index>(g.selection.size()), f.N);
    EXPECT_TRUE(std::is_sorted(g.selection.begin(), g.selection.end()));
    EXPECT_EQ(std::adjacent_find(g.selection.begin(), g.selection.end()), g.selection.end());
    EXPECT_LE(static_cast<Index>(g.stages.size()), 8 * g.K);
    for (const auto& stage : g.stages) {
        std::vector<Index> st = stage;
        std::sort(st.begin(), st.end());
        for (const auto& member : f.members) {
            std::vector<Index> inter;
            std::set_intersection(member.begin(), member.end(), st.begin(), st.end(), std::back_inserter(inter));
            EXPECT_LE(inter.size(), 1u);
        }
    }
    if (!f.members.empty()) {
        const Index bound = static_cast<Index>(g.stages.size());
        EXPECT_LE(family_max_intersection(f, g.selection).count, bound);
        EXPECT_EQ(family_max_intersection(f, g.selection).count, naive_max(f, g.selection));
    }
}

} // namespace

TEST(Greedy, EmptyFamily) {
    const auto f = SetFamily::make(64, 8, {});
    const auto g = greedy_low_intersection_select(f);
    EXPECT_EQ(g.selection.size(), 8u);
    EXPECT_EQ(g.stages.size(), 1u);
    EXPECT_EQ(naive_max(f, g.selection), 0);
}

TEST(Greedy, DisjointTiling) {
    const Index N = 16;
    std::vector<std::vector<Index>> members;
    for (Index i = 0; i < N; ++i) {
        std::vector<Index> m;
        for (Index e = 0; e < N; ++e) m.push_back(i * N + e);
        members.push_back(m);
    }
    const auto f = SetFamily::make(N * N, N, members);
    const auto g = greedy_low_intersection_select(f);
    EXPECT_EQ(g.K, 1);
    check_greedy(f, g);
    EXPECT_LE(family_max_intersection(f, g.selection).count, 8);
}

TEST(Greedy, RandomFamilies) {
    const Index N = 32;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto f = random_family(N * N, N, 2 * N, seed);
        const auto g = greedy_low_intersection_select(f);
        EXPECT_EQ(g.K, 2);
        check_greedy(f, g);
        EXPECT_LE(family_max_intersection(f, g.selection).count, 16);
    }
}

TEST(Greedy, TooLargeFamilyRefused) {
    const auto f = random_family(16, 4, 17, 1);
    EXPECT_THROW(greedy_low_intersection_select(f), budget_exceeded);
}

TEST(RandomSelect, Examples) {
    const auto single = random_family(10000, 100, 1, 3);
    Index passes = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto r = random_select_verify(single, 2.0, seed);
        EXPECT_NEAR(r.threshold, 6.03, 0.01);
        passes += r.pass;
    }
    EXPECT_GE(passes, 995);

    const auto empty = SetFamily::make(100, 10, {});
    const auto r = random_select_verify(empty, 2.0, 1);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.max_intersection, 0);
    EXPECT_EQ(r.selection.size(), 10u);
}

TEST(RandomSelect, Preconditions) {
    EXPECT_THROW(random_select_verify(SetFamily::make(4, 2, {}), 2.0, 0), invalid_input);
    const auto big = random_family(100, 10, 1000, 2); // s = 2
    EXPECT_NEAR(family_growth_exponent(big.size(), big.N), 2.0, 1e-12);
    EXPECT_THROW(random_select_verify(big, 2.9, 0), invalid_input);
    EXPECT_NO_THROW(random_select_verify(big, 3.5, 0));
}

TEST(RandomSelect, Deterministic) {
    const auto f = random_family(400, 20, 30, 4);
    EXPECT_EQ(random_select_verify(f, 2.5, 9).selection, random_select_verify(f, 2.5, 9).selection);
}

TEST(Adversarial, SingleBlocks) {
    const auto f = adversarial_family(4, 1);
    ASSERT_EQ(f.size(), 4u);
    for (Index i = 0; i < 4; ++i) EXPECT_EQ(f.members[static_cast<std::size_t>(i)], (std::vector<Index>{4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3}));
    auto sel = std::vector<Index>{0, 1, 2, 3};
    Index n = 0;
    do {
        ++n;
        ASSERT_GE(family_max_intersection(f, sel).count, 1);
    } while (detail::next_combination(sel, 16));
    EXPECT_EQ(n, 1820);
}

TEST(Adversarial, PigeonholeAtTwentySeven) {
    const auto f = adversarial_family(27, 3);
    EXPECT_EQ(f.size(), 756u);
    Rng rng(32);
    for (int i = 0; i < 2000; ++i) ASSERT_GE(family_max_intersection(f, sorted_subset(rng, 729, 27)).count, 3);
}

TEST(Adversarial, Divisibility) {
    EXPECT_THROW(adversarial_family(10, 3), invalid_input);
    EXPECT_THROW(adversarial_family(10, 0), invalid_input);
    const auto f = adversarial_family(8, 2); // 4 parts of C(4,2) = 6
    EXPECT_EQ(f.size(), 24u);
}

TEST(TubeFamily, MembersAreTubes) {
    for (Index N : {1, 2, 3, 4}) {
        const auto f = tube_family(N);
        EXPECT_FALSE(f.uniform);
        std::set<std::vector<Index>> distinct(f.members.begin(), f.members.end());
        EXPECT_EQ(distinct.size(), f.size());
        for (const auto& m : f.members) {
            EXPECT_GE(m.size(), 1u);
            EXPECT_LE(static_cast<Index>(m.size()), 3 * N);
        }
    }
    EXPECT_EQ(tube_family(1).size(), 1u);
    EXPECT_THROW(tube_family(64, 1000), budget_exceeded);
}

TEST(TubeFamily, RandomLineTubeIsContainedInAMember) {
    const Index N = 4;
    const auto f = tube_family(N);
    Rng rng(33);
    for (int i = 0; i < 2000; ++i) {
        const GridSet t = tube_squares(random_line(rng), N);
        std::vector<Index> g;
        for (std::size_t j = 0; j < t.size(); ++j) g.push_back(t.ground_index(j));
        std::sort(g.begin(), g.end());
        bool found = false;
        for (const auto& m : f.members)
            if (std::includes(m.begin(), m.end(), g.begin(), g.end())) {
                found = true;
                break;
            }
        EXPECT_TRUE(found);
    }
}

TEST(Minimax, Examples) {
    // All 2-subsets of a 4-set: any selection is itself a member.
    std::vector<std::vector<Index>> pairs;
    auto c = std::vector<Index>{0, 1};
    do pairs.push_back(c);
    while (detail::next_combination(c, 4));
    const auto all_pairs = SetFamily::make(4, 2, pairs);
    EXPECT_EQ(minimax_occupancy_bruteforce(all_pairs, 4, 2).value, 2);

    // A partition into N blocks: one element from each block is optimal.
    const auto few = SetFamily::make(9, 3, {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}});
    const auto r = minimax_occupancy_bruteforce(few, 9, 3);
    EXPECT_EQ(r.value, 1);
    const auto avoidable = SetFamily::make(9, 3, {{0, 1, 2}, {2, 3, 4}});
    EXPECT_EQ(minimax_occupancy_bruteforce(avoidable, 9, 3).value, 0);

    EXPECT_THROW(minimax_occupancy_bruteforce(all_pairs, 5, 2), invalid_input);
    EXPECT_THROW(minimax_occupancy_bruteforce(tube_family(8), 64, 8, 1000), budget_exceeded);
}

TEST(Minimax, ZeroIffSomeSelectionAvoidsEveryMember) {
    Rng rng(34);
    for (int trial = 0; trial < 40; ++trial) {
        const Index M = 8, N = 3;
        const auto f = random_family(M, N, 1 + static_cast<Index>(rng.below(5)), rng.next());
        const auto r = minimax_occupancy_bruteforce(f, M, N);
        std::vector<bool> hit(static_cast<std::size_t>(M));
        for (const auto& m : f.members)
            for (Index e : m) hit[static_cast<std::size_t>(e)] = true;
        const Index free = static_cast<Index>(std::count(hit.begin(), hit.end(), false));
        EXPECT_EQ(r.value == 0, free >= N);
        EXPECT_EQ(naive_max(f, r.optimal), r.value);
    }
}

TEST(Minimax, TubeFamilyMatchesExactEvaluatorMinimum) {
    // Second route: minimum exact occupancy over all 4-subsets of the 4-grid.
    const Index N = 4;
    const auto f = tube_family(N);
    const auto r = minimax_occupancy_bruteforce(f, N * N, N);
    Index best = N + 1;
    auto c = detail::first_combination(N);
    do {
        std::vector<Cell> cells;
        for (Index g : c) cells.push_back({g % N, g / N});
        best = std::min(best, max_tube_occupancy_exact(GridSet(N, cells)).max_count);
    } while (detail::next_combination(c, N * N));
    EXPECT_EQ(r.value, best);
    EXPECT_EQ(r.value, 2);
}

TEST(DigitalTubes, MembersAreOneSquarePerColumnOrRow) {
    const Index N = 12;
    const SetFamily f = digital_tube_family(N);
    EXPECT_TRUE(f.uniform);
    EXPECT_LE(f.size(), static_cast<std::size_t>(2 * N * N));
    EXPECT_GT(f.size(), static_cast<std::size_t>(N * N));
    for (const auto& m : f.members) {
        std::vector<int> cols(static_cast<std::size_t>(N)), rows(static_cast<std::size_t>(N));
        for (Index g : m) {
            ++cols[static_cast<std::size_t>(g % N)];
            ++rows[static_cast<std::size_t>(g / N)];
        }
        const bool per_col = std::all_of(cols.begin(), cols.end(), [](int k) { return k == 1; });
        const bool per_row = std::all_of(rows.begin(), rows.end(), [](int k) { return k == 1; });
        EXPECT_TRUE(per_col || per_row);
    }
    // Horizontal and vertical center lines are members.
    std::vector<Index> row3, col5;
    for (Index k = 0; k < N; ++k) {
        row3.push_back(3 * N + k);
        col5.push_back(k * N + 5);
    }
    EXPECT_TRUE(std::binary_search(f.members.begin(), f.members.end(), row3));
    EXPECT_TRUE(std::binary_search(f.members.begin(), f.members.end(), col5));
}

TEST(DigitalTubes, FastCountMatchesFamilyRecount) {
    for (Index N : {1, 2, 5, 16, 33}) {
        const SetFamily f = digital_tube_family(N);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const GridSet s = random_set(N, seed);
            std::vector<Index> sel;
            for (std::size_t i = 0; i < s.size(); ++i) sel.push_back(s.ground_index(i));
            EXPECT_EQ(max_digital_tube_occupancy(s), family_max_intersection(f, sel).count) << N << " " << seed;
        }
    }
    EXPECT_EQ(max_digital_tube_occupancy(permutation_set(identity_perm(64))), 64);
}

TEST(DigitalTubes, NeverAboveClosedTubes) {
    // Each digital tube lies inside the closed tube of its line.
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const GridSet s = random_set(24, seed);
        EXPECT_LE(max_digital_tube_occupancy(s), max_tube_occupancy_exact(s).max_count);
    }
}
