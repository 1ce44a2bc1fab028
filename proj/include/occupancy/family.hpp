#pragma once

#include <bit>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "lines.hpp"
#include "rng.hpp"

namespace occupancy {

/// A collection of subsets of the ground set {0..M-1}. Members are sorted and
/// duplicate-free; `N` is the nominal member size. Tube families are not
/// uniform (a tube meets between 1 and 2N squares) and are built with
/// `uniform = false`.
struct SetFamily {
    Index M = 0;
    Index N = 0;
    std::vector<std::vector<Index>> members;
    bool uniform = true;

    static SetFamily make(Index M, Index N, std::vector<std::vector<Index>> members, bool uniform = true) {
        require(M >= 1 && N >= 1 && N <= M, "family requires 1 <= N <= M");
        SetFamily f{M, N, std::move(members), uniform};
        for (auto& s : f.members) {
            std::sort(s.begin(), s.end());
            require(std::adjacent_find(s.begin(), s.end()) == s.end(), "family member has repeated elements");
            require(s.empty() || (s.front() >= 0 && s.back() < M), "family member element out of range");
            if (uniform) require(static_cast<Index>(s.size()) == N, "family member does not have N elements");
        }
        return f;
    }

    std::size_t size() const { return members.size(); }

    /// element -> indices of the members containing it.
    std::vector<std::vector<std::size_t>> element_index() const {
        std::vector<std::vector<std::size_t>> idx(static_cast<std::size_t>(M));
        for (std::size_t j = 0; j < members.size(); ++j)
            for (Index e : members[j]) idx[static_cast<std::size_t>(e)].push_back(j);
        return idx;
    }
};

struct IntersectionMax {
    Index count = 0;
    std::optional<std::size_t> witness; // first member attaining count
};

inline std::vector<bool> membership_mask(Index M, const std::vector<Index>& subset) {
    std::vector<bool> mask(static_cast<std::size_t>(M), false);
    for (Index e : subset) {
        require(e >= 0 && e < M, "subset element out of range");
        require(!mask[static_cast<std::size_t>(e)], "subset has repeated elements");
        mask[static_cast<std::size_t>(e)] = true;
    }
    return mask;
}

inline IntersectionMax family_max_intersection(const SetFamily& family, const std::vector<Index>& selection) {
    require(static_cast<Index>(selection.size()) == family.N,
            "selection has " + std::to_string(selection.size()) + " elements, expected " + std::to_string(family.N));
    const auto mask = membership_mask(family.M, selection);
    IntersectionMax best;
    for (std::size_t j = 0; j < family.members.size(); ++j) {
        Index count = 0;
        for (Index e : family.members[j]) count += mask[static_cast<std::size_t>(e)] ? 1 : 0;
        if (!best.witness || count > best.count) best = {count, j};
    }
    return best;
}

struct GreedySelection {
    std::vector<Index> selection; // sorted, N elements
    std::vector<std::vector<Index>> stages; // in selection order
    Index K = 1;
};

/// Multi-stage low-intersection selection for families of at most K*N sets.
///
/// The pool holds elements lying in at most 2K members. Within a stage each
/// picked element removes every element of every member containing it, so a
/// stage meets each member at most once; stages repeat on the shrinking pool
/// until N elements are chosen. With M = N^2 there are at most 8K stages.
inline GreedySelection greedy_low_intersection_select(const SetFamily& family) {
    const Index N = family.N;
    const Index K = std::max<Index>(1, (static_cast<Index>(family.size()) + N - 1) / N);
    if (K > N) throw budget_exceeded("family too large: K = " + std::to_string(K) + " exceeds N = " + std::to_string(N));
    const auto index = family.element_index();
    std::vector<Index> pool;
    for (Index e = 0; e < family.M; ++e)
        if (static_cast<Index>(index[static_cast<std::size_t>(e)].size()) <= 2 * K) pool.push_back(e);

    GreedySelection out;
    out.K = K;
    std::vector<bool> used(static_cast<std::size_t>(family.M), false);
    Index total = 0;
    while (total < N) {
        std::vector<bool> blocked(static_cast<std::size_t>(family.M), false);
        std::vector<Index> stage;
        for (Index e : pool) {
            if (used[static_cast<std::size_t>(e)] || blocked[static_cast<std::size_t>(e)]) continue;
            used[static_cast<std::size_t>(e)] = true;
            stage.push_back(e);
            if (++total == N) break;
            for (std::size_t j : index[static_cast<std::size_t>(e)])
                for (Index f : family.members[j]) blocked[static_cast<std::size_t>(f)] = true;
        }
        ensure(!stage.empty(), "selection pool exhausted before N elements were chosen");
        out.stages.push_back(std::move(stage));
    }
    if (family.M == N * N)
        ensure(static_cast<Index>(out.stages.size()) <= 8 * K,
               "stage count " + std::to_string(out.stages.size()) + " exceeds 8K = " + std::to_string(8 * K));
    for (const auto& st : out.stages) out.selection.insert(out.selection.end(), st.begin(), st.end());
    std::sort(out.selection.begin(), out.selection.end());
    return out;
}

struct RandomSelection {
    std::vector<Index> selection;
    Index max_intersection = 0;
    double threshold = 0;
    double s = 0;
    bool pass = false;
};

/// Threshold beta * log N / log log N (natural logs).
inline double selection_threshold(Index N, double beta) {
    return beta * std::log(static_cast<double>(N)) / std::log(std::log(static_cast<double>(N)));
}

/// Uniform N-subset of {0..M-1} tested against a family presented through
/// `max_intersection(selection)`. `s` is the growth exponent with |family| <= N^(1+s).
template <typename MaxIntersection>
RandomSelection random_select_verify(Index N, Index M, double s, double beta, std::uint64_t seed,
                                     MaxIntersection&& max_intersection) {
    require(N >= 3, "random selection requires N >= 3 so that log log N > 0");
    require(beta > 1 + s, "beta must exceed 1 + s");
    Rng rng(seed);
    RandomSelection r;
    for (std::uint64_t e : rng.subset(static_cast<std::uint64_t>(M), static_cast<std::uint64_t>(N)))
        r.selection.push_back(static_cast<Index>(e));
    r.s = s;
    r.threshold = selection_threshold(N, beta);
    r.max_intersection = max_intersection(r.selection);
    r.pass = static_cast<double>(r.max_intersection) <= r.threshold;
    return r;
}

/// Smallest s >= 0 with |family| <= N^(1+s).
inline double family_growth_exponent(std::size_t family_size, Index N) {
    if (family_size <= 1) return 0.0;
    return std::max(0.0, std::log(static_cast<double>(family_size)) / std::log(static_cast<double>(N)) - 1.0);
}

inline RandomSelection random_select_verify(const SetFamily& family, double beta, std::uint64_t seed) {
    const double s = family_growth_exponent(family.size(), family.N);
    return random_select_verify(family.N, family.M, s, beta, seed, [&](const std::vector<Index>& sel) {
        return family.members.empty() ? Index(0) : family_max_intersection(family, sel).count;
    });
}

namespace detail {

// Lexicographic successor of a k-combination of {0..n-1}; false past the last.
inline bool next_combination(std::vector<Index>& c, Index n) {
    const Index k = static_cast<Index>(c.size());
    Index i = k - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return false;
    ++c[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
    return true;
}

inline std::vector<Index> first_combination(Index k) {
    std::vector<Index> c(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i;
    return c;
}

} // namespace detail

/// Unions of m of the m^2 consecutive blocks of size N/m inside each of the
/// N/m consecutive parts of size N*m of {0..N^2-1}. With ground index
/// row*N + col the blocks are horizontal runs of squares. Every N-subset meets
/// some member in at least m elements.
inline SetFamily adversarial_family(Index N, Index m, std::uint64_t budget = 10'000'000) {
    require(m >= 1 && N >= 1, "adversarial family requires N, m >= 1");
    require(N % m == 0, "m must divide N");
    const Index parts = N / m, block = N / m, blocks = m * m;
    const std::uint64_t per_part = binomial_saturating(static_cast<std::uint64_t>(blocks), static_cast<std::uint64_t>(m));
    if (per_part > budget / static_cast<std::uint64_t>(parts))
        throw budget_exceeded("adversarial family would exceed " + std::to_string(budget) + " members");
    std::vector<std::vector<Index>> members;
    members.reserve(static_cast<std::size_t>(per_part) * static_cast<std::size_t>(parts));
    for (Index i = 0; i < parts; ++i) {
        const Index base = i * N * m;
        auto choice = detail::first_combination(m);
        do {
            std::vector<Index> member;
            member.reserve(static_cast<std::size_t>(N));
            for (Index j : choice)
                for (Index e = 0; e < block; ++e) member.push_back(base + j * block + e);
            members.push_back(std::move(member));
        } while (detail::next_combination(choice, blocks));
    }
    return SetFamily::make(N * N, N, std::move(members));
}

/// All distinct tubes of the resolution-N grid as subsets of {0..N^2-1}. Every
/// line's tube is contained in the tube of a line through two grid corners, so
/// those lines suffice.
inline SetFamily tube_family(Index N, std::uint64_t budget = 10'000'000) {
    require(N >= 1, "N must be >= 1");
    const std::uint64_t corners = static_cast<std::uint64_t>((N + 1) * (N + 1));
    if (corners * (corners - 1) / 2 > budget)
        throw budget_exceeded("tube enumeration at N = " + std::to_string(N) + " exceeds the budget");
    std::vector<Cell> all;
    for (Index c = 0; c < N; ++c)
        for (Index r = 0; r < N; ++r) all.push_back({c, r});
    std::vector<std::vector<Index>> members;
    for (const GridLine& line : critical_lines(GridSet(N, all))) {
        const GridSet tube = tube_squares(line, N);
        std::vector<Index> member;
        for (std::size_t i = 0; i < tube.size(); ++i) member.push_back(tube.ground_index(i));
        std::sort(member.begin(), member.end());
        members.push_back(std::move(member));
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    return SetFamily::make(N * N, N, std::move(members), false);
}

/// Digital tubes: the line from (0, (i + 1/2)/N) to (1, (j + 1/2)/N) keeps,
/// in each column c, the square holding its point at x = (c + 1/2)/N; the
/// transposed family does the same row by row for steep lines. Every member
/// is an N-set and there are at most 2N^2 of them.
namespace detail {

// Row hit in column c by the shallow digital line (i, j).
inline Index digital_row(Index N, Index i, Index j, Index c) {
    return static_cast<Index>(((2 * i + 1) * (2 * N - 2 * c - 1) + (2 * j + 1) * (2 * c + 1)) / (4 * N));
}

} // namespace detail

inline SetFamily digital_tube_family(Index N) {
    require(N >= 1 && N <= 4096, "digital tube family needs 1 <= N <= 4096");
    std::vector<std::vector<Index>> members;
    for (int steep = 0; steep < 2; ++steep)
        for (Index i = 0; i < N; ++i)
            for (Index j = 0; j < N; ++j) {
                std::vector<Index> m;
                for (Index c = 0; c < N; ++c) {
                    const Index r = detail::digital_row(N, i, j, c);
                    m.push_back(steep ? c * N + r : r * N + c);
                }
                std::sort(m.begin(), m.end());
                members.push_back(std::move(m));
            }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    return SetFamily::make(N * N, N, std::move(members));
}

/// Max over digital tubes of |tube cap s|, without materializing the family.
/// For a square (c, r) and a start i the matching ends j form an interval.
inline Index max_digital_tube_occupancy(const GridSet& s) {
    const Index N = s.N();
    require(N <= 4096, "digital tube occupancy needs N <= 4096");
    Index best = 0;
    std::vector<Index> diff(static_cast<std::size_t>(N * (N + 1)));
    for (int steep = 0; steep < 2; ++steep) {
        std::fill(diff.begin(), diff.end(), 0);
        for (const Cell& cell : s.cells()) {
            const Wide c = steep ? cell.row : cell.col;
            const Wide r = steep ? cell.col : cell.row;
            const Wide B = 2 * c + 1;
            for (Index i = 0; i < N; ++i) {
                const Wide A = Wide(2 * i + 1) * (2 * N - 2 * c - 1);
                // 4Nr <= A + vB <= 4N(r+1) - 1 for odd v = 2j + 1.
                const Wide v_lo = detail::ceil_div(4 * Wide(N) * r - A, B);
                const Wide v_hi = detail::floor_div(4 * Wide(N) * (r + 1) - 1 - A, B);
                const Wide j_lo = std::max<Wide>(detail::ceil_div(v_lo - 1, 2), 0);
                const Wide j_hi = std::min<Wide>(detail::floor_div(v_hi - 1, 2), N - 1);
                if (j_lo > j_hi) continue;
                const std::size_t row = static_cast<std::size_t>(i * (N + 1));
                ++diff[row + static_cast<std::size_t>(j_lo)];
                --diff[row + static_cast<std::size_t>(j_hi + 1)];
            }
        }
        for (Index i = 0; i < N; ++i) {
            Index run = 0;
            for (Index j = 0; j < N; ++j) {
                run += diff[static_cast<std::size_t>(i * (N + 1) + j)];
                best = std::max(best, run);
            }
        }
    }
    return best;
}

struct MinimaxResult {
    Index value = 0;
    std::vector<Index> optimal; // lexicographically first minimizer
    std::uint64_t subsets_examined = 0;
};

/// Exact min over N-subsets S' of {0..M-1} of max over members |S cap S'|.
/// Refuses when C(M, N) exceeds the budget.
inline MinimaxResult minimax_occupancy_bruteforce(const SetFamily& family, Index M, Index N,
                                                  std::uint64_t budget = 10'000'000) {
    require(M == family.M, "ground-set size does not match the family");
    require(N >= 1 && N <= M, "selection size out of range");
    const std::uint64_t total = binomial_saturating(static_cast<std::uint64_t>(M), static_cast<std::uint64_t>(N));
    if (total > budget)
        throw budget_exceeded("C(" + std::to_string(M) + ", " + std::to_string(N) + ") = " +
                              (total == UINT64_MAX ? std::string("overflow") : std::to_string(total)) +
                              " exceeds the enumeration budget " + std::to_string(budget));
    const std::size_t words = static_cast<std::size_t>((M + 63) / 64);
    std::vector<std::vector<std::uint64_t>> masks;
    masks.reserve(family.size());
    for (const auto& s : family.members) {
        std::vector<std::uint64_t> w(words, 0);
        for (Index e : s) w[static_cast<std::size_t>(e / 64)] |= std::uint64_t(1) << (e % 64);
        masks.push_back(std::move(w));
    }
    MinimaxResult best;
    best.value = N + 1;
    auto choice = detail::first_combination(N);
    std::vector<std::uint64_t> sel(words);
    do {
        ++best.subsets_examined;
        std::fill(sel.begin(), sel.end(), 0);
        for (Index e : choice) sel[static_cast<std::size_t>(e / 64)] |= std::uint64_t(1) << (e % 64);
        Index worst = 0;
        for (const auto& m : masks) {
            Index c = 0;
            for (std::size_t w = 0; w < words; ++w) c += std::popcount(m[w] & sel[w]);
            worst = std::max(worst, c);
            if (worst >= best.value) break;
        }
        if (worst < best.value) {
            best.value = worst;
            best.optimal = choice;
        }
    } while (best.value > 0 && detail::next_combination(choice, M));
    return best;
}

} // namespace occupancy
