#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "common.hpp"
#include "family.hpp"
#include "rng.hpp"

namespace occupancy {

enum class CoverMethod { greedy, random_patch };

inline const char* cover_method_name(CoverMethod m) { return m == CoverMethod::greedy ? "greedy" : "random-patch"; }

/// k-subsets of {0..n-1} covering every l-subset.
struct CoverResult {
    Index n = 0, k = 0, l = 0;
    std::vector<std::vector<Index>> k_sets;
    CoverMethod method = CoverMethod::greedy;
    bool certified = false;
    Index random_sets = 0; // random-patch: x
    Index patches = 0;     // random-patch: patch sets added
};

namespace detail {

struct BinomialTable {
    std::vector<std::vector<std::uint64_t>> c;
    explicit BinomialTable(Index n) : c(static_cast<std::size_t>(n + 1)) {
        for (Index i = 0; i <= n; ++i) {
            c[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(n + 1), 0);
            c[static_cast<std::size_t>(i)][0] = 1;
            for (Index j = 1; j <= i; ++j)
                c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] +
                    (j <= i - 1 ? c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)] : 0);
        }
    }
    std::uint64_t operator()(Index n, Index k) const {
        return k < 0 || k > n ? 0 : c[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
    }
};

// Colex rank of a sorted combination.
inline std::uint64_t colex_rank(const std::vector<Index>& comb, const BinomialTable& binom) {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < comb.size(); ++i) r += binom(comb[i], static_cast<Index>(i + 1));
    return r;
}

inline void validate_cover_params(Index n, Index k, Index l, std::uint64_t budget) {
    require(l >= 1, "l must be >= 1");
    require(l < k && k <= n, "cover parameters must satisfy 1 <= l < k <= n");
    require(n <= 62, "cover ground sets are limited to n <= 62");
    const std::uint64_t lsets = binomial_saturating(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(l));
    const std::uint64_t ksets = binomial_saturating(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k));
    if (lsets > budget || ksets > budget)
        throw budget_exceeded("cover enumeration for (" + std::to_string(n) + "," + std::to_string(k) + "," +
                              std::to_string(l) + ") exceeds the budget");
}

// l-subsets (by colex rank) contained in a k-set.
inline std::vector<std::uint64_t> contained_ranks(const std::vector<Index>& kset, Index l, const BinomialTable& binom) {
    std::vector<std::uint64_t> out;
    auto pick = first_combination(l);
    std::vector<Index> sub(static_cast<std::size_t>(l));
    do {
        for (Index i = 0; i < l; ++i) sub[static_cast<std::size_t>(i)] = kset[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
        out.push_back(colex_rank(sub, binom));
    } while (next_combination(pick, static_cast<Index>(kset.size())));
    return out;
}

} // namespace detail

/// Independent certification: enumerates every l-subset as a bitmask and looks
/// for a superset among the cover's k-sets.
inline bool verify_cover(Index n, Index l, const std::vector<std::vector<Index>>& k_sets) {
    std::vector<std::uint64_t> masks;
    for (const auto& s : k_sets) {
        std::uint64_t m = 0;
        for (Index e : s) m |= std::uint64_t(1) << e;
        masks.push_back(m);
    }
    auto comb = detail::first_combination(l);
    do {
        std::uint64_t m = 0;
        for (Index e : comb) m |= std::uint64_t(1) << e;
        bool covered = false;
        for (std::uint64_t s : masks)
            if ((s & m) == m) {
                covered = true;
                break;
            }
        if (!covered) return false;
    } while (detail::next_combination(comb, n));
    return true;
}

/// Greedy cover: repeatedly add the k-set covering the most uncovered l-sets,
/// ties to the lexicographically smallest k-set.
inline CoverResult greedy_cover(Index n, Index k, Index l, std::uint64_t budget = 10'000'000) {
    detail::validate_cover_params(n, k, l, budget);
    const detail::BinomialTable binom(n);
    std::vector<std::vector<Index>> ksets;
    std::vector<std::vector<std::uint64_t>> contains;
    auto comb = detail::first_combination(k);
    do {
        ksets.push_back(comb);
        contains.push_back(detail::contained_ranks(comb, l, binom));
    } while (detail::next_combination(comb, n));

    std::vector<bool> covered(static_cast<std::size_t>(binom(n, l)), false);
    std::uint64_t remaining = binom(n, l);
    std::vector<std::uint64_t> gain(ksets.size(), binom(k, l));
    CoverResult r{n, k, l, {}, CoverMethod::greedy};
    while (remaining > 0) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < ksets.size(); ++i)
            if (gain[i] > gain[best]) best = i;
        ensure(gain[best] > 0, "greedy cover stalled");
        r.k_sets.push_back(ksets[best]);
        for (std::uint64_t rank : contains[best]) {
            if (covered[rank]) continue;
            covered[rank] = true;
            --remaining;
        }
        for (std::size_t i = 0; i < ksets.size(); ++i) {
            std::uint64_t g = 0;
            for (std::uint64_t rank : contains[i]) g += covered[rank] ? 0 : 1;
            gain[i] = g;
        }
    }
    r.certified = verify_cover(n, l, r.k_sets);
    return r;
}

/// Number of random k-sets drawn before patching: ceil(C(n,l)/C(k,l) * ln C(k,l)).
inline Index random_patch_draws(Index n, Index k, Index l) {
    const double nl = static_cast<double>(binomial_saturating(n, l));
    const double kl = static_cast<double>(binomial_saturating(k, l));
    return static_cast<Index>(std::ceil(nl / kl * std::log(kl)));
}

/// Expected-size bound x + C(n,l) * (1 - C(k,l)/C(n,l))^x.
inline double random_patch_expected_bound(Index n, Index k, Index l) {
    const double nl = static_cast<double>(binomial_saturating(n, l));
    const double kl = static_cast<double>(binomial_saturating(k, l));
    const Index x = random_patch_draws(n, k, l);
    return static_cast<double>(x) + nl * std::pow(1.0 - kl / nl, static_cast<double>(x));
}

/// Draws x random k-sets, then patches each still-uncovered l-set L (in
/// lexicographic order) with L plus the smallest k - l elements outside it.
inline CoverResult random_patch_cover(Index n, Index k, Index l, std::uint64_t seed, std::uint64_t budget = 10'000'000) {
    detail::validate_cover_params(n, k, l, budget);
    const detail::BinomialTable binom(n);
    Rng rng(seed);
    CoverResult r{n, k, l, {}, CoverMethod::random_patch};
    r.random_sets = random_patch_draws(n, k, l);
    std::vector<bool> covered(static_cast<std::size_t>(binom(n, l)), false);
    auto mark = [&](const std::vector<Index>& kset) {
        for (std::uint64_t rank : detail::contained_ranks(kset, l, binom)) covered[rank] = true;
    };
    for (Index i = 0; i < r.random_sets; ++i) {
        std::vector<Index> s;
        for (std::uint64_t e : rng.subset(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k)))
            s.push_back(static_cast<Index>(e));
        mark(s);
        r.k_sets.push_back(std::move(s));
    }
    auto lset = detail::first_combination(l);
    do {
        if (covered[detail::colex_rank(lset, binom)]) continue;
        std::vector<Index> patch = lset;
        for (Index e = 0; static_cast<Index>(patch.size()) < k; ++e)
            if (!std::binary_search(lset.begin(), lset.end(), e)) patch.push_back(e);
        std::sort(patch.begin(), patch.end());
        mark(patch);
        r.k_sets.push_back(std::move(patch));
        ++r.patches;
    } while (detail::next_combination(lset, n));
    r.certified = verify_cover(n, l, r.k_sets);
    return r;
}

/// Covering number M(n,k,l) by exhaustive search over covers of at most
/// `max_size` k-sets; returns -1 if none is found.
inline Index exhaustive_cover_size(Index n, Index k, Index l, Index max_size, std::uint64_t budget = 10'000'000) {
    detail::validate_cover_params(n, k, l, budget);
    const detail::BinomialTable binom(n);
    const Index lsets = static_cast<Index>(binom(n, l));
    require(lsets <= 64, "exhaustive cover search supports at most 64 l-sets");
    std::vector<std::uint64_t> masks;
    auto comb = detail::first_combination(k);
    do {
        std::uint64_t m = 0;
        for (std::uint64_t rank : detail::contained_ranks(comb, l, binom)) m |= std::uint64_t(1) << rank;
        masks.push_back(m);
    } while (detail::next_combination(comb, n));
    const std::uint64_t full = lsets == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << lsets) - 1;
    std::uint64_t examined = 0;
    for (Index size = 1; size <= std::min<Index>(max_size, static_cast<Index>(masks.size())); ++size) {
        auto pick = detail::first_combination(size);
        do {
            if (++examined > budget) throw budget_exceeded("exhaustive cover search exceeds the budget");
            std::uint64_t m = 0;
            for (Index i : pick) m |= masks[static_cast<std::size_t>(i)];
            if (m == full) return size;
        } while (detail::next_combination(pick, static_cast<Index>(masks.size())));
    }
    return -1;
}

/// Counting lower bound C(n,l)/C(k,l) and greedy upper bound
/// (C(n,l)/C(k,l)) * (1 + ln C(k,l)).
inline double cover_lower_bound(Index n, Index k, Index l) {
    return static_cast<double>(binomial_saturating(n, l)) / static_cast<double>(binomial_saturating(k, l));
}

inline double greedy_cover_bound(Index n, Index k, Index l) {
    return cover_lower_bound(n, k, l) * (1.0 + std::log(static_cast<double>(binomial_saturating(k, l))));
}

} // namespace occupancy
