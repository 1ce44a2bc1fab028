#pragma once

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "grid.hpp"
#include "permutation.hpp"
#include "rng.hpp"

namespace occupancy {

inline constexpr double kGoldenRatio = std::numbers::phi;
inline constexpr double kSqrt2 = std::numbers::sqrt2;

/// One square per column: (col = i, row = clamp(floor(values[i]), 0, N-1)).
inline GridSet permutation_set(const PermutationSpec& pi) {
    std::vector<Cell> cells;
    cells.reserve(pi.values.size());
    for (std::size_t i = 0; i < pi.values.size(); ++i) {
        const Index row = std::clamp<Index>(static_cast<Index>(std::floor(pi.values[i])), 0, pi.N - 1);
        cells.push_back({static_cast<Index>(i), row});
    }
    return GridSet(pi.N, std::move(cells));
}

inline PermutationSpec identity_perm(Index N) {
    std::vector<Index> v(static_cast<std::size_t>(N));
    std::iota(v.begin(), v.end(), 0);
    return PermutationSpec::integer(std::move(v));
}

/// pi(n) = N + 1 - n in 1-based terms.
inline PermutationSpec reversal_perm(Index N) {
    std::vector<Index> v(static_cast<std::size_t>(N));
    for (Index i = 0; i < N; ++i) v[static_cast<std::size_t>(i)] = N - 1 - i;
    return PermutationSpec::integer(std::move(v));
}

inline double fractional_part(long double x) { return static_cast<double>(x - std::floor(x)); }

/// pi(n) = N * {n * theta} for n = 1..N, stored at index n - 1.
inline PermutationSpec quadratic_irrational_perm(Index N, double theta = kGoldenRatio) {
    require(N >= 1, "N must be >= 1");
    require(std::isfinite(theta), "theta must be finite");
    std::vector<double> v(static_cast<std::size_t>(N));
    for (Index n = 1; n <= N; ++n)
        v[static_cast<std::size_t>(n - 1)] =
            static_cast<double>(N) * fractional_part(static_cast<long double>(n) * static_cast<long double>(theta));
    return PermutationSpec::quasi(std::move(v));
}

/// Value of the continued fraction [a0; a1, a2, ...].
inline double continued_fraction_value(const std::vector<Index>& terms) {
    require(!terms.empty(), "continued fraction needs at least one term");
    long double x = static_cast<long double>(terms.back());
    for (std::size_t i = terms.size() - 1; i-- > 0;) {
        require(x != 0, "continued fraction term is zero");
        x = static_cast<long double>(terms[i]) + 1.0L / x;
    }
    return static_cast<double>(x);
}

/// Rows with more than one column indicate theta is (numerically) rational at this N.
inline Index row_collisions(const PermutationSpec& pi) {
    std::vector<Index> rows;
    for (double v : pi.values) rows.push_back(std::clamp<Index>(static_cast<Index>(std::floor(v)), 0, pi.N - 1));
    std::sort(rows.begin(), rows.end());
    return static_cast<Index>(rows.size()) -
           static_cast<Index>(std::unique(rows.begin(), rows.end()) - rows.begin());
}

/// Permutes the t binary digits of n: digit i of n becomes digit sigma[i] of pi(n).
inline PermutationSpec digit_permutation_perm(const std::vector<int>& sigma) {
    const int t = static_cast<int>(sigma.size());
    require(t >= 1 && t <= 30, "digit count must be in [1, 30]");
    const Index N = Index(1) << t;
    std::vector<Index> v(static_cast<std::size_t>(N));
    for (Index n = 0; n < N; ++n) {
        Index out = 0;
        for (int i = 0; i < t; ++i)
            if ((n >> i) & 1) out |= Index(1) << sigma[static_cast<std::size_t>(i)];
        v[static_cast<std::size_t>(n)] = out;
    }
    return PermutationSpec::integer(std::move(v));
}

/// Digit reversal on {0..2^t - 1}; the 1-based n of the digit formula is n - 1 here.
inline PermutationSpec bit_reversal_perm(int t) {
    require(t >= 1, "t must be >= 1");
    std::vector<int> sigma(static_cast<std::size_t>(t));
    for (int i = 0; i < t; ++i) sigma[static_cast<std::size_t>(i)] = t - 1 - i;
    return digit_permutation_perm(sigma);
}

/// Uniform random digit-position permutation drawn from seed.
inline std::vector<int> random_digit_order(int t, std::uint64_t seed) {
    require(t >= 1, "t must be >= 1");
    std::vector<int> sigma(static_cast<std::size_t>(t));
    std::iota(sigma.begin(), sigma.end(), 0);
    Rng rng(seed);
    rng.shuffle(sigma);
    return sigma;
}

inline PermutationSpec digit_scramble_perm(int t, std::uint64_t seed) {
    return digit_permutation_perm(random_digit_order(t, seed));
}

inline Index exact_sqrt(Index N) {
    require(N >= 1, "N must be >= 1");
    Index s = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(N))));
    while (s * s > N) --s;
    while ((s + 1) * (s + 1) <= N) ++s;
    require(s * s == N, "N = " + std::to_string(N) + " is not a perfect square");
    return s;
}

enum class CellPlacement { corner, center, random };

/// Exactly one square inside each of the N cells of side 1/sqrt(N).
inline GridSet one_per_cell_set(Index N, CellPlacement placement, std::uint64_t seed = 0) {
    const Index s = exact_sqrt(N);
    Rng rng(seed);
    std::vector<Cell> cells;
    cells.reserve(static_cast<std::size_t>(N));
    for (Index i = 0; i < s; ++i) {
        for (Index j = 0; j < s; ++j) {
            Index dx = 0, dy = 0;
            if (placement == CellPlacement::center) {
                dx = dy = s / 2;
            } else if (placement == CellPlacement::random) {
                dx = static_cast<Index>(rng.below(static_cast<std::uint64_t>(s)));
                dy = static_cast<Index>(rng.below(static_cast<std::uint64_t>(s)));
            }
            cells.push_back({i * s + dx, j * s + dy});
        }
    }
    return GridSet(N, std::move(cells));
}

/// All N squares packed into the lower-left cell of side 1/sqrt(N).
inline GridSet packed_cell_set(Index N) {
    const Index s = exact_sqrt(N);
    std::vector<Cell> cells;
    for (Index i = 0; i < s; ++i)
        for (Index j = 0; j < s; ++j) cells.push_back({i, j});
    return GridSet(N, std::move(cells));
}

enum class CurveKind { parabola, circle_arc, sine };

struct CurveSetResult {
    GridSet set;
    Index duplicates = 0;
};

/// Squares containing (x_n, gamma(x_n)) with x_n = (n + 1/2)/N: the parabola
/// gamma(x) = x^2, or the arc gamma(x) = 1 - sqrt(1 - x^2) of the unit circle
/// centered at (0, 1). Both span [0,1] horizontally and stay in [0,1]^2.
/// `sine` is the Lipschitz (zero mean curvature) comparison curve
/// gamma(x) = 1/2 + sin(2 pi x)/4.
inline CurveSetResult curve_set(Index N, CurveKind curve) {
    require(N >= 2, "curve_set requires N >= 2");
    std::vector<Cell> cells;
    for (Index n = 0; n < N; ++n) {
        const double x = (static_cast<double>(n) + 0.5) / static_cast<double>(N);
        double y = 0;
        switch (curve) {
        case CurveKind::parabola: y = x * x; break;
        case CurveKind::circle_arc: y = 1.0 - std::sqrt(1.0 - x * x); break;
        case CurveKind::sine: y = 0.5 + 0.25 * std::sin(2.0 * std::numbers::pi * x); break;
        }
        cells.push_back({n, std::clamp<Index>(static_cast<Index>(std::floor(y * static_cast<double>(N))), 0, N - 1)});
    }
    CurveSetResult r;
    r.set = GridSet::collapse(N, std::move(cells), &r.duplicates);
    return r;
}

/// Places a copy of `inner`, rescaled into one square, inside each square of
/// `outer`; the result has resolution outer.N() * inner.N().
inline GridSet self_similar_compose(const GridSet& outer, const GridSet& inner) {
    const Index scale = inner.N();
    std::vector<Cell> cells;
    cells.reserve(outer.size() * inner.size());
    for (const Cell& o : outer.cells())
        for (const Cell& i : inner.cells()) cells.push_back({o.col * scale + i.col, o.row * scale + i.row});
    return GridSet(outer.N() * scale, std::move(cells));
}

/// Uniform N-subset of the N^2 squares.
inline GridSet random_set(Index N, std::uint64_t seed) {
    require(N >= 1, "N must be >= 1");
    Rng rng(seed);
    std::vector<Cell> cells;
    for (std::uint64_t g : rng.subset(static_cast<std::uint64_t>(N * N), static_cast<std::uint64_t>(N)))
        cells.push_back({static_cast<Index>(g) % N, static_cast<Index>(g) / N});
    return GridSet(N, std::move(cells));
}

} // namespace occupancy
