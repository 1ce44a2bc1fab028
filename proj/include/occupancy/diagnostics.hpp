#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "constructions.hpp"
#include "grid.hpp"
#include "occupancy.hpp"
#include "parallel.hpp"

namespace occupancy {

/// Sum over ordered pairs of distinct squares of 1 / (center distance).
inline double energy(const GridSet& s, unsigned threads = 1) {
    require(s.size() >= 2, "energy requires at least two squares");
    std::vector<Point> c;
    for (std::size_t i = 0; i < s.size(); ++i) c.push_back(square_center(s.square(i)));
    std::vector<double> row(c.size(), 0.0);
    parallel_for(c.size(), threads, [&](std::size_t i) {
        double acc = 0;
        for (std::size_t j = 0; j < c.size(); ++j)
            if (j != i) acc += 1.0 / std::hypot(c[i].x - c[j].x, c[i].y - c[j].y);
        row[i] = acc;
    });
    double total = 0;
    for (double v : row) total += v;
    return total;
}

struct RegularityScale {
    double r = 0;
    Index cover_count = 0;
    std::vector<Index> neighborhood_counts; // per square, including itself
    Index min_neighbors = 0;
    Index max_neighbors = 0;
};

struct RegularityProfile {
    Index N = 0;
    std::vector<RegularityScale> scales; // r = 1, 1/2, 1/4, ... down to >= 1/N
    double c1 = 0.25, c2 = 4.0, cover_constant = 4.0;
    bool ad_regular = false;       // c1*rN <= neighbors <= c2*rN at every square and scale
    bool cover_hypothesis = false; // cover_count <= cover_constant / r at every scale
};

namespace detail {

inline bool within(const Point& a, const Point& b, double r) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy <= r * r * (1.0 + 1e-12);
}

// Farthest-first greedy cover by closed r-balls centered at set points,
// starting from the point nearest the centroid.
inline Index farthest_first_cover(const std::vector<Point>& pts, double r) {
    std::vector<double> d2(pts.size(), std::numeric_limits<double>::infinity());
    double cx = 0, cy = 0;
    for (const Point& p : pts) {
        cx += p.x;
        cy += p.y;
    }
    cx /= static_cast<double>(pts.size());
    cy /= static_cast<double>(pts.size());
    std::size_t next = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (std::hypot(pts[i].x - cx, pts[i].y - cy) < std::hypot(pts[next].x - cx, pts[next].y - cy)) next = i;
    Index count = 0;
    for (;;) {
        ++count;
        const Point c = pts[next];
        double far = -1;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double dx = pts[i].x - c.x, dy = pts[i].y - c.y;
            d2[i] = std::min(d2[i], dx * dx + dy * dy);
            if (d2[i] > far) {
                far = d2[i];
                next = i;
            }
        }
        if (far <= r * r * (1.0 + 1e-12)) return count;
    }
}

} // namespace detail

inline RegularityProfile ad_regularity_profile(const GridSet& s, double c1 = 0.25, double c2 = 4.0,
                                               double cover_constant = 4.0) {
    require(!s.empty(), "regularity profile requires a nonempty set");
    RegularityProfile p;
    p.N = s.N();
    p.c1 = c1;
    p.c2 = c2;
    p.cover_constant = cover_constant;
    std::vector<Point> pts;
    for (std::size_t i = 0; i < s.size(); ++i) pts.push_back(square_center(s.square(i)));
    const double n = static_cast<double>(s.N());
    p.ad_regular = true;
    p.cover_hypothesis = true;
    for (double r = 1.0; r * n >= 1.0 - 1e-12; r *= 0.5) {
        RegularityScale sc;
        sc.r = r;
        sc.cover_count = detail::farthest_first_cover(pts, r);
        sc.neighborhood_counts.assign(pts.size(), 0);
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = 0; j < pts.size(); ++j)
                sc.neighborhood_counts[i] += detail::within(pts[i], pts[j], r) ? 1 : 0;
        sc.min_neighbors = *std::min_element(sc.neighborhood_counts.begin(), sc.neighborhood_counts.end());
        sc.max_neighbors = *std::max_element(sc.neighborhood_counts.begin(), sc.neighborhood_counts.end());
        const double rn = r * n;
        if (static_cast<double>(sc.min_neighbors) < c1 * rn || static_cast<double>(sc.max_neighbors) > c2 * rn)
            p.ad_regular = false;
        if (static_cast<double>(sc.cover_count) > cover_constant / r) p.cover_hypothesis = false;
        p.scales.push_back(std::move(sc));
    }
    return p;
}

/// Harmonic sums of 1/|n-m| over the dyadic slope classes of each anchor n:
/// class 0 holds |slope| <= 1, class j >= 1 holds 2^(j-1) < |slope| <= 2^j.
struct SlopeClassSums {
    Index N = 0;
    Index classes = 0;
    std::vector<double> sums;        // [n * classes + j]
    std::vector<Index> populations;  // [n * classes + j]
    double max_sum = 0;
    Index argmax_anchor = 0;
    Index argmax_class = 0;

    double sum(Index n, Index j) const { return sums[static_cast<std::size_t>(n * classes + j)]; }
    Index population(Index n, Index j) const { return populations[static_cast<std::size_t>(n * classes + j)]; }
};

inline Index slope_class(double slope) {
    const double a = std::abs(slope);
    if (a <= 1.0) return 0;
    int e = 0;
    const double f = std::frexp(a, &e); // a = f * 2^e, f in [1/2, 1)
    return f == 0.5 ? e - 1 : e;
}

inline SlopeClassSums slope_class_sums(const PermutationSpec& pi, unsigned threads = 1) {
    const Index N = pi.N;
    require(N >= 1, "permutation must be nonempty");
    for (double v : pi.values) require(std::isfinite(v), "permutation values must be finite");
    double max_slope = 1.0;
    const auto [lo, hi] = std::minmax_element(pi.values.begin(), pi.values.end());
    max_slope = std::max(max_slope, *hi - *lo);
    SlopeClassSums out;
    out.N = N;
    out.classes = slope_class(max_slope) + 1;
    out.sums.assign(static_cast<std::size_t>(N * out.classes), 0.0);
    out.populations.assign(static_cast<std::size_t>(N * out.classes), 0);
    parallel_for(static_cast<std::size_t>(N), threads, [&](std::size_t n) {
        double* sums = &out.sums[n * static_cast<std::size_t>(out.classes)];
        Index* pops = &out.populations[n * static_cast<std::size_t>(out.classes)];
        for (Index m = 0; m < N; ++m) {
            if (m == static_cast<Index>(n)) continue;
            const Index gap = std::abs(static_cast<Index>(n) - m);
            const double slope = (pi.values[n] - pi.values[static_cast<std::size_t>(m)]) / static_cast<double>(gap);
            const Index j = slope_class(slope);
            sums[j] += 1.0 / static_cast<double>(gap);
            ++pops[j];
        }
    });
    for (Index n = 0; n < N; ++n)
        for (Index j = 0; j < out.classes; ++j)
            if (out.sum(n, j) > out.max_sum) {
                out.max_sum = out.sum(n, j);
                out.argmax_anchor = n;
                out.argmax_class = j;
            }
    return out;
}

/// Sum over ordered pairs n != m of S of 1/|n - m|.
inline double harmonic_pair_sum(std::vector<Index> s) {
    std::sort(s.begin(), s.end());
    require(std::adjacent_find(s.begin(), s.end()) == s.end(), "set has repeated elements");
    require(s.size() >= 2, "harmonic pair sum requires at least two elements");
    double total = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double acc = 0;
        for (std::size_t j = 0; j < s.size(); ++j)
            if (j != i) acc += 1.0 / static_cast<double>(std::abs(s[i] - s[j]));
        total += acc;
    }
    return total;
}

struct DirichletWitness {
    Index p = 1;
    double distance = 0;   // dist(p * theta, Z)
    bool increasing = true; // {p theta} near 0 (true) or near 1 (false)
    std::vector<std::pair<Index, double>> points; // (n, pi(n)), 1-based n = p*l
    RealLine line;          // through the points (n/N, pi(n)/N)
    GridLine exact_line;    // corner line meeting every witness square
    Index collinear = 0;    // number of witness squares
    Index occupancy = 0;    // exact count of exact_line on the full set
};

/// Dirichlet collinearity witness for pi(n) = N {n theta}: the smallest
/// p <= 2 sqrt(N) with dist(p theta, Z) <= 1/sqrt(N) makes the points
/// (p l, pi(p l)) collinear while l * dist < 1 and p l <= N.
inline DirichletWitness dirichlet_collinear_witness(Index N, double theta = kGoldenRatio) {
    require(N >= 1, "N must be >= 1");
    const PermutationSpec pi = quadratic_irrational_perm(N, theta);
    const GridSet set = permutation_set(pi);
    const double root = std::sqrt(static_cast<double>(N));
    DirichletWitness w;
    bool found = N == 1;
    if (N == 1) {
        w.distance = fractional_part(theta);
    }
    for (Index p = 1; !found && static_cast<double>(p) <= 2 * root; ++p) {
        const double f = fractional_part(static_cast<long double>(p) * static_cast<long double>(theta));
        const double d = std::min(f, 1.0 - f);
        if (d <= 1.0 / root) {
            w.p = p;
            w.distance = d;
            w.increasing = f <= 0.5;
            found = true;
        }
    }
    ensure(found, "no Dirichlet denominator within 2 sqrt(N); theta is not irrational enough at this N");
    std::vector<Cell> squares;
    for (Index l = 1; w.p * l <= N && (N == 1 || static_cast<double>(l) * w.distance < 1.0); ++l) {
        const Index n = w.p * l;
        const double v = pi.values[static_cast<std::size_t>(n - 1)];
        w.points.emplace_back(n, v);
        squares.push_back(set.cells()[static_cast<std::size_t>(n - 1)]);
        if (N == 1) break;
    }
    const double slope = static_cast<double>(N) * w.distance / static_cast<double>(w.p);
    w.line = w.increasing ? RealLine::slope(slope, 0.0) : RealLine::slope(-slope, -1.0);
    const GridSet on_line(N, squares);
    const OccupancyReport sub = max_tube_occupancy_exact(on_line);
    ensure(sub.max_count == static_cast<Index>(on_line.size()), "witness squares are not met by a single line");
    w.exact_line = std::get<GridLine>(sub.witness);
    w.collinear = sub.max_count;
    w.occupancy = count_incidences(w.exact_line, set);
    return w;
}

/// All t-bit binary palindromes, ascending: the fixed points of digit reversal.
inline std::vector<Index> palindrome_fixed_points(int t) {
    require(t >= 1 && t <= 30, "t must be in [1, 30]");
    const int half = (t + 1) / 2;
    std::vector<Index> out;
    for (Index h = 0; h < (Index(1) << half); ++h) {
        Index n = 0;
        for (int i = 0; i < half; ++i) {
            if ((h >> i) & 1) {
                n |= Index(1) << i;
                n |= Index(1) << (t - 1 - i);
            }
        }
        out.push_back(n);
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double residual_ss = 0;
};

struct GrowthFit {
    LinearFit power_law;              // log value = exponent * log N + c
    std::optional<LinearFit> log_model; // value = a * log N / log log N + b, when all N >= 3
    double exponent() const { return power_law.slope; }
};

inline LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    require(sxx > 0, "degenerate regressor: all abscissae equal");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        f.residual_ss += r * r;
    }
    return f;
}

inline GrowthFit fit_growth(const std::vector<std::pair<Index, double>>& samples) {
    require(samples.size() >= 3, "growth fit requires at least 3 samples");
    std::vector<Index> ns;
    for (const auto& [n, v] : samples) {
        require(n >= 1, "sample N must be >= 1");
        require(v > 0 && std::isfinite(v), "sample values must be positive");
        ns.push_back(n);
    }
    std::sort(ns.begin(), ns.end());
    require(std::adjacent_find(ns.begin(), ns.end()) == ns.end(), "sample N values must be distinct");
    std::vector<double> lx, ly;
    for (const auto& [n, v] : samples) {
        lx.push_back(std::log(static_cast<double>(n)));
        ly.push_back(std::log(v));
    }
    GrowthFit g;
    g.power_law = least_squares(lx, ly);
    if (ns.front() >= 3) {
        std::vector<double> mx, my;
        for (const auto& [n, v] : samples) {
            const double ln = std::log(static_cast<double>(n));
            mx.push_back(ln / std::log(ln));
            my.push_back(v);
        }
        double lo = *std::min_element(mx.begin(), mx.end()), hi = *std::max_element(mx.begin(), mx.end());
        if (hi > lo) g.log_model = least_squares(mx, my);
    }
    return g;
}

} // namespace occupancy
