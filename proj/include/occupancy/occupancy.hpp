#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

#include "lines.hpp"
#include "parallel.hpp"
#include "permutation.hpp"
#include "rng.hpp"

namespace occupancy {

enum class Method { exact_critical, sampled, interval };

inline const char* method_name(Method m) {
    switch (m) {
    case Method::exact_critical: return "exact-critical";
    case Method::sampled: return "sampled";
    case Method::interval: return "interval";
    }
    return "?";
}

using Witness = std::variant<GridLine, RealLine>;

struct OccupancyReport {
    Index max_count = 0;
    Witness witness;
    Method method = Method::exact_critical;
    Index N = 0;
    // sampled
    std::optional<std::uint64_t> seed;
    std::optional<Index> num_lines;
    // interval
    std::optional<double> half_width;
    std::optional<Index> anchor;
};

namespace detail {

// Direction of an undirected line, reduced to the half-open upper half plane.
struct Direction {
    Index x = 1;
    Index y = 0;
};

inline Direction canonical(Index x, Index y) {
    if (y < 0 || (y == 0 && x < 0)) return {-x, -y};
    return {x, y};
}

inline Wide cross(Direction u, Direction w) { return Wide(u.x) * w.y - Wide(u.y) * w.x; }

// Angle order on canonical directions; angles lie in [0, pi).
inline bool angle_less(Direction u, Direction w) { return cross(u, w) > 0; }

enum EventKind : int { kStart = 0, kProbe = 1, kEnd = 2 };

struct SweepEvent {
    Direction dir;
    EventKind kind;
    Index probe = -1; // corner index for probes
};

inline bool event_less(const SweepEvent& l, const SweepEvent& r) {
    if (angle_less(l.dir, r.dir)) return true;
    if (angle_less(r.dir, l.dir)) return false;
    return l.kind < r.kind;
}

// Angular set of line directions through `anchor` that meet a square.
// Returns false when the anchor is a corner of the square (every direction meets it).
inline bool square_interval(Cell anchor, Cell sq, std::vector<SweepEvent>& events) {
    Direction d[4];
    int k = 0;
    for (Index dx = 0; dx <= 1; ++dx)
        for (Index dy = 0; dy <= 1; ++dy) {
            const Index x = sq.col + dx - anchor.col, y = sq.row + dy - anchor.row;
            if (x == 0 && y == 0) return false;
            d[k++] = {x, y};
        }
    // The square subtends less than pi from an outside point: find the
    // clockwise-most and counter-clockwise-most corners.
    int lo = 0, hi = 0;
    for (int i = 0; i < 4; ++i) {
        bool is_lo = true, is_hi = true;
        for (int j = 0; j < 4; ++j) {
            if (cross(d[i], d[j]) < 0) is_lo = false;
            if (cross(d[j], d[i]) < 0) is_hi = false;
        }
        if (is_lo) lo = i;
        if (is_hi) hi = i;
    }
    const Direction u = canonical(d[lo].x, d[lo].y), w = canonical(d[hi].x, d[hi].y);
    if (!angle_less(w, u)) {
        events.push_back({u, kStart});
        events.push_back({w, kEnd});
    } else {
        // Wraps through the horizontal direction: [u, pi) and [0, w].
        events.push_back({u, kStart});
        events.push_back({Direction{1, 0}, kStart});
        events.push_back({w, kEnd});
    }
    return true;
}

struct AnchorResult {
    Index count = 0;
    std::optional<GridLine> best; // set only in witness mode
};

// Rotational sweep about one corner. In witness mode, every corner direction
// is probed and the canonically smallest maximizing line through the anchor
// is returned.
inline AnchorResult sweep_anchor(const GridSet& s, Cell anchor, const std::vector<Cell>* corners, Index target) {
    std::vector<SweepEvent> events;
    events.reserve(3 * s.size() + (corners ? corners->size() : 0));
    Index always = 0;
    for (const Cell& c : s.cells())
        if (!square_interval(anchor, c, events)) ++always;
    if (corners) {
        for (std::size_t i = 0; i < corners->size(); ++i) {
            const Cell& c = (*corners)[i];
            if (c == anchor) continue;
            events.push_back({canonical(c.col - anchor.col, c.row - anchor.row), kProbe, static_cast<Index>(i)});
        }
    }
    std::sort(events.begin(), events.end(), event_less);
    AnchorResult result;
    result.count = always;
    Index depth = 0;
    for (const SweepEvent& e : events) {
        if (e.kind == kStart) {
            ++depth;
            result.count = std::max(result.count, always + depth);
        } else if (e.kind == kEnd) {
            --depth;
        } else if (always + depth == target) {
            const Cell& c = (*corners)[static_cast<std::size_t>(e.probe)];
            GridLine line = GridLine::through(s.N(), anchor.col, anchor.row, c.col, c.row);
            if (!result.best || line < *result.best) result.best = line;
        }
    }
    return result;
}

} // namespace detail

/// Exact max over all lines of the number of squares of s the line meets.
///
/// An extremal line can be moved onto two corners of selected squares without
/// losing incidences, so it suffices to sweep line directions about every
/// corner: O(|S|^2 log |S|). The witness is the canonically smallest line of
/// critical_lines(s) achieving the maximum, independent of `threads`.
inline OccupancyReport max_tube_occupancy_exact(const GridSet& s, unsigned threads = 1) {
    require(!s.empty(), "occupancy of an empty set is undefined");
    const auto corners = square_corners(s);
    std::vector<Index> per_anchor(corners.size());
    parallel_for(corners.size(), threads,
                 [&](std::size_t i) { per_anchor[i] = detail::sweep_anchor(s, corners[i], nullptr, -1).count; });
    const Index best = *std::max_element(per_anchor.begin(), per_anchor.end());

    std::vector<std::optional<GridLine>> candidates(corners.size());
    parallel_for(corners.size(), threads, [&](std::size_t i) {
        if (per_anchor[i] == best) candidates[i] = detail::sweep_anchor(s, corners[i], &corners, best).best;
    });
    std::optional<GridLine> witness;
    for (const auto& c : candidates)
        if (c && (!witness || *c < *witness)) witness = c;
    for (const Cell& c : s.cells()) {
        for (const GridLine& axis :
             {GridLine::horizontal_through_center(s.N(), c.row), GridLine::vertical_through_center(s.N(), c.col)}) {
            const Index n = count_incidences(axis, s);
            ensure(n <= best, "axis line exceeds corner-line maximum");
            if (n == best && (!witness || axis < *witness)) witness = axis;
        }
    }
    ensure(witness.has_value(), "no witness line found");
    OccupancyReport report;
    report.max_count = best;
    report.witness = *witness;
    report.method = Method::exact_critical;
    report.N = s.N();
    return report;
}

/// Reference evaluator: every line of critical_lines(s) counted directly.
/// O(|S|^3); used as an oracle for the sweep.
inline OccupancyReport max_occupancy_over_critical_lines(const GridSet& s) {
    require(!s.empty(), "occupancy of an empty set is undefined");
    OccupancyReport report;
    report.method = Method::exact_critical;
    report.N = s.N();
    report.max_count = -1;
    for (const GridLine& line : critical_lines(s)) {
        const Index n = count_incidences(line, s);
        if (n > report.max_count) { // lines arrive in canonical order
            report.max_count = n;
            report.witness = line;
        }
    }
    return report;
}

/// Random line: uniform angle in [0, pi), uniform offset over the range that
/// meets [0,1]^2.
inline RealLine random_line(Rng& rng) {
    const double phi = rng.uniform01() * std::numbers::pi;
    const double nx = std::cos(phi), ny = std::sin(phi);
    const double lo = std::min(0.0, nx) + std::min(0.0, ny), hi = std::max(0.0, nx) + std::max(0.0, ny);
    return {nx, ny, rng.uniform(lo, hi)};
}

/// Lower-bound probe: best of num_lines pseudo-random lines.
inline OccupancyReport max_occupancy_sampled(const GridSet& s, Index num_lines, std::uint64_t seed) {
    require(num_lines >= 1, "num_lines must be >= 1");
    Rng rng(seed);
    OccupancyReport report;
    report.method = Method::sampled;
    report.N = s.N();
    report.seed = seed;
    report.num_lines = num_lines;
    report.max_count = -1;
    for (Index i = 0; i < num_lines; ++i) {
        const RealLine line = random_line(rng);
        const Index n = count_incidences(line, s);
        if (n > report.max_count) {
            report.max_count = n;
            report.witness = line;
        }
    }
    return report;
}

/// Interval reformulation: for each anchor n, the slope intervals
/// I_{n,m} = [s - c*c_{n,m}/|n-m|, s + c*c_{n,m}/|n-m|] with s the chord slope
/// (pi(n)-pi(m))/(n-m) and c_{n,m} = max(1, |s|); returns the deepest stack
/// over all anchors. Slopes are invariant under the 0/1-based index shift.
///
/// The witness is the slope alpha where the deepest stack occurs, as the line
/// y = alpha*x - beta through the anchor point (n/N, pi(n)/N) with 1-based n.
inline OccupancyReport interval_occupancy(const PermutationSpec& pi, double c = 2.0, unsigned threads = 1) {
    require(c > 0 && std::isfinite(c), "half-width constant must be positive");
    for (double v : pi.values) require(std::isfinite(v), "permutation values must be finite");
    const Index N = pi.N;
    struct Best {
        Index depth = 0;
        double alpha = 0;
    };
    std::vector<Best> per_anchor(static_cast<std::size_t>(N));
    parallel_for(static_cast<std::size_t>(N), threads, [&](std::size_t n) {
        std::vector<std::pair<double, int>> ends; // (position, 0 = open, 1 = close)
        ends.reserve(2 * static_cast<std::size_t>(N));
        for (Index m = 0; m < N; ++m) {
            if (m == static_cast<Index>(n)) continue;
            const double dn = static_cast<double>(static_cast<Index>(n) - m);
            const double slope = (pi.values[n] - pi.values[static_cast<std::size_t>(m)]) / dn;
            const double half = c * std::max(1.0, std::abs(slope)) / std::abs(dn);
            ends.emplace_back(slope - half, 0);
            ends.emplace_back(slope + half, 1);
        }
        std::sort(ends.begin(), ends.end());
        Best b;
        Index depth = 0;
        for (const auto& [x, kind] : ends) {
            if (kind == 0) {
                if (++depth > b.depth) b = {depth, x};
            } else {
                --depth;
            }
        }
        per_anchor[n] = b;
    });
    OccupancyReport report;
    report.method = Method::interval;
    report.N = N;
    report.half_width = c;
    report.max_count = 0;
    report.anchor = 0;
    double alpha = 0;
    for (Index n = 0; n < N; ++n) {
        if (per_anchor[static_cast<std::size_t>(n)].depth > report.max_count) {
            report.max_count = per_anchor[static_cast<std::size_t>(n)].depth;
            report.anchor = n;
            alpha = per_anchor[static_cast<std::size_t>(n)].alpha;
        }
    }
    const double n1 = static_cast<double>(*report.anchor + 1);
    report.witness =
        RealLine::slope(alpha, (n1 * alpha - pi.values[static_cast<std::size_t>(*report.anchor)]) / static_cast<double>(N));
    return report;
}

inline Index witness_count(const OccupancyReport& r, const GridSet& s) {
    return std::visit([&](const auto& line) { return count_incidences(line, s); }, r.witness);
}

} // namespace occupancy
