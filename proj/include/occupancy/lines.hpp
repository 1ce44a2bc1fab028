#pragma once

#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "grid.hpp"

namespace occupancy {

using Wide = __int128;

namespace detail {

inline Wide floor_div(Wide p, Wide q) {
    Wide d = p / q;
    if ((p % q != 0) && ((p < 0) != (q < 0))) --d;
    return d;
}

inline Wide ceil_div(Wide p, Wide q) { return -floor_div(-p, q); }

} // namespace detail

/// Exact line a*X + b*Y = c in grid units X = N*x, Y = N*y of a resolution-N grid.
///
/// Stored normalized: gcd(a, b, c) = 1 and either b > 0, or b == 0 and a > 0.
/// Normalization makes equal lines compare equal. For b != 0 the line is
/// y = alpha*x - beta with alpha = -a/b and beta = -c/(b*N); for b == 0 it is the
/// vertical x = x0 with x0 = c/(a*N).
class GridLine {
  public:
    GridLine() = default;

    GridLine(Index a, Index b, Index c, Index N) : a_(a), b_(b), c_(c), N_(N) {
        require(a != 0 || b != 0, "degenerate line: a = b = 0");
        require(N >= 1, "grid resolution must be >= 1");
        normalize();
    }

    /// Line through two distinct lattice points (grid corners).
    static GridLine through(Index N, Index x1, Index y1, Index x2, Index y2) {
        require(x1 != x2 || y1 != y2, "line through coincident points");
        const Index a = y2 - y1;
        const Index b = x1 - x2;
        return GridLine(a, b, a * x1 + b * y1, N);
    }

    static GridLine horizontal_through_center(Index N, Index row) { return GridLine(0, 2, 2 * row + 1, N); }
    static GridLine vertical_through_center(Index N, Index col) { return GridLine(2, 0, 2 * col + 1, N); }

    Index a() const { return a_; }
    Index b() const { return b_; }
    Index c() const { return c_; }
    Index N() const { return N_; }
    bool vertical() const { return b_ == 0; }

    double alpha() const { return -static_cast<double>(a_) / static_cast<double>(b_); }
    double beta() const { return -static_cast<double>(c_) / (static_cast<double>(b_) * static_cast<double>(N_)); }
    double x0() const { return static_cast<double>(c_) / (static_cast<double>(a_) * static_cast<double>(N_)); }

    /// Signed value a*X + b*Y - c at a point given in resolution-R grid units.
    Wide side(Wide X, Wide Y, Index R) const {
        return Wide(a_) * N_ * X + Wide(b_) * N_ * Y - Wide(c_) * R;
    }

    /// Applies a grid symmetry (see apply_symmetry on cells).
    GridLine transformed(int symmetry) const {
        Index a = a_, b = b_, c = c_;
        if (symmetry & 1) std::swap(a, b);
        if (symmetry & 2) {
            c -= a * N_;
            a = -a;
        }
        if (symmetry & 4) {
            c -= b * N_;
            b = -b;
        }
        return GridLine(a, b, c, N_);
    }

    friend bool operator==(const GridLine&, const GridLine&) = default;

    /// Canonical order: non-vertical lines by (alpha, beta), then verticals by x0.
    /// Only meaningful for lines at the same resolution.
    friend bool operator<(const GridLine& l, const GridLine& r) {
        if (l.vertical() != r.vertical()) return r.vertical();
        if (l.vertical()) return Wide(l.c_) * r.a_ < Wide(r.c_) * l.a_;
        const Wide al = -Wide(l.a_) * r.b_, ar = -Wide(r.a_) * l.b_;
        if (al != ar) return al < ar;
        return -Wide(l.c_) * r.b_ < -Wide(r.c_) * l.b_;
    }

    std::string describe() const {
        return std::to_string(a_) + "*X + " + std::to_string(b_) + "*Y = " + std::to_string(c_) + " (N=" +
               std::to_string(N_) + ")";
    }

  private:
    void normalize() {
        Index g = std::gcd(std::gcd(a_, b_), c_);
        if (g < 0) g = -g;
        a_ /= g;
        b_ /= g;
        c_ /= g;
        if (b_ < 0 || (b_ == 0 && a_ < 0)) {
            a_ = -a_;
            b_ = -b_;
            c_ = -c_;
        }
    }

    Index a_ = 0;
    Index b_ = 1;
    Index c_ = 0;
    Index N_ = 1;
};

/// Real line nx*x + ny*y = offset in unit-square coordinates.
struct RealLine {
    double nx = 0;
    double ny = 1;
    double offset = 0;

    static RealLine from_angle(double phi, double offset) { return {std::cos(phi), std::sin(phi), offset}; }
    /// y = alpha*x - beta.
    static RealLine slope(double alpha, double beta) { return {-alpha, 1.0, -beta}; }
    static RealLine vertical_at(double x0) { return {1.0, 0.0, x0}; }

    bool vertical() const { return ny == 0.0; }
    double alpha() const { return -nx / ny; }
    double beta() const { return -offset / ny; }
    double x0() const { return offset / nx; }
};

/// Closed line vs closed square: true iff the square's corners do not all lie
/// strictly on one side. The square lies inside [0,1]^2, so any contact is
/// within the clipped line.
inline bool line_intersects_square(const GridLine& line, const GridSquare& sq) {
    const Index R = sq.N;
    const Wide an = Wide(line.a()) * line.N(), bn = Wide(line.b()) * line.N();
    const Wide x_lo = an >= 0 ? sq.col : sq.col + 1, x_hi = an >= 0 ? sq.col + 1 : sq.col;
    const Wide y_lo = bn >= 0 ? sq.row : sq.row + 1, y_hi = bn >= 0 ? sq.row + 1 : sq.row;
    return line.side(x_lo, y_lo, R) <= 0 && line.side(x_hi, y_hi, R) >= 0;
}

inline bool line_intersects_square(const RealLine& line, const GridSquare& sq) {
    const double n = static_cast<double>(sq.N);
    const double x0 = static_cast<double>(sq.col) / n, x1 = static_cast<double>(sq.col + 1) / n;
    const double y0 = static_cast<double>(sq.row) / n, y1 = static_cast<double>(sq.row + 1) / n;
    const double lo = std::min(line.nx * x0, line.nx * x1) + std::min(line.ny * y0, line.ny * y1) - line.offset;
    const double hi = std::max(line.nx * x0, line.nx * x1) + std::max(line.ny * y0, line.ny * y1) - line.offset;
    return lo <= 0.0 && hi >= 0.0;
}

/// All squares of the resolution-N grid met by an exact line, column by column.
inline GridSet tube_squares(const GridLine& line, Index N) {
    require(N >= 1, "grid resolution must be >= 1");
    // Rescale coefficients to resolution N units: A*X + B*Y = C.
    const Wide A = Wide(line.a()) * line.N(), B = Wide(line.b()) * line.N(), C = Wide(line.c()) * N;
    std::vector<Cell> cells;
    if (B == 0) {
        const Wide lo = std::max<Wide>(detail::ceil_div(C, A) - 1, 0);
        const Wide hi = std::min<Wide>(detail::floor_div(C, A), N - 1);
        for (Wide col = lo; col <= hi; ++col)
            for (Index row = 0; row < N; ++row) cells.push_back({static_cast<Index>(col), row});
        return GridSet(N, std::move(cells));
    }
    for (Index col = 0; col < N; ++col) {
        const Wide v0 = C - A * col, v1 = C - A * (col + 1);
        const Wide lo = std::max<Wide>(detail::ceil_div(std::min(v0, v1), B) - 1, 0);
        const Wide hi = std::min<Wide>(detail::floor_div(std::max(v0, v1), B), N - 1);
        for (Wide row = lo; row <= hi; ++row) cells.push_back({col, static_cast<Index>(row)});
    }
    return GridSet(N, std::move(cells));
}

inline GridSet tube_squares(const RealLine& line, Index N) {
    require(N >= 1, "grid resolution must be >= 1");
    std::vector<Cell> cells;
    for (Index col = 0; col < N; ++col)
        for (Index row = 0; row < N; ++row)
            if (line_intersects_square(line, GridSquare{col, row, N})) cells.push_back({col, row});
    return GridSet(N, std::move(cells));
}

template <typename Line> Index count_incidences(const Line& line, const GridSet& s) {
    Index count = 0;
    for (std::size_t i = 0; i < s.size(); ++i) count += line_intersects_square(line, s.square(i)) ? 1 : 0;
    return count;
}

/// Distinct corners of the squares of s, in grid units.
inline std::vector<Cell> square_corners(const GridSet& s) {
    std::vector<Cell> corners;
    corners.reserve(4 * s.size());
    for (const Cell& c : s.cells())
        for (Index dx = 0; dx <= 1; ++dx)
            for (Index dy = 0; dy <= 1; ++dy) corners.push_back({c.col + dx, c.row + dy});
    std::sort(corners.begin(), corners.end());
    corners.erase(std::unique(corners.begin(), corners.end()), corners.end());
    return corners;
}

/// Finite certificate family for the supremum over lines: every line through
/// two distinct corners of selected squares, plus the axis-parallel lines
/// through each square's center. Sorted in canonical order, deduplicated.
inline std::vector<GridLine> critical_lines(const GridSet& s) {
    require(!s.empty(), "critical_lines requires a nonempty set");
    const auto corners = square_corners(s);
    std::vector<GridLine> lines;
    lines.reserve(corners.size() * (corners.size() - 1) / 2 + 2 * s.size());
    for (std::size_t i = 0; i < corners.size(); ++i)
        for (std::size_t j = i + 1; j < corners.size(); ++j)
            lines.push_back(GridLine::through(s.N(), corners[i].col, corners[i].row, corners[j].col, corners[j].row));
    for (const Cell& c : s.cells()) {
        lines.push_back(GridLine::horizontal_through_center(s.N(), c.row));
        lines.push_back(GridLine::vertical_through_center(s.N(), c.col));
    }
    std::sort(lines.begin(), lines.end());
    lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
    return lines;
}

} // namespace occupancy
