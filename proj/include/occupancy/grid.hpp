#pragma once

#include <algorithm>
#include <compare>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace occupancy {

/// One square of the N x N subdivision of [0,1]^2, occupying
/// [col/N, (col+1)/N] x [row/N, (row+1)/N].
struct GridSquare {
    Index col = 0;
    Index row = 0;
    Index N = 1;

    friend bool operator==(const GridSquare&, const GridSquare&) = default;
    friend auto operator<=>(const GridSquare&, const GridSquare&) = default;
};

struct Point {
    double x = 0;
    double y = 0;
};

inline Point square_center(const GridSquare& sq) {
    const double n = static_cast<double>(sq.N);
    return {(static_cast<double>(sq.col) + 0.5) / n, (static_cast<double>(sq.row) + 0.5) / n};
}

struct Cell {
    Index col = 0;
    Index row = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// A selection of distinct squares at one resolution, kept sorted by
/// (col, row).
class GridSet {
  public:
    GridSet() = default;

    /// Rejects duplicates and out-of-range cells.
    GridSet(Index N, std::vector<Cell> cells) : N_(N), cells_(std::move(cells)) {
        require(N_ >= 1, "grid resolution must be >= 1");
        for (const Cell& c : cells_) {
            require(c.col >= 0 && c.col < N_ && c.row >= 0 && c.row < N_,
                    "cell (" + std::to_string(c.col) + "," + std::to_string(c.row) +
                        ") out of range for N=" + std::to_string(N_));
        }
        std::sort(cells_.begin(), cells_.end());
        const auto dup = std::adjacent_find(cells_.begin(), cells_.end());
        require(dup == cells_.end(), "duplicate cell (" + (dup == cells_.end() ? std::string() : std::to_string(dup->col) + "," + std::to_string(dup->row)) + ")");
    }

    /// Like the constructor but folds duplicates, reporting how many were dropped.
    static GridSet collapse(Index N, std::vector<Cell> cells, Index* duplicates = nullptr) {
        std::sort(cells.begin(), cells.end());
        const auto end = std::unique(cells.begin(), cells.end());
        if (duplicates) *duplicates = static_cast<Index>(cells.end() - end);
        cells.erase(end, cells.end());
        return GridSet(N, std::move(cells));
    }

    Index N() const { return N_; }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }
    const std::vector<Cell>& cells() const { return cells_; }

    GridSquare square(std::size_t i) const { return {cells_[i].col, cells_[i].row, N_}; }

    bool contains(Cell c) const { return std::binary_search(cells_.begin(), cells_.end(), c); }

    /// Ground-set index row * N + col, the identification with [N^2].
    Index ground_index(std::size_t i) const { return cells_[i].row * N_ + cells_[i].col; }

    friend bool operator==(const GridSet&, const GridSet&) = default;

  private:
    Index N_ = 1;
    std::vector<Cell> cells_;
};

/// The eight symmetries of the square grid, as maps on cells at resolution N.
/// Bit 0 swaps x and y, bit 1 reflects x, bit 2 reflects y.
inline Cell apply_symmetry(Cell c, Index N, int symmetry) {
    if (symmetry & 1) std::swap(c.col, c.row);
    if (symmetry & 2) c.col = N - 1 - c.col;
    if (symmetry & 4) c.row = N - 1 - c.row;
    return c;
}

inline GridSet apply_symmetry(const GridSet& s, int symmetry) {
    std::vector<Cell> out;
    out.reserve(s.size());
    for (const Cell& c : s.cells()) out.push_back(apply_symmetry(c, s.N(), symmetry));
    return GridSet(s.N(), std::move(out));
}

} // namespace occupancy
