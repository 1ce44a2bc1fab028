#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "common.hpp"

namespace occupancy {

enum class PermutationKind { integer_permutation, quasi_permutation };

/// A map n -> pi(n) on N points defining a one-square-per-column selection.
///
/// Indices are 0-based: values[i] is pi(i + 1) in the 1-based notation of the
/// interval and slope formulas, shifted so that the identity is values[i] = i.
/// Integer permutations are bijections on {0..N-1}; quasi-permutations take
/// real values in [0, N) and record their minimum pairwise gap.
struct PermutationSpec {
    Index N = 0;
    std::vector<double> values;
    PermutationKind kind = PermutationKind::integer_permutation;
    double min_gap = 0;

    static PermutationSpec integer(std::vector<Index> image) {
        PermutationSpec p;
        p.N = static_cast<Index>(image.size());
        require(p.N >= 1, "permutation must have N >= 1");
        std::vector<bool> seen(image.size(), false);
        for (Index v : image) {
            require(v >= 0 && v < p.N, "permutation value out of range");
            require(!seen[static_cast<std::size_t>(v)], "permutation value repeated");
            seen[static_cast<std::size_t>(v)] = true;
            p.values.push_back(static_cast<double>(v));
        }
        p.min_gap = p.N > 1 ? 1.0 : 0.0;
        return p;
    }

    static PermutationSpec quasi(std::vector<double> values) {
        PermutationSpec p;
        p.N = static_cast<Index>(values.size());
        require(p.N >= 1, "permutation must have N >= 1");
        for (double v : values) require(std::isfinite(v), "permutation values must be finite");
        p.values = std::move(values);
        p.kind = PermutationKind::quasi_permutation;
        std::vector<double> sorted = p.values;
        std::sort(sorted.begin(), sorted.end());
        p.min_gap = p.N > 1 ? std::numeric_limits<double>::infinity() : 0.0;
        for (std::size_t i = 1; i < sorted.size(); ++i) p.min_gap = std::min(p.min_gap, sorted[i] - sorted[i - 1]);
        return p;
    }

    /// Integer image, valid for integer permutations.
    std::vector<Index> image() const {
        std::vector<Index> out;
        out.reserve(values.size());
        for (double v : values) out.push_back(static_cast<Index>(v));
        return out;
    }
};

} // namespace occupancy
