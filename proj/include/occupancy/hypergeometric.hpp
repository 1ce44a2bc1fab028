#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "common.hpp"

namespace occupancy {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline BigInt big_binomial(Index n, Index k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (Index i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

inline BigInt big_factorial(Index k) {
    BigInt r = 1;
    for (Index i = 2; i <= k; ++i) r *= i;
    return r;
}

struct OverlapPmf {
    BigRational pmf;              // P(|S cap S'| = k)
    BigRational scaled;           // k! * pmf
    double approx = 0;            // pmf as double
};

/// Exact probability that a uniform N-subset of an N^2-element ground set
/// meets a fixed N-set in exactly k elements:
/// C(N,k) C(N^2-N, N-k) / C(N^2, N).
inline OverlapPmf hypergeometric_overlap_pmf(Index N, Index k) {
    require(N >= 1, "N must be >= 1");
    require(k >= 0 && k <= N, "k must lie in [0, N]");
    OverlapPmf out;
    out.pmf = BigRational(big_binomial(N, k) * big_binomial(N * N - N, N - k), big_binomial(N * N, N));
    out.scaled = out.pmf * BigRational(big_factorial(k));
    out.approx = static_cast<double>(out.pmf);
    return out;
}

} // namespace occupancy
