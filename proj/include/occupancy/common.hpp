#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace occupancy {

using Index = std::int64_t;

// Caller supplied something outside an operation's domain.
class invalid_input : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// An enumeration or size guard refused to run.
class budget_exceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A proven guarantee failed to hold on a computed object.
class invariant_violation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw invalid_input(what);
}

inline void ensure(bool cond, const std::string& what) {
    if (!cond) throw invariant_violation(what);
}

// Binomial coefficient saturating at UINT64_MAX.
inline std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > UINT64_MAX) return UINT64_MAX;
    }
    return static_cast<std::uint64_t>(r);
}

} // namespace occupancy
