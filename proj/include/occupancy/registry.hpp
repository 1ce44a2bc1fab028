#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "constructions.hpp"
#include "family.hpp"

namespace occupancy {

using Params = std::map<std::string, std::string>;

inline const std::vector<std::string>& construction_ids() {
    static const std::vector<std::string> ids = {"identity", "reversal", "golden", "sqrt2",  "bitrev", "scramble", "onecell",
                                                 "packed",   "parabola", "arc",    "sine", "selfsim", "random"};
    return ids;
}

inline bool is_construction_id(const std::string& id) {
    const auto& ids = construction_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

/// "key=value" tokens; a bare token maps to "".
inline Params parse_params(const std::vector<std::string>& tokens) {
    Params p;
    for (const auto& t : tokens) {
        const auto eq = t.find('=');
        require(eq != 0, "parameter token '" + t + "' has an empty key");
        if (eq == std::string::npos)
            p[t] = "";
        else
            p[t.substr(0, eq)] = t.substr(eq + 1);
    }
    return p;
}

inline std::string format_params(const Params& p) {
    std::string out;
    for (const auto& [k, v] : p) {
        if (!out.empty()) out += ';';
        out += v.empty() ? k : k + "=" + v;
    }
    return out;
}

inline std::uint64_t param_u64(const Params& p, const std::string& key, std::uint64_t fallback) {
    const auto it = p.find(key);
    if (it == p.end()) return fallback;
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try {
        if (it->second.empty() || !std::isdigit(static_cast<unsigned char>(it->second[0]))) throw std::invalid_argument("");
        v = std::stoull(it->second, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    require(pos == it->second.size(), "parameter " + key + " must be an unsigned integer");
    return v;
}

inline double param_double(const Params& p, const std::string& key, double fallback) {
    const auto it = p.find(key);
    if (it == p.end()) return fallback;
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(it->second, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    require(pos == it->second.size(), "parameter " + key + " must be a number");
    return v;
}

inline std::string param_string(const Params& p, const std::string& key, const std::string& fallback) {
    const auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

inline int log2_exact(Index N) {
    require(N >= 2 && (N & (N - 1)) == 0, "N = " + std::to_string(N) + " is not a power of two >= 2");
    int t = 0;
    while ((Index(1) << t) < N) ++t;
    return t;
}

/// Tube-family minimizer of max occupancy at resolution n0 (brute force).
inline GridSet optimal_tube_set(Index n0, std::uint64_t budget = 10'000'000) {
    const SetFamily tubes = tube_family(n0, budget);
    const MinimaxResult best = minimax_occupancy_bruteforce(tubes, n0 * n0, n0, budget);
    std::vector<Cell> cells;
    for (Index g : best.optimal) cells.push_back({g % n0, g / n0});
    return GridSet(n0, std::move(cells));
}

struct Construction {
    GridSet set;
    std::optional<PermutationSpec> perm;
    std::optional<double> theta; // for {n theta} constructions
    Index duplicates = 0;
};

/// Builds a registered construction at resolution N. Seeded generators read
/// `seed=` from params and fall back to `seed`.
inline Construction build_construction(const std::string& id, Index N, const Params& params, std::uint64_t seed) {
    require(N >= 1, "N must be >= 1");
    const std::uint64_t own_seed = param_u64(params, "seed", seed);
    Construction c;
    auto from_perm = [&](PermutationSpec p) {
        c.set = permutation_set(p);
        c.perm = std::move(p);
    };
    if (id == "identity") {
        from_perm(identity_perm(N));
    } else if (id == "reversal") {
        from_perm(reversal_perm(N));
    } else if (id == "golden" || id == "sqrt2") {
        c.theta = id == "golden" ? kGoldenRatio : kSqrt2;
        from_perm(quadratic_irrational_perm(N, *c.theta));
    } else if (id == "bitrev") {
        from_perm(bit_reversal_perm(log2_exact(N)));
    } else if (id == "scramble") {
        from_perm(digit_scramble_perm(log2_exact(N), own_seed));
    } else if (id == "onecell") {
        const std::string placement = param_string(params, "placement", "center");
        CellPlacement pl = CellPlacement::center;
        if (placement == "corner")
            pl = CellPlacement::corner;
        else if (placement == "random")
            pl = CellPlacement::random;
        else
            require(placement == "center", "placement must be corner, center or random");
        c.set = one_per_cell_set(N, pl, own_seed);
    } else if (id == "packed") {
        c.set = packed_cell_set(N);
    } else if (id == "parabola" || id == "arc" || id == "sine") {
        const CurveKind kind = id == "parabola" ? CurveKind::parabola : id == "arc" ? CurveKind::circle_arc : CurveKind::sine;
        auto r = curve_set(N, kind);
        c.set = std::move(r.set);
        c.duplicates = r.duplicates;
    } else if (id == "selfsim") {
        const Index n0 = exact_sqrt(N);
        const std::string base = param_string(params, "base", "golden");
        GridSet a;
        if (base == "optimal") {
            a = optimal_tube_set(n0);
        } else {
            require(is_construction_id(base) && base != "selfsim", "unknown selfsim base '" + base + "'");
            Params inner = params;
            inner.erase("base");
            a = build_construction(base, n0, inner, seed).set;
        }
        c.set = self_similar_compose(a, a);
    } else if (id == "random") {
        c.set = random_set(N, own_seed);
    } else {
        throw invalid_input("unknown construction id '" + id + "'");
    }
    return c;
}

inline bool construction_uses_seed(const std::string& id, const Params& params) {
    if (id == "scramble" || id == "random") return true;
    if (id == "onecell") return param_string(params, "placement", "center") == "random";
    if (id == "selfsim") return construction_uses_seed(param_string(params, "base", "golden"), params);
    return false;
}

} // namespace occupancy
