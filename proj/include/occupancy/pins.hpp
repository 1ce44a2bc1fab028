#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "constructions.hpp"
#include "cover.hpp"
#include "diagnostics.hpp"
#include "family.hpp"
#include "hypergeometric.hpp"
#include "io.hpp"
#include "occupancy.hpp"
#include "registry.hpp"
#include "sweep.hpp"

namespace occupancy {

/// Regression value: `key<TAB>type<TAB>value` with type int, real or text.
/// Integers and text compare byte-exact, reals to 1e-9 relative.
struct Pin {
    std::string key;
    std::string type;
    std::string value;
};

struct PinMismatch {
    std::string key;
    std::string expected; // from the file; empty if absent
    std::string actual;   // recomputed; empty if the key is unknown
    std::string reason;
};

struct PinReport {
    std::size_t checked = 0;
    std::vector<PinMismatch> mismatches;
    bool ok() const { return mismatches.empty(); }
};

inline constexpr const char* kPinHeader = "# occupancy-pins v1";
inline constexpr double kPinRealTolerance = 1e-9;

namespace detail {

inline std::string real_text(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string cells_text(const GridSet& s) {
    std::string out;
    for (const Cell& c : s.cells()) {
        if (!out.empty()) out += ' ';
        out += std::to_string(c.col) + ',' + std::to_string(c.row);
    }
    return out;
}

inline std::string joined(const std::vector<Index>& v) {
    std::string out;
    for (Index x : v) {
        if (!out.empty()) out += ' ';
        out += std::to_string(x);
    }
    return out;
}

class PinSink {
  public:
    void integer(const std::string& key, Index v) { pins.push_back({key, "int", std::to_string(v)}); }
    void real(const std::string& key, double v) { pins.push_back({key, "real", real_text(v)}); }
    void text(const std::string& key, std::string v) { pins.push_back({key, "text", std::move(v)}); }
    std::vector<Pin> pins;
};

inline bool parse_real(const std::string& s, double& out) {
    if (s.empty()) return false;
    std::size_t used = 0;
    try {
        out = std::stod(s, &used);
    } catch (const std::exception&) {
        return false;
    }
    return used == s.size() && std::isfinite(out);
}

inline bool parse_int(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = s[0] == '-' ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

inline bool pin_values_match(const Pin& expected, const Pin& actual, std::string& reason) {
    if (expected.type != actual.type) {
        reason = "type " + expected.type + " != " + actual.type;
        return false;
    }
    if (actual.type == "real") {
        double a = 0, b = 0;
        if (!parse_real(expected.value, a) || !parse_real(actual.value, b)) {
            reason = "unparseable real";
            return false;
        }
        const double scale = std::max(std::fabs(a), std::fabs(b));
        if (std::fabs(a - b) <= kPinRealTolerance * scale) return true;
        reason = "relative difference above 1e-9";
        return false;
    }
    if (actual.type == "int" && !parse_int(expected.value)) {
        reason = "unparseable int";
        return false;
    }
    if (expected.value == actual.value) return true;
    reason = "value differs";
    return false;
}

} // namespace detail

/// Recomputes every regression value. Runs in tens of seconds.
inline std::vector<Pin> compute_pins(unsigned threads = 1) {
    detail::PinSink out;

    // grid-geometry
    out.text("grid.diagonal_tube.n4", detail::cells_text(tube_squares(GridLine::through(4, 0, 0, 4, 4), 4)));
    out.integer("grid.critical_lines.single_square", static_cast<Index>(critical_lines(GridSet(2, {{0, 0}})).size()));

    // occupancy-eval
    const GridSet chain(4, {{0, 0}, {1, 2}, {2, 1}, {3, 3}});
    out.integer("eval.corner_chain.n4.exact", max_tube_occupancy_exact(chain).max_count);
    out.integer("eval.corner_chain.n4.critical", max_occupancy_over_critical_lines(chain).max_count);
    out.integer("eval.corner_chain.n4.sampled_1e6", max_occupancy_sampled(chain, 1'000'000, 1).max_count);
    {
        const GridSet g = permutation_set(quadratic_irrational_perm(64));
        const Index exact = max_tube_occupancy_exact(g, threads).max_count;
        Index lo = exact;
        for (std::uint64_t seed = 0; seed < 20; ++seed) lo = std::min(lo, max_occupancy_sampled(g, 10'000, seed).max_count);
        out.integer("eval.golden.n64.exact", exact);
        out.integer("eval.golden.n64.sampled_min20", lo);
    }
    {
        double worst = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            Rng rng(seed);
            std::vector<Index> image(64);
            std::iota(image.begin(), image.end(), Index(0));
            rng.shuffle(image);
            const auto pi = PermutationSpec::integer(image);
            const double exact = static_cast<double>(max_tube_occupancy_exact(permutation_set(pi), threads).max_count);
            const double interval = static_cast<double>(interval_occupancy(pi, 1.0, threads).max_count);
            worst = std::max(worst, std::max(exact / interval, interval / exact));
        }
        out.real("eval.interval.random_n64_c1.worst_ratio", worst);
    }
    {
        const SetFamily t4 = tube_family(4);
        out.integer("family.tubes.n4.size", static_cast<Index>(t4.size()));
        out.integer("family.tubes.n4.minimax", minimax_occupancy_bruteforce(t4, 16, 4).value);
    }

    // constructions
    {
        const auto rows = permutation_set(quadratic_irrational_perm(8));
        std::vector<Index> r;
        for (const Cell& c : rows.cells()) r.push_back(c.row);
        out.text("construct.golden.n8.rows", detail::joined(r));
        const auto g5 = quadratic_irrational_perm(5);
        for (Index n = 0; n < 5; ++n) out.real("construct.golden.n5.v" + std::to_string(n + 1), g5.values[static_cast<std::size_t>(n)]);
        const auto s8 = quadratic_irrational_perm(8, kSqrt2);
        for (Index n = 0; n < 8; ++n) out.real("construct.sqrt2.n8.v" + std::to_string(n + 1), s8.values[static_cast<std::size_t>(n)]);
        std::vector<Index> sr;
        for (double v : s8.values) sr.push_back(static_cast<Index>(std::floor(v)));
        out.text("construct.sqrt2.n8.rows", detail::joined(sr));
        out.integer("construct.sqrt2.n8.row_collisions", row_collisions(s8));
    }
    {
        std::vector<Index> fixed;
        const auto b3 = bit_reversal_perm(3).image();
        for (Index n = 0; n < 8; ++n)
            if (b3[static_cast<std::size_t>(n)] == n) fixed.push_back(n);
        out.text("construct.bitrev.t3.fixed", detail::joined(fixed));
        out.text("construct.scramble.t4.seed1", detail::joined(digit_scramble_perm(4, 1).image()));
    }
    out.text("construct.onecell_random.n16.seed7", hex64(set_hash(one_per_cell_set(16, CellPlacement::random, 7))));
    out.text("construct.parabola.n4", detail::cells_text(curve_set(4, CurveKind::parabola).set));
    {
        const auto arc = curve_set(16, CurveKind::circle_arc);
        out.integer("construct.arc.n16.distinct", static_cast<Index>(arc.set.size()));
    }
    {
        // Largest row-aggregate z-score over 100 seeded random sets at N = 256.
        const Index N = 256, trials = 100;
        std::vector<Index> per_row(static_cast<std::size_t>(N), 0);
        for (Index seed = 0; seed < trials; ++seed)
            for (const Cell& c : random_set(N, static_cast<std::uint64_t>(seed)).cells()) ++per_row[static_cast<std::size_t>(c.row)];
        const double n = static_cast<double>(trials * N), p = 1.0 / static_cast<double>(N);
        double worst = 0;
        for (Index count : per_row)
            worst = std::max(worst, std::fabs(static_cast<double>(count) - n * p) / std::sqrt(n * p * (1 - p)));
        out.real("construct.random.n256.max_row_z", worst);
    }

    // abstract-family
    {
        Rng rng(16);
        std::vector<std::vector<Index>> members;
        for (int j = 0; j < 32; ++j) {
            std::vector<Index> m;
            for (std::uint64_t e : rng.subset(256, 16)) m.push_back(static_cast<Index>(e));
            members.push_back(std::move(m));
        }
        const auto fam = SetFamily::make(256, 16, std::move(members));
        std::vector<Index> sel;
        for (std::uint64_t e : rng.subset(256, 16)) sel.push_back(static_cast<Index>(e));
        out.integer("family.random.n16.max_intersection", family_max_intersection(fam, sel).count);
    }
    {
        const Index N = 32;
        std::vector<std::vector<Index>> tiles;
        for (Index i = 0; i < N; ++i) {
            std::vector<Index> m;
            for (Index e = 0; e < N; ++e) m.push_back(i * N + e);
            tiles.push_back(std::move(m));
        }
        const auto tiling = SetFamily::make(N * N, N, tiles);
        out.integer("family.greedy.tiling_n32.max", family_max_intersection(tiling, greedy_low_intersection_select(tiling).selection).count);
        Index worst = 0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            Rng rng(seed);
            std::vector<std::vector<Index>> members;
            for (Index j = 0; j < 2 * N; ++j) {
                std::vector<Index> m;
                for (std::uint64_t e : rng.subset(N * N, N)) m.push_back(static_cast<Index>(e));
                members.push_back(std::move(m));
            }
            const auto fam = SetFamily::make(N * N, N, std::move(members));
            worst = std::max(worst, family_max_intersection(fam, greedy_low_intersection_select(fam).selection).count);
        }
        out.integer("family.greedy.random2n_n32.worst", worst);
    }
    {
        const Index N = 256;
        Index passes = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto r = random_select_verify(N, N * N, 1.0, 3.0, seed, [&](const std::vector<Index>& sel) {
                std::vector<Cell> cells;
                for (Index g : sel) cells.push_back({g % N, g / N});
                return max_tube_occupancy_exact(GridSet(N, std::move(cells)), threads).max_count;
            });
            passes += r.pass ? 1 : 0;
        }
        out.integer("family.random_select.closed_tubes_n256_beta3.passes", passes);
    }
    {
        const Index N = 256;
        Index passes = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto r = random_select_verify(N, N * N, 1.0, 3.0, seed, [&](const std::vector<Index>& sel) {
                std::vector<Cell> cells;
                for (Index g : sel) cells.push_back({g % N, g / N});
                return max_digital_tube_occupancy(GridSet(N, std::move(cells)));
            });
            passes += r.pass ? 1 : 0;
        }
        out.integer("family.random_select.digital_tubes_n256_beta3.passes", passes);
        out.integer("family.digital_tubes.n16.size", static_cast<Index>(digital_tube_family(16).size()));
    }
    {
        std::string pmf;
        for (Index k = 0; k <= 2; ++k) {
            if (k) pmf += ' ';
            pmf += hypergeometric_overlap_pmf(2, k).pmf.str();
        }
        out.text("family.hypergeometric.n2", pmf);
    }
    {
        const SetFamily adv = adversarial_family(27, 3);
        out.integer("family.adversarial.27_3.size", static_cast<Index>(adv.size()));
        Index lo = 27;
        Rng rng(27);
        for (int trial = 0; trial < 10'000; ++trial) {
            std::vector<Index> sel;
            for (std::uint64_t e : rng.subset(27 * 27, 27)) sel.push_back(static_cast<Index>(e));
            lo = std::min(lo, family_max_intersection(adv, sel).count);
        }
        out.integer("family.adversarial.27_3.min_over_1e4", lo);
    }

    // covers
    out.integer("cover.exhaustive.6_3_2", exhaustive_cover_size(6, 3, 2, 8));
    for (auto [n, k, l] : std::vector<std::tuple<Index, Index, Index>>{{6, 3, 2}, {8, 4, 2}, {10, 5, 2}, {12, 4, 3}})
        out.integer("cover.greedy." + std::to_string(n) + "_" + std::to_string(k) + "_" + std::to_string(l),
                    static_cast<Index>(greedy_cover(n, k, l).k_sets.size()));
    {
        double total = 0;
        Index certified = 0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const auto r = random_patch_cover(8, 4, 2, seed);
            total += static_cast<double>(r.k_sets.size());
            certified += r.certified ? 1 : 0;
        }
        out.real("cover.random_patch.8_4_2.mean50", total / 50.0);
        out.integer("cover.random_patch.8_4_2.certified50", certified);
    }

    // diagnostics
    {
        const double n16 = 16.0;
        out.real("diag.energy.diagonal_n16.ratio", energy(permutation_set(identity_perm(16)), threads) / (n16 * n16 * std::log(n16)));
        out.real("diag.energy.onecell_n16.per_n2", energy(one_per_cell_set(16, CellPlacement::center), threads) / (n16 * n16));
        out.integer("diag.regularity.diagonal_n64.ad_regular", ad_regularity_profile(permutation_set(identity_perm(64))).ad_regular ? 1 : 0);
        const auto p = ad_regularity_profile(one_per_cell_set(64, CellPlacement::center));
        for (const auto& sc : p.scales)
            if (sc.r == 0.125) out.integer("diag.regularity.onecell_n64.cover_r8", sc.cover_count);
    }
    for (int t : {10, 14}) {
        const Index N = Index(1) << t;
        out.real("diag.slope_sums.golden_2^" + std::to_string(t), slope_class_sums(quadratic_irrational_perm(N), threads).max_sum);
        out.real("diag.slope_sums.identity_2^" + std::to_string(t), slope_class_sums(identity_perm(N), threads).max_sum);
    }
    {
        std::vector<Index> all, evens;
        for (Index n = 1; n <= 1024; ++n) {
            all.push_back(n);
            if (n % 2 == 0) evens.push_back(n);
        }
        out.real("diag.harmonic.full_1024.ratio", harmonic_pair_sum(all) / (1024.0 * std::log(1024.0)));
        out.real("diag.harmonic.evens_1024.ratio", harmonic_pair_sum(evens) / (512.0 * std::log(512.0)));
    }
    for (Index N : {64, 4096}) {
        const auto w = dirichlet_collinear_witness(N);
        out.integer("diag.dirichlet.golden_n" + std::to_string(N) + ".p", w.p);
        out.integer("diag.dirichlet.golden_n" + std::to_string(N) + ".occupancy", w.occupancy);
    }
    out.text("diag.palindromes.t3", detail::joined(palindrome_fixed_points(3)));
    out.integer("diag.palindromes.t8.count", static_cast<Index>(palindrome_fixed_points(8).size()));
    {
        std::vector<std::pair<Index, double>> samples;
        for (int t = 4; t <= 10; ++t) {
            const GridSet s = permutation_set(bit_reversal_perm(t));
            samples.emplace_back(s.N(), static_cast<double>(max_tube_occupancy_exact(s, threads).max_count));
        }
        out.real("diag.fit.bitrev_t4_10.exponent", fit_growth(samples).exponent());
    }

    // experiment-cli
    {
        const auto cfg = parse_sweep_config("occupancy-sweep v1\nN 16 64 256 1024\nconstruction golden\n"
                                            "construction bitrev\nevaluator exact\nallow_above_ceiling on\nfit on\n");
        for (const SweepRow& row : run_sweep(cfg, threads)) {
            if (row.witness_kind == "fit")
                out.real("sweep." + row.construction + ".fit_exponent", std::stod(row.witness_a));
            else
                out.integer("sweep." + row.construction + ".n" + std::to_string(row.N) + ".exact", std::stol(row.max_count));
        }
    }
    return out.pins;
}

inline std::string write_pins(const std::vector<Pin>& pins) {
    std::string out = std::string(kPinHeader) + "\n";
    for (const Pin& p : pins) out += p.key + '\t' + p.type + '\t' + p.value + '\n';
    return out;
}

/// Compares a pin file against recomputed values. Unparseable rows, unknown
/// keys, missing keys and differing values are all reported, and a file
/// without the header line flags every row.
inline PinReport check_pins(const std::string& text, const std::vector<Pin>& computed) {
    PinReport report;
    std::map<std::string, Pin> actual;
    for (const Pin& p : computed) actual[p.key] = p;

    std::istringstream in(text);
    std::string line;
    const bool header_ok = std::getline(in, line) && (line == kPinHeader || line == std::string(kPinHeader) + "\r");
    std::map<std::string, Pin> expected;
    Index lineno = 1;
    while (header_ok && std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) {
            report.mismatches.push_back({"line " + std::to_string(lineno), line, "", "malformed row"});
            continue;
        }
        Pin p{line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), line.substr(t2 + 1)};
        if (expected.count(p.key)) {
            report.mismatches.push_back({p.key, p.value, "", "duplicate key"});
            continue;
        }
        expected[p.key] = p;
    }

    for (const Pin& a : computed) {
        ++report.checked;
        const auto it = expected.find(a.key);
        if (!header_ok) {
            report.mismatches.push_back({a.key, "", a.value, "missing header"});
            continue;
        }
        if (it == expected.end()) {
            report.mismatches.push_back({a.key, "", a.value, "missing"});
            continue;
        }
        std::string reason;
        if (!detail::pin_values_match(it->second, a, reason)) report.mismatches.push_back({a.key, it->second.value, a.value, reason});
    }
    for (const auto& [key, p] : expected)
        if (!actual.count(key)) report.mismatches.push_back({key, p.value, "", "unknown key"});
    return report;
}

inline PinReport pin_regressions(const std::string& path, unsigned threads = 1) {
    const std::string text = read_file(path);
    return check_pins(text, compute_pins(threads));
}

inline nlohmann::ordered_json pin_report_json(const PinReport& r) {
    nlohmann::ordered_json j;
    j["checked"] = r.checked;
    j["mismatches"] = nlohmann::ordered_json::array();
    for (const auto& m : r.mismatches)
        j["mismatches"].push_back({{"key", m.key}, {"expected", m.expected}, {"actual", m.actual}, {"reason", m.reason}});
    j["ok"] = r.ok();
    return j;
}

} // namespace occupancy
