#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "cover.hpp"
#include "family.hpp"
#include "grid.hpp"
#include "occupancy.hpp"

namespace occupancy {

// GridSet text format: "N <resolution>", then one "col row" line per square
// in lexicographic order.

inline std::string write_grid_set(const GridSet& s) {
    std::string out = "N " + std::to_string(s.N()) + "\n";
    for (const Cell& c : s.cells()) out += std::to_string(c.col) + " " + std::to_string(c.row) + "\n";
    return out;
}

inline GridSet read_grid_set(std::istream& in) {
    std::string line, tag;
    require(static_cast<bool>(std::getline(in, line)), "grid set file is empty");
    std::istringstream head(line);
    Index N = 0;
    require(static_cast<bool>(head >> tag >> N) && tag == "N", "grid set header must be 'N <resolution>'");
    std::vector<Cell> cells;
    Index lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream row(line);
        Cell c;
        std::string extra;
        require(static_cast<bool>(row >> c.col >> c.row) && !(row >> extra),
                "malformed square on line " + std::to_string(lineno));
        cells.push_back(c);
    }
    return GridSet(N, std::move(cells)); // rejects duplicates and out-of-range cells
}

inline GridSet parse_grid_set(const std::string& text) {
    std::istringstream in(text);
    return read_grid_set(in);
}

// SetFamily text format: "M <M> N <N>", then one member per line as sorted,
// space-separated indices.

inline std::string write_set_family(const SetFamily& f) {
    std::string out = "M " + std::to_string(f.M) + " N " + std::to_string(f.N) + "\n";
    for (const auto& s : f.members) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (i) out += ' ';
            out += std::to_string(s[i]);
        }
        out += '\n';
    }
    return out;
}

inline SetFamily read_set_family(std::istream& in, bool uniform = true) {
    std::string line, tm, tn;
    require(static_cast<bool>(std::getline(in, line)), "family file is empty");
    std::istringstream head(line);
    Index M = 0, N = 0;
    require(static_cast<bool>(head >> tm >> M >> tn >> N) && tm == "M" && tn == "N",
            "family header must be 'M <M> N <N>'");
    std::vector<std::vector<Index>> members;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream row(line);
        std::vector<Index> s;
        Index e;
        while (row >> e) s.push_back(e);
        require(row.eof(), "malformed family member line");
        require(std::is_sorted(s.begin(), s.end()), "family member indices must be sorted");
        members.push_back(std::move(s));
    }
    return SetFamily::make(M, N, std::move(members), uniform);
}

/// FNV-1a 64 of the canonical file text.
inline std::uint64_t set_hash(const GridSet& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : write_grid_set(s)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline nlohmann::ordered_json witness_json(const Witness& w) {
    nlohmann::ordered_json j;
    std::visit(
        [&](const auto& line) {
            if (line.vertical()) {
                j["kind"] = "vertical";
                j["x0"] = line.x0();
            } else {
                j["kind"] = "slope";
                j["alpha"] = line.alpha();
                j["beta"] = line.beta();
            }
            if constexpr (std::is_same_v<std::decay_t<decltype(line)>, GridLine>) {
                j["exact"] = {{"a", line.a()}, {"b", line.b()}, {"c", line.c()}, {"N", line.N()}};
            }
        },
        w);
    return j;
}

inline nlohmann::ordered_json report_json(const OccupancyReport& r) {
    nlohmann::ordered_json j;
    j["method"] = method_name(r.method);
    j["N"] = r.N;
    j["max_count"] = r.max_count;
    j["witness"] = witness_json(r.witness);
    if (r.seed) j["seed"] = *r.seed;
    if (r.num_lines) j["num_lines"] = *r.num_lines;
    if (r.half_width) j["c"] = *r.half_width;
    if (r.anchor) j["anchor"] = *r.anchor;
    return j;
}

inline nlohmann::ordered_json cover_json(const CoverResult& c) {
    nlohmann::ordered_json j;
    j["n"] = c.n;
    j["k"] = c.k;
    j["l"] = c.l;
    j["method"] = cover_method_name(c.method);
    j["size"] = c.k_sets.size();
    j["certified"] = c.certified;
    j["lower_bound"] = cover_lower_bound(c.n, c.k, c.l);
    if (c.method == CoverMethod::greedy) {
        j["greedy_bound"] = greedy_cover_bound(c.n, c.k, c.l);
    } else {
        j["random_sets"] = c.random_sets;
        j["patches"] = c.patches;
        j["expected_bound"] = random_patch_expected_bound(c.n, c.k, c.l);
    }
    j["k_sets"] = c.k_sets;
    return j;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path);
}

} // namespace occupancy
