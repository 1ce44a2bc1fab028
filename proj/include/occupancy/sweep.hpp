#pragma once

#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "diagnostics.hpp"
#include "io.hpp"
#include "occupancy.hpp"
#include "parallel.hpp"
#include "registry.hpp"

namespace occupancy {

inline const std::vector<std::string>& diagnostic_names() {
    static const std::vector<std::string> names = {"energy", "regularity", "slope_sums", "dirichlet", "palindromes"};
    return names;
}

/// One diagnostic on a built construction, as a JSON record with the set hash,
/// parameters and values. `primary` and `secondary` feed the sweep CSV.
inline nlohmann::ordered_json diagnostic_record(const std::string& name, const std::string& construction_id,
                                                const Construction& c, const Params& params, unsigned threads = 1) {
    nlohmann::ordered_json rec;
    rec["diagnostic"] = name;
    rec["construction"] = construction_id;
    rec["N"] = c.set.N();
    rec["set_hash"] = hex64(set_hash(c.set));
    rec["params"] = params;
    nlohmann::ordered_json v;
    const double N = static_cast<double>(c.set.N());
    if (name == "energy") {
        const double e = energy(c.set, threads);
        v["energy"] = e;
        v["energy_over_N2"] = e / (N * N);
        v["energy_over_N2_logN"] = e / (N * N * std::log(N));
        rec["primary"] = e;
        rec["secondary"] = e / (N * N * std::log(N));
    } else if (name == "regularity") {
        const auto p = ad_regularity_profile(c.set, param_double(params, "c1", 0.25), param_double(params, "c2", 4.0),
                                             param_double(params, "cover", 4.0));
        nlohmann::ordered_json scales = nlohmann::ordered_json::array();
        for (const auto& s : p.scales)
            scales.push_back({{"r", s.r},
                              {"cover_count", s.cover_count},
                              {"min_neighbors", s.min_neighbors},
                              {"max_neighbors", s.max_neighbors}});
        v["scales"] = scales;
        v["ad_regular"] = p.ad_regular;
        v["cover_hypothesis"] = p.cover_hypothesis;
        rec["primary"] = p.ad_regular ? 1 : 0;
        rec["secondary"] = p.cover_hypothesis ? 1 : 0;
    } else if (name == "slope_sums") {
        require(c.perm.has_value(), "slope_sums needs a permutation construction");
        const auto s = slope_class_sums(*c.perm, threads);
        v["max_sum"] = s.max_sum;
        v["argmax_anchor"] = s.argmax_anchor;
        v["argmax_class"] = s.argmax_class;
        v["classes"] = s.classes;
        rec["primary"] = s.max_sum;
        rec["secondary"] = s.argmax_class;
    } else if (name == "dirichlet") {
        require(c.theta.has_value(), "dirichlet needs an {n theta} construction");
        const auto w = dirichlet_collinear_witness(c.set.N(), *c.theta);
        v["p"] = w.p;
        v["distance"] = w.distance;
        v["collinear"] = w.collinear;
        v["occupancy"] = w.occupancy;
        v["line"] = witness_json(w.exact_line);
        rec["primary"] = w.occupancy;
        rec["secondary"] = w.p;
    } else if (name == "palindromes") {
        const int t = log2_exact(c.set.N());
        const auto pal = palindrome_fixed_points(t);
        const Index on_diag = count_incidences(GridLine::through(c.set.N(), 0, 0, 1, 1), c.set);
        v["count"] = pal.size();
        v["diagonal_occupancy"] = on_diag;
        rec["primary"] = pal.size();
        rec["secondary"] = on_diag;
    } else {
        throw invalid_input("unknown diagnostic '" + name + "'");
    }
    rec["values"] = v;
    return rec;
}

struct EvaluatorSpec {
    std::string id; // exact | sampled | interval
    Params params;
};

struct ConstructionSpec {
    std::string id;
    Params params;
};

struct SweepConfig {
    std::vector<ConstructionSpec> constructions;
    std::vector<Index> N_values;
    std::vector<EvaluatorSpec> evaluators;
    std::vector<std::string> diagnostics;
    std::uint64_t seed = 0;
    Index exact_ceiling = 512;
    bool allow_above_ceiling = false;
    bool fit = false;
    bool timing = false;
    std::string csv_path;
    std::string json_path;
};

inline constexpr const char* kSweepHeader = "occupancy-sweep v1";

inline std::vector<std::string> split_words(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

/// Parses the line-oriented sweep config. See configs/README.md for the schema.
inline SweepConfig parse_sweep_config(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "sweep config is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    require(line == kSweepHeader, std::string("sweep config must start with '") + kSweepHeader + "'");
    SweepConfig cfg;
    Index lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto words = split_words(line);
        if (words.empty()) continue;
        const std::string key = words[0];
        const std::vector<std::string> rest(words.begin() + 1, words.end());
        const std::string where = " (line " + std::to_string(lineno) + ")";
        if (key == "seed") {
            require(rest.size() == 1, "seed takes one value" + where);
            cfg.seed = param_u64({{"seed", rest[0]}}, "seed", 0);
        } else if (key == "N") {
            require(!rest.empty(), "N needs at least one value" + where);
            for (const auto& v : rest) cfg.N_values.push_back(static_cast<Index>(param_u64({{"N", v}}, "N", 0)));
        } else if (key == "construction") {
            require(!rest.empty(), "construction needs an id" + where);
            require(is_construction_id(rest[0]), "unknown construction id '" + rest[0] + "'" + where);
            cfg.constructions.push_back({rest[0], parse_params({rest.begin() + 1, rest.end()})});
        } else if (key == "evaluator") {
            require(!rest.empty(), "evaluator needs an id" + where);
            require(rest[0] == "exact" || rest[0] == "sampled" || rest[0] == "interval",
                    "unknown evaluator '" + rest[0] + "'" + where);
            cfg.evaluators.push_back({rest[0], parse_params({rest.begin() + 1, rest.end()})});
        } else if (key == "diagnostic") {
            require(rest.size() == 1, "diagnostic takes one name" + where);
            const auto& names = diagnostic_names();
            require(std::find(names.begin(), names.end(), rest[0]) != names.end(),
                    "unknown diagnostic '" + rest[0] + "'" + where);
            cfg.diagnostics.push_back(rest[0]);
        } else if (key == "exact_ceiling") {
            require(rest.size() == 1, "exact_ceiling takes one value" + where);
            cfg.exact_ceiling = static_cast<Index>(param_u64({{"v", rest[0]}}, "v", 0));
        } else if (key == "allow_above_ceiling" || key == "fit" || key == "timing") {
            require(rest.size() == 1 && (rest[0] == "on" || rest[0] == "off"), key + " takes on|off" + where);
            const bool on = rest[0] == "on";
            if (key == "fit") cfg.fit = on;
            else if (key == "timing") cfg.timing = on;
            else cfg.allow_above_ceiling = on;
        } else if (key == "csv") {
            require(rest.size() == 1, "csv takes one path" + where);
            cfg.csv_path = rest[0];
        } else if (key == "json") {
            require(rest.size() == 1, "json takes one path" + where);
            cfg.json_path = rest[0];
        } else {
            throw invalid_input("unknown config key '" + key + "'" + where);
        }
    }
    require(std::is_sorted(cfg.N_values.begin(), cfg.N_values.end()) &&
                std::adjacent_find(cfg.N_values.begin(), cfg.N_values.end()) == cfg.N_values.end(),
            "N values must be strictly ascending");
    return cfg;
}

struct SweepRow {
    std::string construction;
    std::string id_params;
    Index N = 0;
    std::string evaluator;
    std::string eval_params;
    std::uint64_t seed = 0;
    std::string max_count;
    std::string witness_kind;
    std::string witness_a;
    std::string witness_b;
    std::string wall_ms;
    std::optional<nlohmann::ordered_json> record;
};

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_safe(std::string s) {
    for (char& ch : s)
        if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
    return s;
}

inline constexpr const char* kSweepCsvHeader =
    "construction,id_params,N,evaluator,eval_params,seed,max_count,witness_kind,witness_a,witness_b,wall_ms";

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = std::string(kSweepCsvHeader) + "\n";
    for (const auto& r : rows) {
        out += csv_safe(r.construction) + "," + csv_safe(r.id_params) + "," + std::to_string(r.N) + "," +
               csv_safe(r.evaluator) + "," + csv_safe(r.eval_params) + "," + std::to_string(r.seed) + "," +
               r.max_count + "," + r.witness_kind + "," + csv_safe(r.witness_a) + "," + csv_safe(r.witness_b) + "," +
               r.wall_ms + "\n";
    }
    return out;
}

inline void fill_witness(SweepRow& row, const Witness& w) {
    std::visit(
        [&](const auto& line) {
            if (line.vertical()) {
                row.witness_kind = "vertical";
                row.witness_a = format_real(line.x0());
            } else {
                row.witness_kind = "slope";
                row.witness_a = format_real(line.alpha());
                row.witness_b = format_real(line.beta());
            }
        },
        w);
}

inline OccupancyReport run_evaluator(const EvaluatorSpec& ev, const Construction& c, std::uint64_t seed,
                                     Index exact_ceiling, bool allow_above_ceiling) {
    if (ev.id == "exact") {
        if (c.set.N() > exact_ceiling && !allow_above_ceiling)
            throw budget_exceeded("exact evaluator refused: N = " + std::to_string(c.set.N()) + " exceeds ceiling " +
                                  std::to_string(exact_ceiling));
        return max_tube_occupancy_exact(c.set);
    }
    if (ev.id == "sampled")
        return max_occupancy_sampled(c.set, static_cast<Index>(param_u64(ev.params, "num_lines", 10000)),
                                     param_u64(ev.params, "seed", seed));
    if (ev.id == "interval") {
        require(c.perm.has_value(), "interval evaluator needs a permutation construction");
        return interval_occupancy(*c.perm, param_double(ev.params, "c", 2.0));
    }
    throw invalid_input("unknown evaluator '" + ev.id + "'");
}

/// Runs every (construction, N, evaluator) row and every (construction, N,
/// diagnostic) row on a worker pool; rows come back in config order, so the
/// output does not depend on `threads`. Failing rows are recorded, not thrown.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg, unsigned threads = 1) {
    struct Job {
        std::size_t construction;
        Index N;
        int evaluator; // -1 for diagnostics
        int diagnostic;
    };
    std::vector<Job> jobs;
    for (std::size_t ci = 0; ci < cfg.constructions.size(); ++ci)
        for (Index N : cfg.N_values) {
            for (std::size_t e = 0; e < cfg.evaluators.size(); ++e) jobs.push_back({ci, N, static_cast<int>(e), -1});
            for (std::size_t d = 0; d < cfg.diagnostics.size(); ++d) jobs.push_back({ci, N, -1, static_cast<int>(d)});
        }
    std::vector<SweepRow> rows(jobs.size());
    parallel_for(jobs.size(), threads, [&](std::size_t j) {
        const Job& job = jobs[j];
        const ConstructionSpec& cs = cfg.constructions[job.construction];
        SweepRow& row = rows[j];
        row.construction = cs.id;
        row.id_params = format_params(cs.params);
        row.N = job.N;
        row.seed = param_u64(cs.params, "seed", cfg.seed);
        const auto start = std::chrono::steady_clock::now();
        try {
            const Construction c = build_construction(cs.id, job.N, cs.params, cfg.seed);
            if (job.evaluator >= 0) {
                const EvaluatorSpec& ev = cfg.evaluators[static_cast<std::size_t>(job.evaluator)];
                row.evaluator = ev.id;
                row.eval_params = format_params(ev.params);
                if (ev.id == "sampled") row.seed = param_u64(ev.params, "seed", cfg.seed);
                const OccupancyReport r = run_evaluator(ev, c, cfg.seed, cfg.exact_ceiling, cfg.allow_above_ceiling);
                row.max_count = std::to_string(r.max_count);
                fill_witness(row, r.witness);
            } else {
                const std::string& name = cfg.diagnostics[static_cast<std::size_t>(job.diagnostic)];
                row.evaluator = "diag:" + name;
                auto rec = diagnostic_record(name, cs.id, c, cs.params);
                row.witness_kind = "value";
                row.witness_a = rec["primary"].is_number_float() ? format_real(rec["primary"].get<double>())
                                                                  : rec["primary"].dump();
                row.witness_b = rec["secondary"].is_number_float() ? format_real(rec["secondary"].get<double>())
                                                                    : rec["secondary"].dump();
                row.record = std::move(rec);
            }
        } catch (const std::exception& e) {
            if (row.evaluator.empty())
                row.evaluator = job.evaluator >= 0 ? cfg.evaluators[static_cast<std::size_t>(job.evaluator)].id
                                                   : "diag:" + cfg.diagnostics[static_cast<std::size_t>(job.diagnostic)];
            row.max_count.clear();
            row.witness_kind = "error";
            row.witness_a = e.what();
            row.witness_b.clear();
        }
        if (cfg.timing)
            row.wall_ms = format_real(
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
    });

    if (cfg.fit) {
        // One growth fit per (construction, evaluator) over the successful rows.
        for (std::size_t ci = 0; ci < cfg.constructions.size(); ++ci) {
            for (std::size_t e = 0; e < cfg.evaluators.size(); ++e) {
                std::vector<std::pair<Index, double>> samples;
                for (std::size_t j = 0; j < jobs.size(); ++j)
                    if (jobs[j].construction == ci && jobs[j].evaluator == static_cast<int>(e) && !rows[j].max_count.empty())
                        samples.emplace_back(jobs[j].N, std::stod(rows[j].max_count));
                SweepRow row;
                row.construction = cfg.constructions[ci].id;
                row.id_params = format_params(cfg.constructions[ci].params);
                row.evaluator = "fit:" + cfg.evaluators[e].id;
                row.eval_params = format_params(cfg.evaluators[e].params);
                row.seed = cfg.seed;
                try {
                    const GrowthFit g = fit_growth(samples);
                    row.witness_kind = "fit";
                    row.witness_a = format_real(g.exponent());
                    row.witness_b = g.log_model ? format_real(g.log_model->slope) : "";
                } catch (const std::exception& ex) {
                    row.witness_kind = "error";
                    row.witness_a = ex.what();
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

inline std::string sweep_jsonl(const std::vector<SweepRow>& rows) {
    std::string out;
    for (const auto& r : rows)
        if (r.record) out += r.record->dump() + "\n";
    return out;
}

} // namespace occupancy
