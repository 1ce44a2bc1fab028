#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "occupancy/pins.hpp"

using namespace occupancy;
using nlohmann::ordered_json;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    std::string out;
    unsigned threads = 1;
    Index exact_ceiling = 512;
    bool allow_above_ceiling = false;
};

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty() || g.out == "-")
        std::cout << text;
    else
        write_file(g.out, text);
}

void emit_json(const Globals& g, const ordered_json& j) { emit(g, j.dump(2) + "\n"); }

Params params_from(const std::vector<std::string>& tokens) { return parse_params(tokens); }

// A GridSet with one square per column is read back as a permutation.
std::optional<PermutationSpec> as_permutation(const GridSet& s) {
    if (static_cast<Index>(s.size()) != s.N()) return std::nullopt;
    std::vector<Index> image(static_cast<std::size_t>(s.N()), -1);
    for (const Cell& c : s.cells()) {
        if (image[static_cast<std::size_t>(c.col)] != -1) return std::nullopt;
        image[static_cast<std::size_t>(c.col)] = c.row;
    }
    std::vector<Index> sorted = image;
    std::sort(sorted.begin(), sorted.end());
    for (Index i = 0; i < s.N(); ++i)
        if (sorted[static_cast<std::size_t>(i)] != i) return std::nullopt;
    return PermutationSpec::integer(std::move(image));
}

struct SetSource {
    std::string in;
    std::string construction;
    Index N = 0;
    std::vector<std::string> params;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--in", in, "GridSet file");
        cmd->add_option("--construction", construction, "construction id");
        cmd->add_option("--N", N, "resolution");
        cmd->add_option("--param", params, "construction parameter key=value")->allow_extra_args(false);
    }

    Construction load(const Globals& g) const {
        require(in.empty() != construction.empty(), "give exactly one of --in or --construction");
        if (!in.empty()) {
            Construction c;
            c.set = parse_grid_set(read_file(in));
            c.perm = as_permutation(c.set);
            return c;
        }
        require(N >= 1, "--construction needs --N");
        return build_construction(construction, N, params_from(params), g.seed);
    }

    std::string label() const { return in.empty() ? construction : in; }
};

int run_pin(const Globals& g, const std::string& action, const std::string& path) {
    if (action == "generate") {
        const std::string text = write_pins(compute_pins(g.threads));
        write_file(path, text);
        std::cerr << "wrote " << path << "\n";
        return 0;
    }
    const PinReport report = pin_regressions(path, g.threads);
    emit_json(g, pin_report_json(report));
    for (const auto& m : report.mismatches)
        std::cerr << "mismatch " << m.key << ": expected '" << m.expected << "' got '" << m.actual << "' (" << m.reason << ")\n";
    return report.ok() ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tube occupancy experiments on the N x N grid"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--out", g.out, "output path (default stdout)");
    app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--exact-ceiling", g.exact_ceiling, "largest N for the exact evaluator");
    app.add_flag("--allow-above-ceiling", g.allow_above_ceiling, "run the exact evaluator above the ceiling");

    // construct
    auto* construct = app.add_subcommand("construct", "emit a GridSet file");
    std::string cons_id;
    Index cons_N = 0;
    std::vector<std::string> cons_params;
    construct->add_option("id", cons_id, "construction id")->required()->check(CLI::IsMember(construction_ids()));
    construct->add_option("--N", cons_N, "resolution")->required();
    construct->add_option("--param", cons_params, "parameter key=value");

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate max tube occupancy");
    SetSource eval_src;
    eval_src.add_to(eval);
    std::string eval_method = "exact";
    Index num_lines = 100000;
    double half_width = 2.0;
    eval->add_option("--method", eval_method, "exact | sampled | interval")->check(CLI::IsMember({"exact", "sampled", "interval"}));
    eval->add_option("--num-lines", num_lines, "lines for the sampled evaluator");
    eval->add_option("--c", half_width, "half-width for the interval evaluator");

    // family
    auto* family = app.add_subcommand("family", "set families and low-intersection selection");
    family->require_subcommand(1);
    auto* fam_build = family->add_subcommand("build", "emit a SetFamily file");
    std::string fam_kind;
    Index fam_N = 0, fam_m = 1;
    fam_build->add_option("kind", fam_kind, "adversarial | tubes")->required()->check(CLI::IsMember({"adversarial", "tubes"}));
    fam_build->add_option("--N", fam_N, "member size / resolution")->required();
    fam_build->add_option("--m", fam_m, "blocks per member (adversarial)");
    auto* fam_select = family->add_subcommand("select", "select N elements from a family file");
    std::string fam_in, fam_method = "greedy";
    double beta = 3.0;
    fam_select->add_option("--in", fam_in, "SetFamily file")->required();
    fam_select->add_option("--method", fam_method, "greedy | random")->check(CLI::IsMember({"greedy", "random"}));
    fam_select->add_option("--beta", beta, "threshold constant (random)");

    // cover
    auto* cover = app.add_subcommand("cover", "k-sets covering every l-subset of {0..n-1}");
    Index cn = 0, ck = 0, cl = 0;
    std::string cover_method = "greedy";
    cover->add_option("--n", cn)->required();
    cover->add_option("--k", ck)->required();
    cover->add_option("--l", cl)->required();
    cover->add_option("--method", cover_method, "greedy | random-patch")->check(CLI::IsMember({"greedy", "random-patch"}));

    // diag
    auto* diag = app.add_subcommand("diag", "diagnostics JSON");
    std::string diag_name;
    SetSource diag_src;
    diag->add_option("name", diag_name, "diagnostic")->required()->check(CLI::IsMember(diagnostic_names()));
    diag_src.add_to(diag);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run a sweep config, CSV to --out or the config's csv path");
    std::string sweep_cfg;
    sweep->add_option("config", sweep_cfg, "config file")->required();

    // pin
    auto* pin = app.add_subcommand("pin", "regression values");
    std::string pin_action, pin_path;
    pin->add_option("action", pin_action, "generate | check")->required()->check(CLI::IsMember({"generate", "check"}));
    pin->add_option("file", pin_path, "pin file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*construct) {
            const Construction c = build_construction(cons_id, cons_N, params_from(cons_params), g.seed);
            if (c.duplicates) std::cerr << c.duplicates << " duplicate squares collapsed\n";
            emit(g, write_grid_set(c.set));
        } else if (*eval) {
            const Construction c = eval_src.load(g);
            OccupancyReport r;
            if (eval_method == "exact") {
                if (c.set.N() > g.exact_ceiling && !g.allow_above_ceiling)
                    throw budget_exceeded("exact evaluator refused: N = " + std::to_string(c.set.N()) + " exceeds --exact-ceiling " +
                                          std::to_string(g.exact_ceiling) + " (pass --allow-above-ceiling)");
                r = max_tube_occupancy_exact(c.set, g.threads);
            } else if (eval_method == "sampled") {
                r = max_occupancy_sampled(c.set, num_lines, g.seed);
            } else {
                require(c.perm.has_value(), "interval evaluator needs a permutation set");
                r = interval_occupancy(*c.perm, half_width, g.threads);
            }
            if (eval_method != "interval")
                ensure(witness_count(r, c.set) == r.max_count, "witness line does not reproduce max_count");
            auto j = report_json(r);
            j["set_hash"] = hex64(set_hash(c.set));
            emit_json(g, j);
        } else if (*fam_build) {
            const SetFamily f = fam_kind == "adversarial" ? adversarial_family(fam_N, fam_m) : tube_family(fam_N);
            emit(g, write_set_family(f));
        } else if (*fam_select) {
            std::istringstream in(read_file(fam_in));
            const SetFamily f = read_set_family(in, false);
            ordered_json j;
            j["method"] = fam_method;
            j["N"] = f.N;
            j["M"] = f.M;
            j["members"] = f.size();
            if (fam_method == "greedy") {
                const auto r = greedy_low_intersection_select(f);
                j["K"] = r.K;
                j["stages"] = r.stages.size();
                j["max_intersection"] = family_max_intersection(f, r.selection).count;
                j["bound"] = 8 * r.K;
                j["selection"] = r.selection;
            } else {
                const auto r = random_select_verify(f, beta, g.seed);
                j["seed"] = g.seed;
                j["s"] = r.s;
                j["beta"] = beta;
                j["threshold"] = r.threshold;
                j["max_intersection"] = r.max_intersection;
                j["pass"] = r.pass;
                j["selection"] = r.selection;
            }
            emit_json(g, j);
        } else if (*cover) {
            const CoverResult r = cover_method == "greedy" ? greedy_cover(cn, ck, cl) : random_patch_cover(cn, ck, cl, g.seed);
            ensure(r.certified, "cover failed certification");
            auto j = cover_json(r);
            if (r.method == CoverMethod::random_patch) j["seed"] = g.seed;
            emit_json(g, j);
        } else if (*diag) {
            const Construction c = diag_src.load(g);
            emit_json(g, diagnostic_record(diag_name, diag_src.label(), c, params_from(diag_src.params), g.threads));
        } else if (*sweep) {
            SweepConfig cfg = parse_sweep_config(read_file(sweep_cfg));
            if (g.exact_ceiling != 512) cfg.exact_ceiling = g.exact_ceiling;
            if (g.allow_above_ceiling) cfg.allow_above_ceiling = true;
            const auto rows = run_sweep(cfg, g.threads);
            const std::string csv = sweep_csv(rows);
            if (!g.out.empty())
                emit(g, csv);
            else if (!cfg.csv_path.empty())
                write_file(cfg.csv_path, csv);
            else
                std::cout << csv;
            if (!cfg.json_path.empty()) write_file(cfg.json_path, sweep_jsonl(rows));
            std::size_t failed = 0;
            for (const auto& row : rows) failed += row.witness_kind == "error" ? 1 : 0;
            if (failed) std::cerr << failed << " row(s) failed; see witness_a\n";
        } else if (*pin) {
            return run_pin(g, pin_action, pin_path);
        }
    } catch (const invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const budget_exceeded& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const invariant_violation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
