// cfcolor: generate, color, verify, exactly solve, and sweep conflict-free
// edge coloring instances.
//
// Exit codes: 0 success (conflict-free where applicable), 1 negative
// verification verdict, 2 structural/usage/format errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfc/common.hpp"
#include "cfc/complete.hpp"
#include "cfc/exact.hpp"
#include "cfc/nearly_regular.hpp"
#include "cfc/rng.hpp"
#include "cfc/sweep.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUnsatisfied = 1;
constexpr int kExitError = 2;

cfc::Mode parse_mode(const std::string& mode) {
    if (mode == "closed")
        return cfc::Mode::Closed;
    if (mode == "open")
        return cfc::Mode::Open;
    throw std::invalid_argument("mode must be 'closed' or 'open'");
}

int default_workers() {
    if (const char* env = std::getenv("CFCOLOR_WORKERS")) {
        int w = std::atoi(env);
        if (w >= 1)
            return w;
    }
    return 1;
}

void emit(const json& doc, const std::string& path) {
    if (path.empty()) {
        std::cout << doc.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open report file: " + path);
    out << doc.dump(2) << '\n';
}

json report_to_json(const cfc::RunReport& r) {
    json doc{
        {"s", r.s},
        {"profile", r.profile},
        {"resamples", {{"edges", r.edge_resamples}, {"partitions", r.label_resamples}}},
        {"delta_prime", r.residual_max_degree},
        {"colors",
         {{"layers", r.colors_layers},
          {"fallback", r.colors_fallback},
          {"final", r.colors_final},
          {"total", r.colors_total}}},
        {"verified", r.verified},
        {"seed", r.seed},
        {"details",
         {{"delta", r.max_degree},
          {"epsilon_clamped", r.epsilon_clamped},
          {"decomposition_strict", r.decomposition_strict},
          {"clean_layers", r.clean_layers},
          {"saturating_layers", r.saturating_layers}}},
    };
    if (r.all_t_max_count)
        doc["details"]["all_t_max_count"] = *r.all_t_max_count;
    return doc;
}

json verdict_to_json(const cfc::Graph& g, const cfc::SatisfactionReport& rep) {
    json unsat = json::array();
    for (int e : rep.unsatisfied) {
        cfc::Edge ed = g.edge(e);
        unsat.push_back(json::array({ed.u, ed.v}));
    }
    return json{{"mode", cfc::to_string(rep.mode)},
                {"conflict_free", rep.conflict_free()},
                {"colors_used", rep.colors_used},
                {"unsatisfied", unsat}};
}

struct ColorOptions {
    std::string method;
    std::string graph_path;
    std::string out_path;
    std::string report_path;
    std::uint64_t seed = 0;
    std::string profile = "scaled";
    int restarts = 1;
    std::string fallback = "vizing";
};

cfc::PipelineConfig pipeline_config(const ColorOptions& opt) {
    cfc::PipelineConfig cfg;
    cfg.seed = opt.seed;
    if (opt.profile == "paper")
        cfg.profile = cfc::PipelineConfig::Profile::Paper;
    else if (opt.profile == "scaled")
        cfg.profile = cfc::PipelineConfig::Profile::Scaled;
    else
        throw std::invalid_argument("profile must be 'paper' or 'scaled'");
    if (opt.fallback == "greedy")
        cfg.fallback = cfc::PipelineConfig::Fallback::ProperGreedy;
    else if (opt.fallback == "vizing")
        cfg.fallback = cfc::PipelineConfig::Fallback::ProperVizing;
    else
        throw std::invalid_argument("fallback must be 'vizing' or 'greedy'");
    return cfg;
}

int cmd_color(const ColorOptions& opt) {
    cfc::Graph g = cfc::read_graph(opt.graph_path);
    for (int v = 0; v < g.vertex_count(); ++v)
        cfc::require(g.degree(v) > 0, "coloring methods require a graph without "
                                      "isolated vertices");

    cfc::EdgeColoring coloring;
    json report;
    if (opt.method == "complete") {
        const int n = g.vertex_count();
        cfc::require(g.edge_count() ==
                         static_cast<int>(static_cast<long long>(n) * (n - 1) / 2),
                     "the complete method requires a complete graph");
        coloring = cfc::cf_color_complete(n);
        report = json{{"method", "complete"},
                      {"n", n},
                      {"colors", coloring.color_count()},
                      {"bound", cfc::ceil_log2(n - 1) + 1},
                      {"seed", opt.seed}};
    } else if (opt.method == "nearly-regular") {
        cfc::PipelineConfig cfg = pipeline_config(opt);
        std::optional<cfc::RunResult> best;
        for (int r = 0; r < std::max(1, opt.restarts); ++r) {
            cfg.seed = opt.restarts > 1 ? cfc::rng::key(opt.seed, 0x7e57, r) : opt.seed;
            cfc::RunResult run = cfc::color_nearly_regular(g, cfg);
            if (!best || run.report.colors_total < best->report.colors_total)
                best = std::move(run);
        }
        coloring = std::move(best->coloring);
        report = report_to_json(best->report);
        report["method"] = "nearly-regular";
    } else if (opt.method == "fallback") {
        cfc::PipelineConfig cfg = pipeline_config(opt);
        coloring = cfc::fallback_satisfy(g, 0, cfg.fallback);
        report = json{{"method", "fallback"},
                      {"colors", coloring.color_count()},
                      {"delta", cfc::degree_stats(g).max_degree}};
    } else {
        throw std::invalid_argument("method must be complete, nearly-regular or fallback");
    }

    cfc::write_coloring(g, coloring, opt.out_path);

    // Re-read what we wrote; the emitted file itself must verify.
    cfc::EdgeColoring reread = cfc::read_coloring(g, opt.out_path);
    cfc::SatisfactionReport verdict = cfc::verify(g, reread, cfc::Mode::Closed);
    report["verified"] = verdict.conflict_free();
    report["coloring_file"] = opt.out_path;
    emit(report, opt.report_path);
    return verdict.conflict_free() ? kExitOk : kExitUnsatisfied;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"conflict-free edge coloring toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a graph file");
    std::string gen_kind, gen_out;
    int gen_n = 0, gen_d = 0;
    double gen_p = 0.0;
    std::uint64_t gen_seed = 0;
    gen->add_option("kind", gen_kind, "complete|gnp|regular")->required();
    gen->add_option("--n", gen_n, "vertex count")->required();
    gen->add_option("--p", gen_p, "edge probability (gnp)");
    gen->add_option("--d", gen_d, "degree (regular)");
    gen->add_option("--seed", gen_seed, "rng seed");
    gen->add_option("--out", gen_out, "output graph file")->required();

    // color
    auto* color = app.add_subcommand("color", "color a graph and write coloring + report");
    ColorOptions copt;
    color->add_option("method", copt.method, "complete|nearly-regular|fallback")->required();
    color->add_option("--graph", copt.graph_path, "input graph file")->required();
    color->add_option("--out", copt.out_path, "output coloring file")->required();
    color->add_option("--report", copt.report_path, "report JSON path (default stdout)");
    color->add_option("--seed", copt.seed, "rng seed");
    color->add_option("--profile", copt.profile, "paper|scaled (nearly-regular)");
    color->add_option("--restarts", copt.restarts, "best-of-k restarts (nearly-regular)");
    color->add_option("--fallback", copt.fallback, "vizing|greedy");

    // verify
    auto* ver = app.add_subcommand("verify", "verify a coloring file");
    std::string ver_graph, ver_coloring, ver_mode = "closed", ver_report;
    ver->add_option("--graph", ver_graph)->required();
    ver->add_option("--coloring", ver_coloring)->required();
    ver->add_option("--mode", ver_mode, "closed|open");
    ver->add_option("--report", ver_report, "report JSON path (default stdout)");

    // exact
    auto* exact = app.add_subcommand("exact", "exact conflict-free chromatic index");
    std::string ex_graph, ex_mode = "closed";
    long long ex_nodes = 500'000'000;
    int ex_cap = 21, ex_max_colors = 0;
    exact->add_option("--graph", ex_graph)->required();
    exact->add_option("--mode", ex_mode, "closed|open");
    exact->add_option("--node-limit", ex_nodes, "search node budget");
    exact->add_option("--edge-cap", ex_cap, "refuse graphs with more edges");
    exact->add_option("--max-colors", ex_max_colors, "stop past this many colors (0: all)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run an experiment grid, emit CSV");
    std::string sw_kind = "gnp", sw_method = "nearly-regular", sw_out;
    std::vector<int> sw_ns, sw_ds;
    std::vector<double> sw_ps;
    int sw_seeds = 1, sw_restarts = 1, sw_workers = default_workers();
    std::uint64_t sw_seed = 0;
    std::string sw_profile = "scaled";
    sweep->add_option("--kind", sw_kind, "complete|gnp|regular");
    sweep->add_option("--method", sw_method, "complete|nearly-regular|fallback");
    sweep->add_option("--n", sw_ns, "vertex counts")->required()->delimiter(',');
    sweep->add_option("--p", sw_ps, "gnp probabilities")->delimiter(',');
    sweep->add_option("--d", sw_ds, "regular degrees")->delimiter(',');
    sweep->add_option("--seeds", sw_seeds, "trials per cell");
    sweep->add_option("--seed", sw_seed, "master seed");
    sweep->add_option("--restarts", sw_restarts, "best-of-k restarts");
    sweep->add_option("--workers", sw_workers, "concurrent trials (env CFCOLOR_WORKERS)");
    sweep->add_option("--profile", sw_profile, "paper|scaled");
    sweep->add_option("--out", sw_out, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help
        app.exit(e);
        return kExitError;
    }

    try {
        if (gen->parsed()) {
            cfc::Graph g;
            if (gen_kind == "complete") {
                g = cfc::complete_graph(gen_n);
            } else if (gen_kind == "gnp") {
                g = cfc::gnp_random(gen_n, gen_p, gen_seed);
            } else if (gen_kind == "regular") {
                g = cfc::random_regular(gen_n, gen_d, gen_seed);
            } else {
                throw std::invalid_argument("gen kind must be complete, gnp or regular");
            }
            cfc::write_graph(g, gen_out);
            std::cout << "wrote " << gen_out << " (n=" << g.vertex_count()
                      << ", m=" << g.edge_count() << ")\n";
            return kExitOk;
        }

        if (color->parsed())
            return cmd_color(copt);

        if (ver->parsed()) {
            cfc::Graph g = cfc::read_graph(ver_graph);
            cfc::EdgeColoring c = cfc::read_coloring(g, ver_coloring);
            cfc::SatisfactionReport rep = cfc::verify(g, c, parse_mode(ver_mode));
            emit(verdict_to_json(g, rep), ver_report);
            return rep.conflict_free() ? kExitOk : kExitUnsatisfied;
        }

        if (exact->parsed()) {
            cfc::Graph g = cfc::read_graph(ex_graph);
            cfc::SearchConfig cfg;
            cfg.node_limit = ex_nodes;
            cfg.edge_cap = ex_cap;
            cfg.max_colors = ex_max_colors;
            try {
                cfc::ExactResult r = cfc::exact_cf_index(g, parse_mode(ex_mode), cfg);
                std::cout << json{{"mode", ex_mode},
                                  {"exact_index", r.index},
                                  {"nodes", r.nodes}}
                                 .dump(2)
                          << '\n';
                return kExitOk;
            } catch (const cfc::edge_cap_error& e) {
                std::cerr << "refused: " << e.what() << '\n';
                return kExitError;
            } catch (const cfc::node_limit_error& e) {
                std::cerr << "undecided: " << e.what() << '\n';
                return kExitError;
            }
        }

        if (sweep->parsed()) {
            cfc::SweepSpec spec;
            if (sw_kind == "complete")
                spec.kind = cfc::InstanceKind::Complete;
            else if (sw_kind == "gnp")
                spec.kind = cfc::InstanceKind::Gnp;
            else if (sw_kind == "regular")
                spec.kind = cfc::InstanceKind::Regular;
            else
                throw std::invalid_argument("sweep kind must be complete, gnp or regular");
            if (sw_method == "complete")
                spec.method = cfc::MethodKind::Complete;
            else if (sw_method == "nearly-regular")
                spec.method = cfc::MethodKind::NearlyRegular;
            else if (sw_method == "fallback")
                spec.method = cfc::MethodKind::Fallback;
            else
                throw std::invalid_argument("sweep method must be complete, "
                                            "nearly-regular or fallback");
            spec.ns = sw_ns;
            spec.ps = sw_ps;
            spec.ds = sw_ds;
            spec.seeds_per_cell = sw_seeds;
            spec.master_seed = sw_seed;
            spec.restarts = sw_restarts;
            spec.workers = sw_workers;
            spec.pipeline.profile = sw_profile == "paper"
                                        ? cfc::PipelineConfig::Profile::Paper
                                        : cfc::PipelineConfig::Profile::Scaled;
            std::vector<cfc::ExperimentRecord> records = cfc::run_sweep(spec);
            if (sw_out.empty()) {
                cfc::write_records_csv(records, std::cout);
            } else {
                std::ofstream out(sw_out);
                if (!out)
                    throw std::runtime_error("cannot open CSV output: " + sw_out);
                cfc::write_records_csv(records, out);
            }
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
