#pragma once

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "odmts/generator.hpp"
#include "odmts/io.hpp"

namespace odmts {

namespace detail {

// result.json -> result.log.jsonl, keeping odd extensions intact
inline std::string runlog_path_for(const std::string& result_path) {
    const std::string suffix = ".json";
    std::string stem = result_path;
    if (stem.size() > suffix.size()
        && stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0)
        stem.resize(stem.size() - suffix.size());
    return stem + ".log.jsonl";
}

inline Design design_of_result(const json& result) {
    const json& dj = result.contains("design") ? result.at("design") : result;
    const json& z = dj.at("z");
    return design_from_json(dj, static_cast<int>(z.size()));
}

inline Instance instance_of_result(const json& result) {
    if (!result.contains("instance"))
        throw IoError("result file names no instance; cannot reload trips");
    return load_instance(result.at("instance").get<std::string>());
}

} // namespace detail

inline int cli_main(int argc, const char* const* argv) {
    CLI::App app{"hub-and-shuttle transit network design"};
    app.require_subcommand(1);

    SolveConfig cfg;
    bool no_strengthen = false, no_lifting = false, no_pareto = false;
    bool no_direct = false;
    std::uint64_t seed = 0;

    auto* solve_cmd = app.add_subcommand("solve", "design the network for an instance");
    std::string solve_instance, solve_out = "result.json";
    solve_cmd->add_option("instance", solve_instance, "instance JSON file")->required();
    solve_cmd->add_option("--eps", cfg.eps, "absolute optimality gap");
    solve_cmd->add_option("--time-limit", cfg.time_limit_seconds, "wall clock budget, seconds");
    solve_cmd->add_option("--eta", cfg.eta, "core point opening level for refined cuts");
    solve_cmd->add_option("--backend", cfg.backend, "master backend: builtin or bnb");
    solve_cmd->add_option("--threads", cfg.threads, "parallel follower solves");
    solve_cmd->add_flag("--no-strengthen", no_strengthen, "plain design-specific choice cuts");
    solve_cmd->add_flag("--no-lifting", no_lifting, "skip route and access-set lifting");
    solve_cmd->add_flag("--no-pareto", no_pareto, "skip the cut refinement step");
    solve_cmd->add_flag("--no-direct-preprocess", no_direct, "keep provably direct trips free");
    solve_cmd->add_option("--out", solve_out, "result file; the run log lands next to it");

    auto* oracle_cmd = app.add_subcommand("oracle", "price every balanced design outright");
    std::string oracle_instance, oracle_out = "oracle.csv";
    int oracle_max_hubs = 4;
    oracle_cmd->add_option("instance", oracle_instance, "instance JSON file")->required();
    oracle_cmd->add_option("--max-hubs", oracle_max_hubs, "refuse instances past this size");
    oracle_cmd->add_option("--out", oracle_out, "per-design table CSV");

    auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic instance");
    std::string gen_spec_path, gen_out = "instance.json";
    gen_cmd->add_option("--spec", gen_spec_path, "generator spec JSON");
    gen_cmd->add_option("--seed", seed, "override the spec's seed");
    gen_cmd->add_option("--out", gen_out, "instance file to write");

    auto* report_cmd = app.add_subcommand("report", "summary tables for a finished run");
    std::string report_result, report_out = "report.csv", report_baseline;
    report_cmd->add_option("result", report_result, "result JSON from solve")->required();
    report_cmd->add_option("--baseline", report_baseline,
                           "design JSON whose durations fill the baseline column");
    report_cmd->add_option("--out", report_out, "report CSV");

    auto* ablate_cmd = app.add_subcommand("ablate", "base versus enhanced cut comparison");
    std::string ablate_instance, ablate_out = "ablate.csv";
    ablate_cmd->add_option("instance", ablate_instance, "instance JSON file")->required();
    ablate_cmd->add_option("--eps", cfg.eps, "absolute optimality gap");
    ablate_cmd->add_option("--time-limit", cfg.time_limit_seconds, "per-variant budget, seconds");
    ablate_cmd->add_option("--backend", cfg.backend, "master backend: builtin or bnb");
    ablate_cmd->add_option("--threads", cfg.threads, "parallel follower solves");
    ablate_cmd->add_option("--out", ablate_out, "iteration trajectory CSV");

    auto* geo_cmd = app.add_subcommand("export-geojson", "draw a solved design on the map");
    std::string geo_result, geo_out = "design.geojson";
    geo_cmd->add_option("result", geo_result, "result JSON from solve")->required();
    geo_cmd->add_option("--out", geo_out, "GeoJSON file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve_cmd->parsed()) {
            cfg.strengthen = !no_strengthen;
            cfg.lifting = !no_lifting;
            cfg.pareto = !no_pareto;
            cfg.direct_preprocess = !no_direct;
            const Instance inst = load_instance(solve_instance);
            const SolveRun run = solve(inst, cfg);
            write_result(result_to_json(solve_instance, inst, run, cfg), solve_out);
            write_runlog(run, detail::runlog_path_for(solve_out));
            std::cout << to_string(run.status) << " objective "
                      << detail::fmt6(run.incumbent_objective) << " design "
                      << detail::design_label(inst, run.incumbent) << " after "
                      << run.iterations.size() << " iterations\n";
        } else if (oracle_cmd->parsed()) {
            const Instance inst = load_instance(oracle_instance);
            const OracleResult res = enumerate_bilevel(inst, oracle_max_hubs);
            write_oracle_csv(inst, res, oracle_out);
            std::cout << "best " << detail::fmt6(res.best_objective) << " design "
                      << detail::design_label(inst, res.best_design) << " over "
                      << res.per_design_table.size() << " designs\n";
        } else if (gen_cmd->parsed()) {
            GenSpec spec;
            if (!gen_spec_path.empty()) spec = load_gen_spec(gen_spec_path);
            if (gen_cmd->count("--seed") > 0) spec.seed = seed;
            const Instance inst = generate(spec);
            save_instance(inst, gen_out);
            std::cout << "wrote " << gen_out << " with " << inst.num_nodes() << " stops, "
                      << inst.num_hubs() << " hubs, " << inst.trips.size() << " trips\n";
        } else if (report_cmd->parsed()) {
            const json result = load_result(report_result);
            const Instance inst = detail::instance_of_result(result);
            std::optional<Design> baseline;
            if (!report_baseline.empty())
                baseline = detail::design_of_result(load_result(report_baseline));
            const Report rep =
                build_report(inst, detail::design_of_result(result), baseline);
            write_report_csv(rep, report_out);
            std::cout << "wrote " << report_out << "\n";
        } else if (ablate_cmd->parsed()) {
            const Instance inst = load_instance(ablate_instance);
            SolveConfig base = cfg;
            base.pareto = false;
            base.strengthen = false;
            base.lifting = false;
            base.direct_preprocess = false;
            const SolveRun base_run = solve(inst, base);
            const SolveRun enhanced_run = solve(inst, cfg);
            write_ablate_csv({{"base", base_run}, {"enhanced", enhanced_run}}, ablate_out);
            std::cout << "base " << base_run.iterations.size() << " iterations, enhanced "
                      << enhanced_run.iterations.size() << " iterations\n";
        } else if (geo_cmd->parsed()) {
            const json result = load_result(geo_result);
            const Instance inst = detail::instance_of_result(result);
            const json fc = geojson_from(inst, detail::design_of_result(result));
            auto out = detail::open_for_write(geo_out);
            out << fc.dump(2) << "\n";
            std::cout << "wrote " << geo_out << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace odmts
