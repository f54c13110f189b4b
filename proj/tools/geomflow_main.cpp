#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "geomflow/experiments.hpp"
#include "geomflow/io.hpp"

using namespace geomflow;
using nlohmann::json;

namespace {

int cmd_list() {
    for (const std::string& name : scenario_names()) std::cout << name << "\n";
    return 0;
}

int cmd_validate(const std::string& config_path) {
    RunConfig rc = parse_run_config(config_path);
    Scenario sc = resolve_scenario(rc);
    // Registry resolution only: manifold, grid and initial-field names must
    // all resolve without running anything.
    MetricField m = build_metric(sc.manifold, sc.grid);
    make_initial(sc.initial, sc.manifold, sc.grid, m);
    std::cout << "ok: scenario '" << sc.name << "'\n";
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& resume_path) {
    RunConfig rc = parse_run_config(config_path);
    if (const char* env = std::getenv("GEOMFLOW_OUTPUT_DIR")) rc.output_dir = env;
    Scenario sc = resolve_scenario(rc);
    if (!resume_path.empty()) {
        ScalarField ckpt = read_snapshot(resume_path);
        MetricField m = build_metric(sc.manifold, sc.grid);
        Trajectory traj = evolve(ckpt, m, sc.op, sc.solver);
        for (std::size_t k = 0; k < traj.snapshots.size(); ++k)
            write_snapshot(traj.snapshots[k],
                           rc.output_dir + "/resumed_" + std::to_string(k) + ".snap");
        if (!traj.ok()) {
            std::cerr << "error: " << *traj.error << "\n";
            return 1;
        }
        return 0;
    }
    ScenarioReport rep = run_scenario(sc, rc.output_dir);
    for (const CheckResult& c : rep.checks)
        std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name
                  << " measured=" << c.measured << " tol=" << c.tolerance
                  << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
    if (!rep.error.empty()) {
        std::cerr << "error: " << rep.error << "\n";
        return 1;
    }
    return rep.passed ? 0 : 2;
}

int cmd_props(std::uint64_t seed) {
    ChartGrid sphere_grid({0.6, -M_PI}, {M_PI - 0.6, M_PI}, {64, 64}, {false, true});
    ManifoldSpec sphere = ManifoldSpec::sphere(1.0);
    json out = json::array();
    bool all_pass = true;
    for (auto op : {CurvatureOperator::mean_curvature(), CurvatureOperator::gauss_positive()}) {
        for (const PropertyReport& rep :
             {check_elliptic(op, 1000, seed), check_geometric(op, 1000, seed + 1),
              check_translation_invariant(op, sphere, sphere_grid, 200, seed + 2),
              check_f_class(op)}) {
            out.push_back(json::parse(rep.to_json()));
            all_pass = all_pass && rep.passed();
        }
    }
    std::cout << out.dump(2) << "\n";
    return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Level-set curvature flow on Riemannian charts"};
    app.require_subcommand(1);
    std::uint64_t seed = 42;

    std::string config_path, resume_path;
    auto* run = app.add_subcommand("run", "Run a scenario from a config file");
    run->add_option("config", config_path, "Config file (JSON)")->required();
    run->add_option("--resume", resume_path, "Resume from a checkpoint snapshot");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Parse a config and resolve names");
    validate->add_option("config", validate_path, "Config file (JSON)")->required();

    auto* props = app.add_subcommand("props", "Run operator property suites");
    props->add_option("--seed", seed, "Seed for the randomized suites");
    app.add_subcommand("list", "List registered scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("list")) return cmd_list();
        if (app.got_subcommand("validate")) return cmd_validate(validate_path);
        if (app.got_subcommand("props")) return cmd_props(seed);
        if (app.got_subcommand("run")) return cmd_run(config_path, resume_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
