#include <CLI11.hpp>
#include <iostream>

#include "flexo/app/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Immersed hierarchical B-spline solver for flexoelectricity and strain-gradient elasticity"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", sweep_param;
    std::vector<double> sweep_values;
    int threads = 1;

    CLI::App* solve = app.add_subcommand("solve", "run a configured case");
    solve->add_option("config", config_path, "configuration file")->required();

    CLI::App* converge = app.add_subcommand("converge", "run a mesh-refinement convergence study");
    converge->add_option("config", config_path, "configuration file")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "sweep one case parameter");
    sweep->add_option("config", config_path, "configuration file")->required();
    sweep->add_option("--param", sweep_param, "parameter to sweep: zeta, a or b")->required();
    sweep->add_option("--values", sweep_values, "values for the swept parameter")->required();

    app.add_option("--threads", threads, "assembly threads");
    app.add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    flexo::app::RunConfig cfg;
    try {
        cfg = flexo::app::RunConfig::load(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    flexo::app::CaseResult res;
    if (solve->parsed()) {
        res = flexo::app::run_solve(cfg, out_dir, threads);
    } else if (converge->parsed()) {
        res = flexo::app::run_converge(cfg, out_dir, threads);
    } else {
        res = flexo::app::run_sweep(cfg, sweep_param, sweep_values, out_dir, threads);
    }
    for (const std::string& line : res.lines)
        (res.exit_code == 0 ? std::cout : std::cerr) << line << "\n";
    return res.exit_code;
}
