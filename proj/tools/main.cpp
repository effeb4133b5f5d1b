#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>

#include "tangentbody/cli.hpp"

namespace {

int load_config(const std::string& path, nlohmann::json& out) {
    std::ifstream file(path);
    if (!file) {
        std::cerr << "config error: cannot open config file '" << path << "'\n";
        return tangentbody::cli::kConfigError;
    }
    try {
        file >> out;
    } catch (const nlohmann::json::parse_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return tangentbody::cli::kConfigError;
    }
    return tangentbody::cli::kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spinning test-body simulator on Riemannian charts"};
    app.require_subcommand(1);

    tangentbody::cli::Options options;
    app.add_option("--jobs", options.jobs, "Concurrent sweep workers")->capture_default_str();
    app.add_option("--out-dir", options.out_dir, "Output directory")->capture_default_str();
    app.add_option("--tol-scale", options.tol_scale, "Scale factor applied to all thresholds")
        ->capture_default_str();

    std::string geometry_config, simulate_config, sweep_config;
    CLI::App* geometry = app.add_subcommand("geometry-check",
                                            "Check structure equations and curvature oracles");
    geometry->add_option("config", geometry_config, "JSON config file")->required();
    CLI::App* simulate = app.add_subcommand("simulate", "Integrate one trajectory");
    simulate->add_option("config", simulate_config, "JSON config file")->required();
    CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter grid of simulations");
    sweep->add_option("config", sweep_config, "JSON config file")->required();

    CLI11_PARSE(app, argc, argv);

    nlohmann::json config;
    if (geometry->parsed()) {
        if (int rc = load_config(geometry_config, config)) return rc;
        return tangentbody::cli::run_geometry_check(config, options, std::cout);
    }
    if (simulate->parsed()) {
        if (int rc = load_config(simulate_config, config)) return rc;
        return tangentbody::cli::run_simulate(config, options, std::cout);
    }
    if (int rc = load_config(sweep_config, config)) return rc;
    return tangentbody::cli::run_sweep(config, options, std::cout);
}
