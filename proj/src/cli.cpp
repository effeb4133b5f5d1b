#include "tangentbody/cli.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include "tangentbody/scenarios.hpp"
#include "tangentbody/validate.hpp"

namespace tangentbody::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const json& require_field(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) {
        throw ConfigError("missing required field " + path + "/" + key, path + "/" + key);
    }
    return j.at(key);
}

double require_number(const json& j, const std::string& key, const std::string& path) {
    const json& v = require_field(j, key, path);
    if (!v.is_number()) throw ConfigError("field " + path + "/" + key + " must be a number",
                                          path + "/" + key);
    return v.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    return j.at(key).get<double>();
}

Vector require_vector(const json& j, const std::string& key, int size, const std::string& path) {
    const json& v = require_field(j, key, path);
    if (!v.is_array() || static_cast<int>(v.size()) != size) {
        throw ConfigError("field " + path + "/" + key + " must be an array of " +
                              std::to_string(size) + " numbers",
                          path + "/" + key);
    }
    Vector out(size);
    for (int i = 0; i < size; ++i) out(i) = v.at(i).get<double>();
    return out;
}

Scenario parse_scenario(const json& config) {
    const json& sc = require_field(config, "scenario", "");
    const json& name_field = require_field(sc, "name", "/scenario");
    if (!name_field.is_string()) {
        throw ConfigError("field /scenario/name must be a string", "/scenario/name");
    }
    const std::string name = name_field.get<std::string>();
    const double radius = number_or(sc, "radius", 1.0);
    const double margin = number_or(sc, "chart_margin", 1e-6);
    try {
        if (name == "flat_cartesian_2d") return make_flat_cartesian(2);
        if (name == "flat_cartesian_3d") return make_flat_cartesian(3);
        if (name == "flat_polar_2d") return make_flat_polar(margin);
        if (name == "sphere") return make_sphere(radius, margin);
        if (name == "hyperbolic_upper_half") return make_hyperbolic_upper_half(margin);
        throw UnknownScenarioError("unknown scenario '" + name + "'");
    } catch (const UnknownScenarioError& e) {
        throw ConfigError(std::string(e.what()) + " at /scenario/name", "/scenario/name");
    }
}

struct BodySetup {
    BodyParams params;
    Matrix spin0;
};

BodySetup parse_body(const json& config, int n) {
    const json& body = require_field(config, "body", "");
    const bool has_points = body.contains("points");
    const bool has_direct = body.contains("spin") || body.contains("inertia");
    if (has_points == has_direct) {
        throw ConfigError(
            "body must specify exactly one of a mass-point list (/body/points) or direct "
            "parameters (/body/mass, /body/inertia, /body/spin)",
            "/body");
    }

    BodySetup setup;
    if (has_points) {
        const json& pts = body.at("points");
        if (!pts.is_array() || pts.empty()) {
            throw ConfigError("field /body/points must be a non-empty array", "/body/points");
        }
        std::vector<MassPoint> points;
        for (size_t i = 0; i < pts.size(); ++i) {
            const std::string path = "/body/points/" + std::to_string(i);
            MassPoint p;
            p.mass = require_number(pts.at(i), "mass", path);
            p.offset = require_vector(pts.at(i), "offset", n, path);
            points.push_back(std::move(p));
        }
        try {
            const BodyModel model = build_body(points);
            setup.params = make_body_params(model);
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError(std::string(e.what()) + " at /body/points", "/body/points");
        }
        Vector eta_upper = Vector::Zero(spin_components(n));
        if (body.contains("eta")) {
            eta_upper = require_vector(body, "eta", spin_components(n), "/body");
        }
        setup.spin0 = setup.params.inertia * unpack_antisymmetric(eta_upper, n);
    } else {
        setup.params.mass = require_number(body, "mass", "/body");
        setup.params.inertia = require_number(body, "inertia", "/body");
        const Vector spin_upper = require_vector(body, "spin", spin_components(n), "/body");
        setup.spin0 = unpack_antisymmetric(spin_upper, n);
    }
    if (!(setup.params.mass > 0.0)) {
        throw ConfigError("body mass must be positive", "/body/mass");
    }
    if (setup.params.inertia < 0.0) {
        throw ConfigError("body inertia must be non-negative", "/body/inertia");
    }
    return setup;
}

BodyState parse_initial(const json& config, const Scenario& scenario, const BodySetup& body) {
    const int n = scenario.frame.dim;
    const json& init = require_field(config, "initial", "");
    const Vector x = require_vector(init, "position", n, "/initial");
    if (!scenario.frame.in_domain(x)) {
        throw ConfigError("initial position is outside the chart domain", "/initial/position");
    }
    const bool has_v = init.contains("velocity");
    const bool has_p = init.contains("momentum");
    if (has_v == has_p) {
        throw ConfigError("initial state needs exactly one of velocity or momentum", "/initial");
    }
    if (has_p) {
        return BodyState::make(x, require_vector(init, "momentum", n, "/initial"), body.spin0);
    }
    const Vector v = require_vector(init, "velocity", n, "/initial");
    return state_from_velocity(scenario.frame, x, v, body.spin0, body.params);
}

StepperConfig parse_stepper(const json& config) {
    const json& st = require_field(config, "stepper", "");
    StepperConfig cfg;
    const std::string method =
        st.contains("method") ? st.at("method").get<std::string>() : "rk4";
    if (method == "rk4") {
        cfg.method = Method::Rk4;
    } else if (method == "implicit_midpoint") {
        cfg.method = Method::ImplicitMidpoint;
    } else {
        throw ConfigError("unknown stepper method '" + method + "'", "/stepper/method");
    }
    cfg.step = require_number(st, "step", "/stepper");
    cfg.t_end = require_number(st, "t_end", "/stepper");
    cfg.monitor_every = static_cast<int>(number_or(st, "monitor_every", 1));
    cfg.fixed_point_tol = number_or(st, "fixed_point_tol", 1e-13);
    cfg.max_fixed_point_iterations =
        static_cast<int>(number_or(st, "max_fixed_point_iterations", 50));
    if (!(cfg.step > 0.0)) throw ConfigError("stepper step must be positive", "/stepper/step");
    if (!(cfg.t_end > 0.0)) throw ConfigError("stepper t_end must be positive", "/stepper/t_end");
    if (cfg.monitor_every < 1) {
        throw ConfigError("monitor_every must be at least 1", "/stepper/monitor_every");
    }
    return cfg;
}

struct SimOutcome {
    Scenario scenario;
    BodyParams params;
    TrajectoryRecord record;
    TrajectoryDiagnostics diagnostics;
    double return_distance = 0.0;
};

SimOutcome simulate_config(const json& config) {
    SimOutcome out;
    out.scenario = parse_scenario(config);
    const BodySetup body = parse_body(config, out.scenario.frame.dim);
    const BodyState initial = parse_initial(config, out.scenario, body);
    const StepperConfig stepper = parse_stepper(config);

    out.params = body.params;
    out.record = integrate(initial, out.scenario.frame, out.params, stepper);
    out.diagnostics = compute_diagnostics(out.record, out.scenario.frame, out.params);
    out.return_distance = out.scenario.point_distance(
        out.record.samples.back().state.position, out.record.samples.front().state.position);
    return out;
}

void write_trajectory_csv(const fs::path& path, const TrajectoryRecord& record, int n) {
    std::ofstream file(path);
    if (!file) throw Error("cannot open trajectory output file " + path.string());
    file << "t";
    for (int i = 1; i <= n; ++i) file << ",x" << i;
    for (int i = 1; i <= n; ++i) file << ",p" << i;
    for (int k = 0; k < spin_components(n); ++k) {
        auto [a, b] = spin_index_pair(k, n);
        file << ",S" << a + 1 << b + 1;
    }
    file << ",H,spin_norm\n";
    for (const auto& s : record.samples) {
        file << fmt17(s.t);
        for (int i = 0; i < n; ++i) file << "," << fmt17(s.state.position(i));
        for (int i = 0; i < n; ++i) file << "," << fmt17(s.state.momentum(i));
        for (int k = 0; k < s.state.spin_upper.size(); ++k)
            file << "," << fmt17(s.state.spin_upper(k));
        file << "," << fmt17(s.hamiltonian) << "," << fmt17(std::sqrt(s.casimir)) << "\n";
    }
}

json diagnostics_json(const SimOutcome& out) {
    const TrajectoryDiagnostics& d = out.diagnostics;
    json j;
    j["energy_drift_rel"] = d.energy_drift_rel;
    j["spin_norm_drift_rel"] = d.spin_norm_drift_rel;
    j["covariant_spin_residual"] =
        d.covariant_spin_residual ? json(*d.covariant_spin_residual) : json();
    j["papapetrou_residual"] = d.papapetrou_residual ? json(*d.papapetrou_residual) : json();
    j["geodesic_curvature_mean"] =
        d.geodesic_curvature_mean ? json(*d.geodesic_curvature_mean) : json();
    j["geodesic_curvature_std"] =
        d.geodesic_curvature_std ? json(*d.geodesic_curvature_std) : json();
    j["spin_energy_term"] = d.spin_energy_term ? json(*d.spin_energy_term) : json();
    j["termination_reason"] = d.termination_reason;
    j["final_time"] = out.record.samples.back().t;
    j["return_distance"] = out.return_distance;
    return j;
}

struct ValidationCheck {
    std::string name;
    double measured;
    double threshold;
};

std::vector<ValidationCheck> validation_checks(const json& config, const SimOutcome& out,
                                               double tol_scale) {
    std::vector<ValidationCheck> checks;
    if (!config.contains("validation")) return checks;
    const json& v = config.at("validation");
    auto add = [&](const char* key, const char* name, std::optional<double> measured) {
        if (v.contains(key) && measured) {
            checks.push_back({name, *measured, v.at(key).get<double>() * tol_scale});
        }
    };
    add("max_energy_drift_rel", "energy_drift_rel", out.diagnostics.energy_drift_rel);
    add("max_spin_norm_drift_rel", "spin_norm_drift_rel", out.diagnostics.spin_norm_drift_rel);
    add("max_covariant_spin_residual", "covariant_spin_residual",
        out.diagnostics.covariant_spin_residual);
    add("max_papapetrou_residual", "papapetrou_residual", out.diagnostics.papapetrou_residual);
    return checks;
}

int map_exit(const SimOutcome& out, bool validation_failed) {
    if (out.record.reason == TerminationReason::ChartExit) return kChartExit;
    if (out.record.reason == TerminationReason::NonConvergence) return kNumericalFailure;
    return validation_failed ? kValidationFailure : kOk;
}

struct GridAxis {
    std::string path;
    std::vector<json> values;
};

std::vector<GridAxis> parse_grid(const json& config) {
    const json& grid = require_field(config, "grid", "");
    if (!grid.is_array() || grid.empty()) {
        throw ConfigError("sweep grid must be a non-empty array of axes", "/grid");
    }
    if (grid.size() > 2) {
        throw ConfigError("sweep grid supports at most two axes", "/grid");
    }
    std::vector<GridAxis> axes;
    for (size_t i = 0; i < grid.size(); ++i) {
        const std::string path = "/grid/" + std::to_string(i);
        GridAxis axis;
        const json& p = require_field(grid.at(i), "path", path);
        if (!p.is_string()) throw ConfigError("grid axis path must be a string", path + "/path");
        axis.path = p.get<std::string>();
        const json& vals = require_field(grid.at(i), "values", path);
        if (!vals.is_array() || vals.empty()) {
            throw ConfigError("grid axis values must be a non-empty array", path + "/values");
        }
        for (const auto& v : vals) axis.values.push_back(v);
        axes.push_back(std::move(axis));
    }
    return axes;
}

}  // namespace

int run_geometry_check(const json& config, const Options& options, std::ostream& report) {
    try {
        const Scenario scenario = parse_scenario(config);
        const int n = scenario.frame.dim;
        const int per_dim = static_cast<int>(number_or(config, "grid_points_per_dim", 5));
        if (per_dim < 1) {
            throw ConfigError("grid_points_per_dim must be at least 1", "/grid_points_per_dim");
        }
        const json tols = config.contains("tolerances") ? config.at("tolerances") : json::object();
        const double scale = options.tol_scale;
        const double tol_first = number_or(tols, "first_structure", 1e-10) * scale;
        const double tol_consistency = number_or(tols, "curvature_consistency", 1e-10) * scale;
        const double tol_antisym = number_or(tols, "curvature_antisymmetry", 1e-8) * scale;
        const double tol_bianchi = number_or(tols, "bianchi", 1e-8) * scale;
        const double tol_oracle = number_or(tols, "curvature_oracle", 1e-6) * scale;
        const double tol_flat = number_or(tols, "flat_curvature", 1e-9) * scale;

        // Chart grid inside the scenario sample box.
        std::vector<ChartPoint> grid;
        const long total = static_cast<long>(std::pow(per_dim, n));
        for (long idx = 0; idx < total; ++idx) {
            ChartPoint x(n);
            long rest = idx;
            for (int i = 0; i < n; ++i) {
                const int k = static_cast<int>(rest % per_dim);
                rest /= per_dim;
                const double f = per_dim == 1 ? 0.5 : static_cast<double>(k) / (per_dim - 1);
                x(i) = scenario.sample_lower(i) +
                       f * (scenario.sample_upper(i) - scenario.sample_lower(i));
            }
            grid.push_back(std::move(x));
        }

        double max_first = 0.0, max_consistency = 0.0, max_antisym = 0.0, max_bianchi = 0.0;
        double max_oracle = 0.0, max_flat = 0.0;
        for (const auto& x : grid) {
            const StructureResiduals res = verify_structure_equations(scenario.frame, x);
            max_first = std::max(max_first, res.first_structure);
            max_consistency = std::max(max_consistency, res.curvature_consistency);
            const CurvatureTensor curv = curvature_from_connection(scenario.frame, x);
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b) {
                            max_antisym = std::max(
                                max_antisym, std::abs(curv.riemann(c, d, a, b) +
                                                      curv.riemann(d, c, a, b)));
                            max_antisym = std::max(
                                max_antisym, std::abs(curv.riemann(c, d, a, b) +
                                                      curv.riemann(c, d, b, a)));
                            max_bianchi = std::max(
                                max_bianchi,
                                std::abs(curv.riemann(c, d, a, b) + curv.riemann(d, a, c, b) +
                                         curv.riemann(a, c, d, b)));
                        }
            if (scenario.constant_curvature) {
                const double k_oracle = *scenario.constant_curvature;
                if (k_oracle == 0.0) {
                    max_flat = std::max(max_flat, max_abs(curv.riemann));
                } else {
                    for (int c = 0; c < n; ++c)
                        for (int d = c + 1; d < n; ++d)
                            max_oracle = std::max(
                                max_oracle, std::abs(sectional_curvature(curv, c, d) - k_oracle));
                }
            }
        }

        bool ok = true;
        auto line = [&](const char* name, double measured, double threshold, bool active) {
            if (!active) return;
            const bool pass = measured <= threshold;
            ok = ok && pass;
            report << name << ": measured=" << fmt17(measured)
                   << " threshold=" << fmt17(threshold) << (pass ? " PASS" : " FAIL") << "\n";
        };
        const bool is_flat =
            scenario.constant_curvature && *scenario.constant_curvature == 0.0;
        report << "geometry check: scenario=" << scenario.name << " points=" << grid.size()
               << "\n";
        line("first_structure_residual", max_first, tol_first, true);
        line("curvature_consistency", max_consistency, tol_consistency, true);
        line("curvature_antisymmetry", max_antisym, tol_antisym, true);
        line("bianchi_identity", max_bianchi, tol_bianchi, true);
        line("flat_curvature", max_flat, tol_flat, is_flat);
        line("curvature_oracle", max_oracle, tol_oracle,
             scenario.constant_curvature && !is_flat);
        return ok ? kOk : kValidationFailure;
    } catch (const ConfigError& e) {
        report << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const Error& e) {
        report << "error: " << e.what() << "\n";
        return kNumericalFailure;
    }
}

int run_simulate(const json& config, const Options& options, std::ostream& report) {
    try {
        const SimOutcome out = simulate_config(config);
        const json& output =
            config.contains("output") ? config.at("output") : json::object();
        const std::string traj_name = output.contains("trajectory")
                                          ? output.at("trajectory").get<std::string>()
                                          : "trajectory.csv";
        const std::string diag_name = output.contains("diagnostics")
                                          ? output.at("diagnostics").get<std::string>()
                                          : "diagnostics.json";
        fs::create_directories(options.out_dir);
        write_trajectory_csv(fs::path(options.out_dir) / traj_name, out.record,
                             out.scenario.frame.dim);
        {
            std::ofstream file(fs::path(options.out_dir) / diag_name);
            if (!file) throw Error("cannot open diagnostics output file");
            file << diagnostics_json(out).dump(2) << "\n";
        }

        bool validation_failed = false;
        for (const auto& check : validation_checks(config, out, options.tol_scale)) {
            const bool pass = check.measured <= check.threshold;
            validation_failed = validation_failed || !pass;
            report << check.name << ": measured=" << fmt17(check.measured)
                   << " threshold=" << fmt17(check.threshold) << (pass ? " PASS" : " FAIL")
                   << "\n";
        }
        report << "simulate: scenario=" << out.scenario.name
               << " samples=" << out.record.samples.size()
               << " termination=" << to_string(out.record.reason) << "\n";
        return map_exit(out, validation_failed);
    } catch (const ConfigError& e) {
        report << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const Error& e) {
        report << "error: " << e.what() << "\n";
        return kNumericalFailure;
    }
}

int run_sweep(const json& config, const Options& options, std::ostream& report) {
    try {
        const json& base = require_field(config, "base", "");
        const std::vector<GridAxis> axes = parse_grid(config);

        struct Point {
            json config;
            std::vector<double> values;
        };
        std::vector<Point> points;
        const size_t rows = axes[0].values.size();
        const size_t cols = axes.size() > 1 ? axes[1].values.size() : 1;
        for (size_t i = 0; i < rows; ++i) {
            for (size_t j = 0; j < cols; ++j) {
                Point p;
                p.config = base;
                p.config[json::json_pointer(axes[0].path)] = axes[0].values[i];
                p.values.push_back(axes[0].values[i].get<double>());
                if (axes.size() > 1) {
                    p.config[json::json_pointer(axes[1].path)] = axes[1].values[j];
                    p.values.push_back(axes[1].values[j].get<double>());
                }
                points.push_back(std::move(p));
            }
        }

        struct Row {
            bool failed = false;
            std::string status;
            TrajectoryDiagnostics diag;
        };
        std::vector<Row> results(points.size());
        const int jobs = std::max(1, options.jobs);
        auto worker = [&](int tid) {
            for (size_t i = tid; i < points.size(); i += jobs) {
                try {
                    const SimOutcome out = simulate_config(points[i].config);
                    results[i].diag = out.diagnostics;
                    results[i].status = to_string(out.record.reason);
                } catch (const Error& e) {
                    results[i].failed = true;
                    results[i].status = std::string("error: ") + e.what();
                }
            }
        };
        if (jobs == 1) {
            worker(0);
        } else {
            std::vector<std::thread> threads;
            for (int t = 0; t < jobs; ++t) threads.emplace_back(worker, t);
            for (auto& t : threads) t.join();
        }

        fs::create_directories(options.out_dir);
        const json& output = config.contains("output") ? config.at("output") : json::object();
        const std::string summary_name = output.contains("summary")
                                             ? output.at("summary").get<std::string>()
                                             : "sweep_summary.csv";
        std::ofstream file(fs::path(options.out_dir) / summary_name);
        if (!file) throw Error("cannot open sweep summary file");

        file << "index";
        for (size_t a = 0; a < axes.size(); ++a) file << ",param" << a << "(" << axes[a].path << ")";
        file << ",status,energy_drift_rel,spin_norm_drift_rel,covariant_spin_residual,"
                "papapetrou_residual,geodesic_curvature_mean,geodesic_curvature_std\n";
        auto opt17 = [&](const std::optional<double>& v) { return v ? fmt17(*v) : ""; };
        for (size_t i = 0; i < points.size(); ++i) {
            file << i;
            for (double v : points[i].values) file << "," << fmt17(v);
            const Row& r = results[i];
            if (r.failed) {
                std::string msg = r.status;
                for (auto& ch : msg)
                    if (ch == ',' || ch == '\n') ch = ';';
                file << "," << msg << ",,,,,,\n";
                continue;
            }
            file << "," << r.status << "," << fmt17(r.diag.energy_drift_rel) << ","
                 << fmt17(r.diag.spin_norm_drift_rel) << ","
                 << opt17(r.diag.covariant_spin_residual) << ","
                 << opt17(r.diag.papapetrou_residual) << ","
                 << opt17(r.diag.geodesic_curvature_mean) << ","
                 << opt17(r.diag.geodesic_curvature_std) << "\n";
        }
        report << "sweep: " << points.size() << " points, summary written to " << summary_name
               << "\n";
        return kOk;
    } catch (const ConfigError& e) {
        report << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const Error& e) {
        report << "error: " << e.what() << "\n";
        return kNumericalFailure;
    }
}

}  // namespace tangentbody::cli
