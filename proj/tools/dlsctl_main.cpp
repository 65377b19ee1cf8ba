// dlsctl: experiment runner for the DLS vibration controller.
//
//   dlsctl preset fig2 --out-dir out
//   dlsctl run --config out/fig2.cfg --out-dir rerun
//   dlsctl sweep --h 0.01,0.001 --lambda 0.1,1,10
//   dlsctl sweep --h 0.01,0.001 --lambda0 0.01
//   dlsctl compare out/fig2.csv out/fig4.csv
//   dlsctl spectrum --h 0.01 --lambda 1

#include "dlsctl/analysis.hpp"
#include "dlsctl/errors.hpp"
#include "dlsctl/experiment.hpp"
#include "dlsctl/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace dlsctl;

struct Overrides {
    std::optional<double> h;
    std::optional<double> lambda;
    std::optional<double> lambda0;
    std::optional<double> t_end;
    bool no_control = false;
    bool full_resolution = false;
};

void add_override_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--h", o.h, "Sampling time step");
    cmd->add_option("--lambda", o.lambda, "DLS damping constant");
    cmd->add_option("--lambda0", o.lambda0, "Set lambda = lambda0 / h");
    cmd->add_option("--t-end", o.t_end, "Simulated horizon");
    cmd->add_flag("--no-control", o.no_control, "Freeze u at u0");
    cmd->add_flag("--full-resolution", o.full_resolution, "Record every step");
}

void apply(const Overrides& o, SimulationConfig& config) {
    if (o.h) {
        config.h = *o.h;
    }
    if (o.lambda) {
        config.control.lambda = *o.lambda;
    }
    if (o.lambda0) {
        config.control.lambda = *o.lambda0 / config.h;
    }
    if (o.t_end) {
        config.t_end = *o.t_end;
    }
    if (o.no_control) {
        config.control_enabled = false;
    }
    if (o.full_resolution) {
        config.output_stride = 1;
    }
}

void print_summary(const PresetRun& run) {
    const RunSummary& s = run.summary;
    std::printf("h                      %.6g\n", s.h);
    std::printf("lambda                 %.6g\n", s.lambda);
    std::printf("control                %s\n", s.control_enabled ? "on" : "off");
    std::printf("max x2 envelope (t>=50) %.6g\n", s.max_envelope_x2_late);
    std::printf("exchange depth         %.6g\n", s.exchange_depth);
    std::printf("exchange cycles        %zu\n", s.exchange_cycles);
    std::printf("max |u - zeta|         %.6g\n", s.max_control_deviation);
    std::printf("response rms           %.6g\n", s.response_rms);
    if (s.suppression_ratio) {
        std::printf("suppression ratio      %.6g\n", *s.suppression_ratio);
    }
    std::printf("fallback steps         %zu\n", s.fallback_count);
    if (!run.csv_path.empty()) {
        std::printf("wrote %s, %s, %s\n", run.csv_path.c_str(), run.svg_path.c_str(), run.config_path.c_str());
    }
}

void print_complex_list(const char* label, const std::vector<Complex>& values) {
    std::printf("%s\n", label);
    for (const auto& z : values) {
        std::printf("  % .12e %+.12e i   |.| = %.12e\n", z.real(), z.imag(), std::abs(z));
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Damped least-squares acceleration control of coupled Duffing oscillators"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    unsigned seed = 0;
    app.add_option("--seed", seed, "Reserved; all runs are deterministic");

    std::string out_dir = "out";

    auto* preset_cmd = app.add_subcommand("preset", "Run a named preset (fig1..fig5)");
    std::string preset_name;
    Overrides preset_overrides;
    preset_cmd->add_option("name", preset_name, "Preset name")->required();
    preset_cmd->add_option("--out-dir", out_dir, "Output directory");
    add_override_flags(preset_cmd, preset_overrides);

    auto* run_cmd = app.add_subcommand("run", "Run a configuration file");
    std::string config_path;
    Overrides run_overrides;
    run_cmd->add_option("--config", config_path, "key = value configuration file")->required();
    run_cmd->add_option("--out-dir", out_dir, "Output directory");
    add_override_flags(run_cmd, run_overrides);

    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep over (h, lambda)");
    std::vector<double> sweep_h{0.01, 0.001};
    std::vector<double> sweep_lambda{0.1, 1.0, 10.0};
    std::optional<double> sweep_lambda0;
    std::optional<double> sweep_t_end;
    std::optional<std::string> sweep_out;
    unsigned workers = 0;
    sweep_cmd->add_option("--h", sweep_h, "Time steps")->delimiter(',');
    sweep_cmd->add_option("--lambda", sweep_lambda, "Damping constants")->delimiter(',');
    sweep_cmd->add_option("--lambda0", sweep_lambda0, "Lock mode: lambda = lambda0 / h");
    sweep_cmd->add_option("--t-end", sweep_t_end, "Simulated horizon");
    sweep_cmd->add_option("--out-dir", sweep_out, "Write sweep.csv here instead of stdout");
    sweep_cmd->add_option("--workers", workers, "Concurrent cells (0 = sequential)");

    auto* compare_cmd = app.add_subcommand("compare", "Compare the control traces of two trajectory CSVs");
    std::string run_a;
    std::string run_b;
    double threshold = kLambdaHRelativeRms;
    compare_cmd->add_option("runA", run_a, "First trajectory CSV")->required();
    compare_cmd->add_option("runB", run_b, "Second trajectory CSV")->required();
    compare_cmd->add_option("--threshold", threshold, "Relative RMS threshold");

    auto* spectrum_cmd = app.add_subcommand("spectrum", "Closed-loop map spectrum at a point");
    double spec_h = 0.01;
    double spec_lambda = 1.0;
    double spec_u = 0.0;
    std::vector<double> spec_x{0.0, 0.0};
    std::vector<double> spec_v{0.0, 0.0};
    DuffingParams spec_params = preset_config("fig2").params;
    spectrum_cmd->add_option("--h", spec_h, "Time step");
    spectrum_cmd->add_option("--lambda", spec_lambda, "DLS damping constant");
    spectrum_cmd->add_option("--u", spec_u, "Control value at the point");
    spectrum_cmd->add_option("--x", spec_x, "Positions x1,x2")->delimiter(',')->expected(2);
    spectrum_cmd->add_option("--v", spec_v, "Velocities v1,v2")->delimiter(',')->expected(2);
    spectrum_cmd->add_option("--omega", spec_params.omega, "Omega");
    spectrum_cmd->add_option("--epsilon", spec_params.epsilon, "Coupling ratio");
    spectrum_cmd->add_option("--alpha", spec_params.alpha, "Cubic stiffness");
    spectrum_cmd->add_option("--zeta", spec_params.zeta, "Damping ratio of the first oscillator");

    CLI11_PARSE(app, argc, argv);

    try {
        if (preset_cmd->parsed() || run_cmd->parsed()) {
            SimulationConfig config;
            if (preset_cmd->parsed()) {
                config = preset_config(preset_name);
                apply(preset_overrides, config);
            } else {
                config = read_config(std::filesystem::path(config_path));
                apply(run_overrides, config);
            }
            print_summary(run_config(config, std::filesystem::path(out_dir)));
        } else if (sweep_cmd->parsed()) {
            SweepSpec spec;
            spec.steps = sweep_h;
            spec.lambdas = sweep_lambda;
            spec.lambda0 = sweep_lambda0;
            spec.workers = workers;
            if (sweep_t_end) {
                spec.base.t_end = *sweep_t_end;
            }
            const auto rows = run_sweep(spec);
            if (sweep_out) {
                std::filesystem::create_directories(*sweep_out);
                const auto path = std::filesystem::path(*sweep_out) / "sweep.csv";
                std::ofstream out(path);
                if (!out) {
                    throw IoError("cannot write " + path.string());
                }
                write_sweep_csv(rows, out);
                std::printf("wrote %s (%zu rows)\n", path.c_str(), rows.size());
            } else {
                write_sweep_csv(rows, std::cout);
            }
        } else if (compare_cmd->parsed()) {
            const auto a = read_csv(std::filesystem::path(run_a));
            const auto b = read_csv(std::filesystem::path(run_b));
            const auto c = compare_lambda_h(a, b);
            std::printf("samples          %zu on [%.6g, %.6g]\n", c.samples, c.t_begin, c.t_end);
            std::printf("rms difference   %.6g\n", c.rms_difference);
            std::printf("relative rms (a) %.6g\n", c.relative_rms_a);
            std::printf("relative rms (b) %.6g\n", c.relative_rms_b);
            std::printf("max deviation    %.6g\n", c.max_deviation);
            std::printf("within %.3g      %s\n", threshold, c.relative_rms <= threshold ? "yes" : "no");
        } else if (spectrum_cmd->parsed()) {
            DuffingControlConfig control;
            control.lambda = spec_lambda;
            control.u0 = spec_u;
            const SystemState at{Eigen::Vector2d(spec_x[0], spec_x[1]), Eigen::Vector2d(spec_v[0], spec_v[1]), 0.0};
            const auto report = map_jacobian_spectrum(spec_params, control, StepSize(spec_h), at, spec_u);
            print_complex_list("q (eigenvalues of J - I):", report.eigenvalues);
            print_complex_list("multipliers (eigenvalues of J):", report.multipliers);
            print_complex_list("characteristic roots p:", report.char_roots);
            std::printf("spectral radius of q    %.12e (%s)\n", report.spectral_radius,
                        to_string(report.attraction_verdict));
            std::printf("multiplier radius       %.12e (%s)\n", report.multiplier_radius,
                        to_string(report.multiplier_verdict));
            if (spec_v[1] != 0.0 || spec_lambda > 0.0) {
                std::printf("q estimate (eps = 0)    %.12e\n", q_estimate(spec_params.omega, spec_v[1], spec_lambda));
            }
        }
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
