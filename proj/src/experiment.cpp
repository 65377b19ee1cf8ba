#include "dlsctl/experiment.hpp"

#include "dlsctl/errors.hpp"
#include "dlsctl/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <map>
#include <ostream>

namespace dlsctl {

namespace {

SimulationConfig preset_base() {
    SimulationConfig config;
    config.params = DuffingParams{1.0, 0.1, 1.5, 0.025};
    config.control.u0 = 0.025;
    config.control.b = 0.0;
    config.t_end = 200.0;
    config.initial = SystemState{Eigen::Vector2d(1.0, 0.1), Eigen::Vector2d::Zero(), 0.0};
    return config;
}

SimulationConfig controlled(std::string_view name, double h, double lambda) {
    SimulationConfig config = preset_base();
    config.preset_name = std::string(name);
    config.h = h;
    config.control.lambda = lambda;
    config.control_enabled = true;
    return config;
}

std::string format_double(double value) {
    char buffer[32];
    const int n = std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return {buffer, static_cast<std::size_t>(n)};
}

} // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"fig1", "fig2", "fig3", "fig4", "fig5"};
    return names;
}

SimulationConfig preset_config(std::string_view name) {
    if (name == "fig1") {
        SimulationConfig config = preset_base();
        config.preset_name = "fig1";
        config.h = 0.01;
        config.control_enabled = false;
        return config;
    }
    if (name == "fig2") {
        return controlled(name, 0.01, 1.0);
    }
    if (name == "fig3") {
        return controlled(name, 0.001, 1.0);
    }
    if (name == "fig4") {
        return controlled(name, 0.001, 10.0);
    }
    if (name == "fig5") {
        return controlled(name, 0.001, 0.1);
    }
    throw UsageError("unknown preset '" + std::string(name) + "' (expected fig1..fig5)");
}

SimulationConfig baseline_of(const SimulationConfig& config) {
    SimulationConfig baseline = config;
    baseline.control_enabled = false;
    baseline.preset_name = config.preset_name.empty() ? std::string() : config.preset_name + "-baseline";
    return baseline;
}

RunSummary summarize(const SimulationResult& run, const SimulationResult* baseline) {
    const SimulationConfig& config = run.config;
    const Trajectory& traj = run.trajectory;
    const BeatMetrics beats = beat_metrics(traj, config.params);

    RunSummary summary;
    summary.h = config.h;
    summary.lambda = config.control.lambda;
    summary.control_enabled = config.control_enabled;
    summary.max_envelope_x2_late = max_envelope_in(traj.t, beats.envelope_x2, kLateWindowStart, traj.t.back());
    summary.exchange_depth = beats.exchange_depth;
    summary.exchange_cycles = beats.exchange_cycles;
    for (double u : traj.u) {
        summary.max_control_deviation = std::max(summary.max_control_deviation, std::abs(u - config.params.zeta));
    }
    summary.response_rms = response_rms(traj);
    if (baseline != nullptr) {
        summary.suppression_ratio =
            suppression_ratio(traj, baseline->trajectory, config.params, kLateWindowStart, traj.t.back());
    }
    summary.fallback_count = run.trace.fallback_count();
    return summary;
}

PresetRun run_config(const SimulationConfig& config, const std::optional<std::filesystem::path>& out_dir) {
    PresetRun run;
    run.result = simulate(config);
    if (config.control_enabled) {
        const SimulationResult baseline = simulate(baseline_of(config));
        run.summary = summarize(run.result, &baseline);
    } else {
        run.summary = summarize(run.result, nullptr);
    }

    if (out_dir) {
        std::error_code ec;
        std::filesystem::create_directories(*out_dir, ec);
        if (ec) {
            throw IoError("cannot create output directory '" + out_dir->string() + "': " + ec.message());
        }
        const std::string stem = config.preset_name.empty() ? std::string("run") : config.preset_name;
        run.csv_path = *out_dir / (stem + ".csv");
        run.svg_path = *out_dir / (stem + ".svg");
        run.config_path = *out_dir / (stem + ".cfg");
        write_csv(run.result.trajectory, run.csv_path);
        write_svg(run.result.trajectory, run.svg_path, stem);
        write_config(config, run.config_path);
    }
    return run;
}

PresetRun run_preset(std::string_view name, const std::optional<std::filesystem::path>& out_dir) {
    return run_config(preset_config(name), out_dir);
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    if (spec.steps.empty() || (!spec.lambda0 && spec.lambdas.empty())) {
        throw ConfigurationError("sweep grid is empty");
    }

    std::vector<SweepRow> rows;
    for (double h : spec.steps) {
        if (spec.lambda0) {
            rows.push_back({h, *spec.lambda0 / h, false, {}, {}});
        } else {
            for (double lambda : spec.lambdas) {
                rows.push_back({h, lambda, false, {}, {}});
            }
        }
    }

    // One uncontrolled baseline per distinct step, shared read-only by the cells.
    std::map<double, std::optional<SimulationResult>> baselines;
    for (const auto& row : rows) {
        if (baselines.contains(row.h)) {
            continue;
        }
        SimulationConfig config = baseline_of(spec.base);
        config.h = row.h;
        try {
            baselines[row.h] = simulate(config);
        } catch (const DivergenceError&) {
            baselines[row.h] = std::nullopt;
        }
    }

    const auto evaluate = [&](SweepRow& row) {
        SimulationConfig config = spec.base;
        config.preset_name.clear();
        config.h = row.h;
        config.control.lambda = row.lambda;
        config.control_enabled = true;
        try {
            const SimulationResult result = simulate(config);
            const auto& baseline = baselines.at(row.h);
            row.summary = summarize(result, baseline ? &*baseline : nullptr);
        } catch (const DivergenceError& e) {
            row.diverged = true;
            row.error = e.what();
            row.summary.h = row.h;
            row.summary.lambda = row.lambda;
        }
    };

    if (spec.workers == 0) {
        for (auto& row : rows) {
            evaluate(row);
        }
        return rows;
    }
    for (std::size_t begin = 0; begin < rows.size(); begin += spec.workers) {
        const std::size_t end = std::min(rows.size(), begin + spec.workers);
        std::vector<std::future<void>> pending;
        for (std::size_t i = begin; i < end; ++i) {
            pending.push_back(std::async(std::launch::async, [&, i] { evaluate(rows[i]); }));
        }
        for (auto& f : pending) {
            f.get();
        }
    }
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "h,lambda,status,max_envelope_x2_late,exchange_depth,exchange_cycles,max_control_deviation,"
           "response_rms,suppression_ratio,fallbacks\n";
    for (const auto& row : rows) {
        const RunSummary& s = row.summary;
        out << format_double(row.h) << ',' << format_double(row.lambda) << ',' << (row.diverged ? "diverged" : "ok");
        if (row.diverged) {
            out << ",,,,,,,\n";
            continue;
        }
        out << ',' << format_double(s.max_envelope_x2_late) << ',' << format_double(s.exchange_depth) << ','
            << s.exchange_cycles << ',' << format_double(s.max_control_deviation) << ','
            << format_double(s.response_rms) << ','
            << (s.suppression_ratio ? format_double(*s.suppression_ratio) : std::string()) << ','
            << s.fallback_count << '\n';
    }
}

} // namespace dlsctl
