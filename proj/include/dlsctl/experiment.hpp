#pragma once

// Named experiment presets, run summaries and (h, lambda) sweeps.

#include "dlsctl/analysis.hpp"
#include "dlsctl/simulation.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dlsctl {

// Start of the window used for late-time envelope metrics.
inline constexpr double kLateWindowStart = 50.0;

[[nodiscard]] const std::vector<std::string>& preset_names();

// fig1: no control, u = zeta.  fig2: h = 0.01, lambda = 1.  fig3: h = 0.001,
// lambda = 1.  fig4: h = 0.001, lambda = 10.  fig5: h = 0.001, lambda = 0.1.
// All share eps = 0.1, Omega = 1, alpha = 1.5, zeta = 0.025, u0 = 0.025,
// x = (1, 0.1), v = 0, t_end = 200.  Throws UsageError for unknown names.
[[nodiscard]] SimulationConfig preset_config(std::string_view name);

struct RunSummary {
    double h = 0.0;
    double lambda = 0.0;
    bool control_enabled = true;
    double max_envelope_x2_late = 0.0;
    double exchange_depth = 1.0;
    std::size_t exchange_cycles = 0;
    double max_control_deviation = 0.0; // max |u_k - zeta|
    double response_rms = 0.0;
    std::optional<double> suppression_ratio; // against the uncontrolled run at the same h
    std::size_t fallback_count = 0;

    friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

// Uncontrolled twin of a configuration: same plant, step and horizon, u frozen at u0.
[[nodiscard]] SimulationConfig baseline_of(const SimulationConfig& config);

[[nodiscard]] RunSummary summarize(const SimulationResult& run, const SimulationResult* baseline);

struct PresetRun {
    SimulationResult result;
    RunSummary summary;
    std::filesystem::path csv_path;
    std::filesystem::path svg_path;
    std::filesystem::path config_path;
};

// Runs the configuration and its uncontrolled baseline.  When out_dir is set,
// writes <name>.csv, <name>.svg and <name>.cfg there.
[[nodiscard]] PresetRun run_config(const SimulationConfig& config,
                                   const std::optional<std::filesystem::path>& out_dir = std::nullopt);

[[nodiscard]] PresetRun run_preset(std::string_view name,
                                   const std::optional<std::filesystem::path>& out_dir = std::nullopt);

struct SweepSpec {
    SimulationConfig base = preset_config("fig2");
    std::vector<double> steps;
    std::vector<double> lambdas;
    // Lock mode: lambda = lambda0 / h for each step; `lambdas` is ignored.
    std::optional<double> lambda0;
    // Worker threads; 0 runs cells sequentially.
    unsigned workers = 0;
};

struct SweepRow {
    double h = 0.0;
    double lambda = 0.0;
    bool diverged = false;
    std::string error;
    RunSummary summary;
};

// One row per cell in (h-major, lambda-minor) order; a divergent cell is
// flagged and the sweep continues.
[[nodiscard]] std::vector<SweepRow> run_sweep(const SweepSpec& spec);

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

} // namespace dlsctl
