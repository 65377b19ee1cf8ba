#pragma once

#include "dlsctl/duffing.hpp"
#include "dlsctl/dynamics.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace dlsctl {

inline constexpr std::size_t kMaxSteps = 10'000'000;

struct SimulationConfig {
    DuffingParams params{};
    DuffingControlConfig control{};
    double h = 0.01;
    double t_end = 200.0;
    SystemState initial{Eigen::Vector2d(1.0, 0.1), Eigen::Vector2d::Zero(), 0.0};
    bool control_enabled = true;
    std::string preset_name;
    // Rows kept every `output_stride` steps; 0 selects max(1, round(0.01 / h)).
    std::size_t output_stride = 0;

    void validate() const;
    [[nodiscard]] std::size_t step_count() const;
    [[nodiscard]] std::size_t effective_stride() const;
};

[[nodiscard]] bool operator==(const SimulationConfig& a, const SimulationConfig& b);

// Column store of the recorded samples.  Row k holds the state and control at
// that sample, f2 evaluated there, and the adjustment du computed there (the
// adjustment of the final row is computed but not applied).
struct Trajectory {
    std::vector<double> t, x1, x2, v1, v2, u, f2, du;

    [[nodiscard]] std::size_t size() const noexcept { return t.size(); }
    [[nodiscard]] bool empty() const noexcept { return t.empty(); }
    void reserve(std::size_t n);
    void push_row(double t_, double x1_, double x2_, double v1_, double v2_, double u_, double f2_, double du_);

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

// Controller diagnostics at the same rows as the trajectory.
struct ControllerTrace {
    std::vector<double> u, delta_u, f2, jacobian, denominator;
    std::vector<bool> fallback;

    [[nodiscard]] std::size_t size() const noexcept { return u.size(); }
    [[nodiscard]] std::size_t fallback_count() const;
};

struct SimulationResult {
    SimulationConfig config;
    Trajectory trajectory;
    ControllerTrace trace;
};

// Interleaves the DLS update and the Euler step; at step k both read only
// step-k values, and u_{k+1} first acts at step k + 1.
[[nodiscard]] SimulationResult simulate(const SimulationConfig& config);

} // namespace dlsctl
