#pragma once

// Generic discrete-time DLS acceleration control loop for any PlantModel.
// At each sample the adjustment is computed from step-k quantities only and
// the adjusted control is first applied at step k + 1.

#include "dlsctl/dls.hpp"
#include "dlsctl/dynamics.hpp"

#include <functional>
#include <vector>

namespace dlsctl {

using TargetAcceleration = std::function<Vector(double t)>;
// Weights may depend on the sampled state.
using WeightSchedule = std::function<DlsWeights(const SystemState&)>;

struct LoopSample {
    SystemState state;
    Vector u;
    Vector f;
    Vector delta_u;
};

// du_k solving the DLS problem at (state, u).
[[nodiscard]] ControlAdjustment dls_control_update(const PlantModel& model, const SystemState& state,
                                                   const Vector& u, const Vector& target_accel,
                                                   const DlsWeights& weights);

// Runs `steps` samples and returns steps + 1 records, the first being the initial state.
[[nodiscard]] std::vector<LoopSample> run_dls_loop(const PlantModel& model, SystemState initial, Vector u0,
                                                   StepSize h, std::size_t steps, const WeightSchedule& weights,
                                                   const TargetAcceleration& target);

} // namespace dlsctl
