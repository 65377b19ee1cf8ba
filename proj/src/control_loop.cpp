#include "dlsctl/control_loop.hpp"

#include "dlsctl/errors.hpp"

namespace dlsctl {

ControlAdjustment dls_control_update(const PlantModel& model, const SystemState& state, const Vector& u,
                                     const Vector& target_accel, const DlsWeights& weights) {
    validate_state(state, model, u);
    const ErrorVector error = compute_error(target_accel, model.rhs(state, u));
    return dls_solve(error, model.control_jacobian(state, u), weights);
}

std::vector<LoopSample> run_dls_loop(const PlantModel& model, SystemState initial, Vector u0, StepSize h,
                                     std::size_t steps, const WeightSchedule& weights,
                                     const TargetAcceleration& target) {
    if (!weights || !target) {
        throw ConfigurationError("control loop needs a weight schedule and a target acceleration");
    }
    std::vector<LoopSample> samples;
    samples.reserve(steps + 1);

    SystemState state = std::move(initial);
    Vector u = std::move(u0);
    for (std::size_t k = 0;; ++k) {
        validate_state(state, model, u);
        Vector f = model.rhs(state, u);
        Vector du = dls_control_update(model, state, u, target(state.t), weights(state)).delta_u;
        samples.push_back({state, u, std::move(f), du});
        if (k == steps) {
            break;
        }
        // Both updates read step-k values only.
        SystemState next = euler_step(state, model, u, h, k);
        u += du;
        state = std::move(next);
    }
    return samples;
}

} // namespace dlsctl
