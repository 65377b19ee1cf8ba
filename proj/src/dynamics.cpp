#include "dlsctl/dynamics.hpp"

#include "dlsctl/errors.hpp"

#include <cmath>
#include <string>

namespace dlsctl {

namespace {

bool within_bound(const Vector& values) {
    return values.allFinite() && (values.size() == 0 || values.cwiseAbs().maxCoeff() <= kDivergenceBound);
}

void guard(const SystemState& next, std::size_t step_index) {
    if (!within_bound(next.x) || !within_bound(next.v)) {
        throw DivergenceError("state diverged at step " + std::to_string(step_index), step_index);
    }
}

Vector checked_rhs(const PlantModel& model, const SystemState& state, const Vector& u, std::size_t step_index) {
    Vector f = model.rhs(state, u);
    if (!f.allFinite()) {
        throw DivergenceError("non-finite acceleration at step " + std::to_string(step_index), step_index);
    }
    return f;
}

} // namespace

StepSize::StepSize(double h) : h_(h) {
    if (!std::isfinite(h) || h <= 0.0) {
        throw ConfigurationError("time step must be positive and finite");
    }
}

void validate_state(const SystemState& state, const PlantModel& model, const Vector& u) {
    if (state.x.size() != model.dimension() || state.v.size() != model.dimension()) {
        throw ConfigurationError("state dimension does not match the plant");
    }
    if (u.size() != model.control_dimension()) {
        throw ConfigurationError("control dimension does not match the plant");
    }
    if (!state.x.allFinite() || !state.v.allFinite() || !std::isfinite(state.t) || !u.allFinite()) {
        throw ConfigurationError("state and control must be finite");
    }
}

SystemState euler_step(const SystemState& state, const PlantModel& model, const Vector& u, StepSize h,
                       std::size_t step_index) {
    validate_state(state, model, u);
    const double dt = h.value();
    const Vector f = checked_rhs(model, state, u, step_index);
    SystemState next{state.x + dt * state.v, state.v + dt * f, state.t + dt};
    guard(next, step_index);
    return next;
}

namespace oracle {

SystemState rk4_step(const SystemState& state, const PlantModel& model, const Vector& u, StepSize h,
                     std::size_t step_index) {
    validate_state(state, model, u);
    const double dt = h.value();
    const double half = 0.5 * dt;

    const Vector& x = state.x;
    const Vector& v = state.v;
    const Vector k1x = v;
    const Vector k1v = checked_rhs(model, state, u, step_index);
    const Vector k2x = v + half * k1v;
    const Vector k2v = checked_rhs(model, {x + half * k1x, k2x, state.t + half}, u, step_index);
    const Vector k3x = v + half * k2v;
    const Vector k3v = checked_rhs(model, {x + half * k2x, k3x, state.t + half}, u, step_index);
    const Vector k4x = v + dt * k3v;
    const Vector k4v = checked_rhs(model, {x + dt * k3x, k4x, state.t + dt}, u, step_index);

    SystemState next{x + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
                     v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v), state.t + dt};
    guard(next, step_index);
    return next;
}

} // namespace oracle

} // namespace dlsctl
