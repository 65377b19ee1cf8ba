#include "dlsctl/duffing.hpp"

#include "dlsctl/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dlsctl {

namespace {

void require_planar(const SystemState& state) {
    if (state.x.size() != 2 || state.v.size() != 2) {
        throw ConfigurationError("Duffing state must have dimension 2");
    }
    if (!state.x.allFinite() || !state.v.allFinite()) {
        throw ConfigurationError("Duffing state must be finite");
    }
}

} // namespace

DuffingParams DuffingParams::from_stiffness(double k, double gamma, double alpha, double zeta) {
    if (!(k + gamma > 0.0) || gamma < 0.0) {
        throw ConfigurationError("stiffnesses must satisfy gamma >= 0 and K + gamma > 0");
    }
    DuffingParams params{std::sqrt(gamma + k), gamma / (gamma + k), alpha, zeta};
    params.validate();
    return params;
}

void DuffingParams::validate() const {
    if (!std::isfinite(omega) || omega <= 0.0) {
        throw ConfigurationError("Omega must be positive");
    }
    if (!std::isfinite(epsilon) || epsilon < 0.0 || epsilon >= 1.0) {
        throw ConfigurationError("epsilon must lie in [0, 1)");
    }
    if (!std::isfinite(alpha) || alpha <= 0.0) {
        throw ConfigurationError("alpha must be positive");
    }
    if (!std::isfinite(zeta) || zeta < 0.0) {
        throw ConfigurationError("zeta must be nonnegative");
    }
}

double TargetProfile::operator()(double t) const {
    switch (kind) {
    case Kind::zero:
        return 0.0;
    case Kind::constant:
        return amplitude;
    case Kind::sine:
        return amplitude * std::sin(frequency * t);
    }
    return 0.0;
}

void DuffingControlConfig::validate() const {
    if (!std::isfinite(lambda) || lambda < 0.0) {
        throw ConfigurationError("lambda must be finite and nonnegative");
    }
    if (!std::isfinite(b) || !std::isfinite(u0)) {
        throw ConfigurationError("b and u0 must be finite");
    }
    if (u_min && u_max && *u_min > *u_max) {
        throw ConfigurationError("u_min exceeds u_max");
    }
    if ((u_min && u0 < *u_min) || (u_max && u0 > *u_max)) {
        throw ConfigurationError("u0 lies outside the actuator limits");
    }
}

Eigen::Vector2d duffing_rhs(const SystemState& state, double u, const DuffingParams& params) {
    require_planar(state);
    const double w = params.omega;
    const double w2 = w * w;
    const double x1 = state.x(0);
    const double x2 = state.x(1);
    const double v1 = state.v(0);
    const double v2 = state.v(1);
    const double f1 = -2.0 * params.zeta * w * v1 - w2 * x1 + params.epsilon * (w2 * x2 - params.alpha * x1 * x1 * x1);
    const double f2 = -2.0 * u * w * v2 - w2 * x2 + params.epsilon * (w2 * x1 - params.alpha * x2 * x2 * x2);
    return {f1, f2};
}

double duffing_control_jacobian(const SystemState& state, const DuffingParams& params) {
    require_planar(state);
    return -2.0 * params.omega * state.v(1);
}

ControlUpdate control_update(const SystemState& state, double u_k, const DuffingParams& params,
                             const DuffingControlConfig& config) {
    ControlUpdate out;
    out.f2 = duffing_rhs(state, u_k, params)(1);
    out.jacobian = duffing_control_jacobian(state, params);
    out.denominator = out.jacobian * out.jacobian + config.lambda;

    if (out.denominator < kDenominatorFloor) {
        out.u_next = u_k;
        out.fallback = true;
        return out;
    }
    const double numerator = (out.f2 - config.target(state.t)) * out.jacobian + config.lambda * config.b;
    double u_next = u_k - numerator / out.denominator;
    if (config.u_min) {
        u_next = std::max(u_next, *config.u_min);
    }
    if (config.u_max) {
        u_next = std::min(u_next, *config.u_max);
    }
    out.u_next = u_next;
    out.delta_u = u_next - u_k;
    return out;
}

DuffingPlant::DuffingPlant(DuffingParams params) : params_(params) { params_.validate(); }

Vector DuffingPlant::rhs(const SystemState& state, const Vector& u) const {
    if (u.size() != 1) {
        throw ConfigurationError("Duffing plant has a single control input");
    }
    return duffing_rhs(state, u(0), params_);
}

ControlJacobian DuffingPlant::control_jacobian(const SystemState& state, const Vector& u) const {
    if (u.size() != 1) {
        throw ConfigurationError("Duffing plant has a single control input");
    }
    Matrix jac = Matrix::Zero(2, 1);
    jac(1, 0) = duffing_control_jacobian(state, params_);
    return {std::move(jac)};
}

DlsWeights duffing_weights(const DuffingControlConfig& config) {
    return DlsWeights::scalar(Eigen::Vector2d(0.0, 1.0), config.lambda, config.b);
}

LoopPoint advance_loop(const LoopPoint& point, const DuffingParams& params, const DuffingControlConfig& config,
                       StepSize h, bool control_enabled, std::size_t step_index) {
    const DuffingPlant plant(params);
    LoopPoint next;
    next.state = euler_step(point.state, plant, Vector::Constant(1, point.u), h, step_index);
    next.u = control_enabled ? control_update(point.state, point.u, params, config).u_next : point.u;
    return next;
}

} // namespace dlsctl
