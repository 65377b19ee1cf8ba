#include "dlsctl/simulation.hpp"

#include "dlsctl/errors.hpp"

#include <cmath>
#include <string>

namespace dlsctl {

void SimulationConfig::validate() const {
    params.validate();
    control.validate();
    static_cast<void>(StepSize(h));
    if (!std::isfinite(t_end) || t_end <= 0.0) {
        throw ConfigurationError("t_end must be positive");
    }
    if (initial.x.size() != 2 || initial.v.size() != 2 || !initial.x.allFinite() || !initial.v.allFinite() ||
        !std::isfinite(initial.t)) {
        throw ConfigurationError("initial state must be a finite two-dimensional state");
    }
    const double steps = std::round(t_end / h);
    if (steps < 1.0 || steps > static_cast<double>(kMaxSteps)) {
        throw ConfigurationError("t_end / h must lie in [1, " + std::to_string(kMaxSteps) + "]");
    }
}

std::size_t SimulationConfig::step_count() const {
    return static_cast<std::size_t>(std::llround(t_end / h));
}

std::size_t SimulationConfig::effective_stride() const {
    if (output_stride > 0) {
        return output_stride;
    }
    const auto auto_stride = std::llround(0.01 / h);
    return auto_stride < 1 ? 1 : static_cast<std::size_t>(auto_stride);
}

bool operator==(const SimulationConfig& a, const SimulationConfig& b) {
    return a.params == b.params && a.control == b.control && a.h == b.h && a.t_end == b.t_end &&
           a.initial.x == b.initial.x && a.initial.v == b.initial.v && a.initial.t == b.initial.t &&
           a.control_enabled == b.control_enabled && a.preset_name == b.preset_name &&
           a.output_stride == b.output_stride;
}

void Trajectory::reserve(std::size_t n) {
    for (auto* column : {&t, &x1, &x2, &v1, &v2, &u, &f2, &du}) {
        column->reserve(n);
    }
}

void Trajectory::push_row(double t_, double x1_, double x2_, double v1_, double v2_, double u_, double f2_,
                          double du_) {
    t.push_back(t_);
    x1.push_back(x1_);
    x2.push_back(x2_);
    v1.push_back(v1_);
    v2.push_back(v2_);
    u.push_back(u_);
    f2.push_back(f2_);
    du.push_back(du_);
}

std::size_t ControllerTrace::fallback_count() const {
    std::size_t count = 0;
    for (bool flag : fallback) {
        count += flag ? 1 : 0;
    }
    return count;
}

SimulationResult simulate(const SimulationConfig& config) {
    config.validate();
    const std::size_t steps = config.step_count();
    const std::size_t stride = config.effective_stride();
    const StepSize h(config.h);
    const double t0 = config.initial.t;

    SimulationResult result;
    result.config = config;
    result.trajectory.reserve(steps / stride + 2);

    const auto record = [&](const LoopPoint& point, const ControlUpdate& update) {
        const SystemState& s = point.state;
        const double du = config.control_enabled ? update.delta_u : 0.0;
        result.trajectory.push_row(s.t, s.x(0), s.x(1), s.v(0), s.v(1), point.u, update.f2, du);
        ControllerTrace& trace = result.trace;
        trace.u.push_back(point.u);
        trace.delta_u.push_back(du);
        trace.f2.push_back(update.f2);
        trace.jacobian.push_back(update.jacobian);
        trace.denominator.push_back(update.denominator);
        trace.fallback.push_back(config.control_enabled && update.fallback);
    };

    const DuffingPlant plant(config.params);
    LoopPoint point{config.control.u0, config.initial};
    for (std::size_t k = 0;; ++k) {
        const ControlUpdate update = control_update(point.state, point.u, config.params, config.control);
        if (k % stride == 0 || k == steps) {
            record(point, update);
        }
        if (k == steps) {
            break;
        }
        LoopPoint next;
        next.state = euler_step(point.state, plant, Vector::Constant(1, point.u), h, k);
        next.state.t = t0 + static_cast<double>(k + 1) * config.h;
        next.u = config.control_enabled ? update.u_next : point.u;
        if (!std::isfinite(next.u) || std::abs(next.u) > kDivergenceBound) {
            throw DivergenceError("control diverged at step " + std::to_string(k), k);
        }
        point = std::move(next);
    }
    return result;
}

} // namespace dlsctl
