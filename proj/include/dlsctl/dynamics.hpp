#pragma once

#include "dlsctl/dls.hpp"

#include <cstddef>

namespace dlsctl {

// Divergence bound on any position or velocity entry.
inline constexpr double kDivergenceBound = 1e9;

struct SystemState {
    Vector x;
    Vector v;
    double t = 0.0;

    [[nodiscard]] Eigen::Index dimension() const noexcept { return x.size(); }
};

// Second-order plant x'' = f(x, v, t, u).
class PlantModel {
public:
    virtual ~PlantModel() = default;

    [[nodiscard]] virtual Eigen::Index dimension() const = 0;
    [[nodiscard]] virtual Eigen::Index control_dimension() const = 0;

    // Acceleration f, n entries.
    [[nodiscard]] virtual Vector rhs(const SystemState& state, const Vector& u) const = 0;

    // df/du, n x m.
    [[nodiscard]] virtual ControlJacobian control_jacobian(const SystemState& state, const Vector& u) const = 0;
};

class StepSize {
public:
    explicit StepSize(double h);

    [[nodiscard]] double value() const noexcept { return h_; }

private:
    double h_;
};

// Throws ConfigurationError if the state or control does not fit the model.
void validate_state(const SystemState& state, const PlantModel& model, const Vector& u);

// Explicit Euler with f evaluated at the old state:
//   x' = x + h v,  v' = v + h f(x, v, t, u),  t' = t + h.
// step_index is carried into DivergenceError.
[[nodiscard]] SystemState euler_step(const SystemState& state, const PlantModel& model, const Vector& u,
                                     StepSize h, std::size_t step_index = 0);

namespace oracle {

// Classical fourth-order Runge-Kutta step with u held constant.  Verification
// only; no control loop or experiment runs through it.
[[nodiscard]] SystemState rk4_step(const SystemState& state, const PlantModel& model, const Vector& u, StepSize h,
                                   std::size_t step_index = 0);

} // namespace oracle

} // namespace dlsctl
