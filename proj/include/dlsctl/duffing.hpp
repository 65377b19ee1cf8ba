#pragma once

// Two unit-mass Duffing oscillators of equal linear stiffness K coupled by a
// linear spring gamma, with the damping ratio u of the second oscillator as
// the control input:
//
//   f1 = -2 zeta Omega v1 - Omega^2 x1 + eps (Omega^2 x2 - alpha x1^3)
//   f2 = -2 u    Omega v2 - Omega^2 x2 + eps (Omega^2 x1 - alpha x2^3)
//
// with Omega = sqrt(gamma + K) and eps = gamma / (gamma + K).

#include "dlsctl/dls.hpp"
#include "dlsctl/dynamics.hpp"

#include <Eigen/Core>

#include <optional>

namespace dlsctl {

// Denominator below which the scalar update falls back to u_{k+1} = u_k.
inline constexpr double kDenominatorFloor = 1e-15;

struct DuffingParams {
    double omega = 1.0;
    double epsilon = 0.1;
    double alpha = 1.5;
    double zeta = 0.025;

    static DuffingParams from_stiffness(double k, double gamma, double alpha, double zeta);

    void validate() const;

    friend bool operator==(const DuffingParams&, const DuffingParams&) = default;
};

// Target acceleration of the second oscillator as a function of time.
struct TargetProfile {
    enum class Kind { zero, constant, sine };

    Kind kind = Kind::zero;
    double amplitude = 0.0;
    double frequency = 0.0;

    [[nodiscard]] double operator()(double t) const;

    friend bool operator==(const TargetProfile&, const TargetProfile&) = default;
};

struct DuffingControlConfig {
    double lambda = 1.0;
    double b = 0.0;
    double u0 = 0.025;
    TargetProfile target{};
    // Actuator limits; off unless set.
    std::optional<double> u_min;
    std::optional<double> u_max;

    void validate() const;

    friend bool operator==(const DuffingControlConfig&, const DuffingControlConfig&) = default;
};

struct ControlUpdate {
    double u_next = 0.0;
    double delta_u = 0.0;
    double f2 = 0.0;
    double jacobian = 0.0;
    double denominator = 0.0;
    bool fallback = false;
};

// (f1, f2) at the given state and control.
[[nodiscard]] Eigen::Vector2d duffing_rhs(const SystemState& state, double u, const DuffingParams& params);

// df2/du = -2 Omega v2.
[[nodiscard]] double duffing_control_jacobian(const SystemState& state, const DuffingParams& params);

// Closed-form scalar DLS update
//   u_{k+1} = u_k - [(f2 - x2''*) df2/du + lambda b] / [(df2/du)^2 + lambda],
// clamped to the configured actuator limits.
[[nodiscard]] ControlUpdate control_update(const SystemState& state, double u_k, const DuffingParams& params,
                                           const DuffingControlConfig& config);

class DuffingPlant final : public PlantModel {
public:
    explicit DuffingPlant(DuffingParams params);

    [[nodiscard]] Eigen::Index dimension() const override { return 2; }
    [[nodiscard]] Eigen::Index control_dimension() const override { return 1; }
    [[nodiscard]] Vector rhs(const SystemState& state, const Vector& u) const override;
    [[nodiscard]] ControlJacobian control_jacobian(const SystemState& state, const Vector& u) const override;

    [[nodiscard]] const DuffingParams& params() const noexcept { return params_; }

private:
    DuffingParams params_;
};

// DLS weights reproducing the scalar update: W = diag(0, 1), Lambda = lambda, C = 1, B = b.
[[nodiscard]] DlsWeights duffing_weights(const DuffingControlConfig& config);

// Point (u, x1, x2, v1, v2, t) of the closed-loop discrete map.
struct LoopPoint {
    double u = 0.0;
    SystemState state;
};

// One step of the closed loop: u from the DLS update, state from explicit
// Euler under u_k.  With control off, u is carried unchanged.
[[nodiscard]] LoopPoint advance_loop(const LoopPoint& point, const DuffingParams& params,
                                     const DuffingControlConfig& config, StepSize h, bool control_enabled = true,
                                     std::size_t step_index = 0);

} // namespace dlsctl
