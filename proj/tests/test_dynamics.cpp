#include "dlsctl/control_loop.hpp"
#include "dlsctl/duffing.hpp"
#include "dlsctl/dynamics.hpp"
#include "dlsctl/errors.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace dlsctl;
using namespace dlsctl::testing_support;

namespace {

const DuffingParams kPresetParams{1.0, 0.1, 1.5, 0.025};

SystemState planar(double x1, double x2, double v1, double v2, double t = 0.0) {
    return {Eigen::Vector2d(x1, x2), Eigen::Vector2d(v1, v2), t};
}

Vector u1(double u) { return Vector::Constant(1, u); }

// First integral of the undamped, uncontrolled coupled Duffing pair.
double conserved_energy(const SystemState& s, const DuffingParams& p) {
    const double w2 = p.omega * p.omega;
    const double x1 = s.x(0);
    const double x2 = s.x(1);
    return 0.5 * (s.v(0) * s.v(0) + s.v(1) * s.v(1)) + 0.5 * w2 * (x1 * x1 + x2 * x2) - p.epsilon * w2 * x1 * x2 +
           0.25 * p.epsilon * p.alpha * (x1 * x1 * x1 * x1 + x2 * x2 * x2 * x2);
}

template <typename Stepper>
double energy_drift(Stepper step, double h, double t_end) {
    DuffingParams p = kPresetParams;
    p.zeta = 0.0;
    const DuffingPlant plant(p);
    SystemState s = planar(1.0, 0.1, 0.0, 0.0);
    const double h0 = conserved_energy(s, p);
    const auto steps = static_cast<std::size_t>(std::llround(t_end / h));
    double drift = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        s = step(s, plant, u1(0.0), StepSize(h), k);
        drift = std::max(drift, std::abs(conserved_energy(s, p) - h0));
    }
    return drift;
}

} // namespace

TEST(StepSize, RejectsNonPositive) {
    EXPECT_THROW((void)StepSize(0.0), ConfigurationError);
    EXPECT_THROW((void)StepSize(-0.1), ConfigurationError);
    EXPECT_THROW((void)StepSize(std::numeric_limits<double>::infinity()), ConfigurationError);
    EXPECT_DOUBLE_EQ(StepSize(0.01).value(), 0.01);
}

TEST(EulerStep, FixedPointOnlyAdvancesTime) {
    const ZeroPlant plant;
    const SystemState s = planar(0.3, -0.2, 0.0, 0.0, 1.5);
    const SystemState next = euler_step(s, plant, u1(0.0), StepSize(0.01));
    EXPECT_EQ(next.x, s.x);
    EXPECT_EQ(next.v, s.v);
    EXPECT_DOUBLE_EQ(next.t, 1.51);
}

TEST(EulerStep, DuffingPresetState) {
    const DuffingPlant plant(kPresetParams);
    const SystemState next = euler_step(planar(1.0, 0.1, 0.0, 0.0), plant, u1(0.025), StepSize(0.01));
    EXPECT_EQ(next.x, Eigen::Vector2d(1.0, 0.1));
    EXPECT_NEAR(next.v(0), -0.0114, 1e-15);
    EXPECT_NEAR(next.v(1), -1.5e-6, 1e-15);
}

TEST(EulerStep, LinearSpringUsesOldState) {
    const UnitSpring plant;
    const SystemState next = euler_step({u1(1.0), u1(0.0), 0.0}, plant, u1(0.0), StepSize(0.1));
    EXPECT_DOUBLE_EQ(next.x(0), 1.0);
    EXPECT_DOUBLE_EQ(next.v(0), -0.1);
}

TEST(EulerStep, DivergenceCarriesStepIndex) {
    const ConstantPush plant(1e12);
    try {
        (void)euler_step({u1(0.0), u1(0.0), 0.0}, plant, u1(0.0), StepSize(0.01), 42);
        FAIL() << "expected DivergenceError";
    } catch (const DivergenceError& e) {
        EXPECT_EQ(e.step_index(), 42u);
    }
    const ConstantPush nan_plant(NAN);
    EXPECT_THROW((void)euler_step({u1(0.0), u1(0.0), 0.0}, nan_plant, u1(0.0), StepSize(0.01)), DivergenceError);
}

TEST(EulerStep, RejectsMismatchedState) {
    const DuffingPlant plant(kPresetParams);
    EXPECT_THROW((void)euler_step({u1(0.0), u1(0.0), 0.0}, plant, u1(0.0), StepSize(0.01)), ConfigurationError);
    EXPECT_THROW((void)euler_step(planar(0, 0, 0, 0), plant, Vector::Zero(2), StepSize(0.01)), ConfigurationError);
}

TEST(Rk4Oracle, ZeroFieldAndHarmonicTaylor) {
    const ZeroPlant zero;
    const SystemState s = planar(0.5, 0.25, 0.0, 0.0);
    const SystemState z = oracle::rk4_step(s, zero, u1(0.0), StepSize(0.1));
    EXPECT_EQ(z.x, s.x);
    EXPECT_DOUBLE_EQ(z.t, 0.1);

    const UnitSpring spring;
    const SystemState next = oracle::rk4_step({u1(1.0), u1(0.0), 0.0}, spring, u1(0.0), StepSize(0.1));
    // Local error of a fourth-order step is O(h^5) = 1e-5 times a small constant.
    EXPECT_NEAR(next.x(0), std::cos(0.1), 1e-6);
    EXPECT_NEAR(next.v(0), -std::sin(0.1), 1e-6);
}

TEST(Rk4Oracle, AgreesWithFineEulerOnUncontrolledDuffing) {
    const DuffingPlant plant(kPresetParams);
    SystemState rk = planar(1.0, 0.1, 0.0, 0.0);
    SystemState eu = rk;
    const double h_rk = 1e-3;
    const int ratio = 100;
    double max_gap = 0.0;
    for (int k = 0; k < 10'000; ++k) {
        rk = oracle::rk4_step(rk, plant, u1(0.025), StepSize(h_rk), k);
        for (int j = 0; j < ratio; ++j) {
            eu = euler_step(eu, plant, u1(0.025), StepSize(h_rk / ratio));
        }
        max_gap = std::max({max_gap, (rk.x - eu.x).cwiseAbs().maxCoeff(), (rk.v - eu.v).cwiseAbs().maxCoeff()});
    }
    EXPECT_LE(max_gap, 1e-3);
}

TEST(Integrators, EulerEnergyDriftIsFirstOrder) {
    const auto euler = [](const SystemState& s, const PlantModel& m, const Vector& u, StepSize h, std::size_t k) {
        return euler_step(s, m, u, h, k);
    };
    const double coarse = energy_drift(euler, 0.01, 20.0);
    const double fine = energy_drift(euler, 0.005, 20.0);
    EXPECT_GE(coarse / fine, 1.7);
    EXPECT_LE(coarse / fine, 2.3);
}

TEST(Integrators, OracleConservesEnergy) {
    const auto rk4 = [](const SystemState& s, const PlantModel& m, const Vector& u, StepSize h, std::size_t k) {
        return oracle::rk4_step(s, m, u, h, k);
    };
    EXPECT_LE(energy_drift(rk4, 0.001, 20.0), 1e-6);
}

TEST(PlantModel, DuffingJacobianMatchesFiniteDifferences) {
    auto rng = make_rng(23);
    const DuffingPlant plant(kPresetParams);
    for (int trial = 0; trial < 100; ++trial) {
        const SystemState s{random_vector(rng, 2, -2, 2), random_vector(rng, 2, -2, 2), 0.0};
        const double u = uniform(rng, -1, 1);
        const double step = 1e-6;
        const Vector fd = (plant.rhs(s, u1(u + step)) - plant.rhs(s, u1(u - step))) / (2 * step);
        const Matrix jac = plant.control_jacobian(s, u1(u)).values;
        EXPECT_LE((jac.col(0) - fd).cwiseAbs().maxCoeff(), 1e-6);
    }
}

TEST(Determinism, RepeatedTrajectoriesAreBitIdentical) {
    const DuffingPlant plant(kPresetParams);
    const auto run = [&] {
        SystemState s = planar(1.0, 0.1, 0.0, 0.0);
        for (int k = 0; k < 5000; ++k) {
            s = euler_step(s, plant, u1(0.1), StepSize(0.01));
        }
        return s;
    };
    const SystemState a = run();
    const SystemState b = run();
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.v, b.v);
}

TEST(ControlLoop, ZeroPlantKeepsEverythingConstant) {
    const ZeroPlant plant(2, 1);
    const SystemState start = planar(0.4, -0.3, 0.0, 0.0);
    const auto samples = run_dls_loop(
        plant, start, u1(0.2), StepSize(0.01), 50,
        [](const SystemState&) { return DlsWeights::scalar(Eigen::Vector2d(0.0, 1.0), 1.0); },
        [](double) { return Vector::Zero(2); });
    ASSERT_EQ(samples.size(), 51u);
    for (const auto& s : samples) {
        EXPECT_EQ(s.state.x, start.x);
        EXPECT_EQ(s.state.v, start.v);
        EXPECT_EQ(s.u(0), 0.2);
        EXPECT_EQ(s.delta_u(0), 0.0);
    }
}

TEST(ControlLoop, GenericLoopTracksClosedFormDuffingUpdate) {
    DuffingControlConfig cfg;
    cfg.lambda = 1.0;
    cfg.u0 = 0.025;
    const DuffingPlant plant(kPresetParams);
    const auto samples = run_dls_loop(
        plant, planar(1.0, 0.1, 0.0, 0.0), u1(cfg.u0), StepSize(0.01), 200,
        [&](const SystemState&) { return duffing_weights(cfg); }, [](double) { return Vector::Zero(2); });

    LoopPoint point{cfg.u0, planar(1.0, 0.1, 0.0, 0.0)};
    for (std::size_t k = 0; k < samples.size(); ++k) {
        EXPECT_NEAR(samples[k].u(0), point.u, 1e-12 * std::max(1.0, std::abs(point.u)));
        EXPECT_NEAR(samples[k].state.v(1), point.state.v(1), 1e-12);
        point = advance_loop(point, kPresetParams, cfg, StepSize(0.01));
    }
}
