#pragma once

#include "dlsctl/duffing.hpp"
#include "dlsctl/simulation.hpp"

#include <Eigen/Core>

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dlsctl {

using Complex = std::complex<double>;

// Central-difference step used to differentiate the closed-loop map.
inline constexpr double kMapDifferenceStep = 1e-6;
// Default acceptance threshold for the lambda-h comparison.
inline constexpr double kLambdaHRelativeRms = 0.10;

// ---------------------------------------------------------------------------
// Convergence spectrum near equilibrium
// ---------------------------------------------------------------------------

enum class AttractionVerdict { sufficient, necessary_only, fails };

[[nodiscard]] const char* to_string(AttractionVerdict verdict);

// Sufficient when radius < 1, necessary only when radius == 1 (to 1e-9), fails otherwise.
[[nodiscard]] AttractionVerdict classify_radius(double radius);

using MapJacobian = Eigen::Matrix<double, 5, 5>;

struct SpectrumReport {
    // q_i: eigenvalues of J - I, J the Jacobian of the one-step map in
    // (u, x1, x2, v1, v2).  Near equilibrium q_i = h p_i plus one zero.
    std::vector<Complex> eigenvalues;
    // mu_i = eigenvalues of J itself (mu_i = 1 + q_i).
    std::vector<Complex> multipliers;
    double spectral_radius = 0.0;
    double multiplier_radius = 0.0;
    std::vector<Complex> char_roots;
    AttractionVerdict attraction_verdict = AttractionVerdict::fails;
    AttractionVerdict multiplier_verdict = AttractionVerdict::fails;
    MapJacobian jacobian = MapJacobian::Zero();
};

// Coefficients, leading first, of
//   p^4 + 2 zeta Omega p^3 + 2 Omega^2 p^2 + 2 zeta Omega^3 p + (1 - eps^2) Omega^4.
[[nodiscard]] std::array<double, 5> char_poly_coefficients(const DuffingParams& params);

[[nodiscard]] Complex evaluate_char_poly(const std::array<double, 5>& coefficients, Complex p);

// Linearization of the Duffing vector field about the origin for (x1, x2, v1, v2)
// with the second oscillator's damping ratio held at u.
[[nodiscard]] Eigen::Matrix4d linearized_state_matrix(const DuffingParams& params, double u = 0.0);

// The four roots p_i, sorted by (imag, real), each back-substituting with residual <= 1e-8.
[[nodiscard]] std::vector<Complex> char_poly_roots(const DuffingParams& params);

// Central-difference Jacobian of the one-step closed-loop map at (u, state).
[[nodiscard]] MapJacobian loop_map_jacobian(const DuffingParams& params, const DuffingControlConfig& config,
                                            StepSize h, const SystemState& at, double u);

[[nodiscard]] SpectrumReport map_jacobian_spectrum(const DuffingParams& params, const DuffingControlConfig& config,
                                                   StepSize h, const SystemState& at, double u);

// q = -(1 + lambda / (4 Omega^2 v2^2))^{-1}; 0 in the limit v2 -> 0 with lambda > 0.
[[nodiscard]] double q_estimate(double omega, double v2, double lambda);

// ---------------------------------------------------------------------------
// Beats
// ---------------------------------------------------------------------------

struct BeatMetrics {
    std::vector<double> envelope_x1;
    std::vector<double> envelope_x2;
    std::vector<double> energy1;
    std::vector<double> energy2;
    double max_envelope_x1 = 0.0;
    double max_envelope_x2 = 0.0;
    // max / min of the x2 envelope; 1 when the envelope vanishes identically.
    double exchange_depth = 1.0;
    // Completed round trips of the energy share E2 / (E1 + E2) from below
    // 1/3 to above 2/3 and back.
    std::size_t exchange_cycles = 0;
};

// Centered running maximum of |values| over windows of width `window` in t.
[[nodiscard]] std::vector<double> sliding_envelope(std::span<const double> t, std::span<const double> values,
                                                   double window);

// Throws InsufficientDataError when the trajectory spans less than one period 2 pi / Omega.
[[nodiscard]] BeatMetrics beat_metrics(const Trajectory& trajectory, const DuffingParams& params);

// Largest envelope sample with t in [t_from, t_to].
[[nodiscard]] double max_envelope_in(std::span<const double> t, std::span<const double> envelope, double t_from,
                                     double t_to);

// (max x2 envelope, controlled) / (max x2 envelope, baseline) over [t_from, t_to].
[[nodiscard]] double suppression_ratio(const Trajectory& controlled, const Trajectory& baseline,
                                       const DuffingParams& params, double t_from, double t_to);

// RMS of the displacement norm sqrt(x1^2 + x2^2) over all samples.
[[nodiscard]] double response_rms(const Trajectory& trajectory);

// ---------------------------------------------------------------------------
// lambda-h comparison
// ---------------------------------------------------------------------------

struct ControlComparison {
    double rms_difference = 0.0;
    double relative_rms_a = 0.0;
    double relative_rms_b = 0.0;
    // max(relative_rms_a, relative_rms_b)
    double relative_rms = 0.0;
    double max_deviation = 0.0;
    std::size_t samples = 0;
    double t_begin = 0.0;
    double t_end = 0.0;
};

// Resamples both traces onto the coarser trace's grid (linear interpolation)
// over the common time range.
[[nodiscard]] ControlComparison compare_control_traces(std::span<const double> t_a, std::span<const double> u_a,
                                                       std::span<const double> t_b, std::span<const double> u_b);

[[nodiscard]] ControlComparison compare_lambda_h(const Trajectory& run_a, const Trajectory& run_b);

} // namespace dlsctl
