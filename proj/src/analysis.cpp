#include "dlsctl/analysis.hpp"

#include "dlsctl/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

namespace dlsctl {

namespace {

constexpr double kRootResidual = 1e-8;
constexpr double kUnitRadiusTolerance = 1e-9;

void sort_roots(std::vector<Complex>& roots) {
    std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
        if (a.imag() != b.imag()) {
            return a.imag() < b.imag();
        }
        return a.real() < b.real();
    });
}

template <typename Derived>
std::vector<Complex> eigenvalues_of(const Eigen::MatrixBase<Derived>& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
    if (solver.info() != Eigen::Success) {
        throw DiagnosticError("eigenvalue computation did not converge");
    }
    const auto values = solver.eigenvalues();
    std::vector<Complex> out(values.data(), values.data() + values.size());
    sort_roots(out);
    return out;
}

double max_abs(const std::vector<Complex>& values) {
    double radius = 0.0;
    for (const auto& value : values) {
        radius = std::max(radius, std::abs(value));
    }
    return radius;
}

Eigen::Matrix<double, 5, 1> pack(const LoopPoint& point) {
    Eigen::Matrix<double, 5, 1> z;
    z << point.u, point.state.x(0), point.state.x(1), point.state.v(0), point.state.v(1);
    return z;
}

LoopPoint unpack(const Eigen::Matrix<double, 5, 1>& z, double t) {
    return {z(0), SystemState{Eigen::Vector2d(z(1), z(2)), Eigen::Vector2d(z(3), z(4)), t}};
}

double rms(std::span<const double> values) {
    if (values.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v * v;
    }
    return std::sqrt(sum / static_cast<double>(values.size()));
}

// Linear interpolation on a sorted grid; `cursor` only moves forward.
double interpolate(std::span<const double> t, std::span<const double> y, double at, std::size_t& cursor) {
    while (cursor + 1 < t.size() && t[cursor + 1] <= at) {
        ++cursor;
    }
    if (cursor + 1 >= t.size() || t[cursor] == at) {
        return y[cursor];
    }
    const double w = (at - t[cursor]) / (t[cursor + 1] - t[cursor]);
    return y[cursor] + w * (y[cursor + 1] - y[cursor]);
}

double mean_spacing(std::span<const double> t) {
    return (t.back() - t.front()) / static_cast<double>(t.size() - 1);
}

} // namespace

const char* to_string(AttractionVerdict verdict) {
    switch (verdict) {
    case AttractionVerdict::sufficient:
        return "sufficient";
    case AttractionVerdict::necessary_only:
        return "necessary_only";
    case AttractionVerdict::fails:
        return "fails";
    }
    return "fails";
}

AttractionVerdict classify_radius(double radius) {
    if (radius < 1.0 - kUnitRadiusTolerance) {
        return AttractionVerdict::sufficient;
    }
    if (radius <= 1.0 + kUnitRadiusTolerance) {
        return AttractionVerdict::necessary_only;
    }
    return AttractionVerdict::fails;
}

std::array<double, 5> char_poly_coefficients(const DuffingParams& params) {
    params.validate();
    const double w = params.omega;
    const double z = params.zeta;
    const double e = params.epsilon;
    return {1.0, 2.0 * z * w, 2.0 * w * w, 2.0 * z * w * w * w, (1.0 - e * e) * w * w * w * w};
}

Complex evaluate_char_poly(const std::array<double, 5>& coefficients, Complex p) {
    Complex acc = 0.0;
    for (double c : coefficients) {
        acc = acc * p + c;
    }
    return acc;
}

Eigen::Matrix4d linearized_state_matrix(const DuffingParams& params, double u) {
    const double w = params.omega;
    const double w2 = w * w;
    Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
    a(0, 2) = 1.0;
    a(1, 3) = 1.0;
    a(2, 0) = -w2;
    a(2, 1) = params.epsilon * w2;
    a(3, 0) = params.epsilon * w2;
    a(3, 1) = -w2;
    a(2, 2) = -2.0 * params.zeta * w;
    a(3, 3) = -2.0 * u * w;
    return a;
}

std::vector<Complex> char_poly_roots(const DuffingParams& params) {
    const auto coefficients = char_poly_coefficients(params);
    // The state matrix stays diagonalizable at the resonant double roots, so its
    // eigenvalues keep full accuracy where companion-matrix roots lose half the digits.
    std::vector<Complex> roots = eigenvalues_of(linearized_state_matrix(params, 0.0));
    for (auto& root : roots) {
        for (int iter = 0; iter < 3 && std::abs(evaluate_char_poly(coefficients, root)) > kRootResidual; ++iter) {
            const Complex derivative = 4.0 * root * root * root + 3.0 * coefficients[1] * root * root +
                                       2.0 * coefficients[2] * root + coefficients[3];
            if (std::abs(derivative) == 0.0) {
                break;
            }
            root -= evaluate_char_poly(coefficients, root) / derivative;
        }
        if (std::abs(evaluate_char_poly(coefficients, root)) > kRootResidual) {
            throw DiagnosticError("characteristic root failed back-substitution");
        }
    }
    sort_roots(roots);
    return roots;
}

MapJacobian loop_map_jacobian(const DuffingParams& params, const DuffingControlConfig& config, StepSize h,
                              const SystemState& at, double u) {
    const LoopPoint base{u, at};
    const Eigen::Matrix<double, 5, 1> z0 = pack(base);
    MapJacobian jac;
    for (int j = 0; j < 5; ++j) {
        Eigen::Matrix<double, 5, 1> plus = z0;
        Eigen::Matrix<double, 5, 1> minus = z0;
        plus(j) += kMapDifferenceStep;
        minus(j) -= kMapDifferenceStep;
        const auto g_plus = pack(advance_loop(unpack(plus, at.t), params, config, h));
        const auto g_minus = pack(advance_loop(unpack(minus, at.t), params, config, h));
        jac.col(j) = (g_plus - g_minus) / (2.0 * kMapDifferenceStep);
    }
    if (!jac.allFinite()) {
        throw DiagnosticError("non-finite entries in the differentiated loop map");
    }
    return jac;
}

SpectrumReport map_jacobian_spectrum(const DuffingParams& params, const DuffingControlConfig& config, StepSize h,
                                     const SystemState& at, double u) {
    params.validate();
    config.validate();
    SpectrumReport report;
    report.jacobian = loop_map_jacobian(params, config, h, at, u);
    report.eigenvalues = eigenvalues_of(report.jacobian - MapJacobian::Identity());
    report.multipliers = eigenvalues_of(report.jacobian);
    report.spectral_radius = max_abs(report.eigenvalues);
    report.multiplier_radius = max_abs(report.multipliers);
    report.char_roots = char_poly_roots(params);
    report.attraction_verdict = classify_radius(report.spectral_radius);
    report.multiplier_verdict = classify_radius(report.multiplier_radius);
    return report;
}

double q_estimate(double omega, double v2, double lambda) {
    if (!(omega > 0.0) || !std::isfinite(v2) || !(lambda >= 0.0)) {
        throw ConfigurationError("q_estimate needs Omega > 0, finite v2 and lambda >= 0");
    }
    if (v2 == 0.0) {
        if (lambda == 0.0) {
            throw UndefinedEstimateError("q_estimate is undefined for v2 = 0 and lambda = 0");
        }
        return 0.0;
    }
    if (std::isinf(lambda)) {
        return -0.0;
    }
    const double stiffness = 4.0 * omega * omega * v2 * v2;
    return -stiffness / (stiffness + lambda);
}

std::vector<double> sliding_envelope(std::span<const double> t, std::span<const double> values, double window) {
    if (t.size() != values.size()) {
        throw ConfigurationError("time and value series differ in length");
    }
    const double half = 0.5 * window;
    std::vector<double> envelope(values.size());
    std::deque<std::size_t> candidates; // indices with decreasing |value|
    std::size_t right = 0;
    std::size_t left = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        while (right < t.size() && t[right] <= t[i] + half) {
            const double a = std::abs(values[right]);
            while (!candidates.empty() && std::abs(values[candidates.back()]) <= a) {
                candidates.pop_back();
            }
            candidates.push_back(right);
            ++right;
        }
        while (t[left] < t[i] - half) {
            ++left;
        }
        while (candidates.front() < left) {
            candidates.pop_front();
        }
        envelope[i] = std::abs(values[candidates.front()]);
    }
    return envelope;
}

BeatMetrics beat_metrics(const Trajectory& trajectory, const DuffingParams& params) {
    params.validate();
    const double period = 2.0 * std::numbers::pi / params.omega;
    if (trajectory.size() < 2 || trajectory.t.back() - trajectory.t.front() < period) {
        throw InsufficientDataError("trajectory is shorter than one linear period");
    }
    BeatMetrics m;
    m.envelope_x1 = sliding_envelope(trajectory.t, trajectory.x1, period);
    m.envelope_x2 = sliding_envelope(trajectory.t, trajectory.x2, period);

    const double w2 = params.omega * params.omega;
    const std::size_t n = trajectory.size();
    m.energy1.resize(n);
    m.energy2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.energy1[i] = 0.5 * trajectory.v1[i] * trajectory.v1[i] + 0.5 * w2 * trajectory.x1[i] * trajectory.x1[i];
        m.energy2[i] = 0.5 * trajectory.v2[i] * trajectory.v2[i] + 0.5 * w2 * trajectory.x2[i] * trajectory.x2[i];
    }

    m.max_envelope_x1 = *std::max_element(m.envelope_x1.begin(), m.envelope_x1.end());
    m.max_envelope_x2 = *std::max_element(m.envelope_x2.begin(), m.envelope_x2.end());
    const double min_envelope_x2 = *std::min_element(m.envelope_x2.begin(), m.envelope_x2.end());
    if (m.max_envelope_x2 == 0.0) {
        m.exchange_depth = 1.0;
    } else {
        m.exchange_depth = min_envelope_x2 > 0.0 ? m.max_envelope_x2 / min_envelope_x2
                                                 : std::numeric_limits<double>::infinity();
    }

    // Hysteresis keeps fast intra-period ripple from counting as an exchange.
    bool energy_in_second = false;
    bool armed = false;
    for (std::size_t i = 0; i < n; ++i) {
        const double total = m.energy1[i] + m.energy2[i];
        if (total <= 0.0) {
            continue;
        }
        const double share = m.energy2[i] / total;
        if (!energy_in_second && share > 2.0 / 3.0) {
            energy_in_second = true;
            armed = true;
        } else if (energy_in_second && share < 1.0 / 3.0) {
            energy_in_second = false;
            if (armed) {
                ++m.exchange_cycles;
                armed = false;
            }
        }
    }
    return m;
}

double max_envelope_in(std::span<const double> t, std::span<const double> envelope, double t_from, double t_to) {
    double best = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] >= t_from && t[i] <= t_to) {
            best = std::max(best, envelope[i]);
            any = true;
        }
    }
    if (!any) {
        throw InsufficientDataError("no samples inside the requested time window");
    }
    return best;
}

double suppression_ratio(const Trajectory& controlled, const Trajectory& baseline, const DuffingParams& params,
                         double t_from, double t_to) {
    const BeatMetrics c = beat_metrics(controlled, params);
    const BeatMetrics b = beat_metrics(baseline, params);
    const double denominator = max_envelope_in(baseline.t, b.envelope_x2, t_from, t_to);
    if (denominator == 0.0) {
        throw InsufficientDataError("baseline x2 envelope vanishes on the window");
    }
    return max_envelope_in(controlled.t, c.envelope_x2, t_from, t_to) / denominator;
}

double response_rms(const Trajectory& trajectory) {
    if (trajectory.empty()) {
        throw InsufficientDataError("empty trajectory");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        sum += trajectory.x1[i] * trajectory.x1[i] + trajectory.x2[i] * trajectory.x2[i];
    }
    return std::sqrt(sum / static_cast<double>(trajectory.size()));
}

ControlComparison compare_control_traces(std::span<const double> t_a, std::span<const double> u_a,
                                         std::span<const double> t_b, std::span<const double> u_b) {
    if (t_a.size() != u_a.size() || t_b.size() != u_b.size()) {
        throw ComparisonError("time and control series differ in length");
    }
    if (t_a.size() < 2 || t_b.size() < 2) {
        throw ComparisonError("each run needs at least two samples");
    }
    ControlComparison out;
    out.t_begin = std::max(t_a.front(), t_b.front());
    out.t_end = std::min(t_a.back(), t_b.back());
    if (!(out.t_begin < out.t_end)) {
        throw ComparisonError("runs do not overlap in time");
    }

    const bool a_is_coarse = mean_spacing(t_a) >= mean_spacing(t_b);
    const auto grid = a_is_coarse ? t_a : t_b;
    const auto grid_u = a_is_coarse ? u_a : u_b;
    const auto other_t = a_is_coarse ? t_b : t_a;
    const auto other_u = a_is_coarse ? u_b : u_a;

    std::vector<double> on_grid;
    std::vector<double> resampled;
    std::vector<double> difference;
    std::size_t cursor = 0;
    // Grid points within rounding of the range ends still count.
    const double slack = 1e-9 * std::max(1.0, std::abs(out.t_end));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < out.t_begin - slack || grid[i] > out.t_end + slack) {
            continue;
        }
        const double at = std::clamp(grid[i], out.t_begin, out.t_end);
        const double other = interpolate(other_t, other_u, at, cursor);
        on_grid.push_back(grid_u[i]);
        resampled.push_back(other);
        difference.push_back(grid_u[i] - other);
        out.max_deviation = std::max(out.max_deviation, std::abs(grid_u[i] - other));
    }
    out.samples = difference.size();
    out.rms_difference = rms(difference);

    const auto& trace_a = a_is_coarse ? on_grid : resampled;
    const auto& trace_b = a_is_coarse ? resampled : on_grid;
    const auto relative = [&](double reference) {
        if (out.rms_difference == 0.0) {
            return 0.0;
        }
        return reference > 0.0 ? out.rms_difference / reference : std::numeric_limits<double>::infinity();
    };
    out.relative_rms_a = relative(rms(trace_a));
    out.relative_rms_b = relative(rms(trace_b));
    out.relative_rms = std::max(out.relative_rms_a, out.relative_rms_b);
    return out;
}

ControlComparison compare_lambda_h(const Trajectory& run_a, const Trajectory& run_b) {
    return compare_control_traces(run_a.t, run_a.u, run_b.t, run_b.u);
}

} // namespace dlsctl
