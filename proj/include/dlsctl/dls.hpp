#pragma once

// Damped least-squares (DLS) control adjustment.
//
// For a plant  x'' = f(x, v, t, u)  sampled at t_k, the adjustment du_k of
// u_{k+1} = u_k + du_k minimizes the regularized quadratic target
//
//   P(du) = 1/2 (E - A du)^T W (E - A du) + 1/2 (B + C du)^T Lambda (B + C du)
//
// with E the acceleration error, A = df/du, W and Lambda diagonal.  The
// minimizer solves the m x m normal equations
//
//   (A^T W A + C^T Lambda C) du = A^T W E - C^T Lambda B.

#include <Eigen/Core>

#include <optional>

namespace dlsctl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Relative residual accepted for a normal-equation solve.
inline constexpr double kSolveTolerance = 1e-10;
// Condition estimate above which the normal matrix is treated as singular.
inline constexpr double kMaxConditionEstimate = 1e12;

// E_k = target acceleration - f(x_k, v_k, t_k, u_k).
struct ErrorVector {
    Vector values;
};

// A_k = df/du, n rows by m columns.
struct ControlJacobian {
    Matrix values;
};

struct ControlAdjustment {
    Vector delta_u;
};

// Weights of the DLS target.  W and Lambda are stored as their diagonals.
class DlsWeights {
public:
    // w_diag: n entries; lambda_diag: m' entries; bias: m' entries; shaping: m' x m.
    DlsWeights(Vector w_diag, Vector lambda_diag, Vector bias, Matrix shaping);

    // Rejects W or Lambda with nonzero off-diagonal entries.
    static DlsWeights from_dense(const Matrix& w, const Matrix& lambda, Vector bias, Matrix shaping);

    // Single-control reduction: Lambda = lambda, B = b, C = 1.
    static DlsWeights scalar(Vector w_diag, double lambda, double b = 0.0);

    // W = I (n), Lambda = lambda I (m), C = I, B = 0.
    static DlsWeights isotropic(Eigen::Index n, Eigen::Index m, double lambda);

    [[nodiscard]] const Vector& w_diag() const noexcept { return w_; }
    [[nodiscard]] const Vector& lambda_diag() const noexcept { return lambda_; }
    [[nodiscard]] const Vector& bias() const noexcept { return bias_; }
    [[nodiscard]] const Matrix& shaping() const noexcept { return shaping_; }

    [[nodiscard]] Eigen::Index plant_dimension() const noexcept { return w_.size(); }
    [[nodiscard]] Eigen::Index control_dimension() const noexcept { return shaping_.cols(); }

    // Scalar reductions, defined only when Lambda and B have one entry.
    [[nodiscard]] std::optional<double> lambda_scalar() const;
    [[nodiscard]] std::optional<double> b_scalar() const;

private:
    Vector w_;
    Vector lambda_;
    Vector bias_;
    Matrix shaping_;
};

// Normal matrix and right-hand side of the DLS solve.
struct NormalEquations {
    Matrix matrix;
    Vector rhs;
};

[[nodiscard]] ErrorVector compute_error(const Vector& target_accel, const Vector& f_value);

[[nodiscard]] double evaluate_target(const ErrorVector& error, const ControlJacobian& jacobian,
                                     const DlsWeights& weights, const ControlAdjustment& adjustment);

[[nodiscard]] NormalEquations assemble_normal_equations(const ErrorVector& error,
                                                        const ControlJacobian& jacobian,
                                                        const DlsWeights& weights);

// ||M du - r|| / max(||r||, ||M|| ||du||), zero when both sides vanish.
[[nodiscard]] double normal_equation_residual(const NormalEquations& system,
                                              const ControlAdjustment& adjustment);

// Throws SingularNormalMatrixError when the normal matrix is numerically singular.
[[nodiscard]] ControlAdjustment dls_solve(const ErrorVector& error, const ControlJacobian& jacobian,
                                          const DlsWeights& weights);

// du = (A^T A + lambda I)^{-1} A^T E with the m x m identity.
[[nodiscard]] ControlAdjustment dls_solve_simple(const ErrorVector& error,
                                                 const ControlJacobian& jacobian, double lambda);

} // namespace dlsctl
