#include "dlsctl/dls.hpp"

#include "dlsctl/errors.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>
#include <string>

namespace dlsctl {

namespace {

void require_finite(const Eigen::Ref<const Matrix>& m, const char* what) {
    if (!m.allFinite()) {
        throw ConfigurationError(std::string(what) + " has non-finite entries");
    }
}

void require_size(Eigen::Index actual, Eigen::Index expected, const char* what) {
    if (actual != expected) {
        throw ConfigurationError(std::string(what) + ": expected dimension " + std::to_string(expected) +
                                 ", got " + std::to_string(actual));
    }
}

void check_consistent(const ErrorVector& error, const ControlJacobian& jacobian, const DlsWeights& weights) {
    require_finite(error.values, "error vector");
    require_finite(jacobian.values, "control Jacobian");
    require_size(error.values.size(), weights.plant_dimension(), "error vector");
    require_size(jacobian.values.rows(), weights.plant_dimension(), "control Jacobian rows");
    require_size(jacobian.values.cols(), weights.control_dimension(), "control Jacobian columns");
}

bool is_diagonal(const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (i != j && m(i, j) != 0.0) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

DlsWeights::DlsWeights(Vector w_diag, Vector lambda_diag, Vector bias, Matrix shaping)
    : w_(std::move(w_diag)), lambda_(std::move(lambda_diag)), bias_(std::move(bias)), shaping_(std::move(shaping)) {
    require_finite(w_, "W");
    require_finite(lambda_, "Lambda");
    require_finite(bias_, "B");
    require_finite(shaping_, "C");
    if (w_.size() == 0 || shaping_.cols() == 0) {
        throw ConfigurationError("DLS weights need at least one plant and one control channel");
    }
    if ((w_.array() < 0.0).any() || (lambda_.array() < 0.0).any()) {
        throw ConfigurationError("diagonal entries of W and Lambda must be nonnegative");
    }
    require_size(bias_.size(), lambda_.size(), "B");
    require_size(shaping_.rows(), lambda_.size(), "C rows");
    if (!(w_.array() > 0.0).any() && !(lambda_.array() > 0.0).any()) {
        throw ConfigurationError("W and Lambda are both zero; the normal matrix is always singular");
    }
}

DlsWeights DlsWeights::from_dense(const Matrix& w, const Matrix& lambda, Vector bias, Matrix shaping) {
    if (w.rows() != w.cols() || lambda.rows() != lambda.cols()) {
        throw ConfigurationError("W and Lambda must be square");
    }
    if (!is_diagonal(w) || !is_diagonal(lambda)) {
        throw ConfigurationError("W and Lambda must be diagonal");
    }
    return {w.diagonal(), lambda.diagonal(), std::move(bias), std::move(shaping)};
}

DlsWeights DlsWeights::scalar(Vector w_diag, double lambda, double b) {
    return {std::move(w_diag), Vector::Constant(1, lambda), Vector::Constant(1, b), Matrix::Ones(1, 1)};
}

DlsWeights DlsWeights::isotropic(Eigen::Index n, Eigen::Index m, double lambda) {
    return {Vector::Ones(n), Vector::Constant(m, lambda), Vector::Zero(m), Matrix::Identity(m, m)};
}

std::optional<double> DlsWeights::lambda_scalar() const {
    if (lambda_.size() != 1) {
        return std::nullopt;
    }
    return lambda_(0);
}

std::optional<double> DlsWeights::b_scalar() const {
    if (bias_.size() != 1) {
        return std::nullopt;
    }
    return bias_(0);
}

ErrorVector compute_error(const Vector& target_accel, const Vector& f_value) {
    require_finite(target_accel, "target acceleration");
    require_finite(f_value, "plant acceleration");
    require_size(f_value.size(), target_accel.size(), "plant acceleration");
    return {target_accel - f_value};
}

double evaluate_target(const ErrorVector& error, const ControlJacobian& jacobian, const DlsWeights& weights,
                       const ControlAdjustment& adjustment) {
    check_consistent(error, jacobian, weights);
    require_size(adjustment.delta_u.size(), weights.control_dimension(), "control adjustment");
    const Vector residual = error.values - jacobian.values * adjustment.delta_u;
    const Vector shaped = weights.bias() + weights.shaping() * adjustment.delta_u;
    const double tracking = residual.dot(weights.w_diag().cwiseProduct(residual));
    const double regularization = shaped.dot(weights.lambda_diag().cwiseProduct(shaped));
    return 0.5 * (tracking + regularization);
}

NormalEquations assemble_normal_equations(const ErrorVector& error, const ControlJacobian& jacobian,
                                          const DlsWeights& weights) {
    check_consistent(error, jacobian, weights);
    const Matrix& a = jacobian.values;
    const Matrix& c = weights.shaping();
    const auto w = weights.w_diag().asDiagonal();
    const auto lambda = weights.lambda_diag().asDiagonal();
    NormalEquations system;
    system.matrix = a.transpose() * w * a + c.transpose() * lambda * c;
    system.rhs = a.transpose() * (w * error.values) - c.transpose() * (lambda * weights.bias());
    return system;
}

double normal_equation_residual(const NormalEquations& system, const ControlAdjustment& adjustment) {
    const Vector r = system.matrix * adjustment.delta_u - system.rhs;
    const double scale =
        std::max(system.rhs.norm(), system.matrix.norm() * adjustment.delta_u.norm());
    if (scale == 0.0) {
        return r.norm();
    }
    return r.norm() / scale;
}

ControlAdjustment dls_solve(const ErrorVector& error, const ControlJacobian& jacobian, const DlsWeights& weights) {
    const NormalEquations system = assemble_normal_equations(error, jacobian, weights);

    const Eigen::LDLT<Matrix> factor(system.matrix);
    double rcond = factor.info() == Eigen::Success ? factor.rcond() : 0.0;
    // LDLT pseudo-inverts zero pivots, which hides exact singularity from rcond().
    const Vector pivots = factor.vectorD().cwiseAbs();
    if (pivots.size() > 0 && pivots.minCoeff() <= std::numeric_limits<double>::epsilon() * pivots.maxCoeff()) {
        rcond = 0.0;
    }
    const double condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(condition <= kMaxConditionEstimate)) {
        throw SingularNormalMatrixError("DLS normal matrix is singular to working precision", condition);
    }

    ControlAdjustment adjustment{factor.solve(system.rhs)};
    if (!adjustment.delta_u.allFinite() || normal_equation_residual(system, adjustment) > kSolveTolerance) {
        throw SingularNormalMatrixError("DLS solve did not meet the residual tolerance", condition);
    }
    return adjustment;
}

ControlAdjustment dls_solve_simple(const ErrorVector& error, const ControlJacobian& jacobian, double lambda) {
    if (!std::isfinite(lambda) || lambda < 0.0) {
        throw ConfigurationError("lambda must be finite and nonnegative");
    }
    return dls_solve(error, jacobian, DlsWeights::isotropic(jacobian.values.rows(), jacobian.values.cols(), lambda));
}

} // namespace dlsctl
