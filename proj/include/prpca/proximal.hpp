#pragma once

#include <Eigen/Dense>

namespace prpca {

/// Parameters of the proximal p-norm family g_{mu,p} / h_{mu,p}.
struct PNormParams {
    double p = 0.5;   ///< exponent in [0, 1]
    double mu = 0.1;  ///< scale, > 0

    /// Throws InputError when p is outside [0,1] or mu is not a positive finite number.
    void validate() const;
};

/// Piecewise helper h_{mu,p}(t) that defines g_{mu,p} through a Legendre-Fenchel conjugate.
///
/// Quadratic |t|^2 / (2 mu) inside |t| <= mu^{1/(2-p)}; |t|^p / p - delta outside for p > 0,
/// with delta = (1/p - 1/2) mu^{p/(2-p)}; ln|t| - ln(mu)/2 + 1/2 outside for p = 0.
/// The two branches agree at the break point.
double h_value(double t, const PNormParams& params);

/// Break point mu^{1/(2-p)} between the quadratic and the power branch of h.
double h_breakpoint(const PNormParams& params);

/// p-shrinkage: sign(x) * max(0, |x| - threshold^{2-p} |x|^{p-1}).
///
/// Reduces to soft thresholding at p = 1. Inputs with |x| <= threshold map to 0, which is
/// where the formula is non-positive anyway and keeps |x|^{p-1} away from zero arguments.
double p_shrink(double x, double threshold, double p);

/// Element-wise p_shrink.
Eigen::MatrixXd p_shrink_matrix(const Eigen::Ref<const Eigen::MatrixXd>& x, double threshold, double p);

/// Scalar penalty g_{mu,p}(s), evaluated numerically from its implicit conjugate definition.
double g_scalar(double s, const PNormParams& params);

/// Proximal p-norm G_{mu,p}(X) = sum of g_{mu,p} over all entries. Diagnostic only.
double g_value(const Eigen::Ref<const Eigen::MatrixXd>& x, const PNormParams& params);

}  // namespace prpca
