#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include <Eigen/Dense>

namespace prpca {

/// How the sparse-term weight lambda is derived from the matrix shape when not set explicitly.
enum class LambdaRule {
    kInverseSqrt,  ///< 1 / sqrt(max(rows, cols)), the classic robust-PCA weight
    kScaledSqrt,   ///< sqrt(max(rows, cols)) / 10
};

/// Tunables of the low-rank + sparse ADMM solver.
struct SolverConfig {
    double p = 0.5;                         ///< shrinkage exponent in [0, 1]
    double rho = 0.9;                       ///< geometric decay of mu, in (0, 1)
    std::optional<double> mu0;              ///< initial scale; unset means 0.99 * ||M||_2
    std::optional<double> lambda_reg;       ///< sparse weight; unset means lambda_rule
    LambdaRule lambda_rule = LambdaRule::kInverseSqrt;
    double tol = 1e-5;                      ///< relative Frobenius residual tolerance
    std::size_t max_iter = 500;

    void validate() const;
};

/// Solver output: M ~ low_rank + sparse, with the Lagrange multiplier and diagnostics.
struct Decomposition {
    Eigen::MatrixXd low_rank;    ///< L, target matrix
    Eigen::MatrixXd sparse;      ///< S, occlusion matrix
    Eigen::MatrixXd multiplier;  ///< I, Lagrange multiplier (unscaled)
    std::size_t iterations = 0;
    double final_residual = 0.0;  ///< ||M - L - S||_F / ||M||_F at exit
    bool converged = false;
};

/// Snapshot handed to an iteration observer after each ADMM sweep.
struct IterationRecord {
    std::size_t iteration;  ///< 1-based
    double mu;              ///< scale used during this sweep
    double residual;        ///< relative Frobenius residual after the sweep
    const Eigen::MatrixXd& low_rank;
    const Eigen::MatrixXd& sparse;
    const Eigen::MatrixXd& multiplier;
};

using IterationObserver = std::function<void(const IterationRecord&)>;

/// sqrt(max(rows, templates + 1)) / 10.
double default_lambda(std::size_t rows, std::size_t templates);

/// 1 / sqrt(max(rows, templates + 1)).
double rpca_lambda(std::size_t rows, std::size_t templates);

/// Sparse weight the solver uses for an observation matrix of the given shape.
double resolve_lambda(const SolverConfig& cfg, Eigen::Index rows, Eigen::Index cols);

/// S update: p_shrink_matrix(M - L + Y, lambda * mu, p), Y being the multiplier term.
Eigen::MatrixXd s_step(const Eigen::Ref<const Eigen::MatrixXd>& m,
                       const Eigen::Ref<const Eigen::MatrixXd>& low_rank,
                       const Eigen::Ref<const Eigen::MatrixXd>& multiplier_term,
                       double mu, double lambda_reg, double p);

/// L update: singular-value p-shrinkage of M - S + Y with threshold mu.
Eigen::MatrixXd l_step(const Eigen::Ref<const Eigen::MatrixXd>& m,
                       const Eigen::Ref<const Eigen::MatrixXd>& sparse,
                       const Eigen::Ref<const Eigen::MatrixXd>& multiplier_term,
                       double mu, double p);

/// I + (M - L - S) / mu.
Eigen::MatrixXd multiplier_update(const Eigen::Ref<const Eigen::MatrixXd>& multiplier,
                                  const Eigen::Ref<const Eigen::MatrixXd>& m,
                                  const Eigen::Ref<const Eigen::MatrixXd>& low_rank,
                                  const Eigen::Ref<const Eigen::MatrixXd>& sparse, double mu);

/// Thin SVD with sign-canonical singular vectors: the largest-magnitude entry of every left
/// singular vector is nonnegative.
struct CanonicalSvd {
    Eigen::MatrixXd u;
    Eigen::VectorXd singular_values;
    Eigen::MatrixXd v;
};
CanonicalSvd canonical_svd(const Eigen::Ref<const Eigen::MatrixXd>& x);

/**
 * Splits M into a low-rank part L and a sparse part S.
 *
 * Starting from L = S = I = 0 and mu = mu0, each sweep runs the S update, the L update, the
 * multiplier update and mu <- rho * mu, stopping once ||M - L - S||_F / ||M||_F < tol or after
 * max_iter sweeps. Inside the two shrinkage steps the multiplier enters scaled by the current
 * mu, which keeps the iteration bounded while mu decays to zero.
 *
 * @param initial_low_rank optional warm start for L (same shape as M)
 * @throws InputError on an empty or non-finite M
 * @throws SolverDivergence when the residual becomes non-finite
 */
Decomposition decompose(const Eigen::Ref<const Eigen::MatrixXd>& m, const SolverConfig& cfg,
                        const IterationObserver& observer = {},
                        const Eigen::MatrixXd* initial_low_rank = nullptr);

}  // namespace prpca
