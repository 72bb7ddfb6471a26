#include "prpca/rpca_admm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prpca/error.hpp"
#include "prpca/proximal.hpp"

namespace prpca {

namespace {

void require_same_shape(const Eigen::Ref<const Eigen::MatrixXd>& a,
                        const Eigen::Ref<const Eigen::MatrixXd>& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InputError(std::string("shape mismatch: ") + what);
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError(std::string(what) + " must be positive");
}

}  // namespace

void SolverConfig::validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("solver p must lie in [0, 1]");
    if (!(rho > 0.0 && rho < 1.0)) throw InputError("solver rho must lie in (0, 1)");
    if (mu0 && (!(*mu0 > 0.0) || !std::isfinite(*mu0))) throw InputError("solver mu0 must be positive");
    if (lambda_reg && (!(*lambda_reg > 0.0) || !std::isfinite(*lambda_reg)))
        throw InputError("solver lambda must be positive");
    if (!(tol > 0.0)) throw InputError("solver tol must be positive");
    if (max_iter < 1) throw InputError("solver max_iter must be at least 1");
}

double default_lambda(std::size_t rows, std::size_t templates) {
    if (rows < 1 || templates < 1) throw InputError("default_lambda needs rows >= 1 and templates >= 1");
    return std::sqrt(static_cast<double>(std::max(rows, templates + 1))) / 10.0;
}

double rpca_lambda(std::size_t rows, std::size_t templates) {
    if (rows < 1 || templates < 1) throw InputError("rpca_lambda needs rows >= 1 and templates >= 1");
    return 1.0 / std::sqrt(static_cast<double>(std::max(rows, templates + 1)));
}

double resolve_lambda(const SolverConfig& cfg, Eigen::Index rows, Eigen::Index cols) {
    if (cfg.lambda_reg) return *cfg.lambda_reg;
    // an observation matrix carries templates + 1 columns
    const auto j = static_cast<std::size_t>(rows);
    const auto i = static_cast<std::size_t>(std::max<Eigen::Index>(cols - 1, 1));
    return cfg.lambda_rule == LambdaRule::kInverseSqrt ? rpca_lambda(j, i) : default_lambda(j, i);
}

Eigen::MatrixXd s_step(const Eigen::Ref<const Eigen::MatrixXd>& m,
                       const Eigen::Ref<const Eigen::MatrixXd>& low_rank,
                       const Eigen::Ref<const Eigen::MatrixXd>& multiplier_term,
                       double mu, double lambda_reg, double p) {
    require_same_shape(m, low_rank, "M vs L");
    require_same_shape(m, multiplier_term, "M vs I");
    require_positive(mu, "mu");
    require_positive(lambda_reg, "lambda");
    return p_shrink_matrix(m - low_rank + multiplier_term, lambda_reg * mu, p);
}

CanonicalSvd canonical_svd(const Eigen::Ref<const Eigen::MatrixXd>& x) {
    if (!x.allFinite()) throw NumericError("SVD of a non-finite matrix");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    CanonicalSvd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
    for (Eigen::Index k = 0; k < out.u.cols(); ++k) {
        Eigen::Index arg = 0;
        out.u.col(k).cwiseAbs().maxCoeff(&arg);
        if (out.u(arg, k) < 0.0) {
            out.u.col(k) = -out.u.col(k);
            out.v.col(k) = -out.v.col(k);
        }
    }
    return out;
}

Eigen::MatrixXd l_step(const Eigen::Ref<const Eigen::MatrixXd>& m,
                       const Eigen::Ref<const Eigen::MatrixXd>& sparse,
                       const Eigen::Ref<const Eigen::MatrixXd>& multiplier_term,
                       double mu, double p) {
    require_same_shape(m, sparse, "M vs S");
    require_same_shape(m, multiplier_term, "M vs I");
    require_positive(mu, "mu");
    const CanonicalSvd svd = canonical_svd(m - sparse + multiplier_term);
    const Eigen::VectorXd shrunk = p_shrink_matrix(svd.singular_values, mu, p);
    Eigen::Index rank = 0;
    while (rank < shrunk.size() && shrunk(rank) > 0.0) ++rank;
    if (rank == 0) return Eigen::MatrixXd::Zero(m.rows(), m.cols());
    return svd.u.leftCols(rank) * shrunk.head(rank).asDiagonal() * svd.v.leftCols(rank).transpose();
}

Eigen::MatrixXd multiplier_update(const Eigen::Ref<const Eigen::MatrixXd>& multiplier,
                                  const Eigen::Ref<const Eigen::MatrixXd>& m,
                                  const Eigen::Ref<const Eigen::MatrixXd>& low_rank,
                                  const Eigen::Ref<const Eigen::MatrixXd>& sparse, double mu) {
    require_same_shape(m, multiplier, "M vs I");
    require_same_shape(m, low_rank, "M vs L");
    require_same_shape(m, sparse, "M vs S");
    require_positive(mu, "mu");
    return multiplier + (m - low_rank - sparse) / mu;
}

Decomposition decompose(const Eigen::Ref<const Eigen::MatrixXd>& m, const SolverConfig& cfg,
                        const IterationObserver& observer, const Eigen::MatrixXd* initial_low_rank) {
    cfg.validate();
    if (m.size() == 0) throw InputError("decompose: empty matrix");
    if (!m.allFinite()) throw InputError("decompose: matrix has non-finite entries");

    Decomposition out;
    out.low_rank = Eigen::MatrixXd::Zero(m.rows(), m.cols());
    out.sparse = Eigen::MatrixXd::Zero(m.rows(), m.cols());
    out.multiplier = Eigen::MatrixXd::Zero(m.rows(), m.cols());

    const double m_norm = m.norm();
    if (m_norm == 0.0) {
        out.iterations = 1;
        out.final_residual = 0.0;
        out.converged = true;
        return out;
    }
    if (initial_low_rank) {
        require_same_shape(m, *initial_low_rank, "M vs warm-start L");
        out.low_rank = *initial_low_rank;
    }

    const double lambda_reg = resolve_lambda(cfg, m.rows(), m.cols());
    double mu = cfg.mu0 ? *cfg.mu0 : 0.99 * canonical_svd(m).singular_values(0);
    if (!std::isfinite(mu)) throw SolverDivergence("decompose: spectral norm of M overflows", 0);

    Eigen::MatrixXd scaled(m.rows(), m.cols());
    for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
        scaled = mu * out.multiplier;
        out.sparse = s_step(m, out.low_rank, scaled, mu, lambda_reg, cfg.p);
        out.low_rank = l_step(m, out.sparse, scaled, mu, cfg.p);
        out.multiplier = multiplier_update(out.multiplier, m, out.low_rank, out.sparse, mu);

        const double residual = (m - out.low_rank - out.sparse).norm() / m_norm;
        if (!std::isfinite(residual) || !out.multiplier.allFinite())
            throw SolverDivergence("decompose: residual became non-finite at iteration " + std::to_string(it), it);

        out.iterations = it;
        out.final_residual = residual;
        if (observer) observer(IterationRecord{it, mu, residual, out.low_rank, out.sparse, out.multiplier});
        mu *= cfg.rho;
        if (residual < cfg.tol) {
            out.converged = true;
            break;
        }
    }
    return out;
}

}  // namespace prpca
