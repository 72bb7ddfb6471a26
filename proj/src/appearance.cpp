#include "prpca/appearance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "prpca/error.hpp"

namespace prpca {

void TemplateMatrix::validate() const {
    if (patch_w < 1 || patch_h < 1) throw InputError("template patch size must be positive");
    if (columns.rows() != static_cast<Eigen::Index>(patch_w) * patch_h)
        throw InputError("template length does not match patch size");
    if (columns.cols() < 2) throw InputError("at least two templates are required");
    if (weights.size() != columns.cols()) throw InputError("one weight per template is required");
    if ((weights.array() < 0.0).any()) throw InputError("template weights must be nonnegative");
    if (std::abs(weights.sum() - 1.0) > 1e-9) throw InputError("template weights must sum to 1");
}

Eigen::VectorXd extract_patch(const GrayImage& image, const AffineState& state, int patch_w, int patch_h) {
    if (image.size() == 0) throw InputError("extract_patch: empty image");
    if (patch_w < 1 || patch_h < 1) throw InputError("extract_patch: patch size must be positive");

    const Eigen::Index rows = image.rows();
    const Eigen::Index cols = image.cols();
    auto pixel = [&](Eigen::Index r, Eigen::Index c) {
        return (r < 0 || c < 0 || r >= rows || c >= cols) ? 0.0 : image(r, c);
    };

    Eigen::VectorXd out(static_cast<Eigen::Index>(patch_w) * patch_h);
    bool touched = false;
    for (int k = 0; k < patch_w; ++k) {
        const double u = k + 0.5 - patch_w / 2.0;
        for (int l = 0; l < patch_h; ++l) {
            const double v = l + 0.5 - patch_h / 2.0;
            const Eigen::Vector2d p = state.warp(u, v);
            // continuous pixel-index coordinates: pixel centres at integers
            const double xi = p.x() - 0.5;
            const double yi = p.y() - 0.5;
            double value = 0.0;
            if (xi > -1.0 && yi > -1.0 && xi < static_cast<double>(cols) && yi < static_cast<double>(rows)) {
                touched = true;
                const double xf = std::floor(xi);
                const double yf = std::floor(yi);
                const double ax = xi - xf;
                const double ay = yi - yf;
                const auto c0 = static_cast<Eigen::Index>(xf);
                const auto r0 = static_cast<Eigen::Index>(yf);
                value = (1.0 - ay) * ((1.0 - ax) * pixel(r0, c0) + ax * pixel(r0, c0 + 1)) +
                        ay * ((1.0 - ax) * pixel(r0 + 1, c0) + ax * pixel(r0 + 1, c0 + 1));
            }
            out(static_cast<Eigen::Index>(k) * patch_h + l) = std::clamp(value, 0.0, 1.0);
        }
    }
    if (!touched) throw InvalidParticle("extract_patch: footprint lies entirely outside the frame");
    return out;
}

ObservationMatrix build_observation(const TemplateMatrix& templates, const Eigen::Ref<const Eigen::VectorXd>& candidate) {
    if (candidate.size() != templates.length())
        throw InputError("build_observation: candidate length does not match template length");
    ObservationMatrix m;
    m.data.resize(templates.length(), templates.count() + 1);
    m.data.leftCols(templates.count()) = templates.columns;
    m.data.col(templates.count()) = candidate;
    return m;
}

ReconstructionError reconstruction_error(const ObservationMatrix& m, const Decomposition& d) {
    if (d.low_rank.rows() != m.data.rows() || d.low_rank.cols() != m.data.cols() ||
        d.sparse.rows() != m.data.rows() || d.sparse.cols() != m.data.cols())
        throw InputError("reconstruction_error: shape mismatch");
    return {m.data - d.low_rank - d.sparse};
}

Eigen::MatrixXd target_residual(const ObservationMatrix& m, const Decomposition& d) {
    if (d.low_rank.rows() != m.data.rows() || d.low_rank.cols() != m.data.cols())
        throw InputError("target_residual: shape mismatch");
    return m.data - d.low_rank;
}

Eigen::MatrixXd appearance_residual(const ObservationMatrix& m, const Decomposition& d,
                                    const Eigen::Ref<const Eigen::VectorXd>& weights) {
    Eigen::MatrixXd r = target_residual(m, d);
    const Eigen::Index i = m.template_count();
    if (weights.size() != i) throw InputError("appearance_residual: one weight per template is required");
    r.col(i) = m.data.col(i) - d.low_rank.leftCols(i) * weights;
    return r;
}

double log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& eps_candidate, double sigma_eps) {
    if (!(sigma_eps > 0.0) || !std::isfinite(sigma_eps)) throw InputError("sigma_eps must be positive");
    const double norm_const = -0.5 * std::log(2.0 * std::numbers::pi);
    return norm_const - eps_candidate.squaredNorm() / (2.0 * sigma_eps * sigma_eps);
}

double likelihood(const Eigen::Ref<const Eigen::VectorXd>& eps_candidate, double sigma_eps) {
    if (!(sigma_eps > 0.0) || !std::isfinite(sigma_eps)) throw InputError("sigma_eps must be positive");
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    const double q = eps_candidate.squaredNorm() / (2.0 * sigma_eps * sigma_eps);
    return std::max(inv_sqrt_2pi * std::exp(-q), std::numeric_limits<double>::denorm_min());
}

}  // namespace prpca
