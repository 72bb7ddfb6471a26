#pragma once

#include <Eigen/Dense>

#include "prpca/geometry.hpp"
#include "prpca/rpca_admm.hpp"

namespace prpca {

/// Grayscale frame, intensities in [0, 1]; rows index y, columns index x.
using GrayImage = Eigen::MatrixXd;

/// Template dictionary F: one column-stacked patch per template plus its importance weight.
struct TemplateMatrix {
    Eigen::MatrixXd columns;  ///< j x i
    int patch_w = 0;
    int patch_h = 0;
    Eigen::VectorXd weights;  ///< i entries, nonnegative, summing to 1

    Eigen::Index count() const { return columns.cols(); }
    Eigen::Index length() const { return columns.rows(); }

    /// Throws InputError unless i >= 2, j = patch_w * patch_h and the weights are a distribution.
    void validate() const;
};

/// M = [F, m]: template columns followed by the candidate column.
struct ObservationMatrix {
    Eigen::MatrixXd data;

    Eigen::Index template_count() const { return data.cols() - 1; }
    auto candidate() const { return data.col(data.cols() - 1); }
};

/// Residual matrix M - L - S.
struct ReconstructionError {
    Eigen::MatrixXd eps;
};

/**
 * Samples a patch_w x patch_h grid through the affine warp of `state`.
 *
 * Bilinear interpolation, zero outside the frame, column-stacked (column-major over the
 * patch), values clamped to [0, 1].
 *
 * @throws InvalidParticle when no sample touches the frame
 */
Eigen::VectorXd extract_patch(const GrayImage& image, const AffineState& state, int patch_w, int patch_h);

ObservationMatrix build_observation(const TemplateMatrix& templates, const Eigen::Ref<const Eigen::VectorXd>& candidate);

ReconstructionError reconstruction_error(const ObservationMatrix& m, const Decomposition& d);

/// M - L: what the low-rank target fails to explain (occlusion plus reconstruction error).
Eigen::MatrixXd target_residual(const ObservationMatrix& m, const Decomposition& d);

/// M - L on the template columns; the candidate column is m - L_F w, the candidate measured
/// against the weighted low-rank template appearance instead of its own low-rank column.
Eigen::MatrixXd appearance_residual(const ObservationMatrix& m, const Decomposition& d,
                                    const Eigen::Ref<const Eigen::VectorXd>& weights);

/// log of (1/sqrt(2 pi)) * prod exp(-eps^2 / (2 sigma^2)).
double log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& eps_candidate, double sigma_eps);

/// exp(log_likelihood), floored at the smallest positive double.
double likelihood(const Eigen::Ref<const Eigen::VectorXd>& eps_candidate, double sigma_eps);

}  // namespace prpca
