#pragma once

#include <cstddef>
#include <optional>

#include <Eigen/Dense>

#include "prpca/appearance.hpp"

namespace prpca {

struct UpdateThresholds {
    double psi_star_deg = 30.0;  ///< novelty angle, degrees
    double xi_star = 0.1;        ///< occlusion fraction; the gate is xi_star * j
    double w_cap = 0.3;          ///< largest weight any template may hold

    /// Throws InputError if out of range; with a template count, also requires w_cap > 1/i.
    void validate(std::optional<Eigen::Index> template_count = std::nullopt) const;
};

/// w_k * exp(-||eps(:, k)||) for every template column k.
Eigen::VectorXd decay_weights(const Eigen::Ref<const Eigen::VectorXd>& weights,
                              const Eigen::Ref<const Eigen::MatrixXd>& eps);

/// Angle between two patch vectors in degrees, in [0, 180].
double template_angle(const Eigen::Ref<const Eigen::VectorXd>& candidate,
                      const Eigen::Ref<const Eigen::VectorXd>& templ);

/// Sum of |S| over the candidate (last) column.
double occlusion_level(const Eigen::Ref<const Eigen::MatrixXd>& sparse);

/// Normalises to sum 1, then clamps every weight to `cap` and spreads the excess over the
/// uncapped entries until none exceeds it.
Eigen::VectorXd normalize_and_cap(const Eigen::Ref<const Eigen::VectorXd>& weights, double cap);

struct TemplateUpdate {
    TemplateMatrix templates;
    bool replaced = false;
    std::optional<Eigen::Index> replaced_index;
    double min_angle_deg = 0.0;
    double occlusion = 0.0;
};

/**
 * One round of template maintenance for the current tracking result.
 *
 * Weights are decayed by the template-column residual norms. If the candidate is farther
 * than psi_star from every template and the occlusion level is below xi_star * j, the
 * lowest-weight template is replaced by the candidate and given the median decayed weight.
 * Weights are then normalised and capped at w_cap.
 */
TemplateUpdate maybe_replace(const TemplateMatrix& templates, const Eigen::Ref<const Eigen::VectorXd>& candidate,
                             const Eigen::Ref<const Eigen::MatrixXd>& eps,
                             const Eigen::Ref<const Eigen::MatrixXd>& sparse, const UpdateThresholds& th);

}  // namespace prpca
