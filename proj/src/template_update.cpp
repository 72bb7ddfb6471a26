#include "prpca/template_update.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "prpca/error.hpp"

namespace prpca {

void UpdateThresholds::validate(std::optional<Eigen::Index> template_count) const {
    if (!(psi_star_deg > 0.0 && psi_star_deg < 90.0)) throw InputError("psi_star must lie in (0, 90) degrees");
    if (!(xi_star >= 0.0 && xi_star <= 1.0)) throw InputError("xi_star must lie in [0, 1]");
    if (!(w_cap > 0.0 && w_cap <= 1.0)) throw InputError("w_cap must lie in (0, 1]");
    if (template_count && !(w_cap > 1.0 / static_cast<double>(*template_count)))
        throw InputError("w_cap must exceed 1 / template count");
}

Eigen::VectorXd decay_weights(const Eigen::Ref<const Eigen::VectorXd>& weights,
                              const Eigen::Ref<const Eigen::MatrixXd>& eps) {
    if (eps.cols() < weights.size()) throw InputError("decay_weights: residual has fewer columns than templates");
    Eigen::VectorXd out(weights.size());
    for (Eigen::Index k = 0; k < weights.size(); ++k) out(k) = weights(k) * std::exp(-eps.col(k).norm());
    return out;
}

double template_angle(const Eigen::Ref<const Eigen::VectorXd>& candidate,
                      const Eigen::Ref<const Eigen::VectorXd>& templ) {
    if (candidate.size() != templ.size()) throw InputError("template_angle: length mismatch");
    const double na = candidate.norm();
    const double nb = templ.norm();
    if (na == 0.0 || nb == 0.0) throw InputError("template_angle: zero vector");
    const double cosine = std::clamp(candidate.dot(templ) / (na * nb), -1.0, 1.0);
    return std::acos(cosine) * 180.0 / std::numbers::pi;
}

double occlusion_level(const Eigen::Ref<const Eigen::MatrixXd>& sparse) {
    if (sparse.cols() < 1) throw InputError("occlusion_level: empty matrix");
    return sparse.col(sparse.cols() - 1).cwiseAbs().sum();
}

Eigen::VectorXd normalize_and_cap(const Eigen::Ref<const Eigen::VectorXd>& weights, double cap) {
    const Eigen::Index n = weights.size();
    if (n == 0) throw InputError("normalize_and_cap: no weights");
    if (!(cap * static_cast<double>(n) >= 1.0)) throw InputError("normalize_and_cap: cap too small for the count");
    const double total = weights.sum();
    if (!(total > 0.0) || (weights.array() < 0.0).any())
        throw InputError("normalize_and_cap: weights must be nonnegative with a positive sum");

    Eigen::VectorXd w = weights / total;
    if (w.maxCoeff() <= cap) return w;

    std::vector<bool> capped(static_cast<std::size_t>(n), false);
    for (;;) {
        Eigen::Index n_capped = 0;
        double free_mass = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            if (!capped[k] && w(k) > cap) capped[k] = true;
            if (capped[k])
                ++n_capped;
            else
                free_mass += w(k);
        }
        const double budget = 1.0 - cap * static_cast<double>(n_capped);
        bool again = false;
        for (Eigen::Index k = 0; k < n; ++k) {
            if (capped[k]) {
                w(k) = cap;
            } else {
                // all-zero remainder: share the budget evenly
                w(k) = free_mass > 0.0 ? w(k) * budget / free_mass
                                       : budget / static_cast<double>(n - n_capped);
                again = again || w(k) > cap;
            }
        }
        if (!again) break;
    }
    return w;
}

namespace {

double median(Eigen::VectorXd v) {
    std::sort(v.data(), v.data() + v.size());
    const Eigen::Index n = v.size();
    return n % 2 == 1 ? v(n / 2) : 0.5 * (v(n / 2 - 1) + v(n / 2));
}

}  // namespace

TemplateUpdate maybe_replace(const TemplateMatrix& templates, const Eigen::Ref<const Eigen::VectorXd>& candidate,
                             const Eigen::Ref<const Eigen::MatrixXd>& eps,
                             const Eigen::Ref<const Eigen::MatrixXd>& sparse, const UpdateThresholds& th) {
    templates.validate();
    th.validate(templates.count());
    if (candidate.size() != templates.length()) throw InputError("maybe_replace: candidate length mismatch");
    if (eps.rows() != templates.length() || sparse.rows() != templates.length() ||
        sparse.cols() != templates.count() + 1)
        throw InputError("maybe_replace: residual shape mismatch");

    TemplateUpdate out;
    out.templates = templates;

    Eigen::VectorXd w = decay_weights(templates.weights, eps);

    double min_angle = 180.0;
    for (Eigen::Index k = 0; k < templates.count(); ++k)
        min_angle = std::min(min_angle, template_angle(candidate, templates.columns.col(k)));
    out.min_angle_deg = min_angle;
    out.occlusion = occlusion_level(sparse);

    const double gate = th.xi_star * static_cast<double>(templates.length());
    if (min_angle > th.psi_star_deg && out.occlusion < gate) {
        Eigen::Index victim = 0;
        w.minCoeff(&victim);  // first minimum on ties
        const double new_weight = median(w);
        out.templates.columns.col(victim) = candidate;
        w(victim) = new_weight;
        out.replaced = true;
        out.replaced_index = victim;
    }
    // every weight underflowed: fall back to a uniform distribution
    if (!(w.sum() > 0.0)) w.setOnes();
    out.templates.weights = normalize_and_cap(w, th.w_cap);
    return out;
}

}  // namespace prpca
