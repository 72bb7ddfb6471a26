#include "prpca/eval.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prpca/error.hpp"

namespace prpca {

namespace {

void require_valid(const BoundingBox& b, const char* what) {
    if (!b.valid()) throw InputError(std::string(what) + " box must have positive width and height");
}

void require_ascending(std::span<const double> t) {
    if (!std::is_sorted(t.begin(), t.end())) throw InputError("curve thresholds must be ascending");
}

}  // namespace

double center_distance(const BoundingBox& pred, const BoundingBox& gt) {
    require_valid(pred, "predicted");
    require_valid(gt, "ground-truth");
    return std::hypot(pred.center_x() - gt.center_x(), pred.center_y() - gt.center_y());
}

double center_error(const BoundingBox& pred, const BoundingBox& gt) {
    return center_distance(pred, gt) / std::hypot(gt.w, gt.h);
}

double aos(const BoundingBox& pred, const BoundingBox& gt) {
    require_valid(pred, "predicted");
    require_valid(gt, "ground-truth");
    const double ix = std::max(0.0, std::min(pred.x + pred.w, gt.x + gt.w) - std::max(pred.x, gt.x));
    const double iy = std::max(0.0, std::min(pred.y + pred.h, gt.y + gt.h) - std::max(pred.y, gt.y));
    const double inter = ix * iy;
    const double uni = pred.area() + gt.area() - inter;
    return std::clamp(inter / uni, 0.0, 1.0);
}

std::vector<double> default_precision_thresholds() {
    std::vector<double> t;
    for (int k = 0; k <= 50; ++k) t.push_back(k);
    return t;
}

std::vector<double> default_success_thresholds() {
    std::vector<double> t;
    for (int k = 0; k <= 20; ++k) t.push_back(k / 20.0);
    return t;
}

Curve precision_curve(std::span<const double> errors_px, std::span<const double> thresholds) {
    if (errors_px.empty()) throw InputError("precision_curve: no frames");
    require_ascending(thresholds);
    Curve out;
    out.reserve(thresholds.size());
    const auto n = static_cast<double>(errors_px.size());
    for (double t : thresholds) {
        const auto hits = std::count_if(errors_px.begin(), errors_px.end(), [t](double e) { return e < t; });
        out.push_back({t, static_cast<double>(hits) / n});
    }
    return out;
}

Curve success_curve(std::span<const double> aos_values, std::span<const double> thresholds) {
    if (aos_values.empty()) throw InputError("success_curve: no frames");
    require_ascending(thresholds);
    Curve out;
    out.reserve(thresholds.size());
    const auto n = static_cast<double>(aos_values.size());
    for (double t : thresholds) {
        const auto hits = std::count_if(aos_values.begin(), aos_values.end(), [t](double a) { return a > t; });
        out.push_back({t, static_cast<double>(hits) / n});
    }
    return out;
}

SequenceMetrics summarize(std::span<const BoundingBox> predicted, std::span<const BoundingBox> gt) {
    if (predicted.size() != gt.size()) throw InputError("summarize: result and ground-truth counts differ");
    if (predicted.empty()) throw InputError("summarize: no frames");
    SequenceMetrics m;
    for (std::size_t k = 0; k < predicted.size(); ++k) {
        m.per_frame_eps0.push_back(center_error(predicted[k], gt[k]));
        m.per_frame_aos.push_back(aos(predicted[k], gt[k]));
        m.per_frame_distance_px.push_back(center_distance(predicted[k], gt[k]));
    }
    const auto n = static_cast<double>(predicted.size());
    for (double e : m.per_frame_eps0) m.mean_eps0 += e;
    for (double a : m.per_frame_aos) m.mean_aos += a;
    m.mean_eps0 /= n;
    m.mean_aos /= n;
    return m;
}

}  // namespace prpca
