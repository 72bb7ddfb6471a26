#pragma once

#include <span>
#include <vector>

#include "prpca/geometry.hpp"

namespace prpca {

/// Distance between box centres, in pixels.
double center_distance(const BoundingBox& pred, const BoundingBox& gt);

/// Centre distance normalised by the ground-truth diagonal.
double center_error(const BoundingBox& pred, const BoundingBox& gt);

/// Intersection over union of two axis-aligned boxes.
double aos(const BoundingBox& pred, const BoundingBox& gt);

struct CurvePoint {
    double threshold;
    double value;
};
using Curve = std::vector<CurvePoint>;

/// 0, 1, ..., 50 px.
std::vector<double> default_precision_thresholds();
/// 0, 0.05, ..., 1.
std::vector<double> default_success_thresholds();

/// Fraction of frames whose centre distance is strictly below each threshold.
Curve precision_curve(std::span<const double> errors_px, std::span<const double> thresholds);

/// Fraction of frames whose overlap is strictly above each threshold.
Curve success_curve(std::span<const double> aos_values, std::span<const double> thresholds);

struct SequenceMetrics {
    std::vector<double> per_frame_eps0;
    std::vector<double> per_frame_aos;
    std::vector<double> per_frame_distance_px;
    double mean_eps0 = 0.0;
    double mean_aos = 0.0;
};

SequenceMetrics summarize(std::span<const BoundingBox> predicted, std::span<const BoundingBox> gt);

}  // namespace prpca
