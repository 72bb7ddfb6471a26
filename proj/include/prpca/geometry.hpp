#pragma once

#include <array>

#include <Eigen/Core>

namespace prpca {

/// Axis-aligned rectangle in pixel coordinates; (x, y) is the top-left corner.
struct BoundingBox {
    double x = 0.0;
    double y = 0.0;
    double w = 1.0;
    double h = 1.0;

    bool valid() const { return w > 0.0 && h > 0.0; }
    double center_x() const { return x + w / 2.0; }
    double center_y() const { return y + h / 2.0; }
    double area() const { return w * h; }

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Six-parameter affine particle state.
///
/// The patch grid point (u, v), measured in patch pixels from the patch centre, lands on image
/// point (pos_w, pos_h) + R(angle) * [scale, scale * skew; 0, scale * aspect] * (u, v).
/// Image pixel (c, r) covers [c, c + 1) x [r, r + 1), so its centre sits at (c + 0.5, r + 0.5).
struct AffineState {
    double pos_h = 0.0;   ///< centre row coordinate, pixels
    double pos_w = 0.0;   ///< centre column coordinate, pixels
    double scale = 1.0;   ///< image pixels per patch pixel horizontally
    double aspect = 1.0;  ///< vertical / horizontal scale ratio
    double angle = 0.0;   ///< rotation, radians
    double skew = 0.0;    ///< shear coefficient

    /// Maps a patch-centred offset (u, v) to image coordinates (x, y).
    Eigen::Vector2d warp(double u, double v) const;

    friend bool operator==(const AffineState&, const AffineState&) = default;
};

/// State whose untransformed patch footprint is exactly `box`.
AffineState state_from_box(const BoundingBox& box, int patch_w, int patch_h);

/// Corners of the warped patch footprint, clockwise from the top-left.
std::array<Eigen::Vector2d, 4> footprint_corners(const AffineState& state, int patch_w, int patch_h);

/// Axis-aligned hull of the warped patch footprint.
BoundingBox box_from_state(const AffineState& state, int patch_w, int patch_h);

}  // namespace prpca
