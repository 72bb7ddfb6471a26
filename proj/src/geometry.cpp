#include "prpca/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "prpca/error.hpp"

namespace prpca {

Eigen::Vector2d AffineState::warp(double u, double v) const {
    const double su = scale * (u + skew * v);
    const double sv = scale * aspect * v;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {pos_w + c * su - s * sv, pos_h + s * su + c * sv};
}

AffineState state_from_box(const BoundingBox& box, int patch_w, int patch_h) {
    if (!box.valid()) throw InputError("bounding box must have positive width and height");
    if (patch_w < 1 || patch_h < 1) throw InputError("patch size must be positive");
    AffineState s;
    s.pos_w = box.center_x();
    s.pos_h = box.center_y();
    s.scale = box.w / patch_w;
    s.aspect = (box.h / patch_h) / s.scale;
    return s;
}

std::array<Eigen::Vector2d, 4> footprint_corners(const AffineState& state, int patch_w, int patch_h) {
    const double hw = patch_w / 2.0;
    const double hh = patch_h / 2.0;
    return {state.warp(-hw, -hh), state.warp(hw, -hh), state.warp(hw, hh), state.warp(-hw, hh)};
}

BoundingBox box_from_state(const AffineState& state, int patch_w, int patch_h) {
    const auto corners = footprint_corners(state, patch_w, patch_h);
    double x0 = corners[0].x(), x1 = x0, y0 = corners[0].y(), y1 = y0;
    for (const auto& c : corners) {
        x0 = std::min(x0, c.x());
        x1 = std::max(x1, c.x());
        y0 = std::min(y0, c.y());
        y1 = std::max(y1, c.y());
    }
    return {x0, y0, x1 - x0, y1 - y0};
}

}  // namespace prpca
