#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "prpca/appearance.hpp"
#include "prpca/eval.hpp"
#include "prpca/geometry.hpp"
#include "prpca/tracker.hpp"

namespace prpca {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

/// Decodes PNG/JPEG/BMP/TIFF to [0, 1] gray. Colour input uses ITU-R 601 luma weights.
GrayImage load_image(const std::filesystem::path& path);

/// Writes an 8-bit grayscale PNG (values clamped to [0, 1], rounded to 1/255).
void save_image_png(const std::filesystem::path& path, const GrayImage& image);

struct SequenceManifest {
    std::string name;
    std::vector<std::filesystem::path> frame_paths;
    std::optional<std::vector<BoundingBox>> ground_truth;
    Eigen::Index width = 0;
    Eigen::Index height = 0;
};

/// Lists the images of `dir` in lexicographic order and checks they decode with one size.
SequenceManifest load_sequence(const std::filesystem::path& dir,
                               const std::optional<std::filesystem::path>& gt_path = std::nullopt);

std::vector<GrayImage> load_frames(const SequenceManifest& manifest);

/// One box per nonempty line, `x,y,w,h` separated by commas and/or whitespace.
std::vector<BoundingBox> parse_gt(std::string_view text);

/// A single `X,Y,W,H` box.
BoundingBox parse_box(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

struct ResultRow {
    std::size_t frame = 0;
    BoundingBox box;
    double likelihood = 0.0;
    double occlusion_level = 0.0;
    bool template_replaced = false;
};

inline constexpr std::string_view kResultsHeader =
    "frame,x,y,w,h,likelihood,occlusion_level,template_replaced";

std::string format_results_csv(std::span<const FrameResult> results);
std::vector<ResultRow> parse_results_csv(std::string_view text);

/// Flat `key = value` configuration; unknown or repeated keys are errors.
TrackerConfig parse_config(std::string_view text);
std::string format_config(const TrackerConfig& cfg);

/// Dense matrix as rows of whitespace-separated numbers.
Eigen::MatrixXd parse_matrix(std::string_view text);
std::string format_matrix(const Eigen::Ref<const Eigen::MatrixXd>& m);

std::string format_per_frame_csv(std::span<const BoundingBox> predicted, const SequenceMetrics& metrics);
std::string format_summary_csv(const SequenceMetrics& metrics);
std::string format_curve_csv(const Curve& curve);
Curve parse_curve_csv(std::string_view text);

struct PlotStyle {
    std::string title;
    std::string x_label;
    std::string y_label;
    double x_min = 0.0;
    double x_max = 1.0;
};

/// Static SVG line plot on fixed axes, y in [0, 1].
std::string render_curve_svg(const Curve& curve, const PlotStyle& style);

}  // namespace prpca
