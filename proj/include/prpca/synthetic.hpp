#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "prpca/appearance.hpp"
#include "prpca/geometry.hpp"

namespace prpca {

/// Bright square moving over a Gaussian-noise background, with an optional occlusion band.
struct SquareSequenceSpec {
    int width = 128;
    int height = 128;
    int frames = 100;
    int square = 20;
    int start_x = 10;          ///< left edge of the square in frame 1
    int start_y = 54;          ///< top edge of the square in frame 1
    int step_x = 2;            ///< px per frame; the square bounces off the frame margins
    int step_y = 0;
    int margin = 10;           ///< the square keeps at least this many px from every border
    double background = 0.3;
    double foreground = 0.6;
    double noise_sigma = 0.03;
    int occlusion_first = 0;   ///< 1-based first occluded frame; 0 disables occlusion
    int occlusion_frames = 0;
    double occlusion_fraction = 0.5;  ///< leftmost share of the square set to zero
    std::uint64_t seed = 7;
};

struct SyntheticSequence {
    std::vector<GrayImage> frames;
    std::vector<BoundingBox> ground_truth;
    std::vector<bool> occluded;
};

SyntheticSequence make_square_sequence(const SquareSequenceSpec& spec);

/// Rank-`rank` plus sparse test matrix: L0 = A B^T with standard normal factors, S0 with
/// round(density * rows * cols) entries of random sign and magnitude uniform in [lo, hi].
struct LowRankSparseInstance {
    Eigen::MatrixXd low_rank;
    Eigen::MatrixXd sparse;
    Eigen::MatrixXd observed;
};

LowRankSparseInstance make_low_rank_sparse(Eigen::Index rows, Eigen::Index cols, Eigen::Index rank,
                                           double density, double lo, double hi, std::uint64_t seed);

}  // namespace prpca
