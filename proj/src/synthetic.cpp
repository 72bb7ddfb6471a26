#include "prpca/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "prpca/error.hpp"
#include "prpca/particle_filter.hpp"

namespace prpca {

SyntheticSequence make_square_sequence(const SquareSequenceSpec& spec) {
    if (spec.width < 1 || spec.height < 1 || spec.frames < 1 || spec.square < 1)
        throw InputError("synthetic sequence: sizes must be positive");
    const int lo_x = spec.margin, hi_x = spec.width - spec.margin - spec.square;
    const int lo_y = spec.margin, hi_y = spec.height - spec.margin - spec.square;
    if (hi_x < lo_x || hi_y < lo_y) throw InputError("synthetic sequence: square does not fit");

    SyntheticSequence seq;
    Rng rng = stream_rng(spec.seed, 0, 0);
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);

    int x = std::clamp(spec.start_x, lo_x, hi_x);
    int y = std::clamp(spec.start_y, lo_y, hi_y);
    int vx = spec.step_x, vy = spec.step_y;
    for (int t = 1; t <= spec.frames; ++t) {
        if (t > 1) {
            if (x + vx < lo_x || x + vx > hi_x) vx = -vx;
            if (y + vy < lo_y || y + vy > hi_y) vy = -vy;
            x += vx;
            y += vy;
        }
        GrayImage img(spec.height, spec.width);
        for (int r = 0; r < spec.height; ++r)
            for (int c = 0; c < spec.width; ++c) img(r, c) = spec.background + noise(rng);
        for (int r = y; r < y + spec.square; ++r)
            for (int c = x; c < x + spec.square; ++c) img(r, c) = spec.foreground + noise(rng);

        const bool occluded = spec.occlusion_first > 0 && t >= spec.occlusion_first &&
                              t < spec.occlusion_first + spec.occlusion_frames;
        if (occluded) {
            const int cover = static_cast<int>(std::lround(spec.occlusion_fraction * spec.square));
            img.block(y, x, spec.square, cover).setZero();
        }
        img = img.cwiseMax(0.0).cwiseMin(1.0);
        seq.frames.push_back(std::move(img));
        seq.ground_truth.push_back({static_cast<double>(x), static_cast<double>(y),
                                    static_cast<double>(spec.square), static_cast<double>(spec.square)});
        seq.occluded.push_back(occluded);
    }
    return seq;
}

LowRankSparseInstance make_low_rank_sparse(Eigen::Index rows, Eigen::Index cols, Eigen::Index rank,
                                           double density, double lo, double hi, std::uint64_t seed) {
    if (rows < 1 || cols < 1 || rank < 1) throw InputError("low-rank instance: sizes must be positive");
    Rng rng = stream_rng(seed, 0, 0);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd a(rows, rank), b(cols, rank);
    for (Eigen::Index k = 0; k < a.size(); ++k) a.data()[k] = normal(rng);
    for (Eigen::Index k = 0; k < b.size(); ++k) b.data()[k] = normal(rng);

    LowRankSparseInstance out;
    out.low_rank = a * b.transpose();
    out.sparse = Eigen::MatrixXd::Zero(rows, cols);

    const auto total = static_cast<std::size_t>(rows * cols);
    const auto count = static_cast<std::size_t>(std::lround(density * static_cast<double>(total)));
    std::vector<std::size_t> idx(total);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t r = k + static_cast<std::size_t>(rng() % (total - k));
        std::swap(idx[k], idx[r]);
    }
    std::uniform_real_distribution<double> mag(lo, hi);
    for (std::size_t k = 0; k < count; ++k) {
        const double sign = (rng() & 1u) ? 1.0 : -1.0;
        out.sparse.data()[idx[k]] = sign * mag(rng);
    }
    out.observed = out.low_rank + out.sparse;
    return out;
}

}  // namespace prpca
