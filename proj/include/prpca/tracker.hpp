#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "prpca/appearance.hpp"
#include "prpca/geometry.hpp"
#include "prpca/particle_filter.hpp"
#include "prpca/rpca_admm.hpp"
#include "prpca/template_update.hpp"

namespace prpca {

/// Which residual column feeds the particle likelihood and the template weight decay.
enum class ResidualMode {
    kAppearance,      ///< candidate against the weighted low-rank templates, see appearance_residual
    kTarget,          ///< M - L: everything the low-rank target does not explain
    kReconstruction,  ///< M - L - S
};

struct TrackerConfig {
    int template_count = 10;
    int particle_count = 500;
    int patch_w = 32;
    int patch_h = 32;
    SolverConfig solver;
    TransitionCovariance transition;
    UpdateThresholds thresholds;
    double sigma_eps = 0.05;
    std::uint64_t rng_seed = 0;
    ResidualMode residual = ResidualMode::kAppearance;
    bool warm_start = false;
    int workers = 0;  ///< 0 picks std::thread::hardware_concurrency(); never affects results

    void validate() const;
};

struct FrameResult {
    std::size_t frame_index = 0;  ///< 1-based
    AffineState map_state;
    BoundingBox box;
    double map_likelihood = 0.0;
    double map_log_likelihood = 0.0;
    double occlusion_level = 0.0;
    bool template_replaced = false;
    std::size_t solver_iterations = 0;
    bool recovered = false;  ///< the particle set degenerated and was re-seeded
};

/// Single-target tracker: particle filter over affine states scored by low-rank + sparse
/// decomposition of [templates, candidate].
class Tracker {
public:
    /// Builds the template dictionary from the first frame and seeds every particle at `box`.
    Tracker(const GrayImage& first_frame, const BoundingBox& box, TrackerConfig cfg);

    /// Result reported for the first frame: the initial box itself.
    const FrameResult& initial_result() const { return initial_; }

    /// Processes the next frame.
    FrameResult step(const GrayImage& frame);

    const TemplateMatrix& templates() const { return templates_; }
    const ParticleSet& particles() const { return particles_; }
    const TrackerConfig& config() const { return cfg_; }

private:
    struct Candidate {
        AffineState state;
        double log_likelihood;
        std::size_t iterations;
        bool valid;
    };

    Candidate evaluate(const GrayImage& frame, const AffineState& proposal) const;
    Decomposition solve(const ObservationMatrix& m) const;
    Eigen::MatrixXd residual_of(const ObservationMatrix& m, const Decomposition& d) const;
    FrameResult recover(std::size_t frame_index);

    TrackerConfig cfg_;
    Eigen::Index rows_ = 0;
    Eigen::Index cols_ = 0;
    TemplateMatrix templates_;
    ParticleSet particles_;
    AffineState last_map_;
    std::optional<Eigen::MatrixXd> warm_low_rank_;
    std::size_t frame_index_ = 1;
    FrameResult initial_;
};

/// Per-frame hook: the result just produced and the tracker state after it.
using FrameCallback = std::function<void(const FrameResult&, const Tracker&)>;

/// Runs the tracker over frames[0..T-1]; frame 1 reports the initial box.
std::vector<FrameResult> track_sequence(std::span<const GrayImage> frames, const BoundingBox& init_box,
                                        const TrackerConfig& cfg, const FrameCallback& on_frame = {});

/// Unique template offsets drawn from {-2..2}^2 \ {(0,0)}, deterministic in the seed.
std::vector<std::pair<int, int>> template_offsets(int count, std::uint64_t seed);

}  // namespace prpca
