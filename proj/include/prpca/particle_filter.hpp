#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "prpca/geometry.hpp"

namespace prpca {

/// Variances of the Gaussian random-walk transition, one per affine component.
struct TransitionCovariance {
    double var_h = 16.0;       ///< px^2
    double var_w = 16.0;       ///< px^2
    double var_scale = 1e-4;
    double var_aspect = 1e-4;
    double var_angle = 1e-4;   ///< rad^2
    double var_skew = 1e-6;

    void validate() const;
};

struct ParticleSet {
    std::vector<AffineState> states;
    std::vector<double> weights;
    std::uint64_t rng_seed = 0;

    std::size_t size() const { return states.size(); }
};

using Rng = std::mt19937_64;

/// Independent generator for (seed, frame, stream). Streams 0..N-1 belong to particles; the
/// tracker reserves higher stream ids for whole-frame draws.
Rng stream_rng(std::uint64_t seed, std::uint64_t frame, std::uint64_t stream);

/// Lower bound applied to scale and aspect after propagation.
inline constexpr double kMinScale = 1e-3;

/// Adds zero-mean Gaussian noise to every component; scale and aspect are floored at kMinScale.
AffineState propagate(const AffineState& state, const TransitionCovariance& cov, Rng& rng);

/// Posterior weights proportional to weights * likelihoods, normalised to sum 1.
/// @throws FilterDegeneracy when every product is zero
std::vector<double> reweight(std::span<const double> weights, std::span<const double> likelihoods);

/// reweight() with log-likelihoods; -inf marks a particle with zero likelihood.
std::vector<double> reweight_log(std::span<const double> weights, std::span<const double> log_likelihoods);

/// Systematic resampling indices for a given offset in [0, 1/N).
std::vector<std::size_t> systematic_indices(std::span<const double> weights, double offset);

/// Systematic resampling: one uniform offset, stride 1/N, uniform output weights.
ParticleSet resample(const ParticleSet& particles, Rng& rng);

/// Index of the largest weight; ties go to the lowest index.
std::size_t map_index(std::span<const double> weights);

/// State of the particle maximising weight * likelihood.
AffineState map_estimate(const ParticleSet& particles, std::span<const double> likelihoods);

}  // namespace prpca
