#include "prpca/particle_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "prpca/error.hpp"

namespace prpca {

void TransitionCovariance::validate() const {
    for (double v : {var_h, var_w, var_scale, var_aspect, var_angle, var_skew})
        if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("transition variances must be nonnegative");
}

Rng stream_rng(std::uint64_t seed, std::uint64_t frame, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(frame), static_cast<std::uint32_t>(frame >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Rng(seq);
}

AffineState propagate(const AffineState& state, const TransitionCovariance& cov, Rng& rng) {
    cov.validate();
    std::normal_distribution<double> normal(0.0, 1.0);
    // always draw six normals so the stream position does not depend on which variances are zero
    auto jitter = [&](double variance) {
        const double z = normal(rng);
        return variance > 0.0 ? std::sqrt(variance) * z : 0.0;
    };
    AffineState out = state;
    out.pos_h += jitter(cov.var_h);
    out.pos_w += jitter(cov.var_w);
    out.scale += jitter(cov.var_scale);
    out.aspect += jitter(cov.var_aspect);
    out.angle += jitter(cov.var_angle);
    out.skew += jitter(cov.var_skew);
    out.scale = std::max(out.scale, kMinScale);
    out.aspect = std::max(out.aspect, kMinScale);
    return out;
}

std::vector<double> reweight(std::span<const double> weights, std::span<const double> likelihoods) {
    if (weights.size() != likelihoods.size()) throw InputError("reweight: size mismatch");
    if (weights.empty()) throw InputError("reweight: no particles");
    std::vector<double> out(weights.size());
    double total = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (!(likelihoods[k] >= 0.0) || !std::isfinite(likelihoods[k]))
            throw InputError("reweight: likelihoods must be nonnegative and finite");
        if (!(weights[k] >= 0.0)) throw InputError("reweight: weights must be nonnegative");
        out[k] = weights[k] * likelihoods[k];
        total += out[k];
    }
    if (!(total > 0.0)) throw FilterDegeneracy("reweight: every particle has zero posterior weight");
    for (double& w : out) w /= total;
    return out;
}

std::vector<double> reweight_log(std::span<const double> weights, std::span<const double> log_likelihoods) {
    if (weights.size() != log_likelihoods.size()) throw InputError("reweight_log: size mismatch");
    if (weights.empty()) throw InputError("reweight_log: no particles");
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    std::vector<double> log_post(weights.size(), kNegInf);
    double peak = kNegInf;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (std::isnan(log_likelihoods[k]) || log_likelihoods[k] == std::numeric_limits<double>::infinity())
            throw InputError("reweight_log: log-likelihoods must be finite or -inf");
        if (!(weights[k] >= 0.0)) throw InputError("reweight_log: weights must be nonnegative");
        if (weights[k] > 0.0) log_post[k] = std::log(weights[k]) + log_likelihoods[k];
        peak = std::max(peak, log_post[k]);
    }
    if (peak == kNegInf) throw FilterDegeneracy("reweight_log: every particle has zero posterior weight");
    std::vector<double> out(weights.size());
    double total = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        out[k] = std::exp(log_post[k] - peak);
        total += out[k];
    }
    for (double& w : out) w /= total;
    return out;
}

std::vector<std::size_t> systematic_indices(std::span<const double> weights, double offset) {
    const std::size_t n = weights.size();
    if (n == 0) throw InputError("systematic_indices: no particles");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw InputError("systematic_indices: weights must be nonnegative");
        total += w;
    }
    if (!(total > 0.0)) throw FilterDegeneracy("systematic_indices: all weights are zero");

    std::vector<std::size_t> out(n);
    const double stride = 1.0 / static_cast<double>(n);
    std::size_t src = 0;
    double cumulative = weights[0] / total;
    for (std::size_t k = 0; k < n; ++k) {
        const double target = offset + k * stride;
        while (target >= cumulative && src + 1 < n) {
            ++src;
            cumulative += weights[src] / total;
        }
        // never land on a zero-weight particle because of rounding in the running sum
        while (weights[src] == 0.0 && src > 0) --src;
        out[k] = src;
    }
    return out;
}

ParticleSet resample(const ParticleSet& particles, Rng& rng) {
    const std::size_t n = particles.size();
    if (n == 0 || particles.weights.size() != n) throw InputError("resample: malformed particle set");
    std::uniform_real_distribution<double> uniform(0.0, 1.0 / static_cast<double>(n));
    const auto idx = systematic_indices(particles.weights, uniform(rng));
    ParticleSet out;
    out.rng_seed = particles.rng_seed;
    out.states.reserve(n);
    for (std::size_t k : idx) out.states.push_back(particles.states[k]);
    out.weights.assign(n, 1.0 / static_cast<double>(n));
    return out;
}

std::size_t map_index(std::span<const double> weights) {
    if (weights.empty()) throw InputError("map_index: no particles");
    std::size_t best = 0;
    for (std::size_t k = 1; k < weights.size(); ++k)
        if (weights[k] > weights[best]) best = k;
    return best;
}

AffineState map_estimate(const ParticleSet& particles, std::span<const double> likelihoods) {
    if (particles.size() == 0) throw InputError("map_estimate: no particles");
    if (likelihoods.size() != particles.size() || particles.weights.size() != particles.size())
        throw InputError("map_estimate: size mismatch");
    std::vector<double> posterior(particles.size());
    for (std::size_t k = 0; k < posterior.size(); ++k) posterior[k] = particles.weights[k] * likelihoods[k];
    return particles.states[map_index(posterior)];
}

}  // namespace prpca
