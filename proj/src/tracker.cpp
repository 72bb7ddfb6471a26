#include "prpca/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <thread>

#include "prpca/error.hpp"

namespace prpca {

namespace {

constexpr int kMaxTemplates = 25;  // size of the {-2..2}^2 offset grid

// Static chunking; every index writes only its own slot, so results do not depend on `workers`.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    std::size_t threads = workers > 0 ? static_cast<std::size_t>(workers)
                                      : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(threads);
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t k = t; k < n; k += threads) fn(k);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    pool.clear();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

void TrackerConfig::validate() const {
    if (template_count < 2) throw InputError("template_count must be at least 2");
    if (template_count > kMaxTemplates) throw InputError("template_count must not exceed 25");
    if (particle_count < 1) throw InputError("particle_count must be at least 1");
    if (patch_w < 1 || patch_h < 1) throw InputError("patch size must be positive");
    if (static_cast<long>(patch_w) * patch_h <= template_count)
        throw InputError("patch must have more pixels than there are templates");
    solver.validate();
    transition.validate();
    thresholds.validate(template_count);
    if (!(sigma_eps > 0.0) || !std::isfinite(sigma_eps)) throw InputError("sigma_eps must be positive");
    if (workers < 0) throw InputError("workers must be nonnegative");
}

std::vector<std::pair<int, int>> template_offsets(int count, std::uint64_t seed) {
    if (count < 0 || count > kMaxTemplates - 1) throw InputError("template_offsets: count out of range");
    std::vector<std::pair<int, int>> grid;
    for (int dy = -2; dy <= 2; ++dy)
        for (int dx = -2; dx <= 2; ++dx)
            if (dx != 0 || dy != 0) grid.emplace_back(dx, dy);
    Rng rng = stream_rng(seed, 0, 0);
    // Fisher-Yates with an explicit draw so the order is the same on every standard library
    for (std::size_t k = grid.size() - 1; k > 0; --k) {
        const std::size_t r = static_cast<std::size_t>(rng() % (k + 1));
        std::swap(grid[k], grid[r]);
    }
    grid.resize(static_cast<std::size_t>(count));
    return grid;
}

Tracker::Tracker(const GrayImage& first_frame, const BoundingBox& box, TrackerConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    if (first_frame.size() == 0) throw InputError("tracker: empty first frame");
    if (!box.valid() || box.area() < 4.0) throw InputError("tracker: initial box is degenerate");
    if (box.x < 0.0 || box.y < 0.0 || box.x + box.w > static_cast<double>(first_frame.cols()) ||
        box.y + box.h > static_cast<double>(first_frame.rows()))
        throw InputError("tracker: initial box must lie inside the frame");

    rows_ = first_frame.rows();
    cols_ = first_frame.cols();
    const AffineState init = state_from_box(box, cfg_.patch_w, cfg_.patch_h);

    templates_.patch_w = cfg_.patch_w;
    templates_.patch_h = cfg_.patch_h;
    templates_.columns.resize(static_cast<Eigen::Index>(cfg_.patch_w) * cfg_.patch_h, cfg_.template_count);
    templates_.columns.col(0) = extract_patch(first_frame, init, cfg_.patch_w, cfg_.patch_h);
    const auto offsets = template_offsets(cfg_.template_count - 1, cfg_.rng_seed);
    for (std::size_t k = 0; k < offsets.size(); ++k) {
        AffineState shifted = init;
        shifted.pos_w += offsets[k].first;
        shifted.pos_h += offsets[k].second;
        templates_.columns.col(static_cast<Eigen::Index>(k) + 1) =
            extract_patch(first_frame, shifted, cfg_.patch_w, cfg_.patch_h);
    }
    templates_.weights = Eigen::VectorXd::Constant(cfg_.template_count, 1.0 / cfg_.template_count);

    const auto n = static_cast<std::size_t>(cfg_.particle_count);
    particles_.states.assign(n, init);
    particles_.weights.assign(n, 1.0 / static_cast<double>(n));
    particles_.rng_seed = cfg_.rng_seed;
    last_map_ = init;

    initial_.frame_index = 1;
    initial_.map_state = init;
    initial_.box = box;
    initial_.map_likelihood = likelihood(Eigen::VectorXd::Zero(1), cfg_.sigma_eps);
    initial_.map_log_likelihood = std::log(initial_.map_likelihood);
}

Decomposition Tracker::solve(const ObservationMatrix& m) const {
    if (cfg_.warm_start && warm_low_rank_) {
        Eigen::MatrixXd start = Eigen::MatrixXd::Zero(m.data.rows(), m.data.cols());
        start.leftCols(m.template_count()) = warm_low_rank_->leftCols(m.template_count());
        return decompose(m.data, cfg_.solver, {}, &start);
    }
    return decompose(m.data, cfg_.solver);
}

Eigen::MatrixXd Tracker::residual_of(const ObservationMatrix& m, const Decomposition& d) const {
    switch (cfg_.residual) {
        case ResidualMode::kAppearance: return appearance_residual(m, d, templates_.weights);
        case ResidualMode::kTarget: return target_residual(m, d);
        case ResidualMode::kReconstruction: break;
    }
    return reconstruction_error(m, d).eps;
}

Tracker::Candidate Tracker::evaluate(const GrayImage& frame, const AffineState& proposal) const {
    Candidate c{proposal, -std::numeric_limits<double>::infinity(), 0, false};
    try {
        const Eigen::VectorXd patch = extract_patch(frame, proposal, cfg_.patch_w, cfg_.patch_h);
        const ObservationMatrix m = build_observation(templates_, patch);
        const Decomposition d = solve(m);
        const Eigen::MatrixXd r = residual_of(m, d);
        c.log_likelihood = log_likelihood(r.col(r.cols() - 1), cfg_.sigma_eps);
        c.iterations = d.iterations;
        c.valid = true;
    } catch (const InvalidParticle&) {
    } catch (const NumericError&) {
    }
    return c;
}

FrameResult Tracker::recover(std::size_t frame_index) {
    TransitionCovariance wide = cfg_.transition;
    wide.var_h *= 2.0;
    wide.var_w *= 2.0;
    const std::size_t n = particles_.size();
    const auto base = static_cast<std::uint64_t>(n) + 1;
    for (std::size_t k = 0; k < n; ++k) {
        Rng rng = stream_rng(cfg_.rng_seed, frame_index, base + k);
        particles_.states[k] = propagate(last_map_, wide, rng);
    }
    particles_.weights.assign(n, 1.0 / static_cast<double>(n));

    FrameResult r;
    r.frame_index = frame_index;
    r.map_state = last_map_;
    r.box = box_from_state(last_map_, cfg_.patch_w, cfg_.patch_h);
    r.map_likelihood = 0.0;
    r.map_log_likelihood = -std::numeric_limits<double>::infinity();
    r.recovered = true;
    return r;
}

FrameResult Tracker::step(const GrayImage& frame) {
    if (frame.rows() != rows_ || frame.cols() != cols_) throw InputError("tracker: frame size differs from the first frame");
    const std::size_t idx = ++frame_index_;
    const std::size_t n = particles_.size();

    std::vector<Candidate> candidates(n);
    parallel_for(n, cfg_.workers, [&](std::size_t k) {
        Rng rng = stream_rng(cfg_.rng_seed, idx, k);
        candidates[k] = evaluate(frame, propagate(particles_.states[k], cfg_.transition, rng));
    });

    std::vector<double> log_lik(n);
    for (std::size_t k = 0; k < n; ++k) log_lik[k] = candidates[k].log_likelihood;

    std::vector<double> posterior;
    try {
        posterior = reweight_log(particles_.weights, log_lik);
    } catch (const FilterDegeneracy&) {
        return recover(idx);
    }

    const std::size_t best = map_index(posterior);
    ParticleSet weighted;
    weighted.rng_seed = cfg_.rng_seed;
    weighted.weights = posterior;
    weighted.states.reserve(n);
    for (const auto& c : candidates) weighted.states.push_back(c.state);
    Rng resample_rng = stream_rng(cfg_.rng_seed, idx, n);
    particles_ = resample(weighted, resample_rng);

    // template maintenance runs on the MAP particle's decomposition
    const AffineState map_state = candidates[best].state;
    const Eigen::VectorXd patch = extract_patch(frame, map_state, cfg_.patch_w, cfg_.patch_h);
    const ObservationMatrix m = build_observation(templates_, patch);
    const Decomposition d = solve(m);
    const Eigen::MatrixXd residual = residual_of(m, d);
    TemplateUpdate update = maybe_replace(templates_, patch, residual, d.sparse, cfg_.thresholds);
    templates_ = std::move(update.templates);
    if (cfg_.warm_start) warm_low_rank_ = d.low_rank;
    last_map_ = map_state;

    FrameResult r;
    r.frame_index = idx;
    r.map_state = map_state;
    r.box = box_from_state(map_state, cfg_.patch_w, cfg_.patch_h);
    r.map_log_likelihood = candidates[best].log_likelihood;
    r.map_likelihood = likelihood(residual.col(residual.cols() - 1), cfg_.sigma_eps);
    r.occlusion_level = update.occlusion;
    r.template_replaced = update.replaced;
    r.solver_iterations = d.iterations;
    return r;
}

std::vector<FrameResult> track_sequence(std::span<const GrayImage> frames, const BoundingBox& init_box,
                                        const TrackerConfig& cfg, const FrameCallback& on_frame) {
    if (frames.size() < 2) throw InputError("track_sequence: at least two frames are required");
    Tracker tracker(frames[0], init_box, cfg);
    std::vector<FrameResult> results;
    results.reserve(frames.size());
    results.push_back(tracker.initial_result());
    if (on_frame) on_frame(results.back(), tracker);
    for (std::size_t t = 1; t < frames.size(); ++t) {
        const std::string where = "frame " + std::to_string(t + 1) + ": ";
        try {
            results.push_back(tracker.step(frames[t]));
        } catch (const InputError& e) {
            throw InputError(where + e.what());
        } catch (const NumericError& e) {
            throw NumericError(where + e.what());
        }
        if (on_frame) on_frame(results.back(), tracker);
    }
    return results;
}

}  // namespace prpca
