#include "prpca/proximal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prpca/error.hpp"

namespace prpca {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw InputError(std::string(what) + " must be finite");
}

// |x|^{p-1} for |x| > 0, with cheap paths for the exponents the solver uses most.
double pow_pm1(double ax, double p) {
    if (p == 1.0) return 1.0;
    if (p == 0.5) return 1.0 / std::sqrt(ax);
    if (p == 0.0) return 1.0 / ax;
    return std::pow(ax, p - 1.0);
}

}  // namespace

void PNormParams::validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("p must lie in [0, 1]");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw InputError("mu must be positive and finite");
}

double h_breakpoint(const PNormParams& params) {
    return std::pow(params.mu, 1.0 / (2.0 - params.p));
}

double h_value(double t, const PNormParams& params) {
    params.validate();
    require_finite(t, "t");
    const double at = std::abs(t);
    const double mu = params.mu;
    const double p = params.p;
    if (at <= h_breakpoint(params)) return at * at / (2.0 * mu);
    if (p == 0.0) return std::log(at) - std::log(mu) / 2.0 + 0.5;
    const double delta = (1.0 / p - 0.5) * std::pow(mu, p / (2.0 - p));
    return std::pow(at, p) / p - delta;
}

double p_shrink(double x, double threshold, double p) {
    require_finite(x, "x");
    require_finite(threshold, "threshold");
    if (threshold < 0.0) throw InputError("threshold must be nonnegative");
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("p must lie in [0, 1]");
    if (threshold == 0.0) return x;
    const double ax = std::abs(x);
    if (ax <= threshold) return 0.0;
    const double mag = ax - std::pow(threshold, 2.0 - p) * pow_pm1(ax, p);
    if (mag <= 0.0) return 0.0;
    return std::copysign(mag, x);
}

Eigen::MatrixXd p_shrink_matrix(const Eigen::Ref<const Eigen::MatrixXd>& x, double threshold, double p) {
    require_finite(threshold, "threshold");
    if (threshold < 0.0) throw InputError("threshold must be nonnegative");
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("p must lie in [0, 1]");
    Eigen::MatrixXd out(x.rows(), x.cols());
    if (threshold == 0.0) {
        if (!x.allFinite()) throw InputError("x must be finite");
        out = x;
        return out;
    }
    const double scale = std::pow(threshold, 2.0 - p);
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        for (Eigen::Index r = 0; r < x.rows(); ++r) {
            const double v = x(r, c);
            const double av = std::abs(v);
            if (!std::isfinite(v)) throw InputError("x must be finite");
            if (av <= threshold) {
                out(r, c) = 0.0;
                continue;
            }
            const double mag = av - scale * pow_pm1(av, p);
            out(r, c) = mag <= 0.0 ? 0.0 : std::copysign(mag, v);
        }
    }
    return out;
}

double g_scalar(double s, const PNormParams& params) {
    params.validate();
    require_finite(s, "s");
    const double as = std::abs(s);
    if (as == 0.0) return 0.0;

    // phi(t) = s t - t^2/2 + mu h(t); g(s) = (sup_t phi(t) - s^2/2) / mu.
    // h is even, so for s > 0 the supremum is attained at t >= 0. Beyond |s| + breakpoint the
    // derivative of phi is strictly negative, so [0, 2(|s| + breakpoint)] brackets the maximiser.
    const double mu = params.mu;
    auto phi = [&](double t) { return as * t - t * t / 2.0 + mu * h_value(t, params); };

    const double upper = 2.0 * (as + h_breakpoint(params));
    constexpr int kGrid = 2048;
    int best = 0;
    double best_val = phi(0.0);
    for (int k = 1; k <= kGrid; ++k) {
        const double v = phi(upper * k / kGrid);
        if (v > best_val) {
            best_val = v;
            best = k;
        }
    }
    if (best == kGrid) throw NumericError("g_value: maximiser not bracketed");

    // golden-section refinement on the two neighbouring grid cells
    double a = upper * std::max(best - 1, 0) / kGrid;
    double b = upper * (best + 1) / kGrid;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = phi(c);
    double fd = phi(d);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, b); ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = phi(d);
        }
    }
    const double sup = std::max({best_val, fc, fd, phi(0.5 * (a + b))});
    return std::max(0.0, (sup - as * as / 2.0) / mu);
}

double g_value(const Eigen::Ref<const Eigen::MatrixXd>& x, const PNormParams& params) {
    params.validate();
    double total = 0.0;
    for (Eigen::Index c = 0; c < x.cols(); ++c)
        for (Eigen::Index r = 0; r < x.rows(); ++r) total += g_scalar(x(r, c), params);
    return total;
}

}  // namespace prpca
