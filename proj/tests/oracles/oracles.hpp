#pragma once

// Reference implementations used only by the tests. They are written from the formulas
// directly and share no code with the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double soft(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

struct AdmmIterate {
    Eigen::MatrixXd low_rank;
    Eigen::MatrixXd sparse;
    Eigen::MatrixXd multiplier;
    double residual;
};

// Soft-threshold robust PCA with the same schedule as the library: S step, L step,
// multiplier step, mu <- rho mu; the multiplier enters the shrink arguments as mu * I.
inline std::vector<AdmmIterate> soft_admm(const Eigen::MatrixXd& m, double lambda, double mu0, double rho,
                                          double tol, int max_iter) {
    const Eigen::Index r = m.rows(), c = m.cols();
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(r, c), s = l, y = l;
    const double norm_m = m.norm();
    double mu = mu0;
    std::vector<AdmmIterate> out;
    for (int it = 0; it < max_iter; ++it) {
        const Eigen::MatrixXd a = m - l + mu * y;
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < c; ++j) s(i, j) = soft(a(i, j), lambda * mu);
        const Eigen::MatrixXd b = m - s + mu * y;
        Eigen::JacobiSVD<Eigen::MatrixXd, Eigen::HouseholderQRPreconditioner> svd(
            b, Eigen::ComputeThinU | Eigen::ComputeThinV);
        Eigen::VectorXd sv = svd.singularValues();
        for (Eigen::Index k = 0; k < sv.size(); ++k) sv(k) = soft(sv(k), mu);
        l = svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
        y = y + (m - l - s) / mu;
        const double res = (m - l - s).norm() / norm_m;
        out.push_back({l, s, y, res});
        mu *= rho;
        if (res < tol) break;
    }
    return out;
}

// Brute-force penalty g_{mu,p}(s) = (max_t [s t - t^2/2 + mu h(t)] - s^2/2) / mu on a fixed t grid.
class GridPenalty {
public:
    GridPenalty(double p, double mu, double t_max = 12.0, int points = 48001) : mu_(mu) {
        const double b = std::pow(mu, 1.0 / (2.0 - p));
        const double delta = p > 0 ? (1.0 / p - 0.5) * std::pow(mu, p / (2.0 - p)) : 0.0;
        for (int k = 0; k < points; ++k) {
            const double t = -t_max + 2.0 * t_max * k / (points - 1);
            const double a = std::abs(t);
            double h;
            if (a <= b)
                h = a * a / (2.0 * mu);
            else if (p > 0)
                h = std::pow(a, p) / p - delta;
            else
                h = std::log(a) - std::log(mu) / 2.0 + 0.5;
            t_.push_back(t);
            base_.push_back(mu * h - t * t / 2.0);
        }
    }
    double operator()(double s) const {
        double best = -INFINITY;
        for (std::size_t k = 0; k < t_.size(); ++k) best = std::max(best, s * t_[k] + base_[k]);
        return (best - s * s / 2.0) / mu_;
    }

private:
    double mu_;
    std::vector<double> t_, base_;
};

// argmin_y (y - x)^2 / 2 + weight * pen(y) over a uniform grid.
inline double grid_prox(double x, double weight, const std::function<double(double)>& pen, double y_max = 5.0,
                        int points = 4001) {
    double best_y = 0.0, best = INFINITY;
    for (int k = 0; k < points; ++k) {
        const double y = -y_max + 2.0 * y_max * k / (points - 1);
        const double v = 0.5 * (y - x) * (y - x) + weight * pen(y);
        if (v < best) {
            best = v;
            best_y = y;
        }
    }
    return best_y;
}

// Direct crop: image rows [top, top + h), cols [left, left + w), column-major.
inline Eigen::VectorXd crop(const Eigen::MatrixXd& image, int left, int top, int w, int h) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(w) * h);
    for (int c = 0; c < w; ++c)
        for (int r = 0; r < h; ++r) v(c * h + r) = image(top + r, left + c);
    return v;
}

inline int numeric_rank(const Eigen::MatrixXd& x, double rel = 1e-6) {
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(x).singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    int r = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > rel * sv(0)) ++r;
    return r;
}

}  // namespace oracle
