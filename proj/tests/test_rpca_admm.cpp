#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles/oracles.hpp"
#include "prpca/error.hpp"
#include "prpca/proximal.hpp"
#include "prpca/rpca_admm.hpp"
#include "prpca/synthetic.hpp"

using namespace prpca;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01;
    return Eigen::MatrixXd::NullaryExpr(r, c, [&] { return n01(rng); });
}

}  // namespace

TEST_CASE("default_lambda") {
    CHECK(default_lambda(1024, 10) == doctest::Approx(3.2).epsilon(1e-15));
    CHECK(default_lambda(1, 1) == doctest::Approx(0.141421).epsilon(1e-6));
    CHECK(default_lambda(100, 200) == doctest::Approx(1.41774).epsilon(1e-5));
    CHECK_THROWS_AS(default_lambda(0, 3), InputError);
}

TEST_CASE("resolve_lambda follows the rule or the explicit value") {
    SolverConfig cfg;
    CHECK(resolve_lambda(cfg, 1024, 11) == doctest::Approx(1.0 / 32.0).epsilon(1e-15));
    cfg.lambda_rule = LambdaRule::kScaledSqrt;
    CHECK(resolve_lambda(cfg, 1024, 11) == doctest::Approx(3.2).epsilon(1e-15));
    cfg.lambda_reg = 0.7;
    CHECK(resolve_lambda(cfg, 1024, 11) == 0.7);
}

TEST_CASE("SolverConfig validation") {
    SolverConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.rho = 1.0;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg = {};
    cfg.tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg = {};
    cfg.max_iter = 0;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg = {};
    cfg.p = -0.5;
    CHECK_THROWS_AS(cfg.validate(), InputError);
}

TEST_CASE("s_step") {
    const Eigen::MatrixXd m = random_matrix(4, 3, 1);
    CHECK(s_step(m, m, Eigen::MatrixXd::Zero(4, 3), 0.5, 1.0, 0.5).isZero(0));

    Eigen::MatrixXd a(1, 1), b(1, 1), z = Eigen::MatrixXd::Zero(1, 1);
    a << 5;
    b << 2;
    CHECK(s_step(a, b, z, 1.0, 1.0, 1.0)(0, 0) == 2.0);

    const Eigen::MatrixXd mm = random_matrix(10, 5, 2), l = random_matrix(10, 5, 3), y = random_matrix(10, 5, 4);
    const Eigen::MatrixXd s = s_step(mm, l, y, 0.4, 0.5, 0.5);
    const Eigen::MatrixXd arg = mm - l + y;
    for (Eigen::Index i = 0; i < 10; ++i)
        for (Eigen::Index j = 0; j < 5; ++j) CHECK(s(i, j) == p_shrink(arg(i, j), 0.2, 0.5));

    CHECK_THROWS_AS(s_step(mm, random_matrix(9, 5, 5), y, 0.4, 0.5, 0.5), InputError);
}

TEST_CASE("l_step") {
    const Eigen::MatrixXd z = Eigen::MatrixXd::Zero(6, 3);
    CHECK(l_step(z, z, z, 1.0, 1.0).isZero(0));

    Eigen::VectorXd u = random_matrix(6, 1, 6).col(0).normalized();
    Eigen::VectorXd v = random_matrix(3, 1, 7).col(0).normalized();
    const Eigen::MatrixXd rank1 = 3.0 * u * v.transpose();
    const Eigen::MatrixXd l = l_step(rank1, z, z, 1.0, 1.0);
    CHECK((l - 2.0 * u * v.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(l.norm() == doctest::Approx(2.0).epsilon(1e-12));

    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
    d.diagonal() << 5, 0.5;
    const Eigen::MatrixXd dz = Eigen::MatrixXd::Zero(2, 2);
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(2, 2);
    expected(0, 0) = 4;
    CHECK((l_step(d, dz, dz, 1.0, 1.0) - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("l_step output singular values are the shrunk input values") {
    const Eigen::MatrixXd x = random_matrix(12, 5, 8);
    const Eigen::MatrixXd z = Eigen::MatrixXd::Zero(12, 5);
    const Eigen::VectorXd in = Eigen::JacobiSVD<Eigen::MatrixXd>(x).singularValues();
    const Eigen::VectorXd out = Eigen::JacobiSVD<Eigen::MatrixXd>(l_step(x, z, z, 1.5, 0.5)).singularValues();
    for (Eigen::Index k = 0; k < in.size(); ++k) CHECK(out(k) == doctest::Approx(p_shrink(in(k), 1.5, 0.5)).epsilon(1e-10));
}

TEST_CASE("canonical_svd sign convention") {
    const Eigen::MatrixXd x = random_matrix(7, 4, 9);
    const CanonicalSvd svd = canonical_svd(x);
    for (Eigen::Index k = 0; k < svd.u.cols(); ++k) {
        Eigen::Index idx;
        svd.u.col(k).cwiseAbs().maxCoeff(&idx);
        CHECK(svd.u(idx, k) >= 0.0);
    }
    CHECK((svd.u * svd.singular_values.asDiagonal() * svd.v.transpose() - x).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("multiplier_update") {
    const Eigen::MatrixXd i0 = random_matrix(3, 3, 10), l = random_matrix(3, 3, 11), s = random_matrix(3, 3, 12);
    CHECK((multiplier_update(i0, l + s, l, s, 0.3) - i0).cwiseAbs().maxCoeff() < 1e-14);

    const Eigen::MatrixXd z = Eigen::MatrixXd::Zero(2, 2), ones = Eigen::MatrixXd::Ones(2, 2);
    CHECK(multiplier_update(z, ones, z, z, 0.5) == Eigen::MatrixXd::Constant(2, 2, 2.0));
    const Eigen::MatrixXd a = multiplier_update(z, ones, z, z, 0.5), b = multiplier_update(z, ones, z, z, 1.0);
    CHECK((a - 2.0 * b).isZero(0));
}

TEST_CASE("decompose zero matrix") {
    const Decomposition d = decompose(Eigen::MatrixXd::Zero(5, 3), {});
    CHECK(d.low_rank.isZero(0));
    CHECK(d.sparse.isZero(0));
    CHECK(d.iterations == 1);
    CHECK(d.converged);
}

TEST_CASE("decompose rejects bad input") {
    CHECK_THROWS_AS(decompose(Eigen::MatrixXd(0, 0), {}), InputError);
    Eigen::MatrixXd m = random_matrix(4, 3, 13);
    m(1, 1) = NAN;
    CHECK_THROWS_AS(decompose(m, {}), InputError);
}

TEST_CASE("decompose convergence contract and shapes") {
    for (double p : {0.0, 0.5, 1.0}) {
        for (std::uint64_t seed = 20; seed < 25; ++seed) {
            const Eigen::MatrixXd m = random_matrix(30, 6, seed);
            SolverConfig cfg;
            cfg.p = p;
            const Decomposition d = decompose(m, cfg);
            CHECK(d.low_rank.rows() == 30);
            CHECK(d.sparse.cols() == 6);
            CHECK(d.multiplier.rows() == 30);
            if (d.converged) {
                CHECK(d.final_residual < cfg.tol);
                CHECK((m - d.low_rank - d.sparse).norm() / m.norm() < cfg.tol);
            }
        }
    }
}

TEST_CASE("decompose hits max_iter without claiming convergence") {
    SolverConfig cfg;
    cfg.max_iter = 3;
    const Decomposition d = decompose(random_matrix(20, 5, 30), cfg);
    CHECK(d.iterations == 3);
    CHECK_FALSE(d.converged);
}

TEST_CASE("decompose at p = 1 follows the soft-threshold reference iterate by iterate") {
    for (std::uint64_t seed = 40; seed < 43; ++seed) {
        const Eigen::MatrixXd m = random_matrix(32, 8, seed);
        SolverConfig cfg;
        cfg.p = 1.0;
        const double lambda = resolve_lambda(cfg, 32, 8);
        const double mu0 = 0.99 * Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
        const auto ref = oracle::soft_admm(m, lambda, mu0, cfg.rho, cfg.tol, 500);
        std::size_t k = 0;
        decompose(m, cfg, [&](const IterationRecord& r) {
            REQUIRE(k < ref.size());
            CHECK((r.low_rank - ref[k].low_rank).cwiseAbs().maxCoeff() <= 1e-8);
            CHECK((r.sparse - ref[k].sparse).cwiseAbs().maxCoeff() <= 1e-8);
            CHECK(r.residual == doctest::Approx(ref[k].residual).epsilon(1e-6));
            ++k;
        });
        CHECK(k == ref.size());
    }
}

TEST_CASE("decompose observer sees a geometric mu schedule") {
    SolverConfig cfg;
    cfg.mu0 = 2.0;
    cfg.rho = 0.8;
    std::vector<double> mus;
    decompose(random_matrix(16, 4, 50), cfg, [&](const IterationRecord& r) { mus.push_back(r.mu); });
    REQUIRE(mus.size() > 2);
    CHECK(mus[0] == 2.0);
    for (std::size_t k = 1; k < mus.size(); ++k) CHECK(mus[k] == doctest::Approx(mus[k - 1] * 0.8).epsilon(1e-15));
}

TEST_CASE("decompose commutes with row permutation") {
    const Eigen::MatrixXd m = make_low_rank_sparse(40, 8, 2, 0.05, 0.5, 1.5, 60).observed;
    std::vector<int> perm(40);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(61));
    Eigen::MatrixXd pm(40, 8);
    for (int r = 0; r < 40; ++r) pm.row(r) = m.row(perm[r]);
    for (double p : {1.0, 0.5}) {
        SolverConfig cfg;
        cfg.p = p;
        const Decomposition a = decompose(m, cfg);
        const Decomposition b = decompose(pm, cfg);
        double diff = 0.0;
        for (int r = 0; r < 40; ++r) {
            diff = std::max(diff, (b.low_rank.row(r) - a.low_rank.row(perm[r])).cwiseAbs().maxCoeff());
            diff = std::max(diff, (b.sparse.row(r) - a.sparse.row(perm[r])).cwiseAbs().maxCoeff());
        }
        CHECK(diff <= 1e-10);
    }
}

TEST_CASE("decompose is deterministic") {
    const Eigen::MatrixXd m = random_matrix(25, 6, 70);
    const Decomposition a = decompose(m, {});
    const Decomposition b = decompose(m, {});
    CHECK(a.low_rank == b.low_rank);
    CHECK(a.sparse == b.sparse);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("decompose separates a planted instance at p = 0.5") {
    // one instance well inside the recoverable regime; the full 20-instance sweep is an acceptance criterion
    const auto inst = make_low_rank_sparse(200, 11, 1, 0.03, 0.5, 1.5, 3);
    SolverConfig cfg;
    cfg.p = 0.5;
    const Decomposition d = decompose(inst.observed, cfg);
    CHECK(d.converged);
    CHECK((d.low_rank - inst.low_rank).norm() / inst.low_rank.norm() <= 1e-2);
    CHECK(oracle::numeric_rank(d.low_rank) == 1);
}

TEST_CASE("warm start still meets the tolerance") {
    const Eigen::MatrixXd m = random_matrix(40, 6, 80);
    SolverConfig cfg;
    const Decomposition cold = decompose(m, cfg);
    const Decomposition warm = decompose(m, cfg, {}, &cold.low_rank);
    CHECK(cold.converged);
    CHECK(warm.converged);
    CHECK(warm.final_residual < cfg.tol);
    const Eigen::MatrixXd wrong = cold.sparse.leftCols(2);
    CHECK_THROWS_AS(decompose(m, cfg, {}, &wrong), InputError);
}
