#include <doctest.h>

#include <cmath>

#include "scio/errors.hpp"
#include "scio/oracle.hpp"
#include "scio/simgen.hpp"
#include "scio/solver.hpp"
#include "support.hpp"

using namespace scio;
using doctest::Approx;

namespace {

double diamond_margin(double rho) {
    const auto s = oracle::diamond_graph(rho);
    return oracle::irrepresentable_margin(s, oracle::exact_inverse(s, 1e-10));
}

}  // namespace

TEST_CASE("brute_force_column examples") {
    const auto id = SymMatrix::identity(3);
    const auto b = oracle::brute_force_column(id, 1, 0.25);
    CHECK(b[0] == 0.0);
    CHECK(b[1] == Approx(0.75));
    CHECK(b[2] == 0.0);

    Rng rng(1);
    auto s = testing::random_pd(5, rng);
    // rescale to unit diagonal
    SymMatrix unit(5);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i; j < 5; ++j) unit.set(i, j, s(i, j) / std::sqrt(s(i, i) * s(j, j)));
    for (double lambda : {1.0, 1.3}) CHECK(oracle::brute_force_column(unit, 2, lambda) == std::vector<double>(5, 0.0));

    CHECK_THROWS_AS(oracle::brute_force_column(SymMatrix::identity(13), 0, 0.1), InvalidInput);
    CHECK_THROWS_AS(oracle::brute_force_column(id, 3, 0.1), InvalidInput);
}

TEST_CASE("brute force agrees with the solver on 100 random 5x5 problems") {
    Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = oracle::random_column_instance(5, rng);
        const auto cmp = oracle::compare_with_solver(inst);
        CHECK(std::abs(cmp.objective_gap) <= 1e-6);
        CHECK(cmp.max_coordinate_gap <= 1e-6);
    }
}

TEST_CASE("kkt_residual examples") {
    const auto id = SymMatrix::identity(3);
    const std::vector<double> opt{0.0, 0.75, 0.0};
    CHECK(oracle::kkt_residual(opt, id, 1, 0.25) == Approx(0.0).scale(1.0));
    CHECK(oracle::kkt_residual(std::vector<double>(3, 0.0), id, 1, 2.0) == 0.0);
    const std::vector<double> e1{0.0, 1.0, 0.0};
    CHECK(oracle::kkt_residual(e1, id, 1, 0.5) == Approx(0.5));
    CHECK_THROWS_AS(oracle::kkt_residual(e1, SymMatrix::identity(2), 1, 0.5), InvalidInput);
}

TEST_CASE("irrepresentable_margin examples") {
    CHECK(diamond_margin(0.4) > 0.0);
    CHECK(diamond_margin(0.6) <= 0.0);
    CHECK(diamond_margin(0.49) > 0.0);
    CHECK(diamond_margin(0.51) <= 0.0);

    const auto star = oracle::star_graph(0.9);
    CHECK(oracle::irrepresentable_margin(star, oracle::exact_inverse(star, 1e-10)) > 0.0);

    const double d[] = {1.0, 2.0, 3.0};
    const auto diag = SymMatrix::diagonal(d);
    CHECK(oracle::irrepresentable_margin(diag, oracle::exact_inverse(diag)) == 1.0);
}

TEST_CASE("diamond and star graph inverses have the expected supports") {
    // diamond: (1,4) is zero in Ω, every other off-diagonal pair is an edge
    const auto omega = oracle::exact_inverse(oracle::diamond_graph(0.3), 1e-10);
    CHECK(omega(0, 3) == 0.0);
    CHECK(omega(0, 1) != 0.0);
    CHECK(omega(1, 3) != 0.0);
    CHECK(omega(2, 3) != 0.0);
    // star: leaves are conditionally independent given the hub
    const auto star = oracle::exact_inverse(oracle::star_graph(0.7), 1e-10);
    CHECK(star(1, 2) == 0.0);
    CHECK(star(1, 3) == 0.0);
    CHECK(star(0, 1) != 0.0);
}

TEST_CASE("the diamond boundary sits at rho = 0.5") {
    double lo = 0.3, hi = 0.7;
    REQUIRE(diamond_margin(lo) > 0.0);
    REQUIRE(diamond_margin(hi) <= 0.0);
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (diamond_margin(mid) > 0.0 ? lo : hi) = mid;
    }
    CHECK(lo == Approx(0.5).epsilon(1e-9));
    // margin is 1 − 2ρ along the way
    for (double rho : {0.1, 0.25, 0.4, 0.45}) CHECK(diamond_margin(rho) == Approx(1.0 - 2.0 * rho));
}

TEST_CASE("irrepresentable_margin errors on a singular support block") {
    SymMatrix s(3);
    s.set(0, 0, 1.0);
    s.set(1, 1, 1.0);
    s.set(0, 1, 1.0);
    s.set(2, 2, 1.0);
    SymMatrix omega(3, 1.0);
    omega.set(0, 2, 0.0);
    omega.set(1, 2, 0.0);
    CHECK_THROWS_AS(oracle::irrepresentable_margin(s, omega), InvalidInput);
}

TEST_CASE("support_of examples") {
    const auto id = oracle::support_of(SymMatrix::identity(3));
    REQUIRE(id.size() == 3);
    CHECK(id.contains(0, 0));
    CHECK(id.contains(2, 2));
    CHECK_FALSE(id.contains(0, 1));
    CHECK(oracle::support_of(SymMatrix(3)).size() == 0);
    CHECK(oracle::support_of(gen_decay(3, 0.6)).size() == 9);
    const auto thresholded = oracle::support_of(gen_decay(3, 0.6), 0.5);
    CHECK(thresholded.size() == 7);
    CHECK(thresholded.column(0) == std::vector<std::size_t>{0, 1});
    CHECK_THROWS_AS(oracle::support_of(SymMatrix(2), -1.0), InvalidInput);
}

TEST_CASE("exact_inverse matches the Cholesky inverse") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = testing::random_pd(1 + rng.uniform_index(8), rng);
        CHECK(testing::max_abs_diff(oracle::exact_inverse(a), inverse_pd(a)) < 1e-9);
    }
    CHECK_THROWS_AS(oracle::exact_inverse(SymMatrix(2, 1.0)), InvalidInput);
}

TEST_CASE("property: brute force is never worse than the solver and satisfies KKT") {
    Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t p = 1 + rng.uniform_index(8);
        const auto inst = oracle::random_column_instance(p, rng);
        const auto ref = oracle::brute_force_column(inst.sigma, inst.i, inst.lambda);
        CHECK(oracle::kkt_residual(ref, inst.sigma, inst.i, inst.lambda) < 1e-8);
        SolverConfig cfg;
        const auto sol = solve_column(inst.sigma, inst.i, inst.lambda, cfg);
        CHECK(column_objective(inst.sigma, inst.i, inst.lambda, ref) <=
              column_objective(inst.sigma, inst.i, inst.lambda, sol.beta) + 1e-9);
    }
}

TEST_CASE("property: the irrepresentable margin is scale invariant") {
    Rng rng(5);
    for (double rho : {0.2, 0.45, 0.55}) {
        const auto s = oracle::diamond_graph(rho);
        const auto omega = oracle::exact_inverse(s, 1e-10);
        const double c = 0.1 + 10.0 * rng.uniform();
        CHECK(oracle::irrepresentable_margin(c * s, omega) == Approx(oracle::irrepresentable_margin(s, omega)));
    }
    for (int trial = 0; trial < 10; ++trial) {
        const auto s = testing::random_pd(6, rng);
        const auto omega = oracle::exact_inverse(s, 0.3);
        const double c = 0.1 + 10.0 * rng.uniform();
        CHECK(oracle::irrepresentable_margin(c * s, omega) == Approx(oracle::irrepresentable_margin(s, omega)));
    }
}
