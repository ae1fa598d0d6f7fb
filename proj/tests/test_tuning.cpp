#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "scio/errors.hpp"
#include "scio/simgen.hpp"
#include "scio/tuning.hpp"
#include "support.hpp"

using namespace scio;
using doctest::Approx;

namespace {

DataMatrix indexed_rows(std::size_t n) {
    std::vector<double> v(n * 2);
    for (std::size_t k = 0; k < n; ++k) {
        v[2 * k] = static_cast<double>(k);
        v[2 * k + 1] = static_cast<double>(k * k % 7);
    }
    return DataMatrix(n, 2, v);
}

void check_partition(const DataSplit& s, std::size_t n) {
    std::vector<std::size_t> all(s.train_rows);
    all.insert(all.end(), s.validate_rows.begin(), s.validate_rows.end());
    std::sort(all.begin(), all.end());
    REQUIRE(all.size() == n);
    for (std::size_t k = 0; k < n; ++k) CHECK(all[k] == k);
}

}  // namespace

TEST_CASE("split_sample examples") {
    const auto x = indexed_rows(10);
    CVPlan plan;
    plan.seed = 99;
    const auto splits = split_sample(x, plan);
    REQUIRE(splits.size() == 1);
    CHECK(splits[0].train_rows.size() == 5);
    CHECK(splits[0].validate_rows.size() == 5);
    check_partition(splits[0], 10);
    // the row data follow the indices
    for (std::size_t k = 0; k < 5; ++k) CHECK(splits[0].train(k, 0) == static_cast<double>(splits[0].train_rows[k]));

    const auto again = split_sample(x, plan);
    CHECK(again[0].train_rows == splits[0].train_rows);
    CHECK(again[0].train == splits[0].train);

    plan.folds = 3;
    const auto three = split_sample(indexed_rows(40), plan);
    REQUIRE(three.size() == 3);
    for (const auto& s : three) check_partition(s, 40);
    CHECK(three[0].train_rows != three[1].train_rows);
    CHECK(three[1].train_rows != three[2].train_rows);
}

TEST_CASE("CVPlan validation") {
    CVPlan plan;
    CHECK_THROWS_AS(split_sample(indexed_rows(3), plan), InvalidInput);
    plan.split_fraction = 1.0;
    CHECK_THROWS_AS(plan.validate(100), InvalidInput);
    plan.split_fraction = 0.5;
    plan.grid_n = 1;
    CHECK_THROWS_AS(plan.validate(100), InvalidInput);
    plan.grid_n = 2;
    plan.folds = 0;
    CHECK_THROWS_AS(plan.validate(100), InvalidInput);
    plan.folds = 1;
    plan.grid_upper = -1.0;
    CHECK_THROWS_AS(plan.validate(100), InvalidInput);
    plan.grid_upper.reset();
    CHECK_NOTHROW(plan.validate(4));
}

TEST_CASE("cv_risk examples on the identity") {
    const CovarianceSplit split{SymMatrix::identity(3), SymMatrix::identity(3), 10, 0.0};
    SolverConfig cfg;
    for (double lambda : {0.1, 0.3, 0.75}) {
        const double b = 1.0 - lambda;
        CHECK(cv_risk(1, lambda, std::span(&split, 1), cfg) == Approx(0.5 * b * b - b));
    }
    CHECK(cv_risk(1, 1.0, std::span(&split, 1), cfg) == 0.0);
    CHECK(cv_risk(1, 3.0, std::span(&split, 1), cfg) == 0.0);
    CHECK_THROWS_AS(cv_risk(1, 0.5, {}, cfg), InvalidInput);
}

TEST_CASE("cv_risk averages over folds") {
    Rng rng(2);
    const CovarianceSplit a{testing::random_pd(4, rng), testing::random_pd(4, rng), 10, 0.0};
    const CovarianceSplit b{testing::random_pd(4, rng), testing::random_pd(4, rng), 10, 0.0};
    const CovarianceSplit both[] = {a, b};
    SolverConfig cfg;
    const double ra = cv_risk(0, 0.1, std::span(&a, 1), cfg);
    const double rb = cv_risk(0, 0.1, std::span(&b, 1), cfg);
    CHECK(cv_risk(0, 0.1, both, cfg) == Approx(0.5 * (ra + rb)));
}

TEST_CASE("choose_min_risk examples") {
    const std::vector<double> lambdas{0.1, 0.2, 0.3, 0.4};
    CHECK(choose_min_risk(lambdas, std::vector<double>{4, 3, 2, 1}) == 3);
    CHECK(choose_min_risk(lambdas, std::vector<double>{1, 2, 3, 4}) == 0);
    CHECK(choose_min_risk(lambdas, std::vector<double>{3, 1, 1, 2}) == 2);
    // ties resolve by λ, not by position
    const std::vector<double> descending{0.4, 0.3, 0.2, 0.1};
    CHECK(choose_min_risk(descending, std::vector<double>{2, 1, 1, 3}) == 1);
    CHECK_THROWS_AS(choose_min_risk(lambdas, std::vector<double>{1, 2}), InvalidInput);
}

TEST_CASE("cv_grid") {
    const auto g = cv_grid(4, 2.0);
    CHECK(g == std::vector<double>{0.5, 1.0, 1.5, 2.0});
    CHECK_THROWS_AS(cv_grid(3, 0.0), InvalidInput);
}

TEST_CASE("select_lambda with a two-point grid evaluates two risks") {
    Rng rng(5);
    const auto x = sample_gaussian(gen_decay(6, 0.6), 40, rng);
    CVPlan plan;
    plan.grid_n = 2;
    const auto r = select_lambda(0, plan, x, SolverConfig{});
    CHECK(r.lambdas.size() == 2);
    CHECK(r.risks.size() == 2);
    CHECK(r.lambdas[0] < r.lambdas[1]);
    CHECK(r.chosen_lambda == r.lambdas[r.chosen_index]);
    CHECK(r.risks[r.chosen_index] == *std::min_element(r.risks.begin(), r.risks.end()));
}

TEST_CASE("select_lambda_on_grid rejects duplicate grid points") {
    const CovarianceSplit split{SymMatrix::identity(2), SymMatrix::identity(2), 10, 0.0};
    const std::vector<double> grid{0.1, 0.2, 0.1};
    CHECK_THROWS_AS(select_lambda_on_grid(0, std::span(&split, 1), grid, SolverConfig{}), InvalidInput);
}

TEST_CASE("estimate_with_cv smoke case n = 4, p = 2") {
    const DataMatrix x(4, 2, {1.0, 0.5, -0.3, 0.2, 0.7, -1.1, -1.4, 0.4});
    const auto out = estimate_with_cv(x, CVPlan{}, SolverConfig{});
    CHECK(out.estimate.omega_hat.dim() == 2);
    CHECK(out.estimate.omega_hat(0, 1) == out.estimate.omega_hat(1, 0));
    CHECK(out.selections.size() == 2);
}

TEST_CASE("per-column lambdas adapt to column sparsity") {
    // a dense 6-node block next to 6 isolated nodes
    SymMatrix omega(12);
    for (std::size_t i = 0; i < 12; ++i) omega.set(i, i, 1.0);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i + 1; j < 6; ++j) omega.set(i, j, 0.15);
    Rng rng(77);
    const auto x = sample_gaussian(omega, 300, rng);
    const auto out = estimate_with_cv(x, CVPlan{}, SolverConfig{});
    std::set<double> distinct(out.estimate.lambda_per_column.begin(), out.estimate.lambda_per_column.end());
    CHECK(distinct.size() >= 2);
}

TEST_CASE("property: cv_risk with equal train and validate covariance is the objective without the penalty") {
    Rng rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t p = 2 + rng.uniform_index(8);
        const auto s = testing::random_pd(p, rng);
        const CovarianceSplit split{s, s, 20, 0.0};
        const auto i = static_cast<std::size_t>(rng.uniform_index(p));
        const double lambda = 0.02 + 0.4 * rng.uniform();
        SolverConfig cfg;
        const auto beta = solve_column(s, i, lambda, cfg).beta;
        double l1 = 0.0;
        for (double b : beta) l1 += std::abs(b);
        CHECK(cv_risk(i, lambda, std::span(&split, 1), cfg) ==
              Approx(column_objective(s, i, lambda, beta) - lambda * l1).epsilon(1e-12));
    }
}

TEST_CASE("property: splits always partition the rows") {
    Rng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 4 + rng.uniform_index(60);
        CVPlan plan;
        plan.folds = 1 + rng.uniform_index(4);
        plan.split_fraction = 0.3 + 0.4 * rng.uniform();
        plan.seed = rng.next_u64();
        const auto splits = split_sample(indexed_rows(n), plan);
        CHECK(splits.size() == plan.folds);
        for (const auto& s : splits) {
            check_partition(s, n);
            CHECK(s.train_rows.size() == plan.train_rows(n));
        }
    }
}

TEST_CASE("property: selection does not depend on the order the grid is given in") {
    Rng rng(10);
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = sample_gaussian(gen_decay(8, 0.6), 60, rng);
        CVPlan plan;
        plan.seed = rng.next_u64();
        const auto covs = split_covariances(split_sample(x, plan));
        auto grid = cv_grid(20, max_abs_offdiagonal(sample_covariance(x).sigma_hat));
        const auto i = static_cast<std::size_t>(rng.uniform_index(8));
        const auto base = select_lambda_on_grid(i, covs, grid, SolverConfig{});
        rng.shuffle(std::span<double>(grid));
        const auto shuffled = select_lambda_on_grid(i, covs, grid, SolverConfig{});
        CHECK(shuffled.result.chosen_lambda == base.result.chosen_lambda);
        CHECK(shuffled.result.risks == base.result.risks);
        CHECK(shuffled.first_fold_solution.beta == base.first_fold_solution.beta);
    }
}

TEST_CASE("property: estimate_with_cv is symmetric and reports every chosen lambda") {
    Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t p = 4 + rng.uniform_index(8);
        const auto x = sample_gaussian(gen_decay(p, 0.5), 50, rng);
        CVPlan plan;
        plan.folds = 1 + rng.uniform_index(3);
        plan.refit_full_sample = trial % 2 == 1;
        SolverConfig cfg;
        cfg.threads = 3;
        const auto out = estimate_with_cv(x, plan, cfg);
        CHECK(out.estimate.lambda_per_column.size() == p);
        CHECK(out.selections.size() == p);
        for (std::size_t i = 0; i < p; ++i) {
            CHECK(out.estimate.lambda_per_column[i] == out.selections[i].chosen_lambda);
            for (std::size_t j = 0; j < p; ++j) CHECK(out.estimate.omega_hat(i, j) == out.estimate.omega_hat(j, i));
        }
        CHECK(min_eigenvalue(out.estimate.omega_hat) > 0.0);
    }
}

TEST_CASE("estimate_with_cv is deterministic across thread counts") {
    Rng rng(12);
    const auto x = sample_gaussian(gen_decay(10, 0.6), 80, rng);
    SolverConfig one;
    SolverConfig four;
    four.threads = 4;
    const auto a = estimate_with_cv(x, CVPlan{}, one);
    const auto b = estimate_with_cv(x, CVPlan{}, four);
    CHECK(a.estimate.omega_hat == b.estimate.omega_hat);
}

TEST_CASE("averaged risk curve on decay data dips below both grid ends") {
    Rng rng(13);
    const std::size_t p = 10;
    const std::size_t grid_n = 20;
    std::vector<double> mean(grid_n, 0.0);
    for (int rep = 0; rep < 20; ++rep) {
        const auto train = sample_covariance(sample_gaussian(gen_decay(p, 0.6), 100, rng));
        const auto val = sample_covariance(sample_gaussian(gen_decay(p, 0.6), 100, rng));
        const CovarianceSplit split{train.sigma_hat, val.sigma_hat, 100, 0.0};
        const auto grid = cv_grid(grid_n, 0.6);
        for (std::size_t i = 0; i < p; ++i) {
            const auto r = select_lambda_on_grid(i, std::span(&split, 1), grid, SolverConfig{}).result;
            for (std::size_t k = 0; k < grid_n; ++k) mean[k] += r.risks[k];
        }
    }
    const double best = *std::min_element(mean.begin(), mean.end());
    CHECK(best < mean.front());
    CHECK(best < mean.back());
}
