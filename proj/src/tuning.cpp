#include "scio/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scio/errors.hpp"
#include "scio/parallel.hpp"
#include "scio/rng.hpp"

namespace scio {

std::size_t CVPlan::train_rows(std::size_t n) const {
    return static_cast<std::size_t>(std::llround(split_fraction * static_cast<double>(n)));
}

void CVPlan::validate(std::size_t n) const {
    if (folds < 1) throw InvalidInput("cv: folds must be at least 1");
    if (!(split_fraction > 0.0 && split_fraction < 1.0)) throw InvalidInput("cv: split fraction must lie in (0, 1)");
    if (grid_n < 2) throw InvalidInput("cv: grid size must be at least 2");
    if (grid_upper && !(*grid_upper > 0.0 && std::isfinite(*grid_upper)))
        throw InvalidInput("cv: grid upper bound must be positive");
    const std::size_t n1 = train_rows(n);
    if (n1 < 2 || n < n1 + 2) throw InvalidInput("cv: sample too small, both parts of the split need at least 2 rows");
}

std::vector<DataSplit> split_sample(const DataMatrix& x, const CVPlan& plan) {
    plan.validate(x.n());
    const std::size_t n = x.n();
    const std::size_t n1 = plan.train_rows(n);
    Rng rng(plan.seed);
    std::vector<DataSplit> splits;
    splits.reserve(plan.folds);
    std::vector<std::size_t> perm(n);
    for (std::size_t v = 0; v < plan.folds; ++v) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        rng.shuffle(std::span<std::size_t>(perm));
        std::vector<std::size_t> train(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n1));
        std::vector<std::size_t> val(perm.begin() + static_cast<std::ptrdiff_t>(n1), perm.end());
        std::sort(train.begin(), train.end());
        std::sort(val.begin(), val.end());
        auto train_x = x.select_rows(train);
        auto val_x = x.select_rows(val);
        splits.push_back({std::move(train), std::move(val), std::move(train_x), std::move(val_x)});
    }
    return splits;
}

CovarianceSplit split_covariances(const DataSplit& split) {
    const auto train = perturb_to_pd(sample_covariance(split.train));
    auto validate = sample_covariance(split.validate);
    return {train.sigma_hat, std::move(validate.sigma_hat), train.n_used, train.rho_applied};
}

std::vector<CovarianceSplit> split_covariances(std::span<const DataSplit> splits) {
    std::vector<CovarianceSplit> out;
    out.reserve(splits.size());
    for (const auto& s : splits) out.push_back(split_covariances(s));
    return out;
}

double validation_risk(const SymMatrix& sigma_validate, std::size_t i, std::span<const double> beta) {
    const auto sb = multiply(sigma_validate, beta);
    double quad = 0.0;
    for (std::size_t j = 0; j < beta.size(); ++j) quad += beta[j] * sb[j];
    return 0.5 * quad - beta[i];
}

double cv_risk(std::size_t i, double lambda, std::span<const CovarianceSplit> splits, const SolverConfig& config) {
    if (splits.empty()) throw InvalidInput("cv_risk: no splits");
    double total = 0.0;
    for (const auto& s : splits) {
        const auto sol = solve_column(s.train, i, lambda, config);
        total += validation_risk(s.validate, i, sol.beta);
    }
    return total / static_cast<double>(splits.size());
}

std::size_t choose_min_risk(std::span<const double> lambdas, std::span<const double> risks) {
    if (lambdas.empty() || lambdas.size() != risks.size())
        throw InvalidInput("choose_min_risk: lambdas and risks must be non-empty and of equal length");
    std::size_t best = 0;
    for (std::size_t k = 1; k < risks.size(); ++k) {
        if (risks[k] < risks[best] || (risks[k] == risks[best] && lambdas[k] > lambdas[best])) best = k;
    }
    return best;
}

std::vector<double> cv_grid(std::size_t grid_n, double upper) {
    if (grid_n < 1 || !(upper > 0.0)) throw InvalidInput("cv_grid: need grid_n ≥ 1 and a positive upper bound");
    std::vector<double> grid(grid_n);
    for (std::size_t j = 1; j <= grid_n; ++j)
        grid[j - 1] = static_cast<double>(j) / static_cast<double>(grid_n) * upper;
    return grid;
}

ColumnSelection select_lambda_on_grid(std::size_t i, std::span<const CovarianceSplit> splits,
                                      std::span<const double> grid, const SolverConfig& config) {
    if (splits.empty()) throw InvalidInput("select_lambda: no splits");
    if (grid.empty()) throw InvalidInput("select_lambda: empty grid");

    std::vector<double> descending(grid.begin(), grid.end());
    std::sort(descending.begin(), descending.end(), std::greater<>());
    if (std::adjacent_find(descending.begin(), descending.end()) != descending.end())
        throw InvalidInput("select_lambda: grid contains duplicate values");

    SolverConfig path_cfg = config;
    path_cfg.lambda_grid = descending;

    const std::size_t m = descending.size();
    std::vector<double> risk_desc(m, 0.0);
    std::vector<ColumnSolution> first_path;
    for (std::size_t v = 0; v < splits.size(); ++v) {
        auto path = solve_path(splits[v].train, i, path_cfg);
        for (std::size_t k = 0; k < m; ++k) risk_desc[k] += validation_risk(splits[v].validate, i, path[k].beta);
        if (v == 0) first_path = std::move(path);
    }

    ColumnSelection sel;
    auto& r = sel.result;
    r.column_i = i;
    r.lambdas.assign(descending.rbegin(), descending.rend());
    r.risks.resize(m);
    for (std::size_t k = 0; k < m; ++k) r.risks[k] = risk_desc[m - 1 - k] / static_cast<double>(splits.size());
    r.chosen_index = choose_min_risk(r.lambdas, r.risks);
    r.chosen_lambda = r.lambdas[r.chosen_index];
    sel.first_fold_solution = std::move(first_path[m - 1 - r.chosen_index]);
    return sel;
}

namespace {

double resolve_upper(const CVPlan& plan, const SymMatrix& full_sigma) {
    if (plan.grid_upper) return *plan.grid_upper;
    const double a = max_abs_offdiagonal(full_sigma);
    return a > 0.0 ? a : 1.0;
}

}  // namespace

CVResult select_lambda(std::size_t i, const CVPlan& plan, const DataMatrix& x, const SolverConfig& config) {
    if (i >= x.p()) throw InvalidInput("select_lambda: column index out of range");
    const auto splits = split_sample(x, plan);
    const auto covs = split_covariances(splits);
    const auto grid = cv_grid(plan.grid_n, resolve_upper(plan, sample_covariance(x).sigma_hat));
    return select_lambda_on_grid(i, covs, grid, config).result;
}

CvEstimate estimate_with_cv(const DataMatrix& x, const CVPlan& plan, const SolverConfig& config) {
    config.validate();
    const auto splits = split_sample(x, plan);
    const auto covs = split_covariances(splits);
    const auto full = perturb_to_pd(sample_covariance(x));
    const auto grid = cv_grid(plan.grid_n, resolve_upper(plan, sample_covariance(x).sigma_hat));

    const std::size_t p = x.p();
    std::vector<ColumnSelection> sel(p);
    parallel_for(p, config.threads, [&](std::size_t i) {
        sel[i] = select_lambda_on_grid(i, covs, grid, config);
        if (plan.refit_full_sample)
            sel[i].first_fold_solution = solve_column(full.sigma_hat, i, sel[i].result.chosen_lambda, config);
    });

    std::vector<ColumnSolution> columns;
    CvEstimate out;
    columns.reserve(p);
    out.selections.reserve(p);
    for (auto& s : sel) {
        columns.push_back(std::move(s.first_fold_solution));
        out.selections.push_back(std::move(s.result));
    }
    const double cov_rho = plan.refit_full_sample ? full.rho_applied : covs.front().train_rho;
    out.estimate = assemble_and_symmetrize(columns, cov_rho);
    if (config.perturb_estimate)
        perturb_estimate_to_pd(out.estimate, plan.refit_full_sample ? x.n() : covs.front().n_train);
    return out;
}

}  // namespace scio
