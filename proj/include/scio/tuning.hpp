#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "scio/covariance.hpp"
#include "scio/solver.hpp"

namespace scio {

inline constexpr std::uint64_t kDefaultSeed = 20'160'101;

/// Random-split cross-validation plan.
struct CVPlan {
    /// Number of independent random splits H.
    std::size_t folds = 1;
    /// Share of rows in the training part (n₁ ≈ fraction·n).
    double split_fraction = 0.5;
    /// Grid λ_j = (j/N)·a for j = 1..N.
    std::size_t grid_n = 50;
    /// Upper end a; when absent, max |σ̂_ij| (i ≠ j) of the full-sample Σ̂.
    std::optional<double> grid_upper;
    std::uint64_t seed = kDefaultSeed;
    /// Refit the chosen λ̂ᵢ on the full sample instead of keeping the
    /// training-split solution.
    bool refit_full_sample = false;

    /// Throws InvalidInput unless folds ≥ 1, fraction ∈ (0,1), grid_n ≥ 2,
    /// grid_upper > 0 when set, and both split parts get ≥ 2 rows out of n.
    void validate(std::size_t n) const;
    std::size_t train_rows(std::size_t n) const;
};

struct DataSplit {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> validate_rows;
    DataMatrix train;
    DataMatrix validate;
};

/// `plan.folds` independent random partitions, deterministic in plan.seed.
std::vector<DataSplit> split_sample(const DataMatrix& x, const CVPlan& plan);

/// Σ̂₁ (perturbed to PD when needed, as for estimation) and raw Σ̂₂ of one split.
struct CovarianceSplit {
    SymMatrix train;
    SymMatrix validate;
    std::size_t n_train = 0;
    double train_rho = 0.0;
};

CovarianceSplit split_covariances(const DataSplit& split);
std::vector<CovarianceSplit> split_covariances(std::span<const DataSplit> splits);

/// ½βᵀΣ̂₂β − βᵢ
double validation_risk(const SymMatrix& sigma_validate, std::size_t i, std::span<const double> beta);

/// Fold-averaged validation risk of the column-i solution fitted at λ on each
/// training covariance.
double cv_risk(std::size_t i, double lambda, std::span<const CovarianceSplit> splits, const SolverConfig& config);

struct CVResult {
    std::size_t column_i = 0;
    /// Grid in ascending order; risks[k] belongs to lambdas[k].
    std::vector<double> lambdas;
    std::vector<double> risks;
    double chosen_lambda = 0.0;
    std::size_t chosen_index = 0;
};

/// Index of the smallest risk; exact ties go to the larger λ.
std::size_t choose_min_risk(std::span<const double> lambdas, std::span<const double> risks);

/// λ_j = (j/N)·a, j = 1..N (ascending).
std::vector<double> cv_grid(std::size_t grid_n, double upper);

struct ColumnSelection {
    CVResult result;
    /// First-fold training solution at the chosen λ.
    ColumnSolution first_fold_solution;
};

/// Evaluates the risk at every grid point (any order; sorted internally),
/// solving each fold's path in decreasing λ with warm starts.
ColumnSelection select_lambda_on_grid(std::size_t i, std::span<const CovarianceSplit> splits,
                                      std::span<const double> grid, const SolverConfig& config);

CVResult select_lambda(std::size_t i, const CVPlan& plan, const DataMatrix& x, const SolverConfig& config);

struct CvEstimate {
    PrecisionEstimate estimate;
    std::vector<CVResult> selections;
};

/// Per-column λ̂ᵢ by cross-validation, columns taken from the first split's
/// training fit (or refitted on the full sample when plan.refit_full_sample),
/// then symmetrized.
CvEstimate estimate_with_cv(const DataMatrix& x, const CVPlan& plan, const SolverConfig& config);

}  // namespace scio
