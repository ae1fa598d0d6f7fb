#pragma once

#include <variant>
#include <vector>

#include "scio/covariance.hpp"
#include "scio/solver.hpp"
#include "scio/tuning.hpp"

namespace scio {

/// Select λ per column by cross-validation (needs raw data).
struct CrossValidate {
    CVPlan plan;
};

/// One λ for all columns, one λ per column, or cross-validation.
using LambdaSpec = std::variant<double, std::vector<double>, CrossValidate>;

/// Solves every column of the (already built) covariance and symmetrizes.
/// Σ̂ is perturbed to PD first when needed; Ω̂ is perturbed afterwards when
/// config.perturb_estimate. A CrossValidate spec is rejected here.
PrecisionEstimate estimate_precision(const CovarianceEstimate& cov, const LambdaSpec& lambda,
                                     const SolverConfig& config);

/// Builds Σ̂ from data, then as above. CrossValidate runs estimate_with_cv.
PrecisionEstimate estimate_precision(const DataMatrix& x, const LambdaSpec& lambda, const SolverConfig& config);

}  // namespace scio
