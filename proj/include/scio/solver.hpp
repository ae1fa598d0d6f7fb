#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "scio/matrix.hpp"

namespace scio {

struct SolverConfig {
    /// Stop when a full sweep moves no coordinate by tol or more and the KKT
    /// residual is ≤ tol.
    double tol = 1e-4;
    int max_sweeps = 10'000;
    /// Strictly decreasing, all > 0. Used by solve_path.
    std::vector<double> lambda_grid;
    bool warm_start = true;
    /// After two full sweeps, cycle over the nonzero coordinates only; a full
    /// sweep is always run before convergence is declared.
    bool active_set = true;
    /// Shift Ω̂ by ρ = |λ_min| + n^{-1/2} when λ_min(Ω̂) ≤ 1e-12.
    bool perturb_estimate = true;
    /// Worker cap for column-parallel work (0 = default_thread_count()).
    std::size_t threads = 1;

    /// Throws InvalidInput on tol ≤ 0, max_sweeps < 1, or a grid that is not
    /// strictly decreasing and positive.
    void validate() const;
};

struct ColumnSolution {
    std::size_t index = 0;
    std::vector<double> beta;
    double lambda = 0.0;
    int sweeps_used = 0;
    bool converged = false;
    double kkt_residual = 0.0;
};

/// Per-column metadata kept alongside an assembled estimate.
struct ColumnSummary {
    std::size_t index = 0;
    double lambda = 0.0;
    int sweeps_used = 0;
    bool converged = false;
    double kkt_residual = 0.0;
    std::size_t nonzeros = 0;
};

struct PrecisionEstimate {
    SymMatrix omega_hat{1};
    std::vector<double> lambda_per_column;
    /// Diagonal shift applied to Ω̂ itself (0 if Ω̂ was already PD).
    double rho_applied = 0.0;
    /// Diagonal shift applied to Σ̂ before solving (0 if none).
    double covariance_rho = 0.0;
    std::vector<ColumnSummary> per_column_meta;

    bool all_converged() const;
    double max_kkt_residual() const;
};

/// sign(x)·max(|x| − λ, 0)
inline double soft_threshold(double x, double lambda) noexcept {
    if (x > lambda) return x - lambda;
    if (x < -lambda) return x + lambda;
    return 0.0;
}

/// Exact minimizer over β_j with the other coordinates fixed:
/// T(1{j=i} − Σ_{k≠j} β_k σ̂_kj, λ) / σ̂_jj.
double coordinate_update(std::size_t j, std::span<const double> beta, const SymMatrix& sigma_hat, std::size_t i,
                         double lambda);

/// ½βᵀΣ̂β − β_i + λ|β|₁
double column_objective(const SymMatrix& sigma_hat, std::size_t i, double lambda, std::span<const double> beta);

using SweepObserver = std::function<void(int sweep, std::span<const double> beta)>;

/// Coordinate descent on ½βᵀΣ̂β − eᵢᵀβ + λ|β|₁. Running out of sweeps is not
/// an error: the result comes back with converged = false.
/// `init` empty means start from zero. `on_sweep` (optional) sees β after
/// every sweep.
ColumnSolution solve_column(const SymMatrix& sigma_hat, std::size_t i, double lambda, const SolverConfig& config,
                            std::span<const double> init = {}, const SweepObserver& on_sweep = {});

/// One solution per entry of config.lambda_grid, in grid order, each started
/// from its predecessor when config.warm_start.
std::vector<ColumnSolution> solve_path(const SymMatrix& sigma_hat, std::size_t i, const SolverConfig& config);

/// Paths for every column, indexed [column][grid point]. Columns run in
/// parallel on config.threads workers.
std::vector<std::vector<ColumnSolution>> solve_all_paths(const SymMatrix& sigma_hat, const SolverConfig& config);

/// Solves every column at its own λ (lambdas.size() == p).
std::vector<ColumnSolution> solve_all_columns(const SymMatrix& sigma_hat, std::span<const double> lambdas,
                                              const SolverConfig& config);

/// Min-magnitude symmetrization: ω̂_ij = β̂_ij if |β̂_ij| < |β̂_ji|, else β̂_ji,
/// where β̂_ij is entry j of column i. Columns may come in any order but each
/// index in [0, p) must appear exactly once.
PrecisionEstimate assemble_and_symmetrize(std::span<const ColumnSolution> columns, double covariance_rho = 0.0);

/// If λ_min(Ω̂) ≤ 1e-12, adds ρ = |λ_min| + n^{-1/2} to the diagonal and records it.
void perturb_estimate_to_pd(PrecisionEstimate& est, std::size_t n);

/// 50 log-spaced values from max|σ̂_ij| (i ≠ j) down to that value / 100.
/// Falls back to λ_max = 1 when Σ̂ has no nonzero off-diagonal entry.
std::vector<double> default_lambda_grid(const SymMatrix& sigma_hat, std::size_t count = 50, double ratio = 0.01);

std::vector<double> log_spaced_grid(double hi, double lo, std::size_t count);

}  // namespace scio
