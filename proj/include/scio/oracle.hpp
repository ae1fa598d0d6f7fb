#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "scio/matrix.hpp"
#include "scio/rng.hpp"

namespace scio::oracle {

/// Set of (row, col) positions, sorted lexicographically.
struct SupportSet {
    std::size_t p = 0;
    std::vector<std::pair<std::size_t, std::size_t>> entries;

    bool contains(std::size_t i, std::size_t j) const;
    /// Sorted row indices of the support of column j.
    std::vector<std::size_t> column(std::size_t j) const;
    std::size_t size() const noexcept { return entries.size(); }
};

constexpr std::size_t kMaxBruteForceDim = 12;

/// Exact minimizer of ½βᵀΣ̂β − eᵢᵀβ + λ|β|₁ by enumerating all 3^p sign
/// patterns. For each pattern the stationarity equations on the nonzero set
/// are solved directly; candidates whose signs or KKT conditions disagree
/// with the pattern are discarded. Ties in objective go to the
/// lexicographically first pattern. Throws InvalidInput for p > 12 and when
/// no pattern yields a consistent candidate.
std::vector<double> brute_force_column(const SymMatrix& sigma_hat, std::size_t i, double lambda);

/// max_j of |(Σ̂β − eᵢ)_j + λ·sign(β_j)| if β_j ≠ 0, else max(|(Σ̂β − eᵢ)_j| − λ, 0).
double kkt_residual(std::span<const double> beta, const SymMatrix& sigma_hat, std::size_t i, double lambda);

/// 1 − max_i ‖Σ_{Sᵢᶜ×Sᵢ} Σ_{Sᵢ×Sᵢ}⁻¹‖_∞ with Sᵢ the support of column i of
/// omega_truth (|ω| > 1e-10). Positive means the irrepresentable condition
/// holds with α equal to the margin.
double irrepresentable_margin(const SymMatrix& sigma, const SymMatrix& omega_truth);

/// {(i, j) : |a_ij| > threshold}
SupportSet support_of(const SymMatrix& a, double threshold = 0.0);

/// Diamond graph covariance, p = 4 (1-based): σ_ii = 1, σ_23 = 0, σ_14 = 2ρ²,
/// every other off-diagonal ρ. Its inverse has the 4-cycle 1–2–4–3 support
/// plus a (2,3) fill-in; (1,4) is zero.
SymMatrix diamond_graph(double rho);

/// Star graph covariance, p = 4: hub 1, σ_1j = ρ, σ_ij = ρ² between leaves.
SymMatrix star_graph(double rho);

/// Inverse by Gauss–Jordan elimination with partial pivoting; entries with
/// magnitude below `zero_below` are set to exactly 0. Throws InvalidInput on a
/// singular matrix. Independent of the Cholesky path in matrix-core.
SymMatrix exact_inverse(const SymMatrix& a, double zero_below = 0.0);

/// One column problem: minimize ½βᵀΣ̂β − eᵢᵀβ + λ|β|₁.
struct ColumnInstance {
    SymMatrix sigma{1};
    std::size_t i = 0;
    double lambda = 0.0;
};

/// Σ̂ = AAᵀ/m + 0.05·I with A a p×m standard normal matrix, m = p + 2; i
/// uniform; λ log-uniform on [lambda_lo, lambda_hi].
ColumnInstance random_column_instance(std::size_t p, Rng& rng, double lambda_lo = 0.01, double lambda_hi = 2.0);

struct Comparison {
    std::vector<double> solver_beta;
    std::vector<double> oracle_beta;
    double solver_objective = 0.0;
    double oracle_objective = 0.0;
    /// solver − oracle objective (≥ 0 up to rounding).
    double objective_gap = 0.0;
    double max_coordinate_gap = 0.0;
    bool solver_converged = false;
};

/// Runs the coordinate-descent solver at tolerance `solver_tol` and the
/// brute-force oracle on the same instance.
Comparison compare_with_solver(const ColumnInstance& inst, double solver_tol = 1e-10);

}  // namespace scio::oracle
