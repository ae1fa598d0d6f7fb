#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scio/covariance.hpp"
#include "scio/evaluation.hpp"
#include "scio/matrix.hpp"
#include "scio/rng.hpp"
#include "scio/tuning.hpp"

namespace scio {

enum class ModelKind { decay, sparse, block };

std::string to_string(ModelKind kind);
/// Throws InvalidInput on an unknown name.
ModelKind parse_model_kind(const std::string& name);

struct GraphModelSpec {
    ModelKind kind = ModelKind::decay;
    /// Size of the first block; the full matrix is diag(B, 4B).
    std::size_t p_block = 25;
    double decay_base = 0.6;
    double sparse_prob = 0.1;
    double sparse_value = 0.5;
    std::size_t block_size = 5;
    double block_offdiag = 0.5;
    std::uint64_t seed = kDefaultSeed;

    /// Throws InvalidInput on out-of-range parameters.
    void validate() const;
};

/// [B]_ij = base^|i−j|
SymMatrix gen_decay(std::size_t p, double base = 0.6);

struct SparseModel {
    SymMatrix matrix{1};
    /// Diagonal shift δ found by bisection (0 for a degenerate draw).
    double delta = 0.0;
    /// cond(O + δI) before rescaling to unit diagonal.
    double condition_before_scaling = 1.0;
    /// No off-diagonal entry was drawn; the matrix is the identity.
    bool degenerate = false;
};

/// O with off-diagonal entries `value` w.p. `prob`, δ chosen by bisection so
/// that cond(O + δI) = p, then rescaled to unit diagonal.
SparseModel gen_sparse(std::size_t p, double prob, double value, Rng& rng);

/// cond(O + δI) computed from the eigenvalues of O.
double shifted_condition_number(std::span<const double> eigenvalues, double delta);

/// Compound-symmetry blocks (diagonal 1, off-diagonal `offdiag`) of size
/// `block_size` (last block shorter if needed), then a random simultaneous
/// row/column permutation.
SymMatrix gen_block(std::size_t p, std::size_t block_size, double offdiag, Rng& rng);

/// diag(B, 4B)
SymMatrix two_block_compose(const SymMatrix& first_block);

/// First block from `spec` (size spec.p_block), composed with two_block_compose.
SymMatrix generate_truth(const GraphModelSpec& spec, Rng& rng);

/// n draws from N(0, Ω⁻¹). Throws NotPositiveDefinite if Ω is not PD.
DataMatrix sample_gaussian(const SymMatrix& omega_truth, std::size_t n, Rng& rng);
DataMatrix sample_gaussian(const SymMatrix& omega_truth, std::size_t n, std::uint64_t seed);

/// n draws from N(0, Σ).
DataMatrix sample_gaussian_covariance(const SymMatrix& sigma, std::size_t n, Rng& rng);

// Benchmark ----------------------------------------------------------------

enum class Selection {
    /// One λ for the whole matrix, minimizing the Bregman loss on the validation sample.
    bregman_validation,
    /// Per-column λ by the column-wise CV risk (training vs validation sample).
    cv_column,
    /// One λ minimizing the Frobenius loss against the truth (grid oracle).
    oracle_frobenius,
};

std::string to_string(Selection s);
Selection parse_selection(const std::string& name);

struct BenchmarkConfig {
    GraphModelSpec model;
    std::size_t n_train = 100;
    std::size_t n_validate = 100;
    std::vector<std::size_t> p_values{50};
    std::size_t replicates = 100;
    std::size_t grid_n = 50;
    Selection selection = Selection::bregman_validation;
    std::uint64_t seed = kDefaultSeed;
    /// Treat the generated matrix as Ω (true) or as Σ (false).
    bool truth_is_precision = true;
    double support_threshold = 0.0;
    double solver_tol = 1e-4;
    std::size_t threads = 1;

    void validate() const;
};

struct ReplicateRecord {
    std::size_t p = 0;
    std::size_t replicate = 0;
    bool ok = false;
    std::string error;
    /// Shared λ for bregman/oracle selection, per-column λ̂ᵢ for CV.
    std::vector<double> lambdas;
    LossReport loss;
    SupportReport support;
    double rho_applied = 0.0;
    double max_kkt_residual = 0.0;
    bool all_converged = false;
    /// |Σ̂β̂ − eᵢ|_∞ − λ over every converged column solved in this replicate
    /// (whole path included); ≤ tol by the KKT stopping rule.
    double worst_clime_excess = 0.0;
    double seconds = 0.0;
};

struct BenchmarkRow {
    std::size_t p = 0;
    std::size_t succeeded = 0;
    std::size_t failed = 0;
    Summary spectral;
    Summary frobenius;
    Summary tn_pct;
    Summary tp_pct;
    /// Number of successful replicates with |ω̂_ij| > threshold, row-major p×p.
    std::vector<std::size_t> support_counts;
};

struct BenchmarkResult {
    BenchmarkConfig config;
    std::vector<BenchmarkRow> rows;
    std::vector<ReplicateRecord> replicates;
};

/// Runs one replicate in isolation (child RNG stream `replicate` of the
/// stream for dimension p).
/// When `support_out` is given it receives the p×p 0/1 support indicator of Ω̂.
ReplicateRecord run_replicate(const BenchmarkConfig& cfg, std::size_t p, std::size_t replicate,
                              std::vector<unsigned char>* support_out = nullptr);

BenchmarkResult run_benchmark(const BenchmarkConfig& cfg);

/// "mean(SD)" table, one line per p.
std::string format_benchmark_table(const BenchmarkResult& result);

}  // namespace scio
