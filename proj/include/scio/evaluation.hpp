#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scio/matrix.hpp"

namespace scio {

struct LossReport {
    double spectral = 0.0;
    double frobenius = 0.0;
    double elementwise_max = 0.0;
    double frobenius_sq_over_p = 0.0;
};

/// Norms of Ω̂ − Ω.
LossReport loss_report(const SymMatrix& omega_hat, const SymMatrix& omega_truth);

struct SupportCounts {
    std::size_t true_pos = 0;
    std::size_t true_neg = 0;
    std::size_t false_pos = 0;
    std::size_t false_neg = 0;
};

/// Edge recovery over unordered off-diagonal pairs (i < j). A percentage is
/// empty when its denominator is (no true edges / no true non-edges).
struct SupportReport {
    std::optional<double> tn_pct;
    std::optional<double> tp_pct;
    SupportCounts counts;
};

/// Entries with |value| > threshold count as edges, in both matrices.
SupportReport support_report(const SymMatrix& omega_hat, const SymMatrix& omega_truth, double threshold = 0.0);

/// ⟨Ω, Σ⟩ − log det Ω. Throws NotPositiveDefinite if Ω is not PD.
double bregman_loss(const SymMatrix& sigma_val, const SymMatrix& omega);

/// Two-class quadratic discriminant score
///   s = −(x−μ_k)ᵀΩ_k(x−μ_k) + (x−μ_k')ᵀΩ_k'(x−μ_k') + log det Ω_k − log det Ω_k'.
/// Class k is preferred when s > 0.
double classification_score(std::span<const double> x, std::span<const double> mean_k,
                            std::span<const double> mean_k2, const SymMatrix& omega_k, const SymMatrix& omega_k2);

/// Mean and sample standard deviation across replicates; sd is absent for a
/// single value.
struct Summary {
    double mean = 0.0;
    std::optional<double> sd;
    std::size_t count = 0;
};

Summary summarize(std::span<const double> values);

/// "mean(SD)" with two decimals, e.g. "10.00(0.39)"; "mean(-)" without SD.
std::string format_mean_sd(const Summary& s);

}  // namespace scio
