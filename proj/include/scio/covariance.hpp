#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "scio/matrix.hpp"

namespace scio {

/// n×p sample matrix; one observation per row.
class DataMatrix {
public:
    /// Throws InvalidInput unless n ≥ 1, p ≥ 1, values.size() == n·p and all
    /// values are finite. (n ≥ 2 is enforced where a covariance is formed.)
    DataMatrix(std::size_t n, std::size_t p, std::vector<double> values);

    std::size_t n() const noexcept { return n_; }
    std::size_t p() const noexcept { return p_; }

    std::span<const double> row(std::size_t k) const noexcept { return {values_.data() + k * p_, p_}; }
    double operator()(std::size_t k, std::size_t j) const noexcept { return values_[k * p_ + j]; }
    const std::vector<double>& values() const noexcept { return values_; }

    /// Rows listed in `idx`, in that order.
    DataMatrix select_rows(std::span<const std::size_t> idx) const;

    bool operator==(const DataMatrix&) const = default;

private:
    std::size_t n_;
    std::size_t p_;
    std::vector<double> values_;
};

struct CovarianceEstimate {
    SymMatrix sigma_hat;
    std::size_t n_used = 0;
    /// Diagonal shift added by perturb_to_pd; 0 when none was needed.
    double rho_applied = 0.0;
};

/// Σ̂ = (1/n) Σ_k (X_k − X̄)(X_k − X̄)ᵀ. Divisor n, not n − 1.
CovarianceEstimate sample_covariance(const DataMatrix& x);

/// If λ_min(Σ̂) ≤ 1e-12, adds ρ = |λ_min| + n^{-1/2} to the diagonal and
/// records it. Already positive definite input is returned unchanged.
CovarianceEstimate perturb_to_pd(const CovarianceEstimate& c);

struct CsvOptions {
    bool has_header = false;
    /// '\0' detects: tab if the first data line contains one, else comma.
    char delimiter = '\0';
};

/// Reads a numeric CSV/TSV. Ragged rows, empty cells and non-numeric cells are
/// rejected with InvalidInput naming the offending line.
DataMatrix read_csv(std::istream& in, const CsvOptions& opts = {});
DataMatrix read_csv_file(const std::string& path, const CsvOptions& opts = {});
void write_csv(std::ostream& out, const DataMatrix& x);

}  // namespace scio
