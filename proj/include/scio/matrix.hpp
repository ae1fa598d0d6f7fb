#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace scio {

/**
 * Dense p×p symmetric matrix, stored in full (row-major).
 *
 * All writes go through set(), which mirrors the entry, so
 * (i,j) and (j,i) are bit-identical at all times. Because the storage is
 * symmetric, row j and column j are the same contiguous span.
 */
class SymMatrix {
public:
    explicit SymMatrix(std::size_t p, double fill = 0.0);

    static SymMatrix identity(std::size_t p);
    static SymMatrix diagonal(std::span<const double> diag);

    /// Builds from explicit rows. Rows must be square and symmetric within
    /// `symmetry_tol`; the stored value is the average of the two triangles.
    static SymMatrix from_rows(const std::vector<std::vector<double>>& rows, double symmetry_tol = 1e-12);

    std::size_t dim() const noexcept { return p_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * p_ + j]; }

    /// Sets both (i,j) and (j,i). Rejects non-finite values.
    void set(std::size_t i, std::size_t j, double value);

    void add_to_diagonal(double shift);

    std::span<const double> column(std::size_t j) const noexcept {
        return {data_.data() + j * p_, p_};
    }

    const std::vector<double>& data() const noexcept { return data_; }

    bool operator==(const SymMatrix&) const = default;

private:
    std::size_t p_;
    std::vector<double> data_;
};

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator*(double c, const SymMatrix& a);

std::vector<double> multiply(const SymMatrix& a, std::span<const double> x);

/// Principal submatrix on `idx` (in the given order).
SymMatrix principal_submatrix(const SymMatrix& a, std::span<const std::size_t> idx);

// Norms -----------------------------------------------------------------

/// Largest singular value, max(|λ_min|, |λ_max|), with both extremal
/// eigenvalues located by Sturm bisection to within tol.
double spectral_norm(const SymMatrix& a, double tol = 1e-10);

double frobenius_norm(const SymMatrix& a);

/// max_ij |a_ij|
double elementwise_max_norm(const SymMatrix& a);

/// max over columns of the absolute column sum.
double matrix_l1_norm(const SymMatrix& a);

/// Largest absolute off-diagonal entry (0 for p = 1).
double max_abs_offdiagonal(const SymMatrix& a);

// Factorizations and spectra -------------------------------------------

/// Lower-triangular Cholesky factor, row-major p×p (upper part zero).
struct CholeskyFactor {
    std::size_t p = 0;
    std::vector<double> lower;

    double at(std::size_t i, std::size_t j) const noexcept { return lower[i * p + j]; }
};

/// A = L·Lᵀ. Throws NotPositiveDefinite when a pivot is ≤ 1e-12.
CholeskyFactor cholesky(const SymMatrix& a);

/// Solves L·Lᵀ x = b.
std::vector<double> cholesky_solve(const CholeskyFactor& f, std::span<const double> b);

/// Solves Lᵀ x = b (back substitution only).
std::vector<double> solve_upper_transposed(const CholeskyFactor& f, std::span<const double> b);

/// Inverse of a positive definite matrix via its Cholesky factor.
SymMatrix inverse_pd(const SymMatrix& a);

double log_det_pd(const SymMatrix& a);

/// All eigenvalues in ascending order: Householder tridiagonalization, then
/// Sturm-sequence bisection to absolute tolerance `tol`.
std::vector<double> symmetric_eigenvalues(const SymMatrix& a, double tol = 1e-12);

double min_eigenvalue(const SymMatrix& a, double tol = 1e-10);

/// True iff λ_min(A) > margin, decided by a Cholesky attempt on A − margin·I.
bool positive_definite_beyond(const SymMatrix& a, double margin);

// Text format -----------------------------------------------------------
//
//   p
//   a_00 a_01 ... a_0(p-1)
//   ...
//
// The reader enforces symmetry within 1e-12 and stores the averaged value.

SymMatrix read_matrix_text(std::istream& in);
SymMatrix read_matrix_text_file(const std::string& path);
void write_matrix_text(std::ostream& out, const SymMatrix& a);
void write_matrix_text_file(const std::string& path, const SymMatrix& a);

}  // namespace scio
