#include "scio/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "scio/errors.hpp"

namespace scio {

SymMatrix::SymMatrix(std::size_t p, double fill) : p_(p), data_(p * p, fill) {
    if (p == 0) throw InvalidInput("SymMatrix: dimension must be at least 1");
    if (!std::isfinite(fill)) throw InvalidInput("SymMatrix: non-finite fill value");
}

SymMatrix SymMatrix::identity(std::size_t p) {
    SymMatrix m(p);
    for (std::size_t i = 0; i < p; ++i) m.data_[i * p + i] = 1.0;
    return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
    SymMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m.set(i, i, diag[i]);
    return m;
}

SymMatrix SymMatrix::from_rows(const std::vector<std::vector<double>>& rows, double symmetry_tol) {
    const std::size_t p = rows.size();
    SymMatrix m(p);
    for (const auto& r : rows)
        if (r.size() != p) throw InvalidInput("SymMatrix::from_rows: rows are not square");
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i; j < p; ++j) {
            const double a = rows[i][j];
            const double b = rows[j][i];
            if (std::abs(a - b) > symmetry_tol) {
                std::ostringstream msg;
                msg << "SymMatrix::from_rows: asymmetric entry (" << i << ',' << j << "): " << a << " vs " << b;
                throw InvalidInput(msg.str());
            }
            m.set(i, j, a == b ? a : 0.5 * (a + b));
        }
    }
    return m;
}

void SymMatrix::set(std::size_t i, std::size_t j, double value) {
    if (!std::isfinite(value)) throw InvalidInput("SymMatrix::set: non-finite entry");
    data_[i * p_ + j] = value;
    data_[j * p_ + i] = value;
}

void SymMatrix::add_to_diagonal(double shift) {
    for (std::size_t i = 0; i < p_; ++i) data_[i * p_ + i] += shift;
}

namespace {

void require_same_dim(const SymMatrix& a, const SymMatrix& b, const char* op) {
    if (a.dim() != b.dim())
        throw InvalidInput(std::string(op) + ": dimension mismatch");
}

}  // namespace

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
    require_same_dim(a, b, "operator+");
    SymMatrix out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = i; j < a.dim(); ++j) out.set(i, j, a(i, j) + b(i, j));
    return out;
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    require_same_dim(a, b, "operator-");
    SymMatrix out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = i; j < a.dim(); ++j) out.set(i, j, a(i, j) - b(i, j));
    return out;
}

SymMatrix operator*(double c, const SymMatrix& a) {
    SymMatrix out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = i; j < a.dim(); ++j) out.set(i, j, c * a(i, j));
    return out;
}

std::vector<double> multiply(const SymMatrix& a, std::span<const double> x) {
    const std::size_t p = a.dim();
    if (x.size() != p) throw InvalidInput("multiply: dimension mismatch");
    std::vector<double> y(p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
        const auto row = a.column(i);
        double s = 0.0;
        for (std::size_t j = 0; j < p; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

SymMatrix principal_submatrix(const SymMatrix& a, std::span<const std::size_t> idx) {
    SymMatrix out(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = r; c < idx.size(); ++c) out.set(r, c, a(idx[r], idx[c]));
    return out;
}

double frobenius_norm(const SymMatrix& a) {
    double s = 0.0;
    for (double x : a.data()) s += x * x;
    return std::sqrt(s);
}

double elementwise_max_norm(const SymMatrix& a) {
    double m = 0.0;
    for (double x : a.data()) m = std::max(m, std::abs(x));
    return m;
}

double matrix_l1_norm(const SymMatrix& a) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.dim(); ++j) {
        double s = 0.0;
        for (double x : a.column(j)) s += std::abs(x);
        m = std::max(m, s);
    }
    return m;
}

double max_abs_offdiagonal(const SymMatrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = i + 1; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j)));
    return m;
}

CholeskyFactor cholesky(const SymMatrix& a) {
    constexpr double kMinPivot = 1e-12;
    const std::size_t p = a.dim();
    CholeskyFactor f{p, std::vector<double>(p * p, 0.0)};
    auto& L = f.lower;
    for (std::size_t j = 0; j < p; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= L[j * p + k] * L[j * p + k];
        if (!(d > kMinPivot)) {
            std::ostringstream msg;
            msg << "matrix is not positive definite (pivot " << d << " at index " << j << ")";
            throw NotPositiveDefinite(msg.str());
        }
        const double ljj = std::sqrt(d);
        L[j * p + j] = ljj;
        for (std::size_t i = j + 1; i < p; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= L[i * p + k] * L[j * p + k];
            L[i * p + j] = s / ljj;
        }
    }
    return f;
}

std::vector<double> solve_upper_transposed(const CholeskyFactor& f, std::span<const double> b) {
    const std::size_t p = f.p;
    std::vector<double> x(b.begin(), b.end());
    for (std::size_t ii = p; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t k = ii + 1; k < p; ++k) s -= f.at(k, ii) * x[k];
        x[ii] = s / f.at(ii, ii);
    }
    return x;
}

std::vector<double> cholesky_solve(const CholeskyFactor& f, std::span<const double> b) {
    const std::size_t p = f.p;
    if (b.size() != p) throw InvalidInput("cholesky_solve: dimension mismatch");
    std::vector<double> y(p);
    for (std::size_t i = 0; i < p; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= f.at(i, k) * y[k];
        y[i] = s / f.at(i, i);
    }
    return solve_upper_transposed(f, y);
}

SymMatrix inverse_pd(const SymMatrix& a) {
    const std::size_t p = a.dim();
    const auto f = cholesky(a);
    SymMatrix inv(p);
    std::vector<double> e(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        e[j] = 1.0;
        const auto col = cholesky_solve(f, e);
        e[j] = 0.0;
        // lower triangle taken from column j; set() mirrors it
        for (std::size_t i = j; i < p; ++i) inv.set(i, j, col[i]);
    }
    return inv;
}

double log_det_pd(const SymMatrix& a) {
    const auto f = cholesky(a);
    double s = 0.0;
    for (std::size_t i = 0; i < f.p; ++i) s += std::log(f.at(i, i));
    return 2.0 * s;
}

namespace {

struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off;  // off[k] couples k and k+1
};

// Householder reduction to tridiagonal form; eigenvalues only.
Tridiagonal tridiagonalize(const SymMatrix& a) {
    const std::size_t p = a.dim();
    std::vector<double> m = a.data();
    Tridiagonal t{std::vector<double>(p), std::vector<double>(p > 0 ? p - 1 : 0, 0.0)};
    std::vector<double> v(p), u(p), w(p);
    for (std::size_t k = 0; k + 2 < p; ++k) {
        const std::size_t len = p - k - 1;
        double xnorm = 0.0;
        for (std::size_t r = 0; r < len; ++r) xnorm += m[(k + 1 + r) * p + k] * m[(k + 1 + r) * p + k];
        xnorm = std::sqrt(xnorm);
        const double x0 = m[(k + 1) * p + k];
        if (xnorm == 0.0) {
            t.off[k] = 0.0;
            continue;
        }
        const double alpha = x0 > 0.0 ? -xnorm : xnorm;
        for (std::size_t r = 0; r < len; ++r) v[r] = m[(k + 1 + r) * p + k];
        v[0] -= alpha;
        double vnorm = 0.0;
        for (std::size_t r = 0; r < len; ++r) vnorm += v[r] * v[r];
        vnorm = std::sqrt(vnorm);
        t.off[k] = alpha;
        if (vnorm == 0.0) continue;
        for (std::size_t r = 0; r < len; ++r) v[r] /= vnorm;

        // trailing block A22 ← H A22 H with H = I − 2 v vᵀ
        double c = 0.0;
        for (std::size_t r = 0; r < len; ++r) {
            double s = 0.0;
            const double* row = &m[(k + 1 + r) * p + (k + 1)];
            for (std::size_t q = 0; q < len; ++q) s += row[q] * v[q];
            u[r] = s;
            c += v[r] * s;
        }
        for (std::size_t r = 0; r < len; ++r) w[r] = u[r] - c * v[r];
        for (std::size_t r = 0; r < len; ++r) {
            double* row = &m[(k + 1 + r) * p + (k + 1)];
            for (std::size_t q = 0; q < len; ++q) row[q] -= 2.0 * (v[r] * w[q] + w[r] * v[q]);
        }
    }
    for (std::size_t k = 0; k < p; ++k) t.diag[k] = m[k * p + k];
    if (p >= 2) t.off[p - 2] = m[(p - 1) * p + (p - 2)];
    return t;
}

// Number of eigenvalues strictly below x (Sturm sequence on the LDLᵀ pivots).
std::size_t count_below(const Tridiagonal& t, double x) {
    const std::size_t p = t.diag.size();
    constexpr double kTiny = std::numeric_limits<double>::min() * 1e10;
    std::size_t count = 0;
    double q = t.diag[0] - x;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < p; ++i) {
        if (q == 0.0) q = kTiny;
        q = t.diag[i] - x - t.off[i - 1] * t.off[i - 1] / q;
        if (q < 0.0) ++count;
    }
    return count;
}

// k-th smallest eigenvalue (0-based) by bisection.
double kth_eigenvalue(const Tridiagonal& t, std::size_t k, double lo, double hi, double tol) {
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= tol || mid <= lo || mid >= hi) return mid;
        if (count_below(t, mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    throw NonConvergence("eigenvalue bisection did not converge", 0.5 * (lo + hi));
}

std::pair<double, double> gershgorin(const Tridiagonal& t) {
    const std::size_t p = t.diag.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < p; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(t.off[i - 1]);
        if (i + 1 < p) r += std::abs(t.off[i]);
        lo = std::min(lo, t.diag[i] - r);
        hi = std::max(hi, t.diag[i] + r);
    }
    const double pad = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    return {lo - pad, hi + pad};
}

double effective_tol(double tol, double lo, double hi) {
    const double scale = std::max(std::abs(lo), std::abs(hi));
    return std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * scale);
}

}  // namespace

std::vector<double> symmetric_eigenvalues(const SymMatrix& a, double tol) {
    const auto t = tridiagonalize(a);
    const auto [lo, hi] = gershgorin(t);
    const double etol = effective_tol(tol, lo, hi);
    std::vector<double> ev(a.dim());
    for (std::size_t k = 0; k < a.dim(); ++k) ev[k] = kth_eigenvalue(t, k, lo, hi, etol);
    return ev;
}

double min_eigenvalue(const SymMatrix& a, double tol) {
    if (!(tol > 0.0)) throw InvalidInput("min_eigenvalue: tol must be positive");
    const auto t = tridiagonalize(a);
    const auto [lo, hi] = gershgorin(t);
    return kth_eigenvalue(t, 0, lo, hi, effective_tol(tol, lo, hi));
}

double spectral_norm(const SymMatrix& a, double tol) {
    if (!(tol > 0.0)) throw InvalidInput("spectral_norm: tol must be positive");
    const auto t = tridiagonalize(a);
    const auto [lo, hi] = gershgorin(t);
    const double eps = effective_tol(tol, lo, hi);
    const double smallest = kth_eigenvalue(t, 0, lo, hi, eps);
    const double largest = kth_eigenvalue(t, a.dim() - 1, lo, hi, eps);
    return std::max(std::abs(smallest), std::abs(largest));
}

bool positive_definite_beyond(const SymMatrix& a, double margin) {
    const std::size_t p = a.dim();
    std::vector<double> L(p * p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        double d = a(j, j) - margin;
        for (std::size_t k = 0; k < j; ++k) d -= L[j * p + k] * L[j * p + k];
        if (!(d > 0.0)) return false;
        const double ljj = std::sqrt(d);
        L[j * p + j] = ljj;
        for (std::size_t i = j + 1; i < p; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= L[i * p + k] * L[j * p + k];
            L[i * p + j] = s / ljj;
        }
    }
    return true;
}

SymMatrix read_matrix_text(std::istream& in) {
    long long p = 0;
    if (!(in >> p) || p < 1) throw InvalidInput("matrix text: first token must be a positive dimension");
    const auto dim = static_cast<std::size_t>(p);
    std::vector<std::vector<double>> rows(dim, std::vector<double>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            if (!(in >> rows[i][j])) {
                std::ostringstream msg;
                msg << "matrix text: missing or malformed entry (" << i << ',' << j << ")";
                throw InvalidInput(msg.str());
            }
            if (!std::isfinite(rows[i][j])) throw InvalidInput("matrix text: non-finite entry");
        }
    }
    return SymMatrix::from_rows(rows, 1e-12);
}

SymMatrix read_matrix_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open matrix file: " + path);
    return read_matrix_text(in);
}

void write_matrix_text(std::ostream& out, const SymMatrix& a) {
    out << a.dim() << '\n';
    out << std::setprecision(17);
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            if (j > 0) out << ' ';
            out << a(i, j);
        }
        out << '\n';
    }
}

void write_matrix_text_file(const std::string& path, const SymMatrix& a) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot open output file: " + path);
    write_matrix_text(out, a);
}

}  // namespace scio
