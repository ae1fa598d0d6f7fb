#include "scio/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "scio/errors.hpp"
#include "scio/solver.hpp"

namespace scio::oracle {

bool SupportSet::contains(std::size_t i, std::size_t j) const {
    return std::binary_search(entries.begin(), entries.end(), std::pair{i, j});
}

std::vector<std::size_t> SupportSet::column(std::size_t j) const {
    std::vector<std::size_t> rows;
    for (const auto& [r, c] : entries)
        if (c == j) rows.push_back(r);
    return rows;
}

namespace {

// Dense row-major solve of M x = b (m×m) with partial pivoting.
std::optional<std::vector<double>> gauss_solve(std::vector<double> m, std::vector<double> b, std::size_t n) {
    double scale = 0.0;
    for (double v : m) scale = std::max(scale, std::abs(v));
    const double floor = 1e-13 * std::max(scale, 1.0);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r * n + col]) > std::abs(m[piv * n + col])) piv = r;
        if (std::abs(m[piv * n + col]) <= floor) return std::nullopt;
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(m[col * n + c], m[piv * n + c]);
            std::swap(b[col], b[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = m[r * n + col] / m[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= m[r * n + c] * x[c];
        x[r] = s / m[r * n + r];
    }
    return x;
}

double objective(const SymMatrix& s, std::size_t i, double lambda, const std::vector<double>& beta) {
    const std::size_t p = s.dim();
    double quad = 0.0;
    double l1 = 0.0;
    for (std::size_t a = 0; a < p; ++a) {
        if (beta[a] == 0.0) continue;
        l1 += std::abs(beta[a]);
        for (std::size_t b = 0; b < p; ++b) quad += beta[a] * s(a, b) * beta[b];
    }
    return 0.5 * quad - beta[i] + lambda * l1;
}

}  // namespace

std::vector<double> brute_force_column(const SymMatrix& sigma_hat, std::size_t i, double lambda) {
    const std::size_t p = sigma_hat.dim();
    if (p > kMaxBruteForceDim) throw InvalidInput("brute_force_column: p > 12 is not supported");
    if (i >= p) throw InvalidInput("brute_force_column: column index out of range");
    if (!(lambda >= 0.0)) throw InvalidInput("brute_force_column: lambda must be non-negative");

    const double slack = 1e-10 * std::max(1.0, lambda);
    std::vector<int> sign(p, -1);  // digits in {-1, 0, +1}; lexicographic enumeration
    std::optional<std::vector<double>> best;
    double best_obj = std::numeric_limits<double>::infinity();

    std::size_t total = 1;
    for (std::size_t k = 0; k < p; ++k) total *= 3;

    for (std::size_t code = 0; code < total; ++code) {
        // decode: coordinate 0 is the most significant digit
        std::size_t c = code;
        for (std::size_t k = p; k-- > 0;) {
            sign[k] = static_cast<int>(c % 3) - 1;
            c /= 3;
        }
        std::vector<std::size_t> act;
        for (std::size_t k = 0; k < p; ++k)
            if (sign[k] != 0) act.push_back(k);

        std::vector<double> beta(p, 0.0);
        if (!act.empty()) {
            const std::size_t m = act.size();
            std::vector<double> mat(m * m), rhs(m);
            for (std::size_t r = 0; r < m; ++r) {
                for (std::size_t q = 0; q < m; ++q) mat[r * m + q] = sigma_hat(act[r], act[q]);
                rhs[r] = (act[r] == i ? 1.0 : 0.0) - lambda * sign[act[r]];
            }
            const auto sol = gauss_solve(std::move(mat), std::move(rhs), m);
            if (!sol) continue;
            bool consistent = true;
            for (std::size_t r = 0; r < m && consistent; ++r) {
                if (!((*sol)[r] * sign[act[r]] > 0.0)) consistent = false;
                beta[act[r]] = (*sol)[r];
            }
            if (!consistent) continue;
        }
        bool kkt_ok = true;
        for (std::size_t j = 0; j < p && kkt_ok; ++j) {
            if (sign[j] != 0) continue;
            double g = -(j == i ? 1.0 : 0.0);
            for (std::size_t k : act) g += sigma_hat(j, k) * beta[k];
            if (std::abs(g) > lambda + slack) kkt_ok = false;
        }
        if (!kkt_ok) continue;
        const double obj = objective(sigma_hat, i, lambda, beta);
        if (obj < best_obj) {
            best_obj = obj;
            best = std::move(beta);
        }
    }
    if (!best) throw InvalidInput("brute_force_column: no sign pattern satisfies the optimality conditions");
    return *best;
}

double kkt_residual(std::span<const double> beta, const SymMatrix& sigma_hat, std::size_t i, double lambda) {
    const std::size_t p = sigma_hat.dim();
    if (beta.size() != p || i >= p) throw InvalidInput("kkt_residual: dimension mismatch");
    double worst = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        double r = -(j == i ? 1.0 : 0.0);
        for (std::size_t k = 0; k < p; ++k) r += sigma_hat(j, k) * beta[k];
        const double v = beta[j] != 0.0 ? std::abs(r + lambda * (beta[j] > 0.0 ? 1.0 : -1.0))
                                        : std::max(std::abs(r) - lambda, 0.0);
        worst = std::max(worst, v);
    }
    return worst;
}

SymMatrix exact_inverse(const SymMatrix& a, double zero_below) {
    const std::size_t n = a.dim();
    std::vector<double> m(a.data());
    std::vector<double> inv(n * n, 0.0);
    for (std::size_t k = 0; k < n; ++k) inv[k * n + k] = 1.0;
    double scale = 0.0;
    for (double v : m) scale = std::max(scale, std::abs(v));
    const double floor = 1e-13 * std::max(scale, 1.0);

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r * n + col]) > std::abs(m[piv * n + col])) piv = r;
        if (std::abs(m[piv * n + col]) <= floor) throw InvalidInput("exact_inverse: matrix is singular");
        if (piv != col)
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(m[col * n + c], m[piv * n + c]);
                std::swap(inv[col * n + c], inv[piv * n + c]);
            }
        const double d = m[col * n + col];
        for (std::size_t c = 0; c < n; ++c) {
            m[col * n + c] /= d;
            inv[col * n + c] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = m[r * n + col];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < n; ++c) {
                m[r * n + c] -= f * m[col * n + c];
                inv[r * n + c] -= f * inv[col * n + c];
            }
        }
    }
    SymMatrix out(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = r; c < n; ++c) {
            double v = 0.5 * (inv[r * n + c] + inv[c * n + r]);
            if (std::abs(v) < zero_below) v = 0.0;
            out.set(r, c, v);
        }
    }
    return out;
}

double irrepresentable_margin(const SymMatrix& sigma, const SymMatrix& omega_truth) {
    constexpr double kZero = 1e-10;
    const std::size_t p = sigma.dim();
    if (omega_truth.dim() != p) throw InvalidInput("irrepresentable_margin: dimension mismatch");

    double worst = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        std::vector<std::size_t> in, out;
        for (std::size_t j = 0; j < p; ++j) (std::abs(omega_truth(j, i)) > kZero ? in : out).push_back(j);
        if (in.empty() || out.empty()) continue;
        const auto inv_ss = exact_inverse(principal_submatrix(sigma, in));
        for (std::size_t r : out) {
            double row_sum = 0.0;
            for (std::size_t c = 0; c < in.size(); ++c) {
                double v = 0.0;
                for (std::size_t k = 0; k < in.size(); ++k) v += sigma(r, in[k]) * inv_ss(k, c);
                row_sum += std::abs(v);
            }
            worst = std::max(worst, row_sum);
        }
    }
    return 1.0 - worst;
}

SupportSet support_of(const SymMatrix& a, double threshold) {
    if (threshold < 0.0) throw InvalidInput("support_of: threshold must be non-negative");
    SupportSet s{a.dim(), {}};
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            if (std::abs(a(i, j)) > threshold) s.entries.emplace_back(i, j);
    return s;
}

SymMatrix diamond_graph(double rho) {
    SymMatrix s(4, 0.0);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i; j < 4; ++j) s.set(i, j, i == j ? 1.0 : rho);
    s.set(1, 2, 0.0);
    s.set(0, 3, 2.0 * rho * rho);
    return s;
}

SymMatrix star_graph(double rho) {
    SymMatrix s(4, 0.0);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i; j < 4; ++j) s.set(i, j, i == j ? 1.0 : (i == 0 ? rho : rho * rho));
    return s;
}

ColumnInstance random_column_instance(std::size_t p, Rng& rng, double lambda_lo, double lambda_hi) {
    if (p < 1) throw InvalidInput("random_column_instance: p must be at least 1");
    if (!(lambda_lo > 0.0 && lambda_lo <= lambda_hi)) throw InvalidInput("random_column_instance: bad lambda range");
    const std::size_t m = p + 2;
    std::vector<double> a(p * m);
    for (auto& v : a) v = rng.normal();
    SymMatrix s(p);
    for (std::size_t r = 0; r < p; ++r) {
        for (std::size_t c = r; c < p; ++c) {
            double dot = 0.0;
            for (std::size_t k = 0; k < m; ++k) dot += a[r * m + k] * a[c * m + k];
            s.set(r, c, dot / static_cast<double>(m) + (r == c ? 0.05 : 0.0));
        }
    }
    const auto i = static_cast<std::size_t>(rng.uniform_index(p));
    const double lambda = std::exp(std::log(lambda_lo) + rng.uniform() * (std::log(lambda_hi) - std::log(lambda_lo)));
    return {std::move(s), i, lambda};
}

Comparison compare_with_solver(const ColumnInstance& inst, double solver_tol) {
    SolverConfig cfg;
    cfg.tol = solver_tol;
    cfg.max_sweeps = 100'000;
    const auto sol = solve_column(inst.sigma, inst.i, inst.lambda, cfg);
    Comparison c;
    c.oracle_beta = brute_force_column(inst.sigma, inst.i, inst.lambda);
    c.solver_beta = sol.beta;
    c.solver_converged = sol.converged;
    c.solver_objective = objective(inst.sigma, inst.i, inst.lambda, c.solver_beta);
    c.oracle_objective = objective(inst.sigma, inst.i, inst.lambda, c.oracle_beta);
    c.objective_gap = c.solver_objective - c.oracle_objective;
    for (std::size_t k = 0; k < c.solver_beta.size(); ++k)
        c.max_coordinate_gap = std::max(c.max_coordinate_gap, std::abs(c.solver_beta[k] - c.oracle_beta[k]));
    return c;
}

}  // namespace scio::oracle
