#include "scio/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "scio/errors.hpp"
#include "scio/parallel.hpp"

namespace scio {

void SolverConfig::validate() const {
    if (!(tol > 0.0) || !std::isfinite(tol)) throw InvalidInput("solver: tol must be positive");
    if (max_sweeps < 1) throw InvalidInput("solver: max_sweeps must be at least 1");
    for (std::size_t k = 0; k < lambda_grid.size(); ++k) {
        if (!(lambda_grid[k] > 0.0) || !std::isfinite(lambda_grid[k]))
            throw InvalidInput("solver: every lambda must be positive and finite");
        if (k > 0 && !(lambda_grid[k] < lambda_grid[k - 1]))
            throw InvalidInput("solver: lambda grid must be strictly decreasing");
    }
}

bool PrecisionEstimate::all_converged() const {
    return std::all_of(per_column_meta.begin(), per_column_meta.end(), [](const auto& c) { return c.converged; });
}

double PrecisionEstimate::max_kkt_residual() const {
    double m = 0.0;
    for (const auto& c : per_column_meta) m = std::max(m, c.kkt_residual);
    return m;
}

namespace {

void check_column_problem(const SymMatrix& sigma, std::size_t i, double lambda) {
    if (i >= sigma.dim()) throw InvalidInput("solver: column index out of range");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("solver: lambda must be positive");
    for (std::size_t j = 0; j < sigma.dim(); ++j) {
        if (!(sigma(j, j) > 0.0)) {
            std::ostringstream msg;
            msg << "solver: degenerate column, sigma_hat(" << j << ',' << j << ") = " << sigma(j, j);
            throw InvalidInput(msg.str());
        }
    }
}

// Violation of 0 ∈ g − eᵢ + λ∂|β|₁ with g = Σ̂β.
double kkt_from_gradient(std::span<const double> grad, std::span<const double> beta, std::size_t i, double lambda) {
    double worst = 0.0;
    for (std::size_t j = 0; j < beta.size(); ++j) {
        const double r = grad[j] - (j == i ? 1.0 : 0.0);
        const double v = beta[j] == 0.0 ? std::max(std::abs(r) - lambda, 0.0)
                                        : std::abs(r + lambda * (beta[j] > 0.0 ? 1.0 : -1.0));
        worst = std::max(worst, v);
    }
    return worst;
}

// Coordinate descent state: β and the cached gradient g = Σ̂β.
class ColumnState {
public:
    ColumnState(const SymMatrix& sigma, std::size_t i, double lambda, std::span<const double> init)
        : sigma_(sigma), i_(i), lambda_(lambda), beta_(sigma.dim(), 0.0), grad_(sigma.dim(), 0.0) {
        if (!init.empty()) {
            if (init.size() != sigma.dim()) throw InvalidInput("solver: initial vector has wrong length");
            std::copy(init.begin(), init.end(), beta_.begin());
            refresh_gradient();
        }
    }

    template <class Indices>
    double sweep(const Indices& coords) {
        double max_change = 0.0;
        for (std::size_t j : coords) max_change = std::max(max_change, update(j));
        return max_change;
    }

    double full_sweep() {
        double max_change = 0.0;
        for (std::size_t j = 0; j < beta_.size(); ++j) max_change = std::max(max_change, update(j));
        return max_change;
    }

    void refresh_gradient() { grad_ = multiply(sigma_, beta_); }

    double kkt() const { return kkt_from_gradient(grad_, beta_, i_, lambda_); }

    std::vector<std::size_t> active() const {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < beta_.size(); ++j)
            if (beta_[j] != 0.0) out.push_back(j);
        return out;
    }

    const std::vector<double>& beta() const { return beta_; }
    std::vector<double> take_beta() { return std::move(beta_); }

private:
    double update(std::size_t j) {
        const double sjj = sigma_(j, j);
        const double old = beta_[j];
        const double x = (j == i_ ? 1.0 : 0.0) - (grad_[j] - sjj * old);
        const double fresh = soft_threshold(x, lambda_) / sjj;
        const double delta = fresh - old;
        if (delta == 0.0) return 0.0;
        beta_[j] = fresh;
        const auto col = sigma_.column(j);
        for (std::size_t k = 0; k < grad_.size(); ++k) grad_[k] += delta * col[k];
        return std::abs(delta);
    }

    const SymMatrix& sigma_;
    std::size_t i_;
    double lambda_;
    std::vector<double> beta_;
    std::vector<double> grad_;
};

}  // namespace

double coordinate_update(std::size_t j, std::span<const double> beta, const SymMatrix& sigma_hat, std::size_t i,
                         double lambda) {
    const std::size_t p = sigma_hat.dim();
    if (j >= p || i >= p || beta.size() != p) throw InvalidInput("coordinate_update: index or length mismatch");
    if (lambda < 0.0) throw InvalidInput("coordinate_update: lambda must be non-negative");
    const double sjj = sigma_hat(j, j);
    if (!(sjj > 0.0)) throw InvalidInput("coordinate_update: zero diagonal entry, column is degenerate");
    double cross = 0.0;
    for (std::size_t k = 0; k < p; ++k)
        if (k != j) cross += beta[k] * sigma_hat(k, j);
    return soft_threshold((j == i ? 1.0 : 0.0) - cross, lambda) / sjj;
}

double column_objective(const SymMatrix& sigma_hat, std::size_t i, double lambda, std::span<const double> beta) {
    const auto sb = multiply(sigma_hat, beta);
    double quad = 0.0;
    double l1 = 0.0;
    for (std::size_t j = 0; j < beta.size(); ++j) {
        quad += beta[j] * sb[j];
        l1 += std::abs(beta[j]);
    }
    return 0.5 * quad - beta[i] + lambda * l1;
}

ColumnSolution solve_column(const SymMatrix& sigma_hat, std::size_t i, double lambda, const SolverConfig& config,
                            std::span<const double> init, const SweepObserver& on_sweep) {
    config.validate();
    check_column_problem(sigma_hat, i, lambda);

    ColumnState state(sigma_hat, i, lambda, init);
    int sweeps = 0;
    bool converged = false;
    const auto observe = [&] {
        if (on_sweep) on_sweep(sweeps, state.beta());
    };

    while (sweeps < config.max_sweeps) {
        const double change = state.full_sweep();
        ++sweeps;
        observe();
        if (change < config.tol) {
            state.refresh_gradient();
            if (state.kkt() <= config.tol) {
                converged = true;
                break;
            }
        }
        if (config.active_set && sweeps >= 2) {
            const auto active = state.active();
            while (sweeps < config.max_sweeps) {
                const double c = state.sweep(active);
                ++sweeps;
                observe();
                if (c < config.tol) break;
            }
        }
    }

    state.refresh_gradient();
    ColumnSolution out;
    out.index = i;
    out.lambda = lambda;
    out.sweeps_used = sweeps;
    out.converged = converged;
    out.kkt_residual = state.kkt();
    out.beta = state.take_beta();
    return out;
}

std::vector<ColumnSolution> solve_path(const SymMatrix& sigma_hat, std::size_t i, const SolverConfig& config) {
    config.validate();
    if (config.lambda_grid.empty()) throw InvalidInput("solve_path: lambda grid is empty");
    std::vector<ColumnSolution> path;
    path.reserve(config.lambda_grid.size());
    for (double lambda : config.lambda_grid) {
        std::span<const double> init;
        if (config.warm_start && !path.empty()) init = path.back().beta;
        path.push_back(solve_column(sigma_hat, i, lambda, config, init));
    }
    return path;
}

std::vector<std::vector<ColumnSolution>> solve_all_paths(const SymMatrix& sigma_hat, const SolverConfig& config) {
    std::vector<std::vector<ColumnSolution>> paths(sigma_hat.dim());
    parallel_for(sigma_hat.dim(), config.threads, [&](std::size_t i) { paths[i] = solve_path(sigma_hat, i, config); });
    return paths;
}

std::vector<ColumnSolution> solve_all_columns(const SymMatrix& sigma_hat, std::span<const double> lambdas,
                                              const SolverConfig& config) {
    if (lambdas.size() != sigma_hat.dim())
        throw InvalidInput("per-column lambda vector must have exactly p entries");
    std::vector<ColumnSolution> cols(sigma_hat.dim());
    parallel_for(sigma_hat.dim(), config.threads,
                 [&](std::size_t i) { cols[i] = solve_column(sigma_hat, i, lambdas[i], config); });
    return cols;
}

PrecisionEstimate assemble_and_symmetrize(std::span<const ColumnSolution> columns, double covariance_rho) {
    const std::size_t p = columns.size();
    if (p == 0) throw InvalidInput("assemble_and_symmetrize: no columns");
    std::vector<const ColumnSolution*> by_index(p, nullptr);
    for (const auto& c : columns) {
        if (c.index >= p) throw InvalidInput("assemble_and_symmetrize: column index out of range");
        if (by_index[c.index] != nullptr) throw InvalidInput("assemble_and_symmetrize: duplicate column index");
        if (c.beta.size() != p) throw InvalidInput("assemble_and_symmetrize: column length differs from p");
        by_index[c.index] = &c;
    }

    PrecisionEstimate est;
    est.omega_hat = SymMatrix(p);
    est.covariance_rho = covariance_rho;
    est.lambda_per_column.resize(p);
    est.per_column_meta.resize(p);
    for (std::size_t i = 0; i < p; ++i) {
        const auto& ci = *by_index[i];
        for (std::size_t j = i; j < p; ++j) {
            const double bij = ci.beta[j];
            const double bji = by_index[j]->beta[i];
            est.omega_hat.set(i, j, std::abs(bij) < std::abs(bji) ? bij : bji);
        }
        est.lambda_per_column[i] = ci.lambda;
        const auto nnz = static_cast<std::size_t>(std::count_if(ci.beta.begin(), ci.beta.end(), [](double b) { return b != 0.0; }));
        est.per_column_meta[i] = {ci.index, ci.lambda, ci.sweeps_used, ci.converged, ci.kkt_residual, nnz};
    }
    return est;
}

void perturb_estimate_to_pd(PrecisionEstimate& est, std::size_t n) {
    if (n == 0) throw InvalidInput("perturb_estimate_to_pd: n must be positive");
    // Same 1e-12 margin as the covariance perturbation, so a perturbed Ω̂ always
    // clears the Cholesky pivot floor of log_det_pd.
    constexpr double kPdMargin = 1e-12;
    if (positive_definite_beyond(est.omega_hat, kPdMargin)) return;
    // The shifted Cholesky failing means λ_min ≤ 1e-12 up to rounding; the
    // eigenvalue only sizes the shift.
    const double lmin = min_eigenvalue(est.omega_hat, 1e-14);
    const double rho = std::abs(lmin) + 1.0 / std::sqrt(static_cast<double>(n));
    est.omega_hat.add_to_diagonal(rho);
    est.rho_applied += rho;
}

std::vector<double> log_spaced_grid(double hi, double lo, std::size_t count) {
    if (!(hi > 0.0) || !(lo > 0.0) || !(lo < hi)) throw InvalidInput("log_spaced_grid: need 0 < lo < hi");
    if (count < 2) throw InvalidInput("log_spaced_grid: need at least 2 points");
    std::vector<double> grid(count);
    const double a = std::log(hi);
    const double b = std::log(lo);
    for (std::size_t k = 0; k < count; ++k)
        grid[k] = std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1));
    grid.front() = hi;
    grid.back() = lo;
    return grid;
}

std::vector<double> default_lambda_grid(const SymMatrix& sigma_hat, std::size_t count, double ratio) {
    double hi = max_abs_offdiagonal(sigma_hat);
    if (!(hi > 0.0)) hi = 1.0;
    return log_spaced_grid(hi, hi * ratio, count);
}

}  // namespace scio
