#include "scio/simgen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "scio/errors.hpp"
#include "scio/parallel.hpp"
#include "scio/solver.hpp"

namespace scio {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::decay: return "decay";
        case ModelKind::sparse: return "sparse";
        case ModelKind::block: return "block";
    }
    return "?";
}

ModelKind parse_model_kind(const std::string& name) {
    if (name == "decay") return ModelKind::decay;
    if (name == "sparse") return ModelKind::sparse;
    if (name == "block") return ModelKind::block;
    throw InvalidInput("unknown model '" + name + "' (expected decay, sparse or block)");
}

std::string to_string(Selection s) {
    switch (s) {
        case Selection::bregman_validation: return "bregman_validation";
        case Selection::cv_column: return "cv_column";
        case Selection::oracle_frobenius: return "oracle_frobenius";
    }
    return "?";
}

Selection parse_selection(const std::string& name) {
    if (name == "bregman_validation" || name == "bregman") return Selection::bregman_validation;
    if (name == "cv_column" || name == "cv") return Selection::cv_column;
    if (name == "oracle_frobenius" || name == "oracle") return Selection::oracle_frobenius;
    throw InvalidInput("unknown selection rule '" + name + "'");
}

void GraphModelSpec::validate() const {
    if (p_block < 1) throw InvalidInput("model: first block size must be at least 1");
    switch (kind) {
        case ModelKind::decay:
            if (!(std::abs(decay_base) < 1.0)) throw InvalidInput("model decay: |base| must be < 1");
            break;
        case ModelKind::sparse:
            if (!(sparse_prob >= 0.0 && sparse_prob <= 1.0)) throw InvalidInput("model sparse: prob must lie in [0, 1]");
            if (!std::isfinite(sparse_value)) throw InvalidInput("model sparse: value must be finite");
            break;
        case ModelKind::block: {
            if (block_size < 1) throw InvalidInput("model block: block size must be at least 1");
            const double m = static_cast<double>(block_size);
            if (!(block_offdiag < 1.0 && 1.0 + (m - 1.0) * block_offdiag > 0.0))
                throw InvalidInput("model block: off-diagonal value makes the blocks indefinite");
            break;
        }
    }
}

SymMatrix gen_decay(std::size_t p, double base) {
    if (!(std::abs(base) < 1.0)) throw InvalidInput("gen_decay: |base| must be < 1");
    SymMatrix m(p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) m.set(i, j, std::pow(base, static_cast<double>(j - i)));
    return m;
}

double shifted_condition_number(std::span<const double> eigenvalues, double delta) {
    double hi = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    for (double mu : eigenvalues) {
        const double s = std::abs(mu + delta);
        hi = std::max(hi, s);
        lo = std::min(lo, s);
    }
    return lo == 0.0 ? std::numeric_limits<double>::infinity() : hi / lo;
}

SparseModel gen_sparse(std::size_t p, double prob, double value, Rng& rng) {
    if (!(prob >= 0.0 && prob <= 1.0)) throw InvalidInput("gen_sparse: prob must lie in [0, 1]");
    constexpr int kMaxDraws = 20;
    const double target = static_cast<double>(p);

    for (int draw = 0; draw < kMaxDraws; ++draw) {
        SymMatrix o(p);
        bool any = false;
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = i + 1; j < p; ++j) {
                if (rng.bernoulli(prob) && value != 0.0) {
                    o.set(i, j, value);
                    any = true;
                }
            }
        }
        if (!any) return {SymMatrix::identity(p), 0.0, 1.0, true};

        // cond(O + δI) is decreasing in δ on (−μ_min, ∞), from +∞ towards 1.
        const auto ev = symmetric_eigenvalues(o);
        const double norm = std::max(std::abs(ev.front()), std::abs(ev.back()));
        double lo = -ev.front();
        double hi = 10.0 * norm;
        if (!(lo < hi) || !(shifted_condition_number(ev, hi) < target)) continue;

        double delta = 0.5 * (lo + hi);
        bool found = false;
        for (int it = 0; it < 200; ++it) {
            delta = 0.5 * (lo + hi);
            const double gap = shifted_condition_number(ev, delta) - target;
            if (std::abs(gap) <= 1e-8) {
                found = true;
                break;
            }
            if (gap > 0.0)
                lo = delta;
            else
                hi = delta;
        }
        if (!found) continue;

        // O has a zero diagonal, so every diagonal entry of O + δI equals δ and
        // the unit-diagonal rescaling is a division by δ.
        SymMatrix out(p);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = i; j < p; ++j) out.set(i, j, i == j ? 1.0 : o(i, j) / delta);
        return {std::move(out), delta, shifted_condition_number(ev, delta), false};
    }
    throw InvalidInput("gen_sparse: could not calibrate the diagonal shift after repeated draws");
}

SymMatrix gen_block(std::size_t p, std::size_t block_size, double offdiag, Rng& rng) {
    if (block_size < 1) throw InvalidInput("gen_block: block size must be at least 1");
    SymMatrix base(p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i; j < p; ++j) {
            if (i == j)
                base.set(i, j, 1.0);
            else if (i / block_size == j / block_size)
                base.set(i, j, offdiag);
        }
    }
    std::vector<std::size_t> perm(p);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(perm));
    SymMatrix out(p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) out.set(i, j, base(perm[i], perm[j]));
    return out;
}

SymMatrix two_block_compose(const SymMatrix& first_block) {
    const std::size_t q = first_block.dim();
    SymMatrix out(2 * q);
    for (std::size_t i = 0; i < q; ++i) {
        for (std::size_t j = i; j < q; ++j) {
            out.set(i, j, first_block(i, j));
            out.set(q + i, q + j, 4.0 * first_block(i, j));
        }
    }
    return out;
}

SymMatrix generate_truth(const GraphModelSpec& spec, Rng& rng) {
    spec.validate();
    switch (spec.kind) {
        case ModelKind::decay: return two_block_compose(gen_decay(spec.p_block, spec.decay_base));
        case ModelKind::sparse:
            return two_block_compose(gen_sparse(spec.p_block, spec.sparse_prob, spec.sparse_value, rng).matrix);
        case ModelKind::block:
            return two_block_compose(gen_block(spec.p_block, spec.block_size, spec.block_offdiag, rng));
    }
    throw InvalidInput("generate_truth: unknown model");
}

DataMatrix sample_gaussian(const SymMatrix& omega_truth, std::size_t n, Rng& rng) {
    if (n == 0) throw InvalidInput("sample_gaussian: n must be at least 1");
    // Ω = L Lᵀ  ⇒  x = L⁻ᵀ z has covariance Ω⁻¹.
    const auto factor = cholesky(omega_truth);
    const std::size_t p = omega_truth.dim();
    std::vector<double> values;
    values.reserve(n * p);
    std::vector<double> z(p);
    for (std::size_t k = 0; k < n; ++k) {
        for (auto& v : z) v = rng.normal();
        const auto x = solve_upper_transposed(factor, z);
        values.insert(values.end(), x.begin(), x.end());
    }
    return DataMatrix(n, p, std::move(values));
}

DataMatrix sample_gaussian(const SymMatrix& omega_truth, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return sample_gaussian(omega_truth, n, rng);
}

DataMatrix sample_gaussian_covariance(const SymMatrix& sigma, std::size_t n, Rng& rng) {
    if (n == 0) throw InvalidInput("sample_gaussian_covariance: n must be at least 1");
    const auto factor = cholesky(sigma);
    const std::size_t p = sigma.dim();
    std::vector<double> values;
    values.reserve(n * p);
    std::vector<double> z(p);
    for (std::size_t k = 0; k < n; ++k) {
        for (auto& v : z) v = rng.normal();
        for (std::size_t i = 0; i < p; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j <= i; ++j) s += factor.at(i, j) * z[j];
            values.push_back(s);
        }
    }
    return DataMatrix(n, p, std::move(values));
}

void BenchmarkConfig::validate() const {
    model.validate();
    if (n_train < 2 || n_validate < 2) throw InvalidInput("benchmark: training and validation samples need ≥ 2 rows");
    if (replicates < 1) throw InvalidInput("benchmark: replicates must be at least 1");
    if (grid_n < 2) throw InvalidInput("benchmark: grid size must be at least 2");
    if (p_values.empty()) throw InvalidInput("benchmark: no dimensions given");
    for (auto p : p_values)
        if (p < 2 || p % 2 != 0) throw InvalidInput("benchmark: every p must be even and ≥ 2 (two equal blocks)");
    if (!(solver_tol > 0.0)) throw InvalidInput("benchmark: solver tolerance must be positive");
    if (support_threshold < 0.0) throw InvalidInput("benchmark: support threshold must be non-negative");
}

namespace {

std::uint64_t dimension_seed(std::uint64_t seed, std::size_t p) {
    return splitmix64(seed) + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(p);
}

double clime_excess(const SymMatrix& sigma, const ColumnSolution& sol) {
    if (!sol.converged) return 0.0;
    const auto g = multiply(sigma, sol.beta);
    double worst = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
        worst = std::max(worst, std::abs(g[j] - (j == sol.index ? 1.0 : 0.0)));
    return worst - sol.lambda;
}

}  // namespace

ReplicateRecord run_replicate(const BenchmarkConfig& cfg, std::size_t p, std::size_t replicate,
                              std::vector<unsigned char>* support_out) {
    const auto start = std::chrono::steady_clock::now();
    ReplicateRecord rec;
    rec.p = p;
    rec.replicate = replicate;

    Rng rng = Rng::child(dimension_seed(cfg.seed, p), replicate);
    GraphModelSpec spec = cfg.model;
    spec.p_block = p / 2;
    const SymMatrix generated = generate_truth(spec, rng);

    SymMatrix omega = generated;
    DataMatrix train(1, 1, {0.0});
    DataMatrix validate(1, 1, {0.0});
    if (cfg.truth_is_precision) {
        train = sample_gaussian(generated, cfg.n_train, rng);
        validate = sample_gaussian(generated, cfg.n_validate, rng);
    } else {
        omega = inverse_pd(generated);
        train = sample_gaussian_covariance(generated, cfg.n_train, rng);
        validate = sample_gaussian_covariance(generated, cfg.n_validate, rng);
    }

    const auto cov_train = perturb_to_pd(sample_covariance(train));
    const auto cov_val = sample_covariance(validate);

    SolverConfig solver;
    solver.tol = cfg.solver_tol;
    solver.threads = 1;

    PrecisionEstimate chosen;
    if (cfg.selection == Selection::cv_column) {
        const CovarianceSplit split{cov_train.sigma_hat, cov_val.sigma_hat, cov_train.n_used, cov_train.rho_applied};
        const auto grid = cv_grid(cfg.grid_n, std::max(max_abs_offdiagonal(cov_train.sigma_hat), 1e-12));
        std::vector<ColumnSolution> columns;
        for (std::size_t i = 0; i < p; ++i) {
            auto sel = select_lambda_on_grid(i, std::span(&split, 1), grid, solver);
            rec.lambdas.push_back(sel.result.chosen_lambda);
            rec.worst_clime_excess = std::max(rec.worst_clime_excess, clime_excess(cov_train.sigma_hat, sel.first_fold_solution));
            columns.push_back(std::move(sel.first_fold_solution));
        }
        chosen = assemble_and_symmetrize(columns, cov_train.rho_applied);
        perturb_estimate_to_pd(chosen, cov_train.n_used);
    } else {
        solver.lambda_grid = default_lambda_grid(cov_train.sigma_hat, cfg.grid_n);
        const auto paths = solve_all_paths(cov_train.sigma_hat, solver);
        double best_score = std::numeric_limits<double>::infinity();
        std::vector<ColumnSolution> columns(p);
        for (std::size_t k = 0; k < solver.lambda_grid.size(); ++k) {
            for (std::size_t i = 0; i < p; ++i) {
                columns[i] = paths[i][k];
                rec.worst_clime_excess = std::max(rec.worst_clime_excess, clime_excess(cov_train.sigma_hat, columns[i]));
            }
            auto est = assemble_and_symmetrize(columns, cov_train.rho_applied);
            perturb_estimate_to_pd(est, cov_train.n_used);
            const double score = cfg.selection == Selection::bregman_validation
                                     ? bregman_loss(cov_val.sigma_hat, est.omega_hat)
                                     : frobenius_norm(est.omega_hat - omega);
            // strict improvement only: ties keep the larger λ seen first
            if (score < best_score) {
                best_score = score;
                chosen = std::move(est);
                rec.lambdas = {solver.lambda_grid[k]};
            }
        }
    }

    rec.loss = loss_report(chosen.omega_hat, omega);
    rec.support = support_report(chosen.omega_hat, omega, cfg.support_threshold);
    rec.rho_applied = chosen.rho_applied;
    rec.max_kkt_residual = chosen.max_kkt_residual();
    rec.all_converged = chosen.all_converged();
    rec.ok = true;
    if (support_out) {
        support_out->assign(p * p, 0);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j)
                (*support_out)[i * p + j] = std::abs(chosen.omega_hat(i, j)) > cfg.support_threshold ? 1 : 0;
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

BenchmarkResult run_benchmark(const BenchmarkConfig& cfg) {
    cfg.validate();
    BenchmarkResult result;
    result.config = cfg;

    for (const std::size_t p : cfg.p_values) {
        std::vector<ReplicateRecord> recs(cfg.replicates);
        std::vector<std::vector<unsigned char>> supports(cfg.replicates);
        parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
            try {
                recs[r] = run_replicate(cfg, p, r, &supports[r]);
            } catch (const std::exception& e) {
                recs[r] = ReplicateRecord{};
                recs[r].p = p;
                recs[r].replicate = r;
                recs[r].error = e.what();
                supports[r].clear();
            }
        });

        BenchmarkRow row;
        row.p = p;
        row.support_counts.assign(p * p, 0);
        std::vector<double> spec, frob, tn, tp;
        for (std::size_t r = 0; r < cfg.replicates; ++r) {
            const auto& rec = recs[r];
            if (!rec.ok) {
                ++row.failed;
                continue;
            }
            ++row.succeeded;
            spec.push_back(rec.loss.spectral);
            frob.push_back(rec.loss.frobenius);
            if (rec.support.tn_pct) tn.push_back(*rec.support.tn_pct);
            if (rec.support.tp_pct) tp.push_back(*rec.support.tp_pct);
            for (std::size_t k = 0; k < p * p; ++k) row.support_counts[k] += supports[r][k];
        }
        row.spectral = summarize(spec);
        row.frobenius = summarize(frob);
        row.tn_pct = summarize(tn);
        row.tp_pct = summarize(tp);
        result.rows.push_back(std::move(row));
        for (auto& rec : recs) result.replicates.push_back(std::move(rec));
    }
    return result;
}

std::string format_benchmark_table(const BenchmarkResult& result) {
    const auto& cfg = result.config;
    std::ostringstream out;
    out << "model: " << to_string(cfg.model.kind) << "  selection: " << to_string(cfg.selection)
        << "  n_train: " << cfg.n_train << "  n_validate: " << cfg.n_validate << "  replicates: " << cfg.replicates
        << "  truth: " << (cfg.truth_is_precision ? "precision" : "covariance") << '\n';
    char line[256];
    std::snprintf(line, sizeof line, "%-6s %-16s %-16s %-16s %-16s %s\n", "p", "Spectral", "Frobenius", "TN%", "TP%",
                  "failed");
    out << line;
    for (const auto& row : result.rows) {
        const auto cell = [](const Summary& s) { return s.count == 0 ? std::string("NA") : format_mean_sd(s); };
        std::snprintf(line, sizeof line, "%-6zu %-16s %-16s %-16s %-16s %zu\n", row.p, cell(row.spectral).c_str(),
                      cell(row.frobenius).c_str(), cell(row.tn_pct).c_str(), cell(row.tp_pct).c_str(), row.failed);
        out << line;
    }
    return out.str();
}

}  // namespace scio
