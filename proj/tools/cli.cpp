#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "scio/covariance.hpp"
#include "scio/errors.hpp"
#include "scio/estimator.hpp"
#include "scio/io.hpp"
#include "scio/oracle.hpp"
#include "scio/parallel.hpp"
#include "scio/simgen.hpp"
#include "scio/solver.hpp"
#include "scio/tuning.hpp"

namespace scio::cli {
namespace {

struct DataOptions {
    std::string input;
    bool header = false;
    std::string delimiter;
};

struct SolverOptions {
    double tol = 1e-4;
    int max_sweeps = 10'000;
    std::size_t threads = 1;
    bool no_perturb = false;
};

struct CvOptions {
    std::size_t folds = 1;
    std::size_t grid_n = 50;
    double grid_max = 0.0;
    double split = 0.5;
    bool refit = false;
};

struct ModelOptions {
    std::string model = "decay";
    double prob = 0.1;
    double value = 0.5;
    double decay_base = 0.6;
    std::size_t block_size = 5;
    double block_offdiag = 0.5;
    std::string interpretation = "precision";
};

void add_data_options(CLI::App* cmd, DataOptions& o) {
    cmd->add_option("-i,--input", o.input, "CSV file, one observation per row")->required()->check(CLI::ExistingFile);
    cmd->add_flag("--header", o.header, "First CSV line holds column names");
    cmd->add_option("--delimiter", o.delimiter, "Field separator, ',' or 'tab' (default: detect)");
}

void add_solver_options(CLI::App* cmd, SolverOptions& o) {
    cmd->add_option("--tol", o.tol, "Coordinate-descent tolerance on sweep change and KKT residual")
        ->capture_default_str();
    cmd->add_option("--max-sweeps", o.max_sweeps, "Sweep cap per column")->capture_default_str();
    cmd->add_option("--threads", o.threads, "Worker cap (0 = SCIO_THREADS or hardware concurrency)")
        ->capture_default_str();
    cmd->add_flag("--no-perturb", o.no_perturb, "Do not shift a non-PD estimate to positive definite");
}

void add_cv_options(CLI::App* cmd, CvOptions& o) {
    cmd->add_option("--cv-folds", o.folds, "Number of random training/validation splits")->capture_default_str();
    cmd->add_option("--cv-grid-n", o.grid_n, "Number of grid points j/N*a, j = 1..N")->capture_default_str();
    cmd->add_option("--cv-grid-max", o.grid_max,
                    "Grid upper end a (default: largest off-diagonal |covariance| of the data)");
    cmd->add_option("--cv-split", o.split, "Training share of each split")->capture_default_str();
    cmd->add_flag("--cv-refit", o.refit, "Refit each column on the full sample at its chosen lambda");
}

void add_model_options(CLI::App* cmd, ModelOptions& o) {
    cmd->add_option("--model", o.model, "decay, sparse or block")->capture_default_str();
    cmd->add_option("--prob", o.prob, "Edge probability of the sparse model")->capture_default_str();
    cmd->add_option("--value", o.value, "Edge value of the sparse model")->capture_default_str();
    cmd->add_option("--decay-base", o.decay_base, "Base of the decay model")->capture_default_str();
    cmd->add_option("--block-size", o.block_size, "Block size of the block model")->capture_default_str();
    cmd->add_option("--block-offdiag", o.block_offdiag, "Within-block value of the block model")
        ->capture_default_str();
    cmd->add_option("--interpretation", o.interpretation,
                    "Read the generated matrix as the 'precision' or the 'covariance' matrix")
        ->capture_default_str();
}

DataMatrix load_data(const DataOptions& o) {
    CsvOptions csv;
    csv.has_header = o.header;
    if (o.delimiter == "tab" || o.delimiter == "\\t")
        csv.delimiter = '\t';
    else if (o.delimiter.size() == 1)
        csv.delimiter = o.delimiter[0];
    else if (!o.delimiter.empty())
        throw InvalidInput("--delimiter must be a single character or 'tab'");
    return read_csv_file(o.input, csv);
}

SolverConfig make_solver(const SolverOptions& o) {
    SolverConfig cfg;
    cfg.tol = o.tol;
    cfg.max_sweeps = o.max_sweeps;
    cfg.threads = o.threads;
    cfg.perturb_estimate = !o.no_perturb;
    cfg.validate();
    return cfg;
}

CVPlan make_plan(const CvOptions& o, std::uint64_t seed) {
    CVPlan plan;
    plan.folds = o.folds;
    plan.grid_n = o.grid_n;
    if (o.grid_max != 0.0) plan.grid_upper = o.grid_max;
    plan.split_fraction = o.split;
    plan.refit_full_sample = o.refit;
    plan.seed = seed;
    return plan;
}

GraphModelSpec make_model(const ModelOptions& o, std::uint64_t seed) {
    GraphModelSpec spec;
    spec.kind = parse_model_kind(o.model);
    spec.sparse_prob = o.prob;
    spec.sparse_value = o.value;
    spec.decay_base = o.decay_base;
    spec.block_size = o.block_size;
    spec.block_offdiag = o.block_offdiag;
    spec.seed = seed;
    spec.validate();
    return spec;
}

bool truth_is_precision(const std::string& interpretation) {
    if (interpretation == "precision") return true;
    if (interpretation == "covariance") return false;
    throw InvalidInput("--interpretation must be 'precision' or 'covariance'");
}

std::string heatmap_path(const std::string& base, std::size_t p, bool several) {
    if (!several) return base;
    const std::filesystem::path path(base);
    auto name = path.stem().string() + "_p" + std::to_string(p) + path.extension().string();
    return (path.parent_path() / name).string();
}

// estimate --------------------------------------------------------------------

struct EstimateArgs {
    DataOptions data;
    SolverOptions solver;
    CvOptions cv;
    double lambda = 0.0;
    std::string lambda_file;
    bool use_cv = false;
    std::uint64_t seed = kDefaultSeed;
    std::string out_prefix = "scio_estimate";
};

int run_estimate(const EstimateArgs& a, std::ostream& out, std::ostream& err, bool lambda_given) {
    const auto x = load_data(a.data);
    const auto cfg = make_solver(a.solver);

    LambdaSpec spec;
    std::string spec_text;
    if (lambda_given) {
        spec = a.lambda;
        std::ostringstream s;
        s << "lambda " << a.lambda;
        spec_text = s.str();
    } else if (!a.lambda_file.empty()) {
        spec = read_number_list_file(a.lambda_file);
        spec_text = "per-column lambdas from " + a.lambda_file;
    } else {
        spec = CrossValidate{make_plan(a.cv, a.seed)};
        spec_text = "cross-validated per-column lambdas";
    }

    const auto est = estimate_precision(x, spec, cfg);
    write_text_file(a.out_prefix + ".json", to_json(est).dump(2) + "\n");
    write_matrix_text_file(a.out_prefix + ".txt", est.omega_hat);

    out << "p: " << x.p() << "\n"
        << "n: " << x.n() << "\n"
        << "lambda: " << spec_text << "\n"
        << "rho_applied: " << est.rho_applied << "\n"
        << "covariance_rho: " << est.covariance_rho << "\n"
        << "max_kkt_residual: " << est.max_kkt_residual() << "\n"
        << "wrote: " << a.out_prefix << ".json, " << a.out_prefix << ".txt\n";

    if (!est.all_converged()) {
        err << "error: coordinate descent did not converge in " << cfg.max_sweeps << " sweeps\n";
        err << "column  lambda  sweeps  kkt_residual\n";
        for (const auto& c : est.per_column_meta)
            if (!c.converged) err << c.index << "  " << c.lambda << "  " << c.sweeps_used << "  " << c.kkt_residual << "\n";
        return kNotConverged;
    }
    return kOk;
}

// cv ----------------------------------------------------------------------------

struct CvArgs {
    DataOptions data;
    SolverOptions solver;
    CvOptions cv;
    std::uint64_t seed = kDefaultSeed;
    std::vector<std::size_t> columns;
    std::string json;
};

int run_cv(const CvArgs& a, std::ostream& out) {
    const auto x = load_data(a.data);
    const auto cfg = make_solver(a.solver);
    const auto plan = make_plan(a.cv, a.seed);

    std::vector<std::size_t> cols = a.columns;
    if (cols.empty()) {
        cols.resize(x.p());
        for (std::size_t i = 0; i < x.p(); ++i) cols[i] = i;
    }
    for (auto c : cols)
        if (c >= x.p()) throw InvalidInput("--column " + std::to_string(c) + " is out of range");

    std::vector<CVResult> results(cols.size());
    SolverConfig inner = cfg;
    inner.threads = 1;
    parallel_for(cols.size(), cfg.threads, [&](std::size_t k) { results[k] = select_lambda(cols[k], plan, x, inner); });

    nlohmann::json doc = nlohmann::json::array();
    out << "column  chosen_lambda  risk\n";
    for (const auto& r : results) {
        out << r.column_i << "  " << r.chosen_lambda << "  " << r.risks[r.chosen_index] << "\n";
        doc.push_back(to_json(r));
    }
    if (!a.json.empty()) write_text_file(a.json, doc.dump(2) + "\n");
    return kOk;
}

// simulate ------------------------------------------------------------------------

struct SimulateArgs {
    ModelOptions model;
    std::size_t p = 50;
    std::size_t n = 100;
    std::uint64_t seed = kDefaultSeed;
    std::string output = "scio_sample.csv";
    std::string truth;
};

int run_simulate(const SimulateArgs& a, std::ostream& out) {
    if (a.p < 2 || a.p % 2 != 0) throw InvalidInput("--p must be even and at least 2");
    if (a.n < 1) throw InvalidInput("--n must be at least 1");
    auto spec = make_model(a.model, a.seed);
    spec.p_block = a.p / 2;
    const bool precision = truth_is_precision(a.model.interpretation);

    Rng rng(a.seed);
    const auto generated = generate_truth(spec, rng);
    const auto omega = precision ? generated : inverse_pd(generated);
    const auto x = precision ? sample_gaussian(generated, a.n, rng) : sample_gaussian_covariance(generated, a.n, rng);

    std::ostringstream csv;
    write_csv(csv, x);
    write_text_file(a.output, csv.str());
    if (!a.truth.empty()) write_matrix_text_file(a.truth, omega);
    out << "wrote " << x.n() << " x " << x.p() << " sample to " << a.output << "\n";
    if (!a.truth.empty()) out << "wrote true precision matrix to " << a.truth << "\n";
    return kOk;
}

// benchmark ---------------------------------------------------------------------

struct BenchmarkArgs {
    ModelOptions model;
    std::vector<std::size_t> p{50};
    std::size_t n = 100;
    std::size_t n_validate = 100;
    std::size_t reps = 100;
    std::size_t grid_n = 50;
    std::string selection = "bregman_validation";
    std::uint64_t seed = kDefaultSeed;
    std::size_t threads = 1;
    double tol = 1e-4;
    double threshold = 0.0;
    std::string json;
    std::string table;
    std::string heatmap;
    bool ascii = false;
};

int run_benchmark_cmd(const BenchmarkArgs& a, std::ostream& out) {
    BenchmarkConfig cfg;
    cfg.model = make_model(a.model, a.seed);
    cfg.truth_is_precision = truth_is_precision(a.model.interpretation);
    cfg.p_values = a.p;
    cfg.n_train = a.n;
    cfg.n_validate = a.n_validate;
    cfg.replicates = a.reps;
    cfg.grid_n = a.grid_n;
    cfg.selection = parse_selection(a.selection);
    cfg.seed = a.seed;
    cfg.threads = a.threads;
    cfg.solver_tol = a.tol;
    cfg.support_threshold = a.threshold;
    cfg.validate();

    const auto result = run_benchmark(cfg);
    const auto table = format_benchmark_table(result);
    out << table;
    if (!a.table.empty()) write_text_file(a.table, table);
    if (!a.json.empty()) write_text_file(a.json, to_json(result).dump(2) + "\n");
    for (const auto& row : result.rows) {
        if (!a.heatmap.empty()) write_pgm_file(heatmap_path(a.heatmap, row.p, result.rows.size() > 1), row);
        if (a.ascii) out << "\nsupport frequency, p = " << row.p << "\n" << ascii_heatmap(row);
    }
    for (const auto& rec : result.replicates)
        if (!rec.ok) out << "replicate " << rec.replicate << " (p = " << rec.p << ") failed: " << rec.error << "\n";
    return kOk;
}

// check-condition -------------------------------------------------------------------

struct ConditionArgs {
    std::string sigma;
    std::string omega;
    std::string graph;
    double rho = 0.4;
};

int run_check_condition(const ConditionArgs& a, std::ostream& out) {
    SymMatrix sigma(1);
    if (!a.graph.empty()) {
        if (!a.sigma.empty()) throw InvalidInput("give either --graph or --sigma, not both");
        if (a.graph == "diamond")
            sigma = oracle::diamond_graph(a.rho);
        else if (a.graph == "star")
            sigma = oracle::star_graph(a.rho);
        else
            throw InvalidInput("--graph must be 'diamond' or 'star'");
    } else if (!a.sigma.empty()) {
        sigma = read_matrix_text_file(a.sigma);
    } else {
        throw InvalidInput("one of --graph or --sigma is required");
    }
    const auto omega = a.omega.empty() ? oracle::exact_inverse(sigma, 1e-10) : read_matrix_text_file(a.omega);
    const double margin = oracle::irrepresentable_margin(sigma, omega);
    out << "margin: " << std::setprecision(10) << margin << "\n"
        << "condition holds: " << (margin > 0.0 ? "yes" : "no") << "\n";
    return kOk;
}

// verify --------------------------------------------------------------------------

struct VerifyArgs {
    std::size_t p = 5;
    std::size_t trials = 100;
    std::uint64_t seed = kDefaultSeed;
    double lambda_min = 0.01;
    double lambda_max = 2.0;
    double tol = 1e-10;
    double max_gap = 1e-6;
};

int run_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    if (a.p < 1 || a.p > 8) throw InvalidInput("--p must lie in [1, 8] for the brute-force oracle");
    if (a.trials < 1) throw InvalidInput("--trials must be at least 1");

    double worst = 0.0;
    for (std::size_t t = 0; t < a.trials; ++t) {
        Rng rng = Rng::child(a.seed, t);
        const auto inst = oracle::random_column_instance(a.p, rng, a.lambda_min, a.lambda_max);
        const auto cmp = oracle::compare_with_solver(inst, a.tol);
        worst = std::max(worst, cmp.objective_gap);
        if (!(cmp.objective_gap <= a.max_gap) || !cmp.solver_converged) {
            nlohmann::json replay = {{"trial", t},
                                     {"seed", a.seed},
                                     {"column", inst.i},
                                     {"lambda", inst.lambda},
                                     {"sigma", to_json(inst.sigma)},
                                     {"solver_beta", cmp.solver_beta},
                                     {"oracle_beta", cmp.oracle_beta},
                                     {"objective_gap", cmp.objective_gap},
                                     {"solver_converged", cmp.solver_converged}};
            err << "verification failed on trial " << t << "\n" << replay.dump(2) << "\n";
            out << "worst objective gap: " << worst << "\n";
            return kVerifyFailed;
        }
    }
    out << "trials: " << a.trials << "  p: " << a.p << "\n"
        << "worst objective gap: " << std::scientific << std::setprecision(3) << worst << "\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sparse column-wise inverse operator: sparse precision matrix estimation"};
    app.name("scio");
    app.require_subcommand(1);

    EstimateArgs est;
    auto* c_est = app.add_subcommand("estimate", "Estimate the precision matrix of a CSV data set");
    add_data_options(c_est, est.data);
    add_solver_options(c_est, est.solver);
    add_cv_options(c_est, est.cv);
    auto* o_lambda = c_est->add_option("--lambda", est.lambda, "One penalty for every column");
    auto* o_lfile =
        c_est->add_option("--lambda-file", est.lambda_file, "File with one penalty per column")->check(CLI::ExistingFile);
    auto* o_cv = c_est->add_flag("--cv", est.use_cv, "Choose each column's penalty by cross-validation (default)");
    o_lambda->excludes(o_lfile)->excludes(o_cv);
    o_lfile->excludes(o_cv);
    c_est->add_option("--seed", est.seed, "Seed for the cross-validation splits")->capture_default_str();
    c_est->add_option("-o,--out", est.out_prefix, "Output prefix; writes PREFIX.json and PREFIX.txt")
        ->capture_default_str();

    CvArgs cv;
    auto* c_cv = app.add_subcommand("cv", "Cross-validate the penalty of each column and report the risk curves");
    add_data_options(c_cv, cv.data);
    add_solver_options(c_cv, cv.solver);
    add_cv_options(c_cv, cv.cv);
    c_cv->add_option("--seed", cv.seed, "Seed for the random splits")->capture_default_str();
    c_cv->add_option("--column", cv.columns, "Columns to tune (0-based, repeatable; default all)");
    c_cv->add_option("--json", cv.json, "Write the risk curves as JSON");

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Draw a Gaussian sample from one of the simulation models");
    add_model_options(c_sim, sim.model);
    c_sim->add_option("--p", sim.p, "Dimension (even; two blocks of p/2)")->capture_default_str();
    c_sim->add_option("--n", sim.n, "Number of observations")->capture_default_str();
    c_sim->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
    c_sim->add_option("-o,--output", sim.output, "CSV output path")->capture_default_str();
    c_sim->add_option("--truth", sim.truth, "Also write the true precision matrix here");

    BenchmarkArgs bench;
    auto* c_bench = app.add_subcommand("benchmark", "Repeat simulate, estimate and score over replicates");
    add_model_options(c_bench, bench.model);
    c_bench->add_option("--p", bench.p, "Dimensions (even, repeatable)")->capture_default_str();
    c_bench->add_option("--n", bench.n, "Training sample size")->capture_default_str();
    c_bench->add_option("--n-validate", bench.n_validate, "Validation sample size")->capture_default_str();
    c_bench->add_option("--reps", bench.reps, "Replicates per dimension")->capture_default_str();
    c_bench->add_option("--grid-n", bench.grid_n, "Penalty grid size")->capture_default_str();
    c_bench->add_option("--selection", bench.selection,
                        "Penalty rule: bregman_validation, cv_column or oracle_frobenius")
        ->capture_default_str();
    c_bench->add_option("--seed", bench.seed, "Random seed")->capture_default_str();
    c_bench->add_option("--threads", bench.threads, "Worker cap over replicates (0 = default)")
        ->capture_default_str();
    c_bench->add_option("--tol", bench.tol, "Solver tolerance")->capture_default_str();
    c_bench->add_option("--threshold", bench.threshold, "|value| above which an entry counts as an edge")
        ->capture_default_str();
    c_bench->add_option("--json", bench.json, "Write per-replicate results as JSON");
    c_bench->add_option("--table", bench.table, "Write the summary table here");
    c_bench->add_option("--heatmap", bench.heatmap,
                        "Write the support-frequency heatmap as PGM (one file per p, suffixed _pP when several)");
    c_bench->add_flag("--ascii", bench.ascii, "Print the support-frequency heatmap as text");

    ConditionArgs cond;
    auto* c_cond = app.add_subcommand("check-condition", "Irrepresentable-condition margin of a covariance matrix");
    c_cond->add_option("--sigma", cond.sigma, "Covariance matrix text file")->check(CLI::ExistingFile);
    c_cond->add_option("--omega", cond.omega, "True precision matrix (default: exact inverse of sigma)")
        ->check(CLI::ExistingFile);
    c_cond->add_option("--graph", cond.graph, "Built-in example: diamond or star");
    c_cond->add_option("--rho", cond.rho, "Parameter of the built-in example")->capture_default_str();

    VerifyArgs ver;
    auto* c_ver = app.add_subcommand("verify", "Compare the solver with the brute-force oracle on random problems");
    c_ver->add_option("--p", ver.p, "Dimension, at most 8")->capture_default_str();
    c_ver->add_option("--trials", ver.trials, "Number of random problems")->capture_default_str();
    c_ver->add_option("--seed", ver.seed, "Random seed")->capture_default_str();
    c_ver->add_option("--lambda-min", ver.lambda_min, "Smallest penalty (log-uniform draw)")->capture_default_str();
    c_ver->add_option("--lambda-max", ver.lambda_max, "Largest penalty")->capture_default_str();
    c_ver->add_option("--tol", ver.tol, "Solver tolerance used for the comparison")->capture_default_str();
    c_ver->add_option("--max-gap", ver.max_gap, "Largest accepted objective gap")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*c_est) return run_estimate(est, out, err, o_lambda->count() > 0);
        if (*c_cv) return run_cv(cv, out);
        if (*c_sim) return run_simulate(sim, out);
        if (*c_bench) return run_benchmark_cmd(bench, out);
        if (*c_cond) return run_check_condition(cond, out);
        if (*c_ver) return run_verify(ver, out, err);
    } catch (const NonConvergence& e) {
        err << "error: " << e.what() << "\n";
        return kNotConverged;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace scio::cli
