#include "scio/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "scio/errors.hpp"

namespace scio {

using nlohmann::json;

json to_json(const SymMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const PrecisionEstimate& est) {
    json meta = json::array();
    for (const auto& c : est.per_column_meta) {
        meta.push_back({{"index", c.index},
                        {"lambda", c.lambda},
                        {"sweeps_used", c.sweeps_used},
                        {"converged", c.converged},
                        {"kkt_residual", c.kkt_residual},
                        {"nonzeros", c.nonzeros}});
    }
    return {{"p", est.omega_hat.dim()},
            {"omega", est.omega_hat.data()},
            {"lambda_per_column", est.lambda_per_column},
            {"rho_applied", est.rho_applied},
            {"covariance_rho", est.covariance_rho},
            {"all_converged", est.all_converged()},
            {"columns", std::move(meta)}};
}

json to_json(const CVResult& cv) {
    return {{"column", cv.column_i},
            {"lambdas", cv.lambdas},
            {"risks", cv.risks},
            {"chosen_lambda", cv.chosen_lambda},
            {"chosen_index", cv.chosen_index}};
}

json to_json(const LossReport& loss) {
    return {{"spectral", loss.spectral},
            {"frobenius", loss.frobenius},
            {"elementwise_max", loss.elementwise_max},
            {"frobenius_sq_over_p", loss.frobenius_sq_over_p}};
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const SupportReport& support) {
    return {{"tn_pct", optional_number(support.tn_pct)},
            {"tp_pct", optional_number(support.tp_pct)},
            {"true_pos", support.counts.true_pos},
            {"true_neg", support.counts.true_neg},
            {"false_pos", support.counts.false_pos},
            {"false_neg", support.counts.false_neg}};
}

json to_json(const Summary& s) {
    return {{"mean", s.count ? json(s.mean) : json(nullptr)}, {"sd", optional_number(s.sd)}, {"count", s.count}};
}

json to_json(const BenchmarkResult& result) {
    const auto& c = result.config;
    json config = {{"model", to_string(c.model.kind)},
                   {"decay_base", c.model.decay_base},
                   {"sparse_prob", c.model.sparse_prob},
                   {"sparse_value", c.model.sparse_value},
                   {"block_size", c.model.block_size},
                   {"block_offdiag", c.model.block_offdiag},
                   {"n_train", c.n_train},
                   {"n_validate", c.n_validate},
                   {"p_values", c.p_values},
                   {"replicates", c.replicates},
                   {"grid_n", c.grid_n},
                   {"selection", to_string(c.selection)},
                   {"seed", c.seed},
                   {"truth", c.truth_is_precision ? "precision" : "covariance"},
                   {"support_threshold", c.support_threshold},
                   {"solver_tol", c.solver_tol}};

    json rows = json::array();
    for (const auto& r : result.rows) {
        rows.push_back({{"p", r.p},
                        {"succeeded", r.succeeded},
                        {"failed", r.failed},
                        {"spectral", to_json(r.spectral)},
                        {"frobenius", to_json(r.frobenius)},
                        {"tn_pct", to_json(r.tn_pct)},
                        {"tp_pct", to_json(r.tp_pct)}});
    }

    json reps = json::array();
    for (const auto& r : result.replicates) {
        json rec = {{"p", r.p}, {"replicate", r.replicate}, {"ok", r.ok}};
        if (!r.ok) {
            rec["error"] = r.error;
        } else {
            rec["lambdas"] = r.lambdas;
            rec["loss"] = to_json(r.loss);
            rec["support"] = to_json(r.support);
            rec["rho_applied"] = r.rho_applied;
            rec["max_kkt_residual"] = r.max_kkt_residual;
            rec["all_converged"] = r.all_converged;
        }
        reps.push_back(std::move(rec));
    }
    return {{"config", std::move(config)}, {"rows", std::move(rows)}, {"replicates", std::move(reps)}};
}

void write_pgm(std::ostream& out, const BenchmarkRow& row) {
    const std::size_t p = row.p;
    if (row.support_counts.size() != p * p) throw InvalidInput("write_pgm: support counts do not match p");
    const std::size_t maxval = row.succeeded > 0 ? row.succeeded : 1;
    out << "P2\n" << p << ' ' << p << '\n' << maxval << '\n';
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            if (j) out << ' ';
            const std::size_t count = row.support_counts[i * p + j];
            out << (row.succeeded > 0 ? row.succeeded - count : maxval);
        }
        out << '\n';
    }
}

void write_pgm_file(const std::string& path, const BenchmarkRow& row) {
    std::ostringstream buf;
    write_pgm(buf, row);
    write_text_file(path, buf.str());
}

std::string ascii_heatmap(const BenchmarkRow& row) {
    static constexpr std::string_view ramp = " .:-=+*#%@";
    const std::size_t p = row.p;
    if (row.support_counts.size() != p * p) throw InvalidInput("ascii_heatmap: support counts do not match p");
    std::string out;
    out.reserve(p * (p + 1));
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            const std::size_t count = row.support_counts[i * p + j];
            std::size_t level = 0;
            if (row.succeeded > 0 && count > 0) {
                const double f = static_cast<double>(count) / static_cast<double>(row.succeeded);
                level = 1 + static_cast<std::size_t>(std::floor(f * static_cast<double>(ramp.size() - 2) + 1e-12));
                if (level >= ramp.size()) level = ramp.size() - 1;
            }
            out += ramp[level];
        }
        out += '\n';
    }
    return out;
}

std::vector<double> read_number_list(std::istream& in) {
    std::vector<double> out;
    std::string token;
    while (in >> token) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size() || !std::isfinite(v)) throw InvalidInput("not a finite number: '" + token + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<double> read_number_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    return read_number_list(in);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + path);
    out << content;
    if (!out) throw InvalidInput("write failed: " + path);
}

}  // namespace scio
