#include "scio/evaluation.hpp"

#include <cmath>
#include <cstdio>

#include "scio/errors.hpp"

namespace scio {

namespace {

void require_same_dim(const SymMatrix& a, const SymMatrix& b, const char* what) {
    if (a.dim() != b.dim()) throw InvalidInput(std::string(what) + ": dimension mismatch");
}

double quadratic_form(const SymMatrix& a, std::span<const double> x, std::span<const double> mean) {
    const std::size_t p = a.dim();
    std::vector<double> d(p);
    for (std::size_t k = 0; k < p; ++k) d[k] = x[k] - mean[k];
    const auto ad = multiply(a, d);
    double s = 0.0;
    for (std::size_t k = 0; k < p; ++k) s += d[k] * ad[k];
    return s;
}

}  // namespace

LossReport loss_report(const SymMatrix& omega_hat, const SymMatrix& omega_truth) {
    require_same_dim(omega_hat, omega_truth, "loss_report");
    const SymMatrix diff = omega_hat - omega_truth;
    LossReport r;
    r.spectral = spectral_norm(diff);
    r.frobenius = frobenius_norm(diff);
    r.elementwise_max = elementwise_max_norm(diff);
    r.frobenius_sq_over_p = r.frobenius * r.frobenius / static_cast<double>(diff.dim());
    return r;
}

SupportReport support_report(const SymMatrix& omega_hat, const SymMatrix& omega_truth, double threshold) {
    require_same_dim(omega_hat, omega_truth, "support_report");
    if (threshold < 0.0) throw InvalidInput("support_report: threshold must be non-negative");
    SupportReport r;
    auto& c = r.counts;
    const std::size_t p = omega_hat.dim();
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            const bool truth = std::abs(omega_truth(i, j)) > threshold;
            const bool est = std::abs(omega_hat(i, j)) > threshold;
            if (truth && est) ++c.true_pos;
            else if (truth) ++c.false_neg;
            else if (est) ++c.false_pos;
            else ++c.true_neg;
        }
    }
    if (const auto edges = c.true_pos + c.false_neg; edges > 0)
        r.tp_pct = 100.0 * static_cast<double>(c.true_pos) / static_cast<double>(edges);
    if (const auto non_edges = c.true_neg + c.false_pos; non_edges > 0)
        r.tn_pct = 100.0 * static_cast<double>(c.true_neg) / static_cast<double>(non_edges);
    return r;
}

double bregman_loss(const SymMatrix& sigma_val, const SymMatrix& omega) {
    require_same_dim(sigma_val, omega, "bregman_loss");
    double inner = 0.0;
    const auto& a = omega.data();
    const auto& b = sigma_val.data();
    for (std::size_t k = 0; k < a.size(); ++k) inner += a[k] * b[k];
    return inner - log_det_pd(omega);
}

double classification_score(std::span<const double> x, std::span<const double> mean_k,
                            std::span<const double> mean_k2, const SymMatrix& omega_k, const SymMatrix& omega_k2) {
    require_same_dim(omega_k, omega_k2, "classification_score");
    const std::size_t p = omega_k.dim();
    if (x.size() != p || mean_k.size() != p || mean_k2.size() != p)
        throw InvalidInput("classification_score: vector length differs from p");
    // grouped per class so that swapping the classes negates the result exactly
    const double a = log_det_pd(omega_k) - quadratic_form(omega_k, x, mean_k);
    const double b = log_det_pd(omega_k2) - quadratic_form(omega_k2, x, mean_k2);
    return a - b;
}

Summary summarize(std::span<const double> values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

std::string format_mean_sd(const Summary& s) {
    char buf[64];
    if (s.sd)
        std::snprintf(buf, sizeof buf, "%.2f(%.2f)", s.mean, *s.sd);
    else
        std::snprintf(buf, sizeof buf, "%.2f(-)", s.mean);
    return buf;
}

}  // namespace scio
