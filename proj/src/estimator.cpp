#include "scio/estimator.hpp"

#include "scio/errors.hpp"

namespace scio {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};

}  // namespace

PrecisionEstimate estimate_precision(const CovarianceEstimate& cov, const LambdaSpec& lambda,
                                     const SolverConfig& config) {
    config.validate();
    const std::size_t p = cov.sigma_hat.dim();
    const std::vector<double> lambdas = std::visit(
        Overloaded{
            [&](double l) { return std::vector<double>(p, l); },
            [&](const std::vector<double>& v) {
                if (v.size() != p) throw InvalidInput("per-column lambda vector must have exactly p entries");
                return v;
            },
            [](const CrossValidate&) -> std::vector<double> {
                throw InvalidInput("cross-validation needs the raw data, not only a covariance");
            },
        },
        lambda);
    for (double l : lambdas)
        if (!(l > 0.0)) throw InvalidInput("lambda must be positive");

    const auto pd = perturb_to_pd(cov);
    const auto columns = solve_all_columns(pd.sigma_hat, lambdas, config);
    auto est = assemble_and_symmetrize(columns, pd.rho_applied);
    if (config.perturb_estimate) perturb_estimate_to_pd(est, pd.n_used);
    return est;
}

PrecisionEstimate estimate_precision(const DataMatrix& x, const LambdaSpec& lambda, const SolverConfig& config) {
    if (const auto* cv = std::get_if<CrossValidate>(&lambda)) return estimate_with_cv(x, cv->plan, config).estimate;
    return estimate_precision(sample_covariance(x), lambda, config);
}

}  // namespace scio
