#include "scio/covariance.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "scio/errors.hpp"

namespace scio {

DataMatrix::DataMatrix(std::size_t n, std::size_t p, std::vector<double> values)
    : n_(n), p_(p), values_(std::move(values)) {
    if (n == 0 || p == 0) throw InvalidInput("DataMatrix: need at least one row and one column");
    if (values_.size() != n * p) throw InvalidInput("DataMatrix: value count does not match n*p");
    for (double v : values_)
        if (!std::isfinite(v)) throw InvalidInput("DataMatrix: non-finite value");
}

DataMatrix DataMatrix::select_rows(std::span<const std::size_t> idx) const {
    std::vector<double> out;
    out.reserve(idx.size() * p_);
    for (std::size_t k : idx) {
        if (k >= n_) throw InvalidInput("DataMatrix::select_rows: row index out of range");
        const auto r = row(k);
        out.insert(out.end(), r.begin(), r.end());
    }
    return DataMatrix(idx.size(), p_, std::move(out));
}

CovarianceEstimate sample_covariance(const DataMatrix& x) {
    const std::size_t n = x.n();
    const std::size_t p = x.p();
    if (n < 2) throw InvalidInput("sample_covariance: need at least 2 observations");

    std::vector<double> mean(p, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < p; ++j) mean[j] += x(k, j);
    for (auto& m : mean) m /= static_cast<double>(n);

    std::vector<double> centered(n * p);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < p; ++j) centered[k * p + j] = x(k, j) - mean[j];

    SymMatrix s(p);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = a; b < p; ++b) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += centered[k * p + a] * centered[k * p + b];
            s.set(a, b, acc * inv_n);
        }
    }
    return {std::move(s), n, 0.0};
}

CovarianceEstimate perturb_to_pd(const CovarianceEstimate& c) {
    constexpr double kPdMargin = 1e-12;
    if (positive_definite_beyond(c.sigma_hat, kPdMargin)) return c;
    // The shifted Cholesky failing means λ_min ≤ 1e-12 up to rounding; the
    // eigenvalue only sizes the shift.
    const double lmin = min_eigenvalue(c.sigma_hat, 1e-14);
    const double rho = std::abs(lmin) + 1.0 / std::sqrt(static_cast<double>(c.n_used));
    CovarianceEstimate out = c;
    out.sigma_hat.add_to_diagonal(rho);
    out.rho_applied = c.rho_applied + rho;
    return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, delim)) cells.push_back(cell);
    if (!line.empty() && line.back() == delim) cells.emplace_back();
    return cells;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& raw, std::size_t line_no) {
    const std::string cell = trim(raw);
    double v = 0.0;
    const auto* first = cell.data();
    const auto* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << "csv line " << line_no << ": cannot parse '" << cell << "' as a finite number";
        throw InvalidInput(msg.str());
    }
    return v;
}

}  // namespace

DataMatrix read_csv(std::istream& in, const CsvOptions& opts) {
    std::string line;
    std::size_t line_no = 0;
    bool header_pending = opts.has_header;
    char delim = opts.delimiter;
    std::size_t p = 0;
    std::size_t n = 0;
    std::vector<double> values;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        if (delim == '\0') delim = line.find('\t') != std::string::npos ? '\t' : ',';
        const auto cells = split_line(line, delim);
        if (header_pending) {
            header_pending = false;
            p = cells.size();
            continue;
        }
        if (p == 0) p = cells.size();
        if (cells.size() != p) {
            std::ostringstream msg;
            msg << "csv line " << line_no << ": expected " << p << " fields, found " << cells.size();
            throw InvalidInput(msg.str());
        }
        for (const auto& c : cells) values.push_back(parse_cell(c, line_no));
        ++n;
    }
    if (n == 0) throw InvalidInput("csv: no data rows");
    return DataMatrix(n, p, std::move(values));
}

DataMatrix read_csv_file(const std::string& path, const CsvOptions& opts) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open csv file: " + path);
    return read_csv(in, opts);
}

void write_csv(std::ostream& out, const DataMatrix& x) {
    out << std::setprecision(17);
    for (std::size_t k = 0; k < x.n(); ++k) {
        for (std::size_t j = 0; j < x.p(); ++j) {
            if (j > 0) out << ',';
            out << x(k, j);
        }
        out << '\n';
    }
}

}  // namespace scio
