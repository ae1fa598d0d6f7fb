#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace scio {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input or a violated precondition (bad dimensions, λ ≤ 0, ragged CSV, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Cholesky-style factorization hit a pivot ≤ 1e-12.
class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

/// An iterative routine ran out of iterations. Carries the last iterate so the
/// caller can still inspect or report it.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, double last_estimate, std::vector<double> last_vector = {})
        : Error(what), last_estimate_(last_estimate), last_vector_(std::move(last_vector)) {}

    double last_estimate() const noexcept { return last_estimate_; }
    const std::vector<double>& last_vector() const noexcept { return last_vector_; }

private:
    double last_estimate_;
    std::vector<double> last_vector_;
};

}  // namespace scio
