#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "scio/matrix.hpp"
#include "scio/rng.hpp"

namespace testing {

inline scio::SymMatrix random_symmetric(std::size_t p, scio::Rng& rng) {
    scio::SymMatrix a(p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) a.set(i, j, rng.normal());
    return a;
}

// AAᵀ/m + ridge·I
inline scio::SymMatrix random_pd(std::size_t p, scio::Rng& rng, double ridge = 0.1) {
    const std::size_t m = p + 3;
    std::vector<double> a(p * m);
    for (auto& v : a) v = rng.normal();
    scio::SymMatrix s(p);
    for (std::size_t r = 0; r < p; ++r)
        for (std::size_t c = r; c < p; ++c) {
            double dot = 0.0;
            for (std::size_t k = 0; k < m; ++k) dot += a[r * m + k] * a[c * m + k];
            s.set(r, c, dot / static_cast<double>(m) + (r == c ? ridge : 0.0));
        }
    return s;
}

// Coefficients c[0..p] of det(xI − A), c[p] = 1, by Faddeev–LeVerrier.
inline std::vector<double> characteristic_polynomial(const scio::SymMatrix& a) {
    const std::size_t p = a.dim();
    std::vector<double> c(p + 1, 0.0);
    c[p] = 1.0;
    std::vector<double> m(p * p, 0.0), am(p * p);
    for (std::size_t k = 1; k <= p; ++k) {
        // M_k = A M_{k−1} + c_{p−k+1} I
        for (std::size_t i = 0; i < p; ++i) m[i * p + i] += c[p - k + 1];
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) {
                double s = 0.0;
                for (std::size_t l = 0; l < p; ++l) s += a(i, l) * m[l * p + j];
                am[i * p + j] = s;
            }
        double trace = 0.0;
        for (std::size_t i = 0; i < p; ++i) trace += am[i * p + i];
        c[p - k] = -trace / static_cast<double>(k);
        m = am;
    }
    return c;
}

// Real roots of a real-rooted monic polynomial, ascending. Newton from above
// converges monotonically to the largest root; deflate and repeat.
inline std::vector<double> real_roots(std::vector<double> c) {
    std::vector<double> roots;
    while (c.size() > 1) {
        const std::size_t deg = c.size() - 1;
        double bound = 0.0;
        for (std::size_t k = 0; k < deg; ++k) bound = std::max(bound, std::abs(c[k]));
        double x = 1.0 + bound;
        for (int it = 0; it < 2000; ++it) {
            double f = c[deg], df = 0.0;
            for (std::size_t k = deg; k-- > 0;) {
                df = df * x + f;
                f = f * x + c[k];
            }
            if (df == 0.0) break;
            const double step = f / df;
            x -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
        }
        roots.push_back(x);
        std::vector<double> q(deg);
        q[deg - 1] = c[deg];
        for (std::size_t k = deg - 1; k-- > 0;) q[k] = c[k + 1] + x * q[k + 1];
        c = std::move(q);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

inline std::vector<double> charpoly_eigenvalues(const scio::SymMatrix& a) {
    return real_roots(characteristic_polynomial(a));
}

inline double max_abs_diff(const scio::SymMatrix& a, const scio::SymMatrix& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
    return d;
}

}  // namespace testing
