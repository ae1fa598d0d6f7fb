#include <doctest.h>

#include <cmath>

#include "scio/errors.hpp"
#include "scio/evaluation.hpp"
#include "support.hpp"

using namespace scio;
using doctest::Approx;

TEST_CASE("loss_report examples") {
    Rng rng(1);
    const auto omega = testing::random_pd(4, rng);
    const auto zero = loss_report(omega, omega);
    CHECK(zero.spectral == 0.0);
    CHECK(zero.frobenius == 0.0);
    CHECK(zero.elementwise_max == 0.0);
    CHECK(zero.frobenius_sq_over_p == 0.0);

    auto shifted = omega;
    shifted.add_to_diagonal(0.1);
    const auto r = loss_report(shifted, omega);
    CHECK(r.spectral == Approx(0.1));
    CHECK(r.frobenius == Approx(0.2));
    CHECK(r.elementwise_max == Approx(0.1));

    SymMatrix one(4);
    one.set(2, 2, 2.0);
    CHECK(loss_report(one, SymMatrix(4)).frobenius_sq_over_p == Approx(1.0));
    CHECK_THROWS_AS(loss_report(one, SymMatrix(3)), InvalidInput);
}

TEST_CASE("support_report examples") {
    const auto truth = SymMatrix::from_rows({{1, 0.5, 0, 0, 0},
                                             {0.5, 1, 0.3, 0, 0},
                                             {0, 0.3, 1, 0, 0},
                                             {0, 0, 0, 1, 0},
                                             {0, 0, 0, 0, 1}});
    // 10 unordered pairs: 2 edges, 8 non-edges
    const auto perfect = support_report(truth, truth);
    CHECK(*perfect.tp_pct == 100.0);
    CHECK(*perfect.tn_pct == 100.0);

    const auto empty = support_report(SymMatrix::identity(5), truth);
    CHECK(*empty.tp_pct == 0.0);
    CHECK(*empty.tn_pct == 100.0);

    // 5 nodes with exactly one edge → 9 true zeros; use 6 nodes with 5 edges for 10 true zeros
    SymMatrix t6 = SymMatrix::identity(6);
    for (std::size_t k = 0; k + 1 < 6; ++k) t6.set(k, k + 1, 0.2);
    auto e6 = t6;
    e6.set(0, 5, 0.01);
    const auto extra = support_report(e6, t6);
    CHECK(extra.counts.true_neg + extra.counts.false_pos == 10);
    CHECK(*extra.tn_pct == Approx(90.0));
    CHECK(*extra.tp_pct == 100.0);

    // threshold hides the small false edge
    CHECK(*support_report(e6, t6, 0.05).tn_pct == 100.0);

    const auto no_edges = support_report(SymMatrix::identity(3), SymMatrix::identity(3));
    CHECK_FALSE(no_edges.tp_pct.has_value());
    CHECK(*no_edges.tn_pct == 100.0);
    CHECK_FALSE(support_report(SymMatrix(2, 1.0), SymMatrix(2, 1.0)).tn_pct.has_value());
}

TEST_CASE("bregman_loss examples") {
    CHECK(bregman_loss(SymMatrix::identity(3), SymMatrix::identity(3)) == Approx(3.0));
    const double two[] = {2.0, 2.0};
    CHECK(bregman_loss(SymMatrix::identity(2), SymMatrix::diagonal(two)) == Approx(4.0 - 2.0 * std::log(2.0)));
    CHECK_THROWS_AS(bregman_loss(SymMatrix::identity(2), SymMatrix::from_rows({{1, 2}, {2, 1}})),
                    NotPositiveDefinite);

    // over diagonal Ω the minimum is Σ⁻¹ for diagonal Σ
    const double s[] = {0.5, 2.0, 4.0};
    const auto sigma = SymMatrix::diagonal(s);
    const double inv[] = {2.0, 0.5, 0.25};
    const double best = bregman_loss(sigma, SymMatrix::diagonal(inv));
    for (double f : {0.8, 0.95, 1.05, 1.3}) {
        for (std::size_t k = 0; k < 3; ++k) {
            double d[] = {2.0, 0.5, 0.25};
            d[k] *= f;
            CHECK(bregman_loss(sigma, SymMatrix::diagonal(d)) > best);
        }
    }
}

TEST_CASE("classification_score examples") {
    Rng rng(2);
    const auto omega = testing::random_pd(3, rng);
    const std::vector<double> mu{0.1, -0.2, 0.3};
    const std::vector<double> mu2{1.0, 0.0, -1.0};
    for (int t = 0; t < 5; ++t) {
        const std::vector<double> x{rng.normal(), rng.normal(), rng.normal()};
        CHECK(classification_score(x, mu, mu, omega, omega) == 0.0);
    }
    const auto id = SymMatrix::identity(3);
    double d2 = 0.0;
    for (std::size_t k = 0; k < 3; ++k) d2 += (mu[k] - mu2[k]) * (mu[k] - mu2[k]);
    CHECK(classification_score(mu, mu, mu2, id, id) == Approx(d2));
    CHECK_THROWS_AS(classification_score(mu, mu, mu2, id, SymMatrix::from_rows({{1, 2, 0}, {2, 1, 0}, {0, 0, 1}})),
                    NotPositiveDefinite);
}

TEST_CASE("summaries") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    const auto s = summarize(v);
    CHECK(s.mean == 2.5);
    CHECK(*s.sd == Approx(std::sqrt(5.0 / 3.0)));
    CHECK(s.count == 4);
    CHECK(format_mean_sd(s) == "2.50(1.29)");
    const std::vector<double> one{10.0};
    const auto single = summarize(one);
    CHECK_FALSE(single.sd.has_value());
    CHECK(format_mean_sd(single) == "10.00(-)");
    CHECK(summarize(std::vector<double>{}).count == 0);
}

TEST_CASE("property: loss_report symmetry and triangle inequality") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t p = 1 + rng.uniform_index(8);
        const auto a = testing::random_symmetric(p, rng);
        const auto b = testing::random_symmetric(p, rng);
        const auto c = testing::random_symmetric(p, rng);
        const auto ab = loss_report(a, b);
        const auto ba = loss_report(b, a);
        CHECK(ab.spectral == Approx(ba.spectral));
        CHECK(ab.frobenius == ba.frobenius);
        CHECK(ab.elementwise_max == ba.elementwise_max);
        CHECK(ab.frobenius_sq_over_p == Approx(ab.frobenius * ab.frobenius / static_cast<double>(p)));
        const auto ac = loss_report(a, c);
        const auto cb = loss_report(c, b);
        CHECK(ab.spectral <= ac.spectral + cb.spectral + 1e-9);
        CHECK(ab.frobenius <= ac.frobenius + cb.frobenius + 1e-12);
        CHECK(ab.elementwise_max <= ac.elementwise_max + cb.elementwise_max + 1e-12);
    }
}

TEST_CASE("property: support counts add up") {
    Rng rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t p = 2 + rng.uniform_index(10);
        SymMatrix hat(p), truth(p);
        std::size_t edges = 0;
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = i + 1; j < p; ++j) {
                if (rng.bernoulli(0.3)) {
                    truth.set(i, j, 1.0);
                    ++edges;
                }
                if (rng.bernoulli(0.3)) hat.set(i, j, -0.5);
            }
        const auto r = support_report(hat, truth);
        const std::size_t pairs = p * (p - 1) / 2;
        CHECK(r.counts.true_pos + r.counts.false_neg == edges);
        CHECK(r.counts.true_neg + r.counts.false_pos == pairs - edges);
        if (edges > 0) CHECK(*r.tp_pct == Approx(100.0 * r.counts.true_pos / edges));
    }
}

TEST_CASE("property: the Bregman loss is minimized at the inverse covariance") {
    Rng rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t p = 3 + rng.uniform_index(4);
        const auto sigma = testing::random_pd(p, rng, 0.3);
        const auto omega = inverse_pd(sigma);
        const double base = bregman_loss(sigma, omega);
        for (int dir = 0; dir < 10; ++dir) {
            auto d = testing::random_symmetric(p, rng);
            const double scale = 1e-3 / frobenius_norm(d);
            for (double sgn : {1.0, -1.0}) CHECK(bregman_loss(sigma, omega + (sgn * scale) * d) > base);
        }
    }
}

TEST_CASE("property: classification score is exactly antisymmetric") {
    Rng rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t p = 1 + rng.uniform_index(6);
        const auto o1 = testing::random_pd(p, rng);
        const auto o2 = testing::random_pd(p, rng);
        std::vector<double> x(p), m1(p), m2(p);
        for (std::size_t k = 0; k < p; ++k) {
            x[k] = rng.normal();
            m1[k] = rng.normal();
            m2[k] = rng.normal();
        }
        CHECK(classification_score(x, m1, m2, o1, o2) == -classification_score(x, m2, m1, o2, o1));
    }
}
