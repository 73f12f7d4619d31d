#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hlslab/oracles.hpp"
#include "hlslab/specialfuncs.hpp"

using namespace hlslab;

TEST(LnGamma, KnownValues) {
    EXPECT_NEAR(ln_gamma(1.0), 0.0, 1e-15);
    EXPECT_NEAR(ln_gamma(2.0), 0.0, 1e-15);
    EXPECT_NEAR(ln_gamma(0.5), 0.5723649429247001, 1e-15);
    EXPECT_NEAR(ln_gamma(5.0), std::log(24.0), 1e-14);
}

TEST(LnGamma, RelativeErrorAgainstLongDouble) {
    // relative to max(1, |ln Gamma|): ln Gamma has zeros at 1 and 2
    double worst = 0.0;
    for (double x = 0.01; x <= 200.0; x += 0.0137) {
        const long double ref = std::lgamma(static_cast<long double>(x));
        const double gap = std::abs(static_cast<long double>(ln_gamma(x)) - ref) / std::max(1.0L, std::abs(ref));
        worst = std::max(worst, gap);
    }
    EXPECT_LE(worst, 1e-13);
}

TEST(LnGamma, Recursion) {
    for (double x = 0.1; x <= 100.0; x += 0.05)
        EXPECT_NEAR(ln_gamma(x + 1.0) - ln_gamma(x) - std::log(x), 0.0, 1e-12) << x;
}

TEST(LnGamma, RejectsNonPositive) {
    EXPECT_THROW(ln_gamma(0.0), std::domain_error);
    EXPECT_THROW(ln_gamma(-1.5), std::domain_error);
}

TEST(Gegenbauer, LowDegrees) {
    for (double a : {0.5, 1.0, 2.5})
        for (double t : {-0.7, 0.0, 0.3, 1.0}) {
            EXPECT_EQ(gegenbauer(0, a, t), 1.0);
            EXPECT_NEAR(gegenbauer(1, a, t), 2.0 * a * t, 1e-15);
            EXPECT_NEAR(gegenbauer(2, a, t), 2.0 * a * (a + 1.0) * t * t - a, 1e-14);
        }
    EXPECT_NEAR(gegenbauer(2, 1.0, 0.5), 0.0, 1e-15);
}

TEST(Gegenbauer, DerivativeIdentity) {
    for (double a : {0.5, 1.0, 1.5})
        for (unsigned l = 1; l <= 12; ++l)
            for (double t : {-0.9, -0.35, 0.1, 0.6}) {
                const auto fd = oracles::fd_derivative([&](double x) { return gegenbauer(l, a, x); }, t,
                                                       {1e-3, 5e-4, 2.5e-4});
                const double exact = 2.0 * a * gegenbauer(l - 1, a + 1.0, t);
                EXPECT_NEAR(fd.value, exact, 1e-8 * std::max(1.0, std::abs(exact))) << l << ' ' << a << ' ' << t;
            }
}

TEST(Gegenbauer, DomainErrors) {
    EXPECT_THROW(gegenbauer(2, -0.5, 0.1), std::domain_error);
    EXPECT_THROW(gegenbauer(2, 1.0, 1.5), std::domain_error);
}

TEST(GaussJacobi, SinglePoint) {
    const auto r = gauss_jacobi(1, 0.0, 0.0);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_NEAR(r.nodes[0], 0.0, 1e-15);
    EXPECT_NEAR(r.weights[0], 2.0, 1e-14);
}

TEST(GaussJacobi, LegendreSecondMoment) {
    for (unsigned m : {2u, 5u, 40u}) {
        const auto r = gauss_jacobi(m, 0.0, 0.0);
        EXPECT_NEAR(r.integrate([](double t) { return t * t; }), 2.0 / 3.0, 1e-14);
    }
}

TEST(GaussJacobi, WeightSumMatchesBetaIntegral) {
    for (int n = 1; n <= 8; ++n) {
        const double a = 0.5 * (n - 2);
        const auto r = gauss_jacobi(80, a, a);
        double sum = 0.0;
        for (double w : r.weights) sum += w;
        const double ref = std::sqrt(std::numbers::pi) * std::tgamma(0.5 * n) / std::tgamma(0.5 * (n + 1));
        EXPECT_NEAR(sum / ref, 1.0, 1e-12) << n;
    }
}

TEST(GaussJacobi, NodesOrderedWeightsPositive) {
    for (auto [a, b] : std::vector<std::pair<double, double>>{{0, 0}, {-0.5, -0.5}, {1.5, 1.5}, {0.0, 0.5}, {-0.75, 1.5}}) {
        const auto r = gauss_jacobi(120, a, b);
        for (std::size_t i = 0; i < r.size(); ++i) {
            EXPECT_GT(r.weights[i], 0.0);
            EXPECT_LT(std::abs(r.nodes[i]), 1.0);
            if (i) EXPECT_GT(r.nodes[i], r.nodes[i - 1]);
        }
    }
}

// (1+t)^j against (1-t)^a (1+t)^b integrates to 2^{a+b+j+1} B(a+1, b+j+1)
TEST(GaussJacobi, ExactForDegreeUpTo2mMinus1) {
    for (auto [a, b] : std::vector<std::pair<double, double>>{{0.3, -0.4}, {0.0, 0.5}, {-0.5, 1.5}}) {
        const unsigned m = 12;
        const auto r = gauss_jacobi(m, a, b);
        for (unsigned j = 0; j <= 2 * m - 1; ++j) {
            const double ref = std::exp((a + b + j + 1) * std::log(2.0) + std::lgamma(a + 1) + std::lgamma(b + j + 1) -
                                        std::lgamma(a + b + j + 2));
            const double got = r.integrate([j](double t) { return std::pow(1.0 + t, j); });
            EXPECT_NEAR(got / ref, 1.0, 1e-12) << a << ' ' << b << ' ' << j;
        }
    }
}

TEST(GaussJacobi, GegenbauerGramIsDiagonal) {
    for (int n : {2, 3, 5}) {
        const double alpha = 0.5 * (n - 1);
        const double a = 0.5 * (n - 2);
        const int L = 32;
        const auto r = gauss_jacobi(2 * L + 4, a, a);
        std::vector<std::vector<double>> G(L + 1, std::vector<double>(L + 1));
        for (int l = 0; l <= L; ++l)
            for (int k = 0; k <= L; ++k)
                G[l][k] = r.integrate([&](double t) { return gegenbauer(l, alpha, t) * gegenbauer(k, alpha, t); });
        double worst = 0.0;
        for (int l = 0; l <= L; ++l)
            for (int k = 0; k <= L; ++k)
                if (l != k) worst = std::max(worst, std::abs(G[l][k]) / std::sqrt(G[l][l] * G[k][k]));
        EXPECT_LE(worst, 1e-10) << n;
    }
}

TEST(GaussJacobi, InvalidInput) {
    EXPECT_THROW(gauss_jacobi(0, 0.0, 0.0), std::domain_error);
    EXPECT_THROW(gauss_jacobi(4, -1.0, 0.0), std::domain_error);
    EXPECT_THROW(gauss_jacobi(4, 0.0, -2.0), std::domain_error);
}

TEST(Jacobi, DerivativeMatchesFiniteDifference) {
    for (unsigned m : {1u, 4u, 9u}) {
        const auto fd = oracles::fd_derivative([&](double x) { return jacobi(m, 0.3, -0.2, x); }, 0.27, {1e-3, 5e-4, 2.5e-4});
        EXPECT_NEAR(fd.value, jacobi_derivative(m, 0.3, -0.2, 0.27), 1e-9);
    }
}
