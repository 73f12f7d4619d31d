/**
 * @file oracles.hpp
 * @brief Brute-force cross-checks that share no code path with the modules
 *        they validate: a Stirling-series log-gamma, finite differences,
 *        and grid or random scans of scalar inequalities.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace hlslab::oracles {

struct OracleConfig {
    double gamma_tol = 1e-11;
    double fd_tol = 1e-6;
    std::uint64_t seed = 20240601;
    std::size_t holder_samples = 100000;
    int vector_grid = 400;
};

/// ln Gamma by the Stirling series (12 Bernoulli terms) after shifting the argument to >= 16.
inline double stirling_ln_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("stirling_ln_gamma: x must be positive");
    static constexpr std::array<double, 12> b2k{1.0 / 6,          -1.0 / 30,      1.0 / 42,       -1.0 / 30,
                                                5.0 / 66,         -691.0 / 2730,  7.0 / 6,        -3617.0 / 510,
                                                43867.0 / 798,    -174611.0 / 330, 854513.0 / 138, -236364091.0 / 2730};
    double shift = 0.0;
    while (x < 16.0) {
        shift += std::log(x);
        x += 1.0;
    }
    double series = 0.0;
    const double inv = 1.0 / x, inv2 = inv * inv;
    double pw = inv;
    for (std::size_t k = 1; k <= b2k.size(); ++k) {
        series += b2k[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * pw;
        pw *= inv2;
    }
    return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series - shift;
}

struct GammaCrosscheck {
    double max_gap = 0.0;  ///< max |a - b| / max(1, |b|)
    double worst_x = 0.0;
};

/// Compares a log-gamma implementation against the Stirling oracle on a grid.
inline GammaCrosscheck gamma_crosscheck(const std::vector<double>& x_grid, const std::function<double(double)>& ln_gamma_impl) {
    GammaCrosscheck out;
    for (double x : x_grid) {
        const double ref = stirling_ln_gamma(x);
        const double gap = std::abs(ln_gamma_impl(x) - ref) / std::max(1.0, std::abs(ref));
        if (gap > out.max_gap) {
            out.max_gap = gap;
            out.worst_x = x;
        }
    }
    return out;
}

/// Independent closed form of the sharp constant: (4 pi)^s Gamma((n+2s)/2)/Gamma((n-2s)/2) (Gamma(n/2)/Gamma(n))^{2s/n}.
inline double sharp_constant_oracle(int n, double s) {
    const double lg = stirling_ln_gamma(0.5 * (n + 2.0 * s)) - stirling_ln_gamma(0.5 * (n - 2.0 * s)) +
                      (2.0 * s / n) * (stirling_ln_gamma(0.5 * n) - stirling_ln_gamma(static_cast<double>(n)));
    return std::exp(s * std::log(4.0 * std::numbers::pi) + lg);
}

struct FdResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool flagged = false;  ///< ladder too short or estimate above tolerance
};

/// Central differences on a step ladder, extrapolated by repeated Richardson in h^2.
inline FdResult fd_derivative(const std::function<double(double)>& fn, double x, const std::vector<double>& ladder,
                              double tol = 1e-6) {
    FdResult r;
    if (ladder.size() < 2) {
        r.flagged = true;
        if (ladder.size() == 1) r.value = (fn(x + ladder[0]) - fn(x - ladder[0])) / (2.0 * ladder[0]);
        r.error_estimate = std::numeric_limits<double>::infinity();
        return r;
    }
    const std::size_t m = ladder.size();
    std::vector<std::vector<double>> T(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double h = ladder[i];
        T[i].push_back((fn(x + h) - fn(x - h)) / (2.0 * h));
        for (std::size_t j = 1; j <= i; ++j) {
            const double q = std::pow(ladder[i - j] / ladder[i], 2.0);
            T[i].push_back(T[i][j - 1] + (T[i][j - 1] - T[i - 1][j - 1]) / (q - 1.0));
        }
    }
    r.value = T[m - 1][m - 1];
    r.error_estimate = std::abs(T[m - 1][m - 1] - T[m - 1][m - 2]);
    r.flagged = r.error_estimate > tol * std::max(1.0, std::abs(r.value));
    return r;
}

/// Uniform double in [0, 1) from the top 53 bits; fixed across standard libraries.
inline double unit_uniform(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

struct HolderScan {
    double worst_ratio = 0.0;  ///< max over samples and betas of ratio / C_beta
    double worst_beta = 0.0;
    double worst_raw = 0.0;    ///< the raw ratio at the worst sample
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    bool holds = true;
};

/// C_beta = max(3^beta + 2^beta, beta 2^{1-beta}).
inline double holder_constant(double beta) {
    return std::max(std::pow(3.0, beta) + std::pow(2.0, beta), beta * std::pow(2.0, 1.0 - beta));
}

/// |F(a+b) - F(a)| / |b|^beta with F(t) = |t|^{beta-1} t; 0 when b = 0.
inline double holder_ratio(double a, double b, double beta) {
    if (b == 0.0) return 0.0;
    auto F = [beta](double t) { return t == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(t), beta), t); };
    return std::abs(F(a + b) - F(a)) / std::pow(std::abs(b), beta);
}

/// Random scan with log-uniform magnitudes over 12 decades and random signs.
inline HolderScan holder_inequality_scan(const std::vector<double>& betas, std::size_t samples, std::uint64_t seed) {
    HolderScan out;
    out.seed = seed;
    out.samples = samples;
    for (double beta : betas) {
        if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("holder_inequality_scan: beta must lie in (0, 1)");
        std::mt19937_64 gen(seed);
        const double C = holder_constant(beta);
        auto draw = [&] {
            const double mag = std::pow(10.0, -6.0 + 12.0 * unit_uniform(gen));
            return unit_uniform(gen) < 0.5 ? -mag : mag;
        };
        for (std::size_t i = 0; i < samples; ++i) {
            const double a = draw();
            const double b = draw();
            const double r = holder_ratio(a, b, beta);
            if (r / C > out.worst_ratio) {
                out.worst_ratio = r / C;
                out.worst_beta = beta;
                out.worst_raw = r;
            }
        }
    }
    out.holds = out.worst_ratio <= 1.0;
    return out;
}

struct VectorScan {
    double min_ratio = std::numeric_limits<double>::infinity();
    double C_p = 0.0;
    double arg_a = 0.0;
    double arg_b = 0.0;
    bool holds = true;
};

/// min over a != b on an N x N grid of [-R, R]^2 of (|a|^{p-2}a - |b|^{p-2}b)(a-b) / |a-b|^p, against 2^{2-p}.
///
/// Equality is attained at a = -b, so the comparison allows a relative 1e-12 rounding margin.
inline VectorScan vector_inequality_scan(double p, int N = 400, double R = 2.0) {
    if (!(p >= 2.0)) throw std::domain_error("vector_inequality_scan: need p >= 2");
    VectorScan out;
    out.C_p = std::pow(2.0, 2.0 - p);
    auto G = [p](double t) { return t == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(t), p - 1.0), t); };
    for (int i = 0; i < N; ++i) {
        const double a = -R + 2.0 * R * i / (N - 1);
        for (int j = 0; j < N; ++j) {
            if (i == j) continue;
            const double b = -R + 2.0 * R * j / (N - 1);
            const double r = (G(a) - G(b)) * (a - b) / std::pow(std::abs(a - b), p);
            if (r < out.min_ratio) {
                out.min_ratio = r;
                out.arg_a = a;
                out.arg_b = b;
            }
        }
    }
    out.holds = out.min_ratio >= out.C_p * (1.0 - 1e-12);
    return out;
}

}  // namespace hlslab::oracles
