/**
 * @file specialfuncs.hpp
 * @brief Log-gamma, Gegenbauer and Jacobi polynomials, Gauss-Jacobi rules.
 *
 * Everything here is a pure function of its arguments. The quadrature rules
 * are the discretization substrate for every integral over S^n in the
 * library, so the node solver is deliberately strict: it fails loudly
 * rather than return a rule with merged or missing roots.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace hlslab {

/// Gauss rule for the weight (1 - t)^a (1 + t)^b on [-1, 1].
struct QuadratureRule {
    std::vector<double> nodes;    ///< strictly increasing, inside (-1, 1)
    std::vector<double> weights;  ///< all positive
    double a = 0.0;
    double b = 0.0;

    std::size_t size() const noexcept { return nodes.size(); }

    template <class F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }
};

/// ln Gamma(x) for x > 0.
///
/// Lanczos-type rational approximation (g = 671/128, 14 terms). Absolute
/// error is a few ulp of max(1, |ln Gamma(x)|) across (0, 200].
inline double ln_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error("ln_gamma: argument must be positive and finite");
    static constexpr double cof[14] = {
        57.1562356658629235,     -59.5979603554754912,     14.1360979747417471,
        -0.491913816097620199,   .339946499848118887e-4,   .465236289270485756e-4,
        -.983744753048795646e-4, .158088703224912494e-3,   -.210264441724104883e-3,
        .217439618115212643e-3,  -.164318106536763890e-3,  .844182239838527433e-4,
        -.261908384015814087e-4, .368991826595316234e-5};
    double y = x;
    double tmp = x + 5.24218750000000000;
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double ser = 0.999999999999997092;
    for (double c : cof) ser += c / ++y;
    return tmp + std::log(2.5066282746310005 * ser / x);
}

/// Ratio Gamma(x) / Gamma(y) through log-gamma differences.
inline double gamma_ratio(double x, double y) { return std::exp(ln_gamma(x) - ln_gamma(y)); }

/// Gegenbauer polynomial C_l^alpha(t) by the three-term recurrence.
inline double gegenbauer(unsigned l, double alpha, double t) {
    if (!(alpha > -0.5)) throw std::domain_error("gegenbauer: alpha must exceed -1/2");
    if (!(std::abs(t) <= 1.0)) throw std::domain_error("gegenbauer: |t| must be <= 1");
    if (l == 0) return 1.0;
    double prev = 1.0;
    double cur = 2.0 * alpha * t;
    for (unsigned k = 1; k < l; ++k) {
        const double next = (2.0 * t * (k + alpha) * cur - (k + 2.0 * alpha - 1.0) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Jacobi polynomial P_m^{(a,b)}(t), standard normalization P_m(1) = (a+1)_m / m!.
inline double jacobi(unsigned m, double a, double b, double t) {
    if (m == 0) return 1.0;
    double p0 = 1.0;
    double p1 = 0.5 * ((a - b) + (a + b + 2.0) * t);
    for (unsigned k = 2; k <= m; ++k) {
        const double c = 2.0 * k + a + b;
        const double a1 = 2.0 * k * (k + a + b) * (c - 2.0);
        const double a2 = (c - 1.0) * (a * a - b * b);
        const double a3 = (c - 2.0) * (c - 1.0) * c;
        const double a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
        const double p2 = ((a2 + a3 * t) * p1 - a4 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

/// d/dt P_m^{(a,b)}(t) = (m + a + b + 1)/2 * P_{m-1}^{(a+1,b+1)}(t).
inline double jacobi_derivative(unsigned m, double a, double b, double t) {
    if (m == 0) return 0.0;
    return 0.5 * (m + a + b + 1.0) * jacobi(m - 1, a + 1.0, b + 1.0, t);
}

/// Total mass of the Jacobi weight: 2^{a+b+1} B(a+1, b+1).
inline double jacobi_weight_mass(double a, double b) {
    return std::exp((a + b + 1.0) * std::numbers::ln2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) -
                    ln_gamma(a + b + 2.0));
}

/// m-point Gauss-Jacobi rule, exact for polynomials of degree <= 2m - 1.
///
/// Roots are found by Newton iteration on the Jacobi recurrence (with
/// deflation against roots already found), started from the asymptotic
/// angles theta_k = (k - 1/4 + a/2) pi / (m + (a+b+1)/2).
inline QuadratureRule gauss_jacobi(unsigned m, double a, double b) {
    if (m < 1) throw std::domain_error("gauss_jacobi: need at least one node");
    if (!(a > -1.0) || !(b > -1.0)) throw std::domain_error("gauss_jacobi: exponents must exceed -1");

    constexpr double tol = 1e-14;
    constexpr int max_iter = 100;

    std::vector<double> roots;
    roots.reserve(m);
    const double denom = m + 0.5 * (a + b + 1.0);
    for (unsigned k = 1; k <= m; ++k) {
        double z = std::cos((k - 0.25 + 0.5 * a) * std::numbers::pi / denom);
        bool converged = false;
        for (int it = 0; it < max_iter; ++it) {
            const double p = jacobi(m, a, b, z);
            const double dp = jacobi_derivative(m, a, b, z);
            double defl = 0.0;
            for (double r : roots) defl += 1.0 / (z - r);
            const double step = p / (dp - p * defl);
            z -= step;
            if (std::abs(step) <= tol) {
                converged = true;
                break;
            }
        }
        if (!converged || !(std::abs(z) < 1.0))
            throw std::runtime_error("gauss_jacobi: Newton iteration failed at root " + std::to_string(k));
        roots.push_back(z);
    }
    std::sort(roots.begin(), roots.end());
    for (std::size_t i = 1; i < roots.size(); ++i)
        if (!(roots[i] > roots[i - 1])) throw std::runtime_error("gauss_jacobi: duplicate roots");

    QuadratureRule rule;
    rule.a = a;
    rule.b = b;
    rule.nodes = roots;
    rule.weights.resize(m);
    const double log_front = ln_gamma(m + a + 1.0) + ln_gamma(m + b + 1.0) - ln_gamma(m + a + b + 1.0) -
                             ln_gamma(m + 1.0) + (a + b + 1.0) * std::numbers::ln2;
    for (unsigned i = 0; i < m; ++i) {
        const double z = roots[i];
        const double dp = jacobi_derivative(m, a, b, z);
        rule.weights[i] = std::exp(log_front - std::log((1.0 - z) * (1.0 + z)) - 2.0 * std::log(std::abs(dp)));
    }
    return rule;
}

}  // namespace hlslab
