/**
 * @file operators.hpp
 * @brief The fractional integral operator P_2s on S^n, its inverse A_2s,
 *        the associated norms, and the two Euler-Lagrange residuals.
 *
 * P_2s has the Riesz kernel
 *
 *     Gamma(n/2 - s) / (2^{2s} pi^{n/2} Gamma(s)) * |omega - xi|^{-(n-2s)}
 *
 * and acts on degree-l spherical harmonics by the Funk-Hecke eigenvalue
 * lambda_l = Gamma(l + n/2 - s) / Gamma(l + n/2 + s). The spectral path
 * (analyze, multiply, synthesize) is the working implementation; the
 * kernel quadrature in apply_P2s_direct is an independent check of it.
 *
 * A_2s is only defined on the band-limited sector: its multipliers grow
 * like l^{2s}, and degrees above the cutoff are dropped, not regularized.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "hlslab/errors.hpp"
#include "hlslab/specialfuncs.hpp"
#include "hlslab/sphere.hpp"

namespace hlslab {

/// Gamma(l + n/2 - s) / Gamma(l + n/2 + s).
inline double funk_hecke_multiplier(const Params& p, int l) {
    if (l < 0) throw std::domain_error("funk_hecke_multiplier: degree must be >= 0");
    return gamma_ratio(l + p.half_n() - p.s, l + p.half_n() + p.s);
}

/// Eigenvalues lambda_0..lambda_L of P_2s.
struct MultiplierTable {
    std::vector<double> lambda;

    static MultiplierTable make(const Params& p, int L) {
        MultiplierTable t;
        t.lambda.resize(static_cast<std::size_t>(L) + 1);
        for (int l = 0; l <= L; ++l) t.lambda[static_cast<std::size_t>(l)] = funk_hecke_multiplier(p, l);
        return t;
    }
    int cutoff() const noexcept { return static_cast<int>(lambda.size()) - 1; }
};

/// Sharp HLS / Sobolev constant Gamma(n/2+s)/Gamma(n/2-s) |S^n|^{2s/n}.
inline double sharp_constant(const Params& p) {
    return gamma_ratio(p.half_n() + p.s, p.half_n() - p.s) * std::pow(sphere_area(p.n), 2.0 * p.s / p.n);
}

/// sign(x) |x|^e, continuous extension 0 -> 0 for e > 0.
inline double signed_pow(double x, double e) {
    if (x == 0.0) return 0.0;
    const double m = std::pow(std::abs(x), e);
    return x > 0.0 ? m : -m;
}

namespace detail {

inline SpectralCoeffs scale_coeffs(SpectralCoeffs c, const MultiplierTable& t, bool inverse) {
    if (t.cutoff() != c.cutoff()) throw ConfigError("multiplier table cutoff mismatch");
    for (std::size_t l = 0; l < c.a.size(); ++l) c.a[l] = inverse ? c.a[l] / t.lambda[l] : c.a[l] * t.lambda[l];
    return c;
}

}  // namespace detail

inline ZonalField apply_P2s(const ZonalField& u) {
    const auto table = MultiplierTable::make(u.grid().params(), u.grid().cutoff());
    return synthesize(detail::scale_coeffs(analyze(u), table, false), u.grid_ptr());
}

inline ZonalField apply_A2s(const ZonalField& u) {
    const auto table = MultiplierTable::make(u.grid().params(), u.grid().cutoff());
    return synthesize(detail::scale_coeffs(analyze(u), table, true), u.grid_ptr());
}

/// Node counts for the kernel quadrature.
struct DirectQuadrature {
    int polar_nodes = 96;
    int azimuthal_nodes = 64;
};

/// (P_2s u)(t) by quadrature of the Riesz kernel, for a zonal u given as a
/// function of t.
///
/// The S^n integral is written in coordinates centred at the evaluation
/// point: xi = tau omega + sqrt(1 - tau^2) eta. The kernel then depends on
/// tau alone and (2 - 2 tau)^{-(n-2s)/2} is absorbed into a Gauss-Jacobi
/// weight with exponents (s - 1, (n-2)/2). The remaining integral over eta
/// reduces, for zonal u, to x = eta . e_perp with weight (1 - x^2)^{(n-3)/2}.
template <class F>
std::vector<double> apply_P2s_direct(const Params& p, F&& u, std::span<const double> eval_t,
                                     DirectQuadrature q = {}) {
    const int n = p.n;
    const auto polar = gauss_jacobi(static_cast<unsigned>(q.polar_nodes), p.s - 1.0, 0.5 * (n - 2));
    std::vector<double> az_nodes, az_weights;
    double shell = 1.0;
    if (n == 1) {
        az_nodes = {-1.0, 1.0};
        az_weights = {1.0, 1.0};
    } else {
        const double e = 0.5 * (n - 3);
        const auto az = gauss_jacobi(static_cast<unsigned>(q.azimuthal_nodes), e, e);
        az_nodes = az.nodes;
        az_weights = az.weights;
        shell = detail::sphere_area_any(n - 2);
    }
    const double kernel_const =
        std::exp(ln_gamma(p.half_n() - p.s) - 2.0 * p.s * std::numbers::ln2 -
                 p.half_n() * std::log(std::numbers::pi) - ln_gamma(p.s));
    const double front = kernel_const * shell * std::pow(2.0, -0.5 * (n - 2.0 * p.s));

    std::vector<double> out;
    out.reserve(eval_t.size());
    for (double t0 : eval_t) {
        if (!(std::abs(t0) <= 1.0)) throw std::domain_error("apply_P2s_direct: evaluation point outside [-1, 1]");
        const double s0 = std::sqrt(std::max(0.0, (1.0 - t0) * (1.0 + t0)));
        double acc = 0.0;
        for (std::size_t i = 0; i < polar.size(); ++i) {
            const double tau = polar.nodes[i];
            const double st = std::sqrt((1.0 - tau) * (1.0 + tau));
            double inner_acc = 0.0;
            for (std::size_t j = 0; j < az_nodes.size(); ++j) {
                const double t = std::clamp(tau * t0 + st * s0 * az_nodes[j], -1.0, 1.0);
                inner_acc += az_weights[j] * u(t);
            }
            acc += polar.weights[i] * inner_acc;
        }
        out.push_back(front * acc);
    }
    return out;
}

/// Kernel quadrature applied to a field through its band-limited expansion.
inline std::vector<double> apply_P2s_direct(const ZonalField& u, std::span<const double> eval_t,
                                            DirectQuadrature q = {}) {
    const auto c = analyze(u);
    const int n = u.grid().params().n;
    return apply_P2s_direct(u.grid().params(), [&](double t) { return evaluate(c, n, t); }, eval_t, q);
}

/// Midpoints between consecutive grid nodes.
inline std::vector<double> staggered_points(const ZonalGrid& g) {
    std::vector<double> pts;
    const auto x = g.nodes();
    for (std::size_t i = 0; i + 1 < x.size(); ++i) pts.push_back(0.5 * (x[i] + x[i + 1]));
    return pts;
}

struct HNorms {
    double h_minus_s = 0.0;  ///< <P u, u>^{1/2}
    double h_plus_s = 0.0;   ///< <A u, u>^{1/2}
};

inline HNorms h_norms(const ZonalField& u) {
    const auto c = analyze(u);
    const auto t = MultiplierTable::make(u.grid().params(), u.grid().cutoff());
    double lo = 0.0, hi = 0.0;
    for (std::size_t l = 0; l < c.a.size(); ++l) {
        lo += t.lambda[l] * c.a[l] * c.a[l];
        hi += c.a[l] * c.a[l] / t.lambda[l];
    }
    return {std::sqrt(lo), std::sqrt(hi)};
}

/// ||u||^2_{2n/(n+2s)} - S <P u, u>; nonnegative by the sharp HLS inequality.
inline double hls_deficit(const ZonalField& u) {
    const Params& p = u.grid().params();
    const double nrm = lp_norm(u, p.hls_exponent());
    return nrm * nrm - sharp_constant(p) * inner(apply_P2s(u), u);
}

/// |u|^{-4s/(n+2s)} u with the zero extension.
inline ZonalField hls_nonlinearity(const ZonalField& u) {
    const double e = u.grid().params().hls_power();
    return u.map([e](double v) { return signed_pow(v, e); });
}

/// |u|^{4s/(n-2s)} u.
inline ZonalField sobolev_nonlinearity(const ZonalField& u) {
    const double e = u.grid().params().sobolev_power();
    return u.map([e](double v) { return signed_pow(v, e); });
}

struct Residual {
    ZonalField field;
    double norm = 0.0;
};

/// |u|^{-4s/(n+2s)} u - P_2s u, measured in L^{2n/(n-2s)}.
inline Residual hls_residual(const ZonalField& u) {
    ZonalField r = hls_nonlinearity(u) - apply_P2s(u);
    const double nrm = lp_norm(r, u.grid().params().sobolev_exponent());
    return {std::move(r), nrm};
}

/// A_2s u - |u|^{4s/(n-2s)} u, measured in H^{-s}: <P r, r>^{1/2}.
inline Residual sobolev_residual(const ZonalField& u) {
    ZonalField r = apply_A2s(u) - sobolev_nonlinearity(u);
    const double nrm = h_norms(r).h_minus_s;
    return {std::move(r), nrm};
}

}  // namespace hlslab
