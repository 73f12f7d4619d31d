/**
 * @file bubbles.hpp
 * @brief Sharp constants, the bubble manifolds in the zonal sector, the
 *        stereographic transfer to radial functions on R^n, and tangent fields.
 *
 * With the bubble centre restricted to the polar axis, xi = zeta e, a
 * bubble on S^n is
 *
 *     v(t) = c * g(t)^a,    g(t) = sqrt(1 - zeta^2) / (1 - zeta t),
 *
 * with a = (n+2s)/2 on the HLS side and a = (n-2s)/2 on the Sobolev side.
 * M frees the amplitude c; the critical manifold fixes c = c_crit (HLS) or
 * c = d_crit (Sobolev).
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hlslab/errors.hpp"
#include "hlslab/operators.hpp"
#include "hlslab/specialfuncs.hpp"
#include "hlslab/sphere.hpp"

namespace hlslab {

struct Constants {
    double S = 0.0;          ///< sharp HLS / Sobolev constant
    double c_crit = 0.0;     ///< amplitude of the HLS critical manifold
    double d_crit = 0.0;     ///< amplitude of the Sobolev critical manifold
    double C_loc = 0.0;      ///< local stability constant, min of the two branch values below
    double C_case1 = 0.0;
    double C_case2 = 0.0;
    double K_cmp = 0.0;      ///< comparison factor 1 + 2 S sqrt(2(n+2s)/(n-2s))
    double C_ps = 0.0;       ///< Palais-Smale lower bound, equal to C_loc
    double lambda0 = 0.0;
    double energy = 0.0;     ///< S^{n/2s}, the L^p energy of a critical bubble
};

inline Constants constants(const Params& p) {
    const double hn = p.half_n();
    const double s = p.s;
    const double ratio = gamma_ratio(hn + s, hn - s);
    const double area_pow = std::pow(sphere_area(p.n), -2.0 * s / p.n);
    Constants k;
    k.S = sharp_constant(p);
    k.c_crit = std::pow(ratio, (p.n + 2.0 * s) / (4.0 * s));
    k.d_crit = std::pow(ratio, (p.n - 2.0 * s) / (4.0 * s));
    k.lambda0 = funk_hecke_multiplier(p, 0);
    k.C_case1 = gamma_ratio(hn - s + 1.0, hn + s + 1.0) * s / (hn + s + 1.0) * area_pow *
                std::sqrt(2.0 * s / (p.n + 2.0 * s));
    k.C_case2 = k.lambda0 * 2.0 * s / (p.n + 2.0 * s) * area_pow;
    k.C_loc = std::min(k.C_case1, k.C_case2);
    k.C_ps = k.C_loc;
    k.K_cmp = 1.0 + 2.0 * k.S * std::sqrt(2.0 * (p.n + 2.0 * s) / (p.n - 2.0 * s));
    k.energy = std::pow(k.S, p.n / (2.0 * s));
    return k;
}

enum class BubbleKind { HLS, Sobolev };

inline const char* to_string(BubbleKind k) { return k == BubbleKind::HLS ? "hls" : "sobolev"; }

struct BubbleParams {
    double c = 0.0;
    double zeta = 0.0;
};

/// Power a of the conformal factor g for the given side.
inline double bubble_exponent(const Params& p, BubbleKind kind) {
    return kind == BubbleKind::HLS ? 0.5 * (p.n + 2.0 * p.s) : 0.5 * (p.n - 2.0 * p.s);
}

/// Amplitude of the critical manifold on the given side.
inline double critical_amplitude(const Params& p, BubbleKind kind) {
    const auto k = constants(p);
    return kind == BubbleKind::HLS ? k.c_crit : k.d_crit;
}

inline void check_zeta(double zeta) {
    if (!(std::abs(zeta) < 1.0)) throw std::domain_error("bubble: need |zeta| < 1");
}

/// sqrt(1 - zeta^2) / (1 - zeta t).
inline double conformal_factor(double zeta, double t) {
    return std::sqrt((1.0 - zeta) * (1.0 + zeta)) / (1.0 - zeta * t);
}

inline double bubble_value(const Params& p, BubbleParams bp, BubbleKind kind, double t) {
    return bp.c * std::pow(conformal_factor(bp.zeta, t), bubble_exponent(p, kind));
}

inline ZonalField bubble_sphere(const GridPtr& grid, BubbleParams bp, BubbleKind kind = BubbleKind::HLS) {
    check_zeta(bp.zeta);
    const Params& p = grid->params();
    return ZonalField::from_function(grid, [&](double t) { return bubble_value(p, bp, kind, t); });
}

/// Point of the critical manifold at axial parameter zeta.
inline ZonalField critical_bubble(const GridPtr& grid, double zeta, BubbleKind kind = BubbleKind::HLS) {
    return bubble_sphere(grid, {critical_amplitude(grid->params(), kind), zeta}, kind);
}

struct TangentFields {
    ZonalField d_c;
    ZonalField d_zeta;
};

/// Partial derivatives of bubble_sphere in c and zeta.
inline TangentFields tangent_fields(const GridPtr& grid, BubbleParams bp, BubbleKind kind = BubbleKind::HLS) {
    check_zeta(bp.zeta);
    const Params& p = grid->params();
    const double a = bubble_exponent(p, kind);
    const double z = bp.zeta;
    auto dc = ZonalField::from_function(grid, [&](double t) { return std::pow(conformal_factor(z, t), a); });
    auto dz = ZonalField::from_function(grid, [&](double t) {
        const double v = bp.c * std::pow(conformal_factor(z, t), a);
        return a * v * (-z / ((1.0 - z) * (1.0 + z)) + t / (1.0 - z * t));
    });
    return {std::move(dc), std::move(dz)};
}

/// Axial conformal transport (T f)(t) = g(t)^a f((t - zeta)/(1 - zeta t)).
///
/// With a = (n+2s)/2 this preserves the L^{2n/(n+2s)} norm and maps the
/// critical manifold to itself; with a = (n-2s)/2 it does the same for
/// L^{2n/(n-2s)}.
template <class F>
ZonalField conformal_transport(const GridPtr& grid, F&& f, double zeta, BubbleKind kind = BubbleKind::HLS) {
    check_zeta(zeta);
    const double a = bubble_exponent(grid->params(), kind);
    return ZonalField::from_function(grid, [&](double t) {
        const double moved = std::clamp((t - zeta) / (1.0 - zeta * t), -1.0, 1.0);
        return std::pow(conformal_factor(zeta, t), a) * f(moved);
    });
}

/// Transport of a field through its band-limited expansion.
inline ZonalField conformal_transport(const ZonalField& u, double zeta, BubbleKind kind = BubbleKind::HLS) {
    const auto c = analyze(u);
    const int n = u.grid().params().n;
    return conformal_transport(u.grid_ptr(), [&](double t) { return evaluate(c, n, t); }, zeta, kind);
}

// ---------------------------------------------------------------- R^n side

/// U_H(0, lambda)(r) = c (lambda / (1 + lambda^2 r^2))^{(n+2s)/2}.
inline double hls_bubble_rn(const Params& p, double c, double lambda, double r) {
    return c * std::pow(lambda / (1.0 + lambda * lambda * r * r), 0.5 * (p.n + 2.0 * p.s));
}

/// Radial function on R^n sampled at the stereographic images of grid nodes.
struct RadialSamples {
    std::vector<double> radii;
    std::vector<double> values;
};

/// Radii r_i = sqrt((1 - t_i)/(1 + t_i)) matching the grid nodes.
inline std::vector<double> stereo_radii(const ZonalGrid& g) {
    std::vector<double> r(g.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double t = g.nodes()[i];
        r[i] = std::sqrt((1.0 - t) / (1.0 + t));
    }
    return r;
}

template <class F>
RadialSamples sample_radial(const ZonalGrid& g, F&& f) {
    RadialSamples out{stereo_radii(g), {}};
    out.values.reserve(out.radii.size());
    for (double r : out.radii) out.values.push_back(f(r));
    return out;
}

/// u = ((1 + r^2)/2)^{(n+2s)/2} f, i.e. (1 + t)^{-(n+2s)/2} f at each node.
inline ZonalField stereo_lift(const RadialSamples& f, const GridPtr& grid) {
    if (f.values.size() != grid->size()) throw ConfigError("stereo_lift: sample count does not match grid");
    const double a = 0.5 * (grid->params().n + 2.0 * grid->params().s);
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = std::pow(1.0 + grid->nodes()[i], -a) * f.values[i];
        if (!std::isfinite(v[i])) throw std::overflow_error("stereo_lift: lifted value is not finite");
    }
    return ZonalField(grid, std::move(v));
}

inline RadialSamples stereo_project(const ZonalField& u) {
    const ZonalGrid& g = u.grid();
    const double a = 0.5 * (g.params().n + 2.0 * g.params().s);
    RadialSamples out{stereo_radii(g), std::vector<double>(u.size())};
    for (std::size_t i = 0; i < u.size(); ++i) out.values[i] = std::pow(1.0 + g.nodes()[i], a) * u[i];
    return out;
}

}  // namespace hlslab
