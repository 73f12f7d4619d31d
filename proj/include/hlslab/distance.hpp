/**
 * @file distance.hpp
 * @brief Nearest-bubble projections in the L^{2n/(n+2s)} metric and in the
 *        Hilbert metrics <P r, r> (H^{-s}) and <A r, r> (H^s).
 *
 * The L^p problem has no usable gradient structure for p < 2 and is solved
 * by a Nelder-Mead simplex from a fixed multistart set. The Hilbert problems
 * are one-dimensional in zeta (the amplitude is pinned to the critical one)
 * and are solved by a scan, golden-section refinement, and a Newton polish
 * on the first-order condition.
 *
 * The axial parameter is confined to |zeta| <= kZetaClamp; a minimizer on
 * that bound is reported as a concentration (boundary) hit.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "hlslab/bubbles.hpp"
#include "hlslab/operators.hpp"
#include "hlslab/sphere.hpp"

namespace hlslab {

inline constexpr double kZetaClamp = 0.995;

struct ProjectionResult {
    BubbleParams bp;
    double dist = 0.0;
    bool converged = false;
    int iterations = 0;
    double multistart_spread = 0.0;
    bool boundary_hit = false;   ///< zeta on the clamp, or amplitude collapsed to 0
    double stationarity = 0.0;  ///< simplex diameter (L^p) or |dD/dzeta| (Hilbert)
};

// ------------------------------------------------------------ Nelder-Mead

template <std::size_t D>
struct SimplexResult {
    std::array<double, D> x{};
    double value = 0.0;
    int iterations = 0;
    double diameter = 0.0;
    bool converged = false;
};

struct SimplexOptions {
    double diameter_tol = 1e-9;
    int max_iterations = 4000;
};

/// Nelder-Mead with standard coefficients (1, 2, 1/2, 1/2).
template <std::size_t D, class F>
SimplexResult<D> nelder_mead(F&& f, std::array<double, D> x0, std::array<double, D> step, SimplexOptions opt = {}) {
    using Pt = std::array<double, D>;
    std::array<Pt, D + 1> v;
    std::array<double, D + 1> fv;
    v[0] = x0;
    for (std::size_t k = 0; k < D; ++k) {
        v[k + 1] = x0;
        v[k + 1][k] += step[k];
    }
    for (std::size_t i = 0; i <= D; ++i) fv[i] = f(v[i]);

    auto diameter = [&] {
        double d = 0.0;
        for (std::size_t i = 1; i <= D; ++i)
            for (std::size_t k = 0; k < D; ++k) d = std::max(d, std::abs(v[i][k] - v[0][k]));
        return d;
    };
    auto along = [](const Pt& a, const Pt& b, double t) {
        Pt r;
        for (std::size_t k = 0; k < D; ++k) r[k] = a[k] + t * (b[k] - a[k]);
        return r;
    };

    SimplexResult<D> res;
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        std::array<std::size_t, D + 1> idx;
        for (std::size_t i = 0; i <= D; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::array<Pt, D + 1> sv;
        std::array<double, D + 1> sf;
        for (std::size_t i = 0; i <= D; ++i) {
            sv[i] = v[idx[i]];
            sf[i] = fv[idx[i]];
        }
        v = sv;
        fv = sf;
        if (diameter() <= opt.diameter_tol) break;

        Pt centroid{};
        for (std::size_t i = 0; i < D; ++i)
            for (std::size_t k = 0; k < D; ++k) centroid[k] += v[i][k] / static_cast<double>(D);
        const Pt& worst = v[D];
        const Pt xr = along(centroid, worst, -1.0);
        const double fr = f(xr);
        if (fr < fv[0]) {
            const Pt xe = along(centroid, worst, -2.0);
            const double fe = f(xe);
            if (fe < fr) {
                v[D] = xe;
                fv[D] = fe;
            } else {
                v[D] = xr;
                fv[D] = fr;
            }
        } else if (fr < fv[D - 1]) {
            v[D] = xr;
            fv[D] = fr;
        } else {
            const bool outside = fr < fv[D];
            const Pt xc = outside ? along(centroid, xr, 0.5) : along(centroid, worst, 0.5);
            const double fc = f(xc);
            if (fc < (outside ? fr : fv[D])) {
                v[D] = xc;
                fv[D] = fc;
            } else {
                for (std::size_t i = 1; i <= D; ++i) {
                    v[i] = along(v[0], v[i], 0.5);
                    fv[i] = f(v[i]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= D; ++i)
        if (fv[i] < fv[best]) best = i;
    res.x = v[best];
    res.value = fv[best];
    res.iterations = it;
    res.diameter = diameter();
    res.converged = res.diameter <= opt.diameter_tol;
    return res;
}

// ------------------------------------------------------------ L^p projection

enum class Manifold { Optimizers, Critical };  ///< M (free amplitude) or the critical manifold

inline const char* to_string(Manifold m) { return m == Manifold::Optimizers ? "M" : "critical"; }

namespace detail {

/// Objective on the clamped box; a linear penalty outside keeps the simplex near it.
inline double clamped_zeta(double z) { return std::clamp(z, -kZetaClamp, kZetaClamp); }

inline double lp_distance_to(const ZonalField& u, double c, double zeta, double p, double a) {
    const double z = clamped_zeta(zeta);
    const auto w = u.grid().measure_weights();
    const auto t = u.grid().nodes();
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double v = c * std::pow(conformal_factor(z, t[i]), a);
        acc += w[i] * std::pow(std::abs(u[i] - v), p);
    }
    return std::pow(acc, 1.0 / p) + std::max(0.0, std::abs(zeta) - kZetaClamp);
}

struct Candidate {
    BubbleParams bp;
    double dist;
    bool converged;
    int iterations;
    double diameter;
};

inline bool better(const Candidate& a, const Candidate& b) {
    const double tol = 1e-12 * std::max({1.0, std::abs(a.dist), std::abs(b.dist)});
    if (a.dist < b.dist - tol) return true;
    if (b.dist < a.dist - tol) return false;
    return std::abs(a.bp.zeta) < std::abs(b.bp.zeta);
}

inline ProjectionResult finish(const std::vector<Candidate>& cands, double amp_scale) {
    ProjectionResult r;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    const Candidate* best = nullptr;
    for (const auto& c : cands) {
        lo = std::min(lo, c.dist);
        hi = std::max(hi, c.dist);
        if (!best || better(c, *best)) best = &c;
        r.iterations += c.iterations;
    }
    r.bp = best->bp;
    r.dist = best->dist;
    r.converged = best->converged;
    r.stationarity = best->diameter;
    r.multistart_spread = hi - lo;
    r.boundary_hit = std::abs(r.bp.zeta) >= kZetaClamp - 1e-9 || std::abs(r.bp.c) <= 1e-8 * amp_scale;
    return r;
}

}  // namespace detail

/// Multistart starting set for the L^p projection.
inline const std::array<double, 5>& zeta_starts() {
    static const std::array<double, 5> z{-0.8, -0.4, 0.0, 0.4, 0.8};
    return z;
}

/// Nearest HLS bubble in L^{2n/(n+2s)}, over M (c and zeta free) or over
/// the critical manifold (c = c_crit).
inline ProjectionResult nearest_bubble_Lp(const ZonalField& u, Manifold manifold, SimplexOptions opt = {}) {
    const Params& p = u.grid().params();
    const double pexp = p.hls_exponent();
    const double a = bubble_exponent(p, BubbleKind::HLS);
    const double cc = constants(p).c_crit;
    std::vector<detail::Candidate> cands;
    if (manifold == Manifold::Critical) {
        for (double z0 : zeta_starts()) {
            auto f = [&](const std::array<double, 1>& x) { return detail::lp_distance_to(u, cc, x[0], pexp, a); };
            const auto r = nelder_mead<1>(f, {z0}, {0.1}, opt);
            cands.push_back({{cc, detail::clamped_zeta(r.x[0])},
                             detail::lp_distance_to(u, cc, detail::clamped_zeta(r.x[0]), pexp, a),
                             r.converged, r.iterations, r.diameter});
        }
    } else {
        for (int ic = 0; ic < 5; ++ic) {
            const double c0 = (0.2 + 0.45 * ic) * cc;
            for (double z0 : zeta_starts()) {
                auto f = [&](const std::array<double, 2>& x) { return detail::lp_distance_to(u, x[0], x[1], pexp, a); };
                const auto r = nelder_mead<2>(f, {c0, z0}, {0.1 * cc, 0.1}, opt);
                const double z = detail::clamped_zeta(r.x[1]);
                cands.push_back({{r.x[0], z}, detail::lp_distance_to(u, r.x[0], z, pexp, a), r.converged,
                                 r.iterations, r.diameter});
            }
        }
    }
    return detail::finish(cands, cc);
}

// ------------------------------------------------------------ Hilbert projections

/// Which Hilbert metric: <P r, r> (H^{-s}) on HLS bubbles, or <A r, r> (H^s) on Sobolev bubbles.
enum class HilbertMetric { Hminus, Hplus };

struct HilbertOptions {
    int scan_points = 81;
    double golden_tol = 1e-10;
    int newton_max = 30;
    double stationarity_tol = 1e-8;
};

namespace detail {

class HilbertObjective {
public:
    HilbertObjective(const ZonalField& u, HilbertMetric metric)
        : u_(u),
          kind_(metric == HilbertMetric::Hminus ? BubbleKind::HLS : BubbleKind::Sobolev),
          amp_(critical_amplitude(u.grid().params(), kind_)),
          au_(analyze(u)) {
        const auto t = MultiplierTable::make(u.grid().params(), u.grid().cutoff());
        mu_ = t.lambda;
        if (metric == HilbertMetric::Hplus)
            for (double& m : mu_) m = 1.0 / m;
    }

    double amplitude() const { return amp_; }
    BubbleKind kind() const { return kind_; }

    double value(double zeta) const {
        const auto av = analyze(bubble_sphere(u_.grid_ptr(), {amp_, zeta}, kind_));
        double acc = 0.0;
        for (std::size_t l = 0; l < mu_.size(); ++l) acc += mu_[l] * (au_.a[l] - av.a[l]) * (au_.a[l] - av.a[l]);
        return acc;
    }

    /// dD/dzeta = -2 sum_l mu_l (a_u - a_v) a_{dv}.
    double gradient(double zeta) const {
        const BubbleParams bp{amp_, zeta};
        const auto av = analyze(bubble_sphere(u_.grid_ptr(), bp, kind_));
        const auto ad = analyze(tangent_fields(u_.grid_ptr(), bp, kind_).d_zeta);
        double acc = 0.0;
        for (std::size_t l = 0; l < mu_.size(); ++l) acc += mu_[l] * (au_.a[l] - av.a[l]) * ad.a[l];
        return -2.0 * acc;
    }

private:
    const ZonalField& u_;
    BubbleKind kind_;
    double amp_;
    SpectralCoeffs au_;
    std::vector<double> mu_;
};

inline double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol, int& evals) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    evals += 2;
    while (hi - lo > tol) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
        ++evals;
    }
    return f1 <= f2 ? x1 : x2;
}

}  // namespace detail

/// Nearest critical bubble in a Hilbert metric; dist is the metric norm of u - phi.
inline ProjectionResult nearest_bubble_hilbert(const ZonalField& u, HilbertMetric metric, HilbertOptions opt = {}) {
    const detail::HilbertObjective obj(u, metric);
    const int N = std::max(opt.scan_points, 5);
    std::vector<double> zs(static_cast<std::size_t>(N)), ds(zs.size());
    for (int i = 0; i < N; ++i) {
        zs[static_cast<std::size_t>(i)] = -kZetaClamp + 2.0 * kZetaClamp * i / (N - 1);
        ds[static_cast<std::size_t>(i)] = obj.value(zs[static_cast<std::size_t>(i)]);
    }
    int evals = N;
    std::vector<detail::Candidate> cands;
    auto f = [&](double z) { return obj.value(z); };
    for (int i = 0; i < N; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const bool left_ok = i == 0 || ds[k] <= ds[k - 1];
        const bool right_ok = i == N - 1 || ds[k] <= ds[k + 1];
        if (!(left_ok && right_ok)) continue;
        const double lo = zs[static_cast<std::size_t>(std::max(i - 1, 0))];
        const double hi = zs[static_cast<std::size_t>(std::min(i + 1, N - 1))];
        double z = detail::golden_section(f, lo, hi, opt.golden_tol, evals);
        // Newton polish on the first-order condition
        double g = obj.gradient(z);
        for (int it = 0; it < opt.newton_max && std::abs(g) > 0.0; ++it) {
            const double h = 1e-6;
            const double gp = (obj.gradient(std::min(z + h, kZetaClamp)) - obj.gradient(std::max(z - h, -kZetaClamp))) /
                              (std::min(z + h, kZetaClamp) - std::max(z - h, -kZetaClamp));
            evals += 2;
            if (!(gp > 0.0)) break;
            const double zn = std::clamp(z - g / gp, lo, hi);
            const double gn = obj.gradient(zn);
            ++evals;
            if (!(std::abs(gn) < std::abs(g))) break;
            z = zn;
            g = gn;
        }
        const double d = std::sqrt(std::max(0.0, obj.value(z)));
        const bool on_bound = std::abs(z) >= kZetaClamp - 1e-9;
        cands.push_back({{obj.amplitude(), z}, d, on_bound || std::abs(g) <= opt.stationarity_tol, 0, std::abs(g)});
    }
    auto r = detail::finish(cands, obj.amplitude());
    r.iterations = evals;
    r.boundary_hit = std::abs(r.bp.zeta) >= kZetaClamp - 1e-9;
    if (r.boundary_hit) r.converged = false;
    return r;
}

/// Nearest critical HLS bubble in the metric <P r, r>^{1/2}.
inline ProjectionResult nearest_bubble_P(const ZonalField& u, HilbertOptions opt = {}) {
    return nearest_bubble_hilbert(u, HilbertMetric::Hminus, opt);
}

struct OrthogonalityResult {
    double value = 0.0;
    bool degenerate = false;  ///< remainder (or tangent) has zero norm; value set to 0
};

/// |<P(u - phi), d_zeta phi>| / (|u - phi|_{H^-s} |d_zeta phi|_{H^-s}) at the projection.
inline OrthogonalityResult orthogonality_check(const ZonalField& u, const ProjectionResult& pr) {
    const auto phi = bubble_sphere(u.grid_ptr(), pr.bp, BubbleKind::HLS);
    const auto dphi = tangent_fields(u.grid_ptr(), pr.bp, BubbleKind::HLS).d_zeta;
    const ZonalField r = u - phi;
    const double nr = std::sqrt(std::max(0.0, inner(apply_P2s(r), r)));
    const double nd = std::sqrt(std::max(0.0, inner(apply_P2s(dphi), dphi)));
    const double scale = std::sqrt(std::max(0.0, inner(apply_P2s(u), u)));
    if (nr <= 1e-12 * std::max(1.0, scale) || nd == 0.0) return {0.0, true};
    return {std::abs(inner(apply_P2s(r), dphi)) / (nr * nd), false};
}

struct ComparisonResult {
    double d_lp = 0.0;                   ///< L^p distance to the critical manifold
    double lp_dist_to_P_minimizer = 0.0; ///< |u - phi|_p with phi the H^{-s} projection
    double ratio = 1.0;
    double K_cmp = 0.0;
    bool lower_ok = true;
    bool upper_ok = true;
    bool in_regime = true;
    bool degenerate = false;             ///< both distances vanish; ratio fixed at 1
    ProjectionResult lp;
    ProjectionResult hilbert;
};

/// Relative slack on the definitional lower bound, absorbing simplex tolerance.
inline constexpr double kComparisonLowerSlack = 1e-9;

inline ComparisonResult comparison_verify(const ZonalField& u) {
    const Params& p = u.grid().params();
    const auto k = constants(p);
    ComparisonResult out;
    out.K_cmp = k.K_cmp;
    out.lp = nearest_bubble_Lp(u, Manifold::Critical);
    out.hilbert = nearest_bubble_P(u);
    out.d_lp = out.lp.dist;
    const auto phi = bubble_sphere(u.grid_ptr(), out.hilbert.bp, BubbleKind::HLS);
    out.lp_dist_to_P_minimizer = lp_norm(u - phi, p.hls_exponent());
    out.in_regime = out.d_lp <= 0.1 * std::pow(k.S, (p.n + 2.0 * p.s) / (4.0 * p.s));
    const double scale = std::max(1.0, lp_norm(u, p.hls_exponent()));
    if (out.d_lp <= 1e-12 * scale) {
        out.degenerate = true;
        out.ratio = 1.0;
        out.lower_ok = out.lp_dist_to_P_minimizer <= 1e-9 * scale;
        out.upper_ok = out.lower_ok;
        return out;
    }
    out.ratio = out.lp_dist_to_P_minimizer / out.d_lp;
    out.lower_ok = out.ratio >= 1.0 - kComparisonLowerSlack;
    out.upper_ok = out.ratio <= out.K_cmp;
    return out;
}

}  // namespace hlslab
