/**
 * @file stability.hpp
 * @brief Local expansion slopes, stability quotients and their survey,
 *        synthetic Palais-Smale sequences with single-bubble extraction,
 *        the sign-split energy identities and the HLS/Sobolev duality chain.
 *
 * Finite-epsilon checks of limit statements carry a declared relative
 * slack (kDefaultSlack) and, where a slope is the object, Richardson
 * extrapolation over an epsilon ladder.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hlslab/bubbles.hpp"
#include "hlslab/distance.hpp"
#include "hlslab/errors.hpp"
#include "hlslab/operators.hpp"
#include "hlslab/parallel.hpp"
#include "hlslab/sphere.hpp"

namespace hlslab {

inline constexpr double kDefaultSlack = 0.05;

inline const std::vector<double>& default_eps_ladder() {
    static const std::vector<double> e{1e-2, 5e-3, 2.5e-3};
    return e;
}

namespace detail {

/// Extrapolates D(h) to h = 0 assuming an even error expansion in h (Neville in h^2).
inline double richardson_even(const std::vector<double>& h, std::vector<double> d, double* err_est = nullptr) {
    const std::size_t k = d.size();
    double last_change = 0.0;
    for (std::size_t level = 1; level < k; ++level) {
        for (std::size_t i = k - 1; i >= level; --i) {
            const double r = (h[i - level] * h[i - level]) / (h[i] * h[i]);
            const double nd = d[i] + (d[i] - d[i - 1]) / (r - 1.0);
            if (i == k - 1) last_change = std::abs(nd - d[i]);
            d[i] = nd;
            if (i == level) break;
        }
    }
    if (err_est) *err_est = last_change;
    return d[k - 1];
}

inline double pairing_with(const ZonalField& u, const ZonalField& r) { return inner(hls_residual(u).field, r); }

}  // namespace detail

// ------------------------------------------------------------ local expansion

struct ExpansionReport {
    int l = 0;
    double beta = 1.0;
    std::vector<double> eps;
    std::vector<double> central_slopes;  ///< (g(e) - g(-e)) / 2e per ladder entry
    double slope = 0.0;                  ///< extrapolated
    double slope_error_estimate = 0.0;
    double analytic = 0.0;               ///< A(l, beta)
    double rel_error = 0.0;
    double g0 = 0.0;                     ///< pairing at eps = 0
    double gap_lower_bound = 0.0;        ///< lambda_1 (beta^{-4s/(n+2s)} - (n/2-s+1)/(n/2+s+1))
    bool gap_bound_holds = true;
};

/// A(l, beta) = (n-2s)/(n+2s) (beta c_crit)^{-4s/(n+2s)} - lambda_l.
inline double expansion_coefficient(const Params& p, int l, double beta) {
    const double c = constants(p).c_crit;
    return p.hls_power() * std::pow(beta * c, -4.0 * p.s / (p.n + 2.0 * p.s)) - funk_hecke_multiplier(p, l);
}

/// beta^{-4s/(n+2s)} - (n/2-s+1)/(n/2+s+1); the expansion regime needs it positive.
inline double beta_regime_margin(const Params& p, double beta) {
    return std::pow(beta, -4.0 * p.s / (p.n + 2.0 * p.s)) - (p.half_n() - p.s + 1.0) / (p.half_n() + p.s + 1.0);
}

/// Slope at eps = 0 of g(eps) = <hls_residual(amp + eps Z_l), Z_l>.
inline ExpansionReport pairing_slope(const GridPtr& grid, double amp, int l, const std::vector<double>& eps_list) {
    if (eps_list.empty()) throw ConfigError("pairing_slope: empty epsilon ladder");
    const ZonalField zl = zonal_harmonic(grid, l);
    const ZonalField base = ZonalField::from_function(grid, [amp](double) { return amp; });
    ExpansionReport rep;
    rep.l = l;
    rep.eps = eps_list;
    rep.g0 = detail::pairing_with(base, zl);
    for (double e : eps_list) {
        const double gp = detail::pairing_with(base + e * zl, zl);
        const double gm = detail::pairing_with(base - e * zl, zl);
        rep.central_slopes.push_back((gp - gm) / (2.0 * e));
    }
    rep.slope = detail::richardson_even(eps_list, rep.central_slopes, &rep.slope_error_estimate);
    return rep;
}

/// Checks the first-order coefficient of the residual pairing along a degree-l harmonic.
inline ExpansionReport local_expansion_check(const GridPtr& grid, int l, double beta,
                                             const std::vector<double>& eps_list = default_eps_ladder()) {
    const Params& p = grid->params();
    if (l < 2) throw PreconditionError("local_expansion_check: degree must be >= 2");
    if (!(beta_regime_margin(p, beta) > 0.0))
        throw PreconditionError("local_expansion_check: beta outside the expansion regime");
    const double c = constants(p).c_crit;
    auto rep = pairing_slope(grid, beta * c, l, eps_list);
    rep.beta = beta;
    rep.analytic = expansion_coefficient(p, l, beta);
    rep.rel_error = std::abs(rep.slope - rep.analytic) / std::abs(rep.analytic);
    rep.gap_lower_bound = funk_hecke_multiplier(p, 1) * beta_regime_margin(p, beta);
    rep.gap_bound_holds = rep.analytic >= rep.gap_lower_bound * (1.0 - 1e-12);
    return rep;
}

struct Case2Report {
    double slope = 0.0;     ///< of -<hls_residual(c + eps Z_0), Z_0>
    double analytic = 0.0;  ///< lambda_0 4s/(n+2s)
    double rel_error = 0.0;
};

/// First-order coefficient for a pure amplitude (degree 0) perturbation of c_crit.
inline Case2Report case2_coefficient_check(const GridPtr& grid,
                                           const std::vector<double>& eps_list = default_eps_ladder()) {
    const Params& p = grid->params();
    const auto rep = pairing_slope(grid, constants(p).c_crit, 0, eps_list);
    Case2Report out;
    out.slope = -rep.slope;
    out.analytic = funk_hecke_multiplier(p, 0) * 4.0 * p.s / (p.n + 2.0 * p.s);
    out.rel_error = std::abs(out.slope - out.analytic) / out.analytic;
    return out;
}

struct GapSweep {
    double worst_margin = std::numeric_limits<double>::infinity();  ///< min of A(l,beta) - bound
    int worst_l = -1;
    double worst_beta = 0.0;
    bool holds = true;
};

/// A(l, beta) >= lambda_1 * beta_regime_margin(beta) over 2 <= l <= L and the given betas in regime.
inline GapSweep gap_bound_sweep(const Params& p, int L, const std::vector<double>& betas) {
    GapSweep g;
    for (double b : betas) {
        const double margin = beta_regime_margin(p, b);
        if (!(margin > 0.0)) continue;
        const double bound = funk_hecke_multiplier(p, 1) * margin;
        for (int l = 2; l <= L; ++l) {
            const double d = expansion_coefficient(p, l, b) - bound;
            if (d < g.worst_margin) {
                g.worst_margin = d;
                g.worst_l = l;
                g.worst_beta = b;
            }
        }
    }
    g.holds = g.worst_margin >= -1e-12;
    return g;
}

// ------------------------------------------------------------ quotients

struct QuotientResult {
    double value = 0.0;  ///< +inf when the distance vanishes
    double residual_norm = 0.0;
    double d_crit = 0.0;  ///< L^p distance to the critical manifold
    double d_M = 0.0;     ///< L^p distance to M, reported alongside
    double energy = 0.0;  ///< |u|_p^p
    bool in_window = true;
    bool zero_distance = false;
    ProjectionResult projection;
};

/// Relative distance below which a field counts as lying on the manifold.
inline constexpr double kZeroDistanceRel = 1e-9;

inline QuotientResult quotient(const ZonalField& u) {
    const Params& p = u.grid().params();
    const auto k = constants(p);
    QuotientResult q;
    q.residual_norm = hls_residual(u).norm;
    q.projection = nearest_bubble_Lp(u, Manifold::Critical);
    q.d_crit = q.projection.dist;
    q.d_M = nearest_bubble_Lp(u, Manifold::Optimizers).dist;
    q.energy = lp_energy(u, p.hls_exponent());
    q.in_window = q.energy >= 0.5 * k.energy && q.energy <= 1.5 * k.energy;
    const double scale = std::pow(std::max(q.energy, 0.0), 1.0 / p.hls_exponent());
    if (q.d_crit <= kZeroDistanceRel * std::max(scale, 1e-300)) {
        q.zero_distance = true;
        q.value = std::numeric_limits<double>::infinity();
    } else {
        q.value = q.residual_norm / q.d_crit;
    }
    return q;
}

struct SurveyConfig {
    std::vector<int> degrees{0, 2, 3, 4};
    std::vector<double> eps{1e-2, 1e-3};
    std::vector<double> betas{0.95, 1.0, 1.05};
    std::vector<double> zetas{0.0, 0.4};
    double slack = kDefaultSlack;
};

enum class Branch { Case1, Case2 };

inline const char* to_string(Branch b) { return b == Branch::Case1 ? "case1" : "case2"; }

struct QuotientRecord {
    int l = 0;
    double eps = 0.0;
    double beta = 1.0;
    double zeta = 0.0;
    Branch branch = Branch::Case1;
    QuotientResult q;
    double conformal_drift = 0.0;  ///< relative gap to the matching zeta = 0 row
};

struct BranchSummary {
    std::size_t count = 0;
    double min_quotient = std::numeric_limits<double>::infinity();
    std::size_t argmin = 0;
    double margin = 0.0;  ///< min_quotient / C_loc - 1
    bool pass = true;
};

struct QuotientReport {
    std::vector<QuotientRecord> records;
    BranchSummary overall, case1, case2;
    double C_loc = 0.0;
    double slack = kDefaultSlack;
    double max_conformal_drift = 0.0;
    bool all_finite = true;
    bool pass = true;
};

/// Branch of the local argument for u = beta c_crit + eps Z_l, decided on r = u - c_crit.
inline Branch classify_branch(const Params& p, int l, double eps, double beta) {
    const double c = constants(p).c_crit;
    const double r01 = (beta - 1.0) * c * std::sqrt(sphere_area(p.n)) + (l == 0 ? eps : 0.0);
    const double rest = l == 0 ? 0.0 : eps;
    const double norm2 = r01 * r01 + rest * rest;
    return r01 * r01 <= p.n / (p.n + 2.0 * p.s) * norm2 ? Branch::Case1 : Branch::Case2;
}

inline QuotientReport quotient_survey(const GridPtr& grid, const SurveyConfig& cfg = {}) {
    const Params& p = grid->params();
    const auto k = constants(p);
    QuotientReport rep;
    rep.C_loc = k.C_loc;
    rep.slack = cfg.slack;
    for (int l : cfg.degrees)
        for (double e : cfg.eps)
            for (double b : cfg.betas)
                for (double z : cfg.zetas) rep.records.push_back({l, e, b, z, classify_branch(p, l, e, b), {}, 0.0});

    parallel_for(rep.records.size(), [&](std::size_t i) {
        auto& r = rep.records[i];
        const double amp = r.beta * k.c_crit;
        const ZonalField zl = zonal_harmonic(grid, r.l);
        ZonalField u = ZonalField::from_function(grid, [amp](double) { return amp; }) + r.eps * zl;
        if (r.zeta != 0.0) u = conformal_transport(u, r.zeta);
        r.q = quotient(u);
    });

    auto fold = [&](BranchSummary& s, std::size_t i) {
        const double v = rep.records[i].q.value;
        ++s.count;
        if (v < s.min_quotient) {
            s.min_quotient = v;
            s.argmin = i;
        }
    };
    for (std::size_t i = 0; i < rep.records.size(); ++i) {
        auto& r = rep.records[i];
        if (!std::isfinite(r.q.value)) rep.all_finite = false;
        fold(rep.overall, i);
        fold(r.branch == Branch::Case1 ? rep.case1 : rep.case2, i);
        if (r.zeta != 0.0) {
            for (const auto& o : rep.records)
                if (o.zeta == 0.0 && o.l == r.l && o.eps == r.eps && o.beta == r.beta) {
                    r.conformal_drift = std::abs(r.q.value - o.q.value) / std::abs(o.q.value);
                    rep.max_conformal_drift = std::max(rep.max_conformal_drift, r.conformal_drift);
                }
        }
    }
    for (BranchSummary* s : {&rep.overall, &rep.case1, &rep.case2}) {
        if (s->count == 0) continue;
        s->margin = s->min_quotient / rep.C_loc - 1.0;
        s->pass = s->min_quotient >= rep.C_loc * (1.0 - rep.slack);
    }
    rep.pass = rep.all_finite && rep.overall.pass;
    return rep;
}

// ------------------------------------------------------------ Palais-Smale sequences

enum class PsKind { Perturbation, Concentration };

struct PsElement {
    int k = 0;
    double eps = 0.0;   ///< perturbation size (perturbation kind)
    double zeta = 0.0;  ///< bubble centre
    bool clamped = false;
    ZonalField field;
};

struct PsOptions {
    double base_zeta = 0.3;  ///< centre of the bubble being perturbed
};

/// Fixed sign-changing perturbation direction: (Z_2 + Z_3 / 2), unit in L^2.
inline ZonalField ps_direction(const GridPtr& grid) {
    ZonalField h = zonal_harmonic(grid, 2) + 0.5 * zonal_harmonic(grid, 3);
    return h * (1.0 / std::sqrt(inner(h, h)));
}

/// f_k = bubble + 2^{-k} h, or the critical bubble at zeta_k = 1 - 2^{-k} (clamped).
inline std::vector<PsElement> make_ps_sequence(const GridPtr& grid, PsKind kind, int k_max, PsOptions opt = {}) {
    if (k_max < 3) throw PreconditionError("make_ps_sequence: need k_max >= 3");
    std::vector<PsElement> seq;
    const ZonalField h = ps_direction(grid);
    const ZonalField base = critical_bubble(grid, opt.base_zeta);
    for (int k = 1; k <= k_max; ++k) {
        if (kind == PsKind::Perturbation) {
            const double e = std::ldexp(1.0, -k);
            seq.push_back({k, e, opt.base_zeta, false, base + e * h});
        } else {
            const double raw = 1.0 - std::ldexp(1.0, -k);
            const double z = std::min(raw, kZetaClamp);
            seq.push_back({k, 0.0, z, raw > kZetaClamp, critical_bubble(grid, z)});
        }
    }
    return seq;
}

struct StruweRecord {
    int k = 0;
    double residual_norm = 0.0;
    double d_lp = 0.0;
    double ratio = 0.0;    ///< residual_norm / d_lp, +inf on the manifold
    double pairing = 0.0;  ///< <F(f) - F(U), f - U>, F = |.|^{-4s/(n+2s)} (.)
    bool converged = true;
    ProjectionResult projection;
};

/// Nearest critical bubble U to f and the quantities of the single-bubble decomposition.
inline StruweRecord struwe_extract(const ZonalField& f) {
    const Params& p = f.grid().params();
    StruweRecord r;
    r.projection = nearest_bubble_Lp(f, Manifold::Critical);
    r.converged = r.projection.converged;
    const ZonalField U = bubble_sphere(f.grid_ptr(), r.projection.bp, BubbleKind::HLS);
    const ZonalField diff = f - U;
    r.d_lp = lp_norm(diff, p.hls_exponent());
    r.residual_norm = hls_residual(f).norm;
    r.pairing = inner(hls_nonlinearity(f) - hls_nonlinearity(U), diff);
    const double scale = lp_norm(f, p.hls_exponent());
    r.ratio = r.d_lp > kZeroDistanceRel * std::max(scale, 1e-300) ? r.residual_norm / r.d_lp
                                                                   : std::numeric_limits<double>::infinity();
    return r;
}

struct StruweReport {
    std::vector<StruweRecord> records;
    bool residual_decreasing = true;
    bool distance_decreasing = true;
    bool pairing_decreasing = true;
    bool pairing_positive = true;
    bool all_converged = true;
    double final_ratio = 0.0;
    double min_ratio_tail = 0.0;  ///< min ratio over k >= tail_from
    int tail_from = 8;
    double C_ps = 0.0;
    double slack = kDefaultSlack;
    bool ratio_ok = true;
    bool pass = true;
};

inline StruweReport struwe_run(const GridPtr& grid, int k_max = 12, double slack = kDefaultSlack, PsOptions opt = {}) {
    const auto seq = make_ps_sequence(grid, PsKind::Perturbation, k_max, opt);
    StruweReport rep;
    rep.C_ps = constants(grid->params()).C_ps;
    rep.slack = slack;
    rep.records.resize(seq.size());
    parallel_for(seq.size(), [&](std::size_t i) {
        rep.records[i] = struwe_extract(seq[i].field);
        rep.records[i].k = seq[i].k;
    });
    rep.min_ratio_tail = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rep.records.size(); ++i) {
        const auto& r = rep.records[i];
        rep.all_converged = rep.all_converged && r.converged;
        rep.pairing_positive = rep.pairing_positive && r.pairing > 0.0;
        if (r.k >= rep.tail_from) rep.min_ratio_tail = std::min(rep.min_ratio_tail, r.ratio);
        if (i == 0) continue;
        const auto& q = rep.records[i - 1];
        rep.residual_decreasing = rep.residual_decreasing && r.residual_norm < q.residual_norm;
        rep.distance_decreasing = rep.distance_decreasing && r.d_lp < q.d_lp;
        rep.pairing_decreasing = rep.pairing_decreasing && r.pairing < q.pairing;
    }
    rep.final_ratio = rep.records.back().ratio;
    rep.ratio_ok = rep.final_ratio >= rep.C_ps * (1.0 - slack);
    rep.pass = rep.residual_decreasing && rep.distance_decreasing && rep.pairing_decreasing && rep.ratio_ok;
    return rep;
}

// ------------------------------------------------------------ sign split

struct SignSplit {
    double raw_pos = 0.0;  ///< |psi+|_p^p - [<P psi+, psi+> - <P psi-, psi+>]
    double raw_neg = 0.0;  ///< |psi-|_p^p - [<P psi-, psi-> - <P psi+, psi->]
    double pos_gap = 0.0;  ///< raw_pos - <res, psi+>
    double neg_gap = 0.0;  ///< raw_neg + <res, psi->
};

/// Energy identities from testing the Euler-Lagrange equation with psi+ and psi-.
inline SignSplit sign_split(const ZonalField& psi) {
    const double p = psi.grid().params().hls_exponent();
    const ZonalField pos = psi.map([](double v) { return std::max(v, 0.0); });
    const ZonalField neg = psi.map([](double v) { return std::max(-v, 0.0); });
    const ZonalField Ppos = apply_P2s(pos), Pneg = apply_P2s(neg);
    const ZonalField res = hls_residual(psi).field;
    SignSplit out;
    out.raw_pos = lp_energy(pos, p) - (inner(Ppos, pos) - inner(Pneg, pos));
    out.raw_neg = lp_energy(neg, p) - (inner(Pneg, neg) - inner(Ppos, neg));
    out.pos_gap = out.raw_pos - inner(res, pos);
    out.neg_gap = out.raw_neg + inner(res, neg);
    return out;
}

// ------------------------------------------------------------ duality chain

struct DualityReport {
    double pointwise_error = 0.0;   ///< max |F(f) - u| / max |u|, f = |u|^{4s/(n-2s)} u
    double identity_error = 0.0;    ///< |hls_residual(f) - P sobolev_residual(u)| in L^{2n/(n-2s)}
    double truncation_error = 0.0;  ///< |f - Pi_L f|_2 / |f|_2
    bool truncation_flagged = false;
    double lhs = 0.0;            ///< H^{-s} norm of sobolev_residual(u)
    double rhs_forced = 0.0;     ///< S^{1/2} |hls_residual(f)|_{2n/(n-2s)}
    double rhs_displayed = 0.0;  ///< S |hls_residual(f)|_{2n/(n+2s)}
    bool forced_holds = true;
    bool displayed_holds = true;
};

inline constexpr double kTruncationThreshold = 1e-6;

inline DualityReport dual_chain_check(const ZonalField& u) {
    const Params& p = u.grid().params();
    const double S = sharp_constant(p);
    DualityReport rep;
    const ZonalField f = sobolev_nonlinearity(u);

    const ZonalField back = hls_nonlinearity(f);
    double umax = 0.0, err = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        umax = std::max(umax, std::abs(u[i]));
        err = std::max(err, std::abs(back[i] - u[i]));
    }
    rep.pointwise_error = umax > 0.0 ? err / umax : err;

    const double fn = std::sqrt(inner(f, f));
    const ZonalField proj = synthesize(analyze(f), u.grid_ptr());
    const ZonalField tail = f - proj;
    rep.truncation_error = fn > 0.0 ? std::sqrt(inner(tail, tail)) / fn : 0.0;
    rep.truncation_flagged = rep.truncation_error > kTruncationThreshold;

    const auto hr = hls_residual(f);
    const auto sr = sobolev_residual(u);
    rep.identity_error = lp_norm(hr.field - apply_P2s(sr.field), p.sobolev_exponent());
    rep.lhs = sr.norm;
    rep.rhs_forced = std::sqrt(S) * hr.norm;
    rep.rhs_displayed = S * lp_norm(hr.field, p.hls_exponent());
    const double tol = 1e-10 * std::max(1.0, rep.rhs_forced);
    rep.forced_holds = rep.lhs >= rep.rhs_forced - tol;
    rep.displayed_holds = rep.lhs >= rep.rhs_displayed - tol;
    return rep;
}

// ------------------------------------------------------------ Sobolev side

struct SobolevQuotientResult {
    double value = 0.0;  ///< +inf when the distance vanishes
    double residual_norm = 0.0;
    double distance = 0.0;  ///< H^s distance to the Sobolev critical manifold
    double energy = 0.0;    ///< |u|_{H^s}^2
    double window_lo = 0.0;
    double window_hi = 0.0;
    bool in_window = true;
    bool zero_distance = false;
    ProjectionResult projection;
};

inline SobolevQuotientResult sobolev_quotient(const ZonalField& u) {
    const Params& p = u.grid().params();
    const auto k = constants(p);
    SobolevQuotientResult q;
    q.residual_norm = sobolev_residual(u).norm;
    q.projection = nearest_bubble_hilbert(u, HilbertMetric::Hplus);
    q.distance = q.projection.dist;
    const double hp = h_norms(u).h_plus_s;
    q.energy = hp * hp;
    const double e = (p.n - 2.0 * p.s) / p.n;
    q.window_lo = std::pow(0.5, e) * k.energy;
    q.window_hi = std::pow(1.5, e) * k.energy;
    q.in_window = q.energy >= q.window_lo && q.energy <= q.window_hi;
    if (q.distance <= kZeroDistanceRel * std::max(hp, 1e-300)) {
        q.zero_distance = true;
        q.value = std::numeric_limits<double>::infinity();
    } else {
        q.value = q.residual_norm / q.distance;
    }
    return q;
}

struct SobolevRecord {
    int l = 0;
    double eps = 0.0;
    SobolevQuotientResult q;
};

struct SobolevSurvey {
    std::vector<SobolevRecord> records;
    double min_quotient = std::numeric_limits<double>::infinity();
    std::size_t argmin = 0;
};

/// Empirical minimum of the Sobolev quotient over d_crit + eps Z_l.
inline SobolevSurvey sobolev_survey(const GridPtr& grid, const std::vector<int>& degrees = {0, 2, 3, 4},
                                    const std::vector<double>& eps = {1e-2, 1e-3}) {
    const double d = constants(grid->params()).d_crit;
    SobolevSurvey s;
    for (int l : degrees)
        for (double e : eps) s.records.push_back({l, e, {}});
    parallel_for(s.records.size(), [&](std::size_t i) {
        auto& r = s.records[i];
        const ZonalField u = ZonalField::from_function(grid, [d](double) { return d; }) + r.eps * zonal_harmonic(grid, r.l);
        r.q = sobolev_quotient(u);
    });
    for (std::size_t i = 0; i < s.records.size(); ++i)
        if (s.records[i].q.value < s.min_quotient) {
            s.min_quotient = s.records[i].q.value;
            s.argmin = i;
        }
    return s;
}

// ------------------------------------------------------------ coercivity between bubbles

struct CoercivityScan {
    double worst_ratio = std::numeric_limits<double>::infinity();  ///< lhs / rhs, must stay >= 1
    double worst_zeta_a = 0.0;
    double worst_zeta_b = 0.0;
    bool holds = true;
};

/// <phi^{p-1} - psi^{p-1}, phi - psi> >= S^{-1} (n-2s)/(n+2s) / 2 |phi - psi|_p^2 over pairs of critical bubbles.
inline CoercivityScan coercivity_scan(const GridPtr& grid, const std::vector<double>& zetas) {
    const Params& p = grid->params();
    const double S = sharp_constant(p);
    const double kappa = p.hls_power() / (2.0 * S);
    CoercivityScan out;
    for (std::size_t i = 0; i < zetas.size(); ++i)
        for (std::size_t j = i + 1; j < zetas.size(); ++j) {
            const ZonalField a = critical_bubble(grid, zetas[i]);
            const ZonalField b = critical_bubble(grid, zetas[j]);
            const ZonalField d = a - b;
            const double lhs = inner(hls_nonlinearity(a) - hls_nonlinearity(b), d);
            const double nd = lp_norm(d, p.hls_exponent());
            const double rhs = kappa * nd * nd;
            if (rhs <= 0.0) continue;
            const double ratio = lhs / rhs;
            if (ratio < out.worst_ratio) {
                out.worst_ratio = ratio;
                out.worst_zeta_a = zetas[i];
                out.worst_zeta_b = zetas[j];
            }
        }
    out.holds = out.worst_ratio >= 1.0;
    return out;
}

}  // namespace hlslab
