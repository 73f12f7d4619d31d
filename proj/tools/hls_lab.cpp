// hls_lab: run verification suites for the HLS / fractional Sobolev stability lab
// and emit JSON or CSV reports.
//
// Exit codes: 0 all assertions pass, 1 an assertion failed, 2 invalid
// parameters or flags, 3 output could not be written.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hlslab/hlslab.hpp"
#include "hlslab/report.hpp"

namespace {

using namespace hlslab;
using report::check_ge;
using report::check_le;
using report::check_true;
using report::Document;
using report::Json;
using report::num;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct RunConfig {
    int n = 3;
    double s = 1.0;
    int L = 32;
    int m = 0;  // 0: default 2L + 16
    std::vector<double> eps;
    std::string out = "-";
    std::string format = "json";
    double slack_percent = 5.0;
    std::uint64_t seed = oracles::OracleConfig{}.seed;
    std::string emit_plot;
    int k_max = 12;
    std::string command;

    double slack() const { return slack_percent / 100.0; }
    int nodes() const { return m > 0 ? m : default_nodes(L); }
};

struct PlotPoint {
    double x, y;
    std::string series;
};

struct Outcome {
    Document doc;
    std::vector<PlotPoint> plot;
};

Json base_meta(const RunConfig& cfg, Json tolerances) {
    return Json{{"n", cfg.n},
                {"s", cfg.s},
                {"L", cfg.L},
                {"m", cfg.nodes()},
                {"seed", cfg.seed},
                {"version", report::kVersion},
                {"command", cfg.command},
                {"slack", cfg.slack()},
                {"tolerances", std::move(tolerances)}};
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

// ------------------------------------------------------------ commands

Outcome cmd_constants(const RunConfig& cfg, const GridPtr& grid) {
    const Params& p = grid->params();
    const auto k = constants(p);
    Outcome o;
    o.doc.meta = base_meta(cfg, Json{{"oracle_rel", 1e-12}, {"euler_lagrange_rel", 1e-12}});
    const auto table = MultiplierTable::make(p, cfg.L);
    bool decreasing = true;
    for (int l = 0; l <= cfg.L; ++l) {
        o.doc.records.push_back(Json{{"l", l}, {"lambda", table.lambda[static_cast<std::size_t>(l)]},
                                     {"inverse", 1.0 / table.lambda[static_cast<std::size_t>(l)]}});
        if (l > 0) decreasing = decreasing && table.lambda[static_cast<std::size_t>(l)] < table.lambda[static_cast<std::size_t>(l - 1)];
        o.plot.push_back({static_cast<double>(l), table.lambda[static_cast<std::size_t>(l)], "lambda"});
    }
    o.doc.summary["constants"] = report::to_json(k);
    const double oracle = oracles::sharp_constant_oracle(p.n, p.s);
    o.doc.summary["S_oracle"] = oracle;
    const double kappa = 4.0 * p.s / (p.n + 2.0 * p.s);
    o.doc.assertions.push_back(check_le("S_vs_oracle_rel", std::abs(k.S - oracle) / oracle, 1e-12));
    o.doc.assertions.push_back(check_le("c_crit_euler_lagrange", std::abs(std::pow(k.c_crit, kappa) * k.lambda0 - 1.0), 1e-12));
    o.doc.assertions.push_back(check_le(
        "d_crit_euler_lagrange", std::abs(std::pow(k.d_crit, 4.0 * p.s / (p.n - 2.0 * p.s)) * k.lambda0 - 1.0), 1e-12));
    o.doc.assertions.push_back(check_true("multipliers_strictly_decreasing", decreasing));
    return o;
}

Outcome cmd_survey(const RunConfig& cfg, const GridPtr& grid) {
    SurveyConfig sc;
    if (!cfg.eps.empty()) sc.eps = cfg.eps;
    sc.slack = cfg.slack();
    const auto rep = quotient_survey(grid, sc);
    Outcome o;
    o.doc.meta = base_meta(cfg, Json{{"quotient_slack", sc.slack}, {"conformal_drift", 0.01}});
    o.doc.meta["grid"] = Json{{"degrees", sc.degrees}, {"eps", sc.eps}, {"betas", sc.betas}, {"zetas", sc.zetas}};
    for (const auto& r : rep.records) {
        o.doc.records.push_back(report::to_json(r));
        o.plot.push_back({r.eps, r.q.value, "l=" + std::to_string(r.l) + " beta=" + fmt(r.beta) + " zeta=" + fmt(r.zeta)});
    }
    o.doc.summary["C_loc"] = rep.C_loc;
    o.doc.summary["overall"] = report::to_json(rep.overall, rep);
    o.doc.summary["case1"] = report::to_json(rep.case1, rep);
    o.doc.summary["case2"] = report::to_json(rep.case2, rep);
    o.doc.summary["max_conformal_drift"] = rep.max_conformal_drift;
    const double floor = rep.C_loc * (1.0 - sc.slack);
    o.doc.assertions.push_back(check_true("all_quotients_finite", rep.all_finite));
    o.doc.assertions.push_back(check_ge("min_quotient_case1", rep.case1.count ? rep.case1.min_quotient : floor, floor));
    o.doc.assertions.push_back(check_ge("min_quotient_case2", rep.case2.count ? rep.case2.min_quotient : floor, floor));
    o.doc.assertions.push_back(check_le("conformal_drift", rep.max_conformal_drift, 0.01));
    return o;
}

Outcome cmd_expansion(const RunConfig& cfg, const GridPtr& grid) {
    const std::vector<double> ladder = cfg.eps.size() >= 2 ? cfg.eps : default_eps_ladder();
    Outcome o;
    o.doc.meta = base_meta(cfg, Json{{"slope_rel", 1e-3}, {"case2_rel", 1e-3}});
    o.doc.meta["eps_ladder"] = ladder;
    double worst = 0.0;
    bool gap_ok = true;
    for (int l : {2, 3, 4})
        for (double b : {0.95, 1.0, 1.05}) {
            const auto r = local_expansion_check(grid, l, b, ladder);
            worst = std::max(worst, r.rel_error);
            gap_ok = gap_ok && r.gap_bound_holds;
            o.doc.records.push_back(report::to_json(r));
            for (std::size_t i = 0; i < r.eps.size(); ++i)
                o.plot.push_back({r.eps[i], r.central_slopes[i], "l=" + std::to_string(l) + " beta=" + fmt(b)});
        }
    const auto c2 = case2_coefficient_check(grid, ladder);
    o.doc.summary["case2"] = Json{{"slope", c2.slope}, {"analytic", c2.analytic}, {"rel_error", c2.rel_error}};
    const auto sweep = gap_bound_sweep(grid->params(), cfg.L, {0.9, 0.95, 1.0, 1.05, 1.1, 1.2});
    o.doc.summary["gap_sweep"] = Json{{"worst_margin", num(sweep.worst_margin)}, {"worst_l", sweep.worst_l},
                                      {"worst_beta", sweep.worst_beta}};
    o.doc.summary["max_rel_error"] = worst;
    o.doc.assertions.push_back(check_le("max_slope_rel_error", worst, 1e-3));
    o.doc.assertions.push_back(check_le("case2_rel_error", c2.rel_error, 1e-3));
    o.doc.assertions.push_back(check_true("gap_bound_per_record", gap_ok));
    o.doc.assertions.push_back(check_true("gap_bound_sweep", sweep.holds));
    return o;
}

Outcome cmd_struwe(const RunConfig& cfg, const GridPtr& grid) {
    const auto rep = struwe_run(grid, cfg.k_max, cfg.slack());
    Outcome o;
    o.doc.meta = base_meta(cfg, Json{{"ratio_slack", cfg.slack()}, {"sign_split_abs", 1e-9}});
    o.doc.meta["k_max"] = cfg.k_max;
    for (const auto& r : rep.records) {
        o.doc.records.push_back(report::to_json(r));
        o.plot.push_back({static_cast<double>(r.k), r.ratio, "ratio"});
    }
    double worst_split = 0.0;
    Json splits = Json::array();
    const auto& g = grid;
    const std::vector<std::pair<std::string, ZonalField>> fields{
        {"Z3", zonal_harmonic(g, 3)},
        {"bubble_minus_Z2", critical_bubble(g, 0.2) - 2.0 * zonal_harmonic(g, 2)},
        {"Z1_plus_Z4", zonal_harmonic(g, 1) + 0.5 * zonal_harmonic(g, 4)}};
    for (const auto& [name, f] : fields) {
        const auto ss = sign_split(f);
        worst_split = std::max({worst_split, std::abs(ss.pos_gap), std::abs(ss.neg_gap)});
        splits.push_back(Json{{"field", name}, {"raw_pos", ss.raw_pos}, {"raw_neg", ss.raw_neg},
                              {"pos_gap", ss.pos_gap}, {"neg_gap", ss.neg_gap}});
    }
    o.doc.summary["C_ps"] = rep.C_ps;
    o.doc.summary["final_ratio"] = num(rep.final_ratio);
    o.doc.summary["min_ratio_from_k8"] = num(rep.min_ratio_tail);
    o.doc.summary["sign_split"] = splits;
    o.doc.assertions.push_back(check_true("residual_strictly_decreasing", rep.residual_decreasing));
    o.doc.assertions.push_back(check_true("distance_strictly_decreasing", rep.distance_decreasing));
    o.doc.assertions.push_back(check_true("pairing_strictly_decreasing", rep.pairing_decreasing));
    o.doc.assertions.push_back(check_true("pairing_positive", rep.pairing_positive));
    o.doc.assertions.push_back(check_ge("final_ratio", rep.final_ratio, rep.C_ps * (1.0 - cfg.slack())));
    o.doc.assertions.push_back(check_le("sign_split_corrected_gap", worst_split, 1e-9));
    return o;
}

Outcome cmd_dual(const RunConfig& cfg, const GridPtr& grid) {
    const auto k = constants(grid->params());
    Outcome o;
    o.doc.meta = base_meta(cfg, Json{{"pointwise_rel", 1e-12}, {"identity", 1e-5}, {"truncation_flag", kTruncationThreshold}});
    const std::vector<double> eps = cfg.eps.empty() ? std::vector<double>{1e-2, 1e-3} : cfg.eps;
    double pw = 0.0, id = 0.0;
    bool forced = true;
    auto run = [&](const std::string& name, int l, double e, const ZonalField& u) {
        const auto r = dual_chain_check(u);
        pw = std::max(pw, r.pointwise_error);
        id = std::max(id, r.identity_error);
        forced = forced && r.forced_holds;
        Json j{{"field", name}, {"l", l}, {"eps", e}};
        j.update(report::to_json(r));
        o.doc.records.push_back(j);
    };
    const ZonalField dconst = ZonalField::from_function(grid, [&](double) { return k.d_crit; });
    run("sobolev_bubble_0.3", -1, 0.0, critical_bubble(grid, 0.3, BubbleKind::Sobolev));
    for (int l : {2, 3})
        for (double e : eps) run("d_crit_plus_eps_Zl", l, e, dconst + e * zonal_harmonic(grid, l));
    o.doc.summary["max_pointwise_error"] = pw;
    o.doc.summary["max_identity_error"] = id;
    o.doc.assertions.push_back(check_le("pointwise_identity", pw, 1e-12));
    o.doc.assertions.push_back(check_le("operator_identity", id, 1e-5));
    o.doc.assertions.push_back(check_true("forced_chain_holds", forced));
    return o;
}

Outcome cmd_compare(const RunConfig& cfg, const GridPtr& grid) {
    Outcome o;
    o.doc.meta = base_meta(cfg, Json{{"lower_slack_rel", kComparisonLowerSlack}, {"orthogonality", 1e-6},
                                     {"multistart_spread", 1e-7}});
    const std::vector<double> eps = cfg.eps.empty() ? std::vector<double>{1e-3, 1e-2} : cfg.eps;
    const auto c = critical_bubble(grid, 0.0);
    const auto Z2 = zonal_harmonic(grid, 2), Z3 = zonal_harmonic(grid, 3), Z4 = zonal_harmonic(grid, 4);
    bool lower = true, upper = true;
    double orth = 0.0, spread = 0.0;
    auto run = [&](const std::string& name, double e, const ZonalField& u) {
        const auto r = comparison_verify(u);
        const auto oc = orthogonality_check(u, r.hilbert);
        lower = lower && r.lower_ok;
        upper = upper && r.upper_ok;
        if (!oc.degenerate) orth = std::max(orth, oc.value);
        spread = std::max(spread, r.lp.multistart_spread);
        Json j{{"field", name}, {"eps", e}};
        j.update(report::to_json(r));
        j["orthogonality"] = oc.value;
        j["orthogonality_degenerate"] = oc.degenerate;
        o.doc.records.push_back(j);
    };
    run("bubble_0.3", 0.0, critical_bubble(grid, 0.3));
    for (double e : eps) {
        run("c_plus_eps_Z2", e, c + e * Z2);
        run("c_plus_eps_Z2_Z4", e, c + e * (Z2 + Z4));
        run("bubble_0.3_plus_eps_Z3", e, critical_bubble(grid, 0.3) + e * Z3);
    }
    o.doc.summary["K_cmp"] = constants(grid->params()).K_cmp;
    o.doc.summary["max_orthogonality"] = orth;
    o.doc.summary["max_multistart_spread"] = spread;
    o.doc.assertions.push_back(check_true("ratio_lower_bound", lower));
    o.doc.assertions.push_back(check_true("ratio_upper_bound", upper));
    o.doc.assertions.push_back(check_le("orthogonality", orth, 1e-6));
    o.doc.assertions.push_back(check_le("multistart_spread", spread, 1e-7));
    return o;
}

Outcome cmd_sobolev(const RunConfig& cfg, const GridPtr& grid) {
    const std::vector<double> eps = cfg.eps.empty() ? std::vector<double>{1e-2, 1e-3} : cfg.eps;
    const auto sv = sobolev_survey(grid, {0, 2, 3, 4}, eps);
    Outcome o;
    o.doc.meta = base_meta(cfg, Json::object());
    bool finite_pos = true;
    for (const auto& r : sv.records) {
        o.doc.records.push_back(report::to_json(r));
        o.plot.push_back({r.eps, r.q.value, "l=" + std::to_string(r.l)});
        finite_pos = finite_pos && std::isfinite(r.q.value) && r.q.value > 0.0;
    }
    o.doc.summary["empirical_min_quotient"] = num(sv.min_quotient);
    o.doc.summary["note"] = "empirical survey minimum; not a proven constant";
    o.doc.assertions.push_back(check_true("quotients_finite_positive", finite_pos));
    return o;
}

Outcome cmd_selftest(const RunConfig& cfg, const GridPtr& grid) {
    const Params& p = grid->params();
    Outcome o;
    oracles::OracleConfig oc;
    o.doc.meta = base_meta(cfg, Json{{"gamma_rel", oc.gamma_tol}, {"fd", oc.fd_tol}, {"direct_rel", 1e-4},
                                     {"holder_samples", oc.holder_samples}, {"vector_grid", oc.vector_grid}});
    auto rec = [&](const std::string& name, double value, double threshold, bool pass) {
        o.doc.records.push_back(Json{{"oracle", name}, {"value", num(value)}, {"threshold", num(threshold)}, {"pass", pass}});
    };

    std::vector<double> xs;
    for (int i = 1; i <= 2000; ++i) xs.push_back(0.1 * i);
    const auto gc = oracles::gamma_crosscheck(xs, [](double x) { return ln_gamma(x); });
    rec("gamma_crosscheck", gc.max_gap, oc.gamma_tol, gc.max_gap <= oc.gamma_tol);
    o.doc.assertions.push_back(check_le("gamma_crosscheck", gc.max_gap, oc.gamma_tol));

    const double beta = p.hls_power();
    const auto hs = oracles::holder_inequality_scan({beta}, oc.holder_samples, cfg.seed);
    rec("holder_scan_ratio_over_C", hs.worst_ratio, 1.0, hs.holds);
    o.doc.assertions.push_back(check_le("holder_scan", hs.worst_ratio, 1.0));

    const auto vs = oracles::vector_inequality_scan(p.sobolev_exponent(), oc.vector_grid);
    rec("vector_inequality_min_ratio", vs.min_ratio, vs.C_p, vs.holds);
    o.doc.assertions.push_back(check_true("vector_inequality", vs.holds));

    // direct kernel quadrature against the spectral operator
    double worst_direct = 0.0;
    const auto pts = staggered_points(*grid);
    auto compare = [&](const ZonalField& u) {
        const auto d = apply_P2s_direct(u, pts);
        const auto c = analyze(apply_P2s(u));
        double scale = 0.0, err = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double s = evaluate(c, p.n, pts[i]);
            scale = std::max(scale, std::abs(s));
            err = std::max(err, std::abs(d[i] - s));
        }
        worst_direct = std::max(worst_direct, err / scale);
    };
    for (int l = 0; l <= 8; ++l) compare(zonal_harmonic(grid, l));
    for (double z : {0.0, 0.5}) compare(critical_bubble(grid, z));
    rec("direct_vs_spectral_rel", worst_direct, 1e-4, worst_direct <= 1e-4);
    o.doc.assertions.push_back(check_le("direct_vs_spectral", worst_direct, 1e-4));

    // tangent field against finite differences
    const BubbleParams bp{constants(p).c_crit, 0.4};
    const auto tf = tangent_fields(grid, bp);
    double worst_fd = 0.0;
    for (std::size_t i = 0; i < grid->size(); i += 7) {
        const double t = grid->nodes()[i];
        const auto fd = oracles::fd_derivative(
            [&](double z) { return bubble_value(p, {bp.c, z}, BubbleKind::HLS, t); }, bp.zeta, {1e-2, 5e-3, 2.5e-3});
        worst_fd = std::max(worst_fd, std::abs(fd.value - tf.d_zeta[i]) / std::max(1.0, std::abs(tf.d_zeta[i])));
    }
    rec("tangent_fd", worst_fd, oc.fd_tol, worst_fd <= oc.fd_tol);
    o.doc.assertions.push_back(check_le("tangent_fd", worst_fd, oc.fd_tol));

    const auto gs = gap_bound_sweep(p, cfg.L, {0.9, 0.95, 1.0, 1.05, 1.1, 1.2});
    rec("gap_bound_worst_margin", gs.worst_margin, 0.0, gs.holds);
    o.doc.assertions.push_back(check_true("gap_bound", gs.holds));

    const auto cs = coercivity_scan(grid, {-0.8, -0.4, 0.0, 0.3, 0.6, 0.9});
    rec("coercivity_worst_ratio", cs.worst_ratio, 1.0, cs.holds);
    o.doc.assertions.push_back(check_ge("coercivity", cs.worst_ratio, 1.0));

    o.doc.summary["holder_seed"] = cfg.seed;
    o.doc.summary["holder_C_beta"] = oracles::holder_constant(beta);
    o.doc.summary["vector_C_p"] = vs.C_p;
    return o;
}

// ------------------------------------------------------------ output

bool write_text(const std::string& path, const std::function<void(std::ostream&)>& body) {
    if (path == "-") {
        body(std::cout);
        std::cout.flush();
        return static_cast<bool>(std::cout);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) return false;
    body(f);
    f.flush();
    return static_cast<bool>(f);
}

int emit(const RunConfig& cfg, const Outcome& o) {
    const bool ok = write_text(cfg.out, [&](std::ostream& os) {
        if (cfg.format == "csv")
            report::write_csv(o.doc.records, os);
        else
            report::write_json(o.doc, os);
    });
    if (!ok) {
        std::cerr << "hls_lab: cannot write " << cfg.out << '\n';
        return kExitIo;
    }
    if (!cfg.emit_plot.empty()) {
        const bool pok = write_text(cfg.emit_plot, [&](std::ostream& os) {
            os << "series,x,y\n";
            for (const auto& pt : o.plot)
                os << report::csv_cell(Json(pt.series)) << ',' << report::csv_cell(num(pt.x)) << ','
                   << report::csv_cell(num(pt.y)) << '\n';
        });
        if (!pok) {
            std::cerr << "hls_lab: cannot write " << cfg.emit_plot << '\n';
            return kExitIo;
        }
    }
    for (const auto& a : o.doc.assertions)
        if (!a.pass) std::cerr << "hls_lab: assertion failed: " << a.name << " (" << a.value << ' ' << a.relation << ' ' << a.threshold << ")\n";
    return o.doc.all_pass() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verification runs for HLS and fractional Sobolev stability on S^n"};
    app.require_subcommand(1);
    RunConfig cfg;

    using Handler = Outcome (*)(const RunConfig&, const GridPtr&);
    const std::vector<std::tuple<std::string, std::string, Handler>> commands{
        {"constants", "sharp constants and the multiplier table", cmd_constants},
        {"survey", "stability quotient survey", cmd_survey},
        {"expansion", "first-order expansion slopes", cmd_expansion},
        {"struwe", "Palais-Smale sequence and bubble extraction", cmd_struwe},
        {"dual", "HLS / Sobolev duality chain", cmd_dual},
        {"compare", "L^p vs H^{-s} projection comparison", cmd_compare},
        {"sobolev", "Sobolev-side quotient survey", cmd_sobolev},
        {"selftest", "oracle suites", cmd_selftest},
    };
    std::map<std::string, Handler> handlers;
    for (const auto& [name, help, h] : commands) {
        auto* sub = app.add_subcommand(name, help);
        handlers[name] = h;
        sub->add_option("--n", cfg.n, "sphere dimension")->capture_default_str();
        sub->add_option("--s", cfg.s, "fractional order, 0 < s < n/2")->capture_default_str();
        sub->add_option("--L", cfg.L, "spectral cutoff")->capture_default_str();
        sub->add_option("--m", cfg.m, "quadrature nodes (default 2L+16)");
        sub->add_option("--eps", cfg.eps, "epsilon values (comma separated)")->delimiter(',');
        sub->add_option("--out", cfg.out, "output path, - for stdout")->capture_default_str();
        sub->add_option("--format", cfg.format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}))
            ->capture_default_str();
        sub->add_option("--slack", cfg.slack_percent, "relative slack in percent, in (0, 20]")->capture_default_str();
        sub->add_option("--seed", cfg.seed, "seed for random scans")->capture_default_str();
        sub->add_option("--emit-plot", cfg.emit_plot, "write series,x,y plot data to this path");
        if (name == "struwe") sub->add_option("--kmax", cfg.k_max, "last sequence index")->capture_default_str();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitPass : kExitConfig;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    if (!(cfg.slack_percent > 0.0 && cfg.slack_percent <= 20.0)) {
        std::cerr << "hls_lab: --slack must lie in (0, 20]\n";
        return kExitConfig;
    }
    GridPtr grid;
    try {
        const Params p = Params::make(cfg.n, cfg.s);
        grid = build_grid(p, cfg.L, cfg.nodes());
        if (cfg.command == "struwe" && cfg.k_max < 3) throw ConfigError("--kmax must be >= 3");
        for (double e : cfg.eps)
            if (!(e > 0.0 && e < 1.0)) throw ConfigError("--eps values must lie in (0, 1)");
    } catch (const std::exception& e) {
        std::cerr << "hls_lab: invalid configuration: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        return emit(cfg, handlers.at(cfg.command)(cfg, grid));
    } catch (const PreconditionError& e) {
        std::cerr << "hls_lab: " << e.what() << '\n';
        return kExitConfig;
    }
}
