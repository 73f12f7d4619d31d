/**
 * @file report.hpp
 * @brief JSON and CSV emission for run reports.
 *
 * A report document is {meta, records, summary}. Keys keep insertion
 * order, so identical inputs give byte-identical output. Non-finite
 * numbers are written as null; fields that can legitimately be infinite
 * carry a companion boolean flag.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hlslab/bubbles.hpp"
#include "hlslab/distance.hpp"
#include "hlslab/stability.hpp"

namespace hlslab::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

/// Finite doubles as numbers, everything else as null.
inline Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

/// One named pass/fail check with the value and threshold it was decided on.
struct Assertion {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation;  ///< "<=", ">=" or "=="
    bool pass = true;
};

inline Assertion check_le(std::string name, double value, double threshold) {
    return {std::move(name), value, threshold, "<=", value <= threshold};
}
inline Assertion check_ge(std::string name, double value, double threshold) {
    return {std::move(name), value, threshold, ">=", value >= threshold};
}
inline Assertion check_true(std::string name, bool ok) { return {std::move(name), ok ? 1.0 : 0.0, 1.0, "==", ok}; }

inline Json to_json(const Assertion& a) {
    return Json{{"name", a.name}, {"value", num(a.value)}, {"relation", a.relation},
                {"threshold", num(a.threshold)}, {"pass", a.pass}};
}

inline Json to_json(const Constants& k) {
    return Json{{"S", k.S},           {"c_crit", k.c_crit}, {"d_crit", k.d_crit}, {"C_loc", k.C_loc},
                {"C_case1", k.C_case1}, {"C_case2", k.C_case2}, {"K_cmp", k.K_cmp},   {"C_ps", k.C_ps},
                {"lambda0", k.lambda0}, {"energy", k.energy}};
}

inline Json to_json(const ProjectionResult& r) {
    return Json{{"c", num(r.bp.c)},
                {"zeta", num(r.bp.zeta)},
                {"dist", num(r.dist)},
                {"converged", r.converged},
                {"iterations", r.iterations},
                {"multistart_spread", num(r.multistart_spread)},
                {"boundary_hit", r.boundary_hit},
                {"stationarity", num(r.stationarity)}};
}

inline Json to_json(const QuotientRecord& r) {
    return Json{{"l", r.l},
                {"eps", r.eps},
                {"beta", r.beta},
                {"zeta", r.zeta},
                {"branch", to_string(r.branch)},
                {"residual_norm", num(r.q.residual_norm)},
                {"d_crit_manifold", num(r.q.d_crit)},
                {"d_M", num(r.q.d_M)},
                {"quotient", num(r.q.value)},
                {"quotient_infinite", std::isinf(r.q.value)},
                {"energy", num(r.q.energy)},
                {"in_window", r.q.in_window},
                {"conformal_drift", num(r.conformal_drift)},
                {"projection_converged", r.q.projection.converged}};
}

inline Json to_json(const BranchSummary& s, const QuotientReport& rep) {
    Json j{{"count", s.count}, {"min_quotient", num(s.min_quotient)}, {"margin", num(s.margin)}, {"pass", s.pass}};
    if (s.count > 0) {
        const auto& r = rep.records[s.argmin];
        j["argmin"] = Json{{"l", r.l}, {"eps", r.eps}, {"beta", r.beta}, {"zeta", r.zeta}};
    }
    return j;
}

inline Json to_json(const ExpansionReport& r) {
    Json ladder = Json::array(), slopes = Json::array();
    for (double e : r.eps) ladder.push_back(e);
    for (double s : r.central_slopes) slopes.push_back(num(s));
    return Json{{"l", r.l},
                {"beta", r.beta},
                {"slope", num(r.slope)},
                {"analytic", num(r.analytic)},
                {"rel_error", num(r.rel_error)},
                {"slope_error_estimate", num(r.slope_error_estimate)},
                {"g0", num(r.g0)},
                {"gap_lower_bound", num(r.gap_lower_bound)},
                {"gap_bound_holds", r.gap_bound_holds},
                {"eps_ladder", ladder},
                {"central_slopes", slopes}};
}

inline Json to_json(const StruweRecord& r) {
    return Json{{"k", r.k},
                {"residual_norm", num(r.residual_norm)},
                {"d_lp", num(r.d_lp)},
                {"ratio", num(r.ratio)},
                {"ratio_infinite", std::isinf(r.ratio)},
                {"pairing", num(r.pairing)},
                {"zeta", num(r.projection.bp.zeta)},
                {"converged", r.converged}};
}

inline Json to_json(const DualityReport& r) {
    return Json{{"pointwise_error", num(r.pointwise_error)},
                {"identity_error", num(r.identity_error)},
                {"truncation_error", num(r.truncation_error)},
                {"truncation_flagged", r.truncation_flagged},
                {"lhs", num(r.lhs)},
                {"rhs_forced", num(r.rhs_forced)},
                {"rhs_displayed", num(r.rhs_displayed)},
                {"forced_holds", r.forced_holds},
                {"displayed_holds", r.displayed_holds}};
}

inline Json to_json(const ComparisonResult& r) {
    return Json{{"d_lp", num(r.d_lp)},
                {"lp_dist_to_P_minimizer", num(r.lp_dist_to_P_minimizer)},
                {"ratio", num(r.ratio)},
                {"K_cmp", num(r.K_cmp)},
                {"lower_ok", r.lower_ok},
                {"upper_ok", r.upper_ok},
                {"in_regime", r.in_regime},
                {"degenerate", r.degenerate},
                {"lp_zeta", num(r.lp.bp.zeta)},
                {"hilbert_zeta", num(r.hilbert.bp.zeta)},
                {"multistart_spread", num(r.lp.multistart_spread)}};
}

inline Json to_json(const SobolevRecord& r) {
    return Json{{"l", r.l},
                {"eps", r.eps},
                {"residual_norm", num(r.q.residual_norm)},
                {"distance", num(r.q.distance)},
                {"quotient", num(r.q.value)},
                {"quotient_infinite", std::isinf(r.q.value)},
                {"energy", num(r.q.energy)},
                {"in_window", r.q.in_window}};
}

/// Report document under construction.
struct Document {
    Json meta = Json::object();
    Json records = Json::array();
    Json summary = Json::object();
    std::vector<Assertion> assertions;

    bool all_pass() const {
        for (const auto& a : assertions)
            if (!a.pass) return false;
        return true;
    }

    Json to_json() const {
        Json s = summary;
        Json arr = Json::array();
        for (const auto& a : assertions) arr.push_back(report::to_json(a));
        s["assertions"] = arr;
        s["pass"] = all_pass();
        return Json{{"meta", meta}, {"records", records}, {"summary", s}};
    }
};

inline void write_json(const Document& d, std::ostream& os) { os << d.to_json().dump(2) << '\n'; }

inline std::string csv_cell(const Json& v) {
    if (v.is_null()) return "";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) {
        std::ostringstream ss;
        ss << std::setprecision(17) << v.get<double>();
        return ss.str();
    }
    if (v.is_number()) return v.dump();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    return csv_cell(Json(v.dump()));
}

/// Records only, one row each; columns are the union of keys in first-seen order.
inline void write_csv(const Json& records, std::ostream& os) {
    std::vector<std::string> cols;
    for (const auto& r : records)
        for (const auto& [k, v] : r.items())
            if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    for (const auto& r : records) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) os << ',';
            if (r.contains(cols[i])) os << csv_cell(r[cols[i]]);
        }
        os << '\n';
    }
}

}  // namespace hlslab::report
