/**
 * @file sphere.hpp
 * @brief Zonal (axially symmetric) functions on S^n.
 *
 * A zonal function depends only on t = omega . e for a fixed pole e. It is
 * stored by its values at the nodes of a Gauss-Jacobi rule for the weight
 * (1 - t^2)^{(n-2)/2}; multiplying the rule weights by |S^{n-1}| gives the
 * surface measure of S^n restricted to zonal integrands.
 *
 * The spectral view uses the zonal harmonics Z_0..Z_L, normalized so that
 * the integral of Z_l^2 over S^n equals one. Z_l is a multiple of the
 * Gegenbauer polynomial C_l^{(n-1)/2}; it is evaluated through the
 * orthonormal three-term recurrence, which also covers n = 1.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hlslab/errors.hpp"
#include "hlslab/specialfuncs.hpp"

namespace hlslab {

/// Dimension n and fractional order s with 0 < s < n/2.
struct Params {
    int n = 3;
    double s = 1.0;

    static Params make(int n, double s) {
        if (n < 1) throw std::domain_error("Params: dimension n must be >= 1");
        if (!(s > 0.0) || !(2.0 * s < n))
            throw std::domain_error("Params: need 0 < s < n/2 (got n=" + std::to_string(n) +
                                    ", s=" + std::to_string(s) + ")");
        return Params{n, s};
    }

    double half_n() const noexcept { return 0.5 * n; }
    /// 2n/(n+2s): the HLS (L^p) exponent.
    double hls_exponent() const noexcept { return 2.0 * n / (n + 2.0 * s); }
    /// 2n/(n-2s): the Sobolev exponent, dual to hls_exponent().
    double sobolev_exponent() const noexcept { return 2.0 * n / (n - 2.0 * s); }
    /// (n-2s)/(n+2s): |u|^{-4s/(n+2s)} u = sign(u) |u|^this.
    double hls_power() const noexcept { return (n - 2.0 * s) / (n + 2.0 * s); }
    /// (n+2s)/(n-2s): |u|^{4s/(n-2s)} u = sign(u) |u|^this.
    double sobolev_power() const noexcept { return (n + 2.0 * s) / (n - 2.0 * s); }

    friend bool operator==(const Params&, const Params&) = default;
};

namespace detail {

/// |S^k| for k >= 0; |S^0| = 2 counts the two points of S^0.
inline double sphere_area_any(int k) {
    const double h = 0.5 * (k + 1);
    return 2.0 * std::exp(h * std::log(std::numbers::pi) - ln_gamma(h));
}

}  // namespace detail

/// |S^n| = 2 pi^{(n+1)/2} / Gamma((n+1)/2).
inline double sphere_area(int n) {
    if (n < 1) throw std::domain_error("sphere_area: n must be >= 1");
    return detail::sphere_area_any(n);
}

/// Orthonormal zonal harmonics Z_0(t)..Z_L(t) on S^n, written into out[0..L].
inline void zonal_harmonics(int n, int L, double t, std::span<double> out) {
    const double a = 0.5 * (n - 2);
    // monic recurrence coefficient beta_k of the symmetric Jacobi weight (1-t^2)^a
    auto beta = [a](int k) {
        if (k == 1) return 1.0 / (2.0 * a + 3.0);
        return k * (k + 2.0 * a) / ((2.0 * k + 2.0 * a + 1.0) * (2.0 * k + 2.0 * a - 1.0));
    };
    out[0] = 1.0 / std::sqrt(sphere_area(n));
    if (L == 0) return;
    double sb_prev = std::sqrt(beta(1));
    out[1] = t * out[0] / sb_prev;
    for (int k = 1; k < L; ++k) {
        const double sb_next = std::sqrt(beta(k + 1));
        out[k + 1] = (t * out[k] - sb_prev * out[k - 1]) / sb_next;
        sb_prev = sb_next;
    }
}

/// Quadrature grid for zonal functions with spectral cutoff L.
class ZonalGrid {
public:
    ZonalGrid(Params params, int cutoff, QuadratureRule rule)
        : params_(params), cutoff_(cutoff), rule_(std::move(rule)) {
        const double shell = detail::sphere_area_any(params_.n - 1);
        measure_.resize(rule_.size());
        for (std::size_t i = 0; i < rule_.size(); ++i) measure_[i] = rule_.weights[i] * shell;
        const std::size_t m = rule_.size();
        basis_.assign(static_cast<std::size_t>(cutoff_ + 1) * m, 0.0);
        std::vector<double> z(static_cast<std::size_t>(cutoff_) + 1);
        for (std::size_t i = 0; i < m; ++i) {
            zonal_harmonics(params_.n, cutoff_, rule_.nodes[i], z);
            for (int l = 0; l <= cutoff_; ++l) basis_[static_cast<std::size_t>(l) * m + i] = z[l];
        }
    }

    const Params& params() const noexcept { return params_; }
    int cutoff() const noexcept { return cutoff_; }
    std::size_t size() const noexcept { return rule_.size(); }
    const QuadratureRule& rule() const noexcept { return rule_; }
    std::span<const double> nodes() const noexcept { return rule_.nodes; }
    std::span<const double> measure_weights() const noexcept { return measure_; }
    double area() const { return sphere_area(params_.n); }

    /// Z_l at node i.
    double basis(int l, std::size_t i) const noexcept {
        return basis_[static_cast<std::size_t>(l) * rule_.size() + i];
    }

    template <class F>
    double integrate(F&& g) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < measure_.size(); ++i) acc += measure_[i] * g(rule_.nodes[i]);
        return acc;
    }

private:
    Params params_;
    int cutoff_;
    QuadratureRule rule_;
    std::vector<double> measure_;
    std::vector<double> basis_;  // (L+1) x m, row-major by degree
};

using GridPtr = std::shared_ptr<const ZonalGrid>;

/// Default node count for a cutoff L.
constexpr int default_nodes(int L) noexcept { return 2 * L + 16; }

inline GridPtr build_grid(Params params, int L, int m) {
    if (L < 2) throw ConfigError("build_grid: spectral cutoff L must be >= 2");
    if (m < 2 * L + 4) throw ConfigError("build_grid: need m >= 2L + 4 nodes");
    const double a = 0.5 * (params.n - 2);
    return std::make_shared<const ZonalGrid>(params, L, gauss_jacobi(static_cast<unsigned>(m), a, a));
}

inline GridPtr build_grid(Params params, int L) { return build_grid(params, L, default_nodes(L)); }

/// Coefficients a_0..a_L in the orthonormal zonal basis.
struct SpectralCoeffs {
    std::vector<double> a;

    int cutoff() const noexcept { return static_cast<int>(a.size()) - 1; }
    double operator[](std::size_t l) const noexcept { return a[l]; }
};

/// Zonal function held by its node values on a shared grid.
class ZonalField {
public:
    ZonalField(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
        if (!grid_) throw ConfigError("ZonalField: null grid");
        if (values_.size() != grid_->size()) throw ConfigError("ZonalField: value count does not match grid");
    }

    static ZonalField zero(GridPtr grid) {
        const std::size_t m = grid->size();
        return ZonalField(std::move(grid), std::vector<double>(m, 0.0));
    }

    template <class F>
    static ZonalField from_function(GridPtr grid, F&& f) {
        std::vector<double> v(grid->size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->nodes()[i]);
        return ZonalField(std::move(grid), std::move(v));
    }

    const ZonalGrid& grid() const noexcept { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Pointwise map v -> f(v).
    template <class F>
    ZonalField map(F&& f) const {
        std::vector<double> v(values_.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(values_[i]);
        return ZonalField(grid_, std::move(v));
    }

    ZonalField& operator+=(const ZonalField& o) {
        check_same(o);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
        return *this;
    }
    ZonalField& operator-=(const ZonalField& o) {
        check_same(o);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
        return *this;
    }
    ZonalField& operator*=(double c) {
        for (double& v : values_) v *= c;
        return *this;
    }
    friend ZonalField operator+(ZonalField a, const ZonalField& b) { return a += b; }
    friend ZonalField operator-(ZonalField a, const ZonalField& b) { return a -= b; }
    friend ZonalField operator*(double c, ZonalField a) { return a *= c; }
    friend ZonalField operator*(ZonalField a, double c) { return a *= c; }
    ZonalField operator-() const { return map([](double v) { return -v; }); }

    ZonalField plus_constant(double c) const {
        return map([c](double v) { return v + c; });
    }

    void check_same(const ZonalField& o) const {
        if (grid_ != o.grid_) throw ConfigError("ZonalField: fields live on different grids");
    }

private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// Orthonormal projection onto Z_0..Z_L.
inline SpectralCoeffs analyze(const ZonalField& u) {
    const ZonalGrid& g = u.grid();
    const auto w = g.measure_weights();
    SpectralCoeffs c;
    c.a.assign(static_cast<std::size_t>(g.cutoff()) + 1, 0.0);
    for (int l = 0; l <= g.cutoff(); ++l) {
        double acc = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) acc += w[i] * u[i] * g.basis(l, i);
        c.a[static_cast<std::size_t>(l)] = acc;
    }
    return c;
}

inline ZonalField synthesize(const SpectralCoeffs& c, const GridPtr& grid) {
    if (c.cutoff() != grid->cutoff()) throw ConfigError("synthesize: cutoff mismatch between coefficients and grid");
    std::vector<double> v(grid->size(), 0.0);
    for (int l = 0; l <= grid->cutoff(); ++l) {
        const double al = c.a[static_cast<std::size_t>(l)];
        if (al == 0.0) continue;
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += al * grid->basis(l, i);
    }
    return ZonalField(grid, std::move(v));
}

/// Value of the band-limited expansion sum_l a_l Z_l on S^n at an arbitrary t.
inline double evaluate(const SpectralCoeffs& c, int n, double t) {
    const double a = 0.5 * (n - 2);
    auto beta = [a](int k) {
        if (k == 1) return 1.0 / (2.0 * a + 3.0);
        return k * (k + 2.0 * a) / ((2.0 * k + 2.0 * a + 1.0) * (2.0 * k + 2.0 * a - 1.0));
    };
    const int L = c.cutoff();
    double prev = 1.0 / std::sqrt(sphere_area(n));
    double acc = c.a[0] * prev;
    if (L == 0) return acc;
    double sb_prev = std::sqrt(beta(1));
    double cur = t * prev / sb_prev;
    acc += c.a[1] * cur;
    for (int k = 1; k < L; ++k) {
        const double sb_next = std::sqrt(beta(k + 1));
        const double next = (t * cur - sb_prev * prev) / sb_next;
        prev = cur;
        cur = next;
        sb_prev = sb_next;
        acc += c.a[static_cast<std::size_t>(k) + 1] * cur;
    }
    return acc;
}

/// The normalized degree-l zonal harmonic sampled on a grid.
inline ZonalField zonal_harmonic(const GridPtr& grid, int l) {
    if (l < 0 || l > grid->cutoff()) throw ConfigError("zonal_harmonic: degree outside [0, L]");
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = grid->basis(l, i);
    return ZonalField(grid, std::move(v));
}

inline double integrate(const ZonalField& u) {
    const auto w = u.grid().measure_weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += w[i] * u[i];
    return acc;
}

/// (int |u|^p dsigma)^{1/p}.
inline double lp_norm(const ZonalField& u, double p) {
    if (!(p >= 1.0)) throw std::domain_error("lp_norm: p must be >= 1");
    const auto w = u.grid().measure_weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += w[i] * std::pow(std::abs(u[i]), p);
    return std::pow(acc, 1.0 / p);
}

/// int |u|^p dsigma without the final root.
inline double lp_energy(const ZonalField& u, double p) {
    const auto w = u.grid().measure_weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += w[i] * std::pow(std::abs(u[i]), p);
    return acc;
}

inline double inner(const ZonalField& u, const ZonalField& v) {
    u.check_same(v);
    const auto w = u.grid().measure_weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += w[i] * u[i] * v[i];
    return acc;
}

}  // namespace hlslab
