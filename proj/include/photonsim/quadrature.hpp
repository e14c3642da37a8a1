// quadrature.hpp - complex-valued integration on lines and tensor grids
//
// integrate_line is a globally adaptive Gauss-Kronrod (G7/K15) scheme with
// QUADPACK-style error estimates: the worst subinterval is bisected until
// the summed estimate is <= max(abs_tol, rel_tol * |value|).

#pragma once

#include "photonsim/errors.hpp"
#include "photonsim/model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace photonsim {

struct QuadResult {
    cplx value{0.0, 0.0};
    double abs_error_estimate = 0.0;
    long evaluations = 0;
};

struct QuadConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
    std::optional<double> window_halfwidth;  // empty = Auto

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
            throw ValidationError("QuadConfig: tolerances must be > 0");
        }
        if (max_subdivisions < 1) {
            throw ValidationError("QuadConfig: max_subdivisions must be >= 1");
        }
        if (window_halfwidth && !(*window_halfwidth > 0.0 && std::isfinite(*window_halfwidth))) {
            throw ValidationError("QuadConfig: window_halfwidth must be finite and > 0");
        }
    }

    double target(cplx value) const noexcept { return std::max(abs_tol, rel_tol * std::abs(value)); }
};

class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, QuadResult partial) : Error(what), partial_(partial) {}
    const QuadResult& partial() const noexcept { return partial_; }

private:
    QuadResult partial_;
};

namespace detail {

inline constexpr std::array<double, 8> kronrod_nodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for kronrod_nodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> gauss_weights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    cplx value;
    double error;
    bool operator<(const Segment& o) const noexcept { return error < o.error; }
};

template <class F>
Segment gauss_kronrod_15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<cplx, 15> fv;
    fv[7] = f(center);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kronrod_nodes[j];
        fv[j] = f(center - dx);
        fv[14 - j] = f(center + dx);
    }
    cplx resk = fv[7] * kronrod_weights[7];
    cplx resg = fv[7] * gauss_weights[3];
    double resabs = std::abs(fv[7]) * kronrod_weights[7];
    for (int j = 0; j < 7; ++j) {
        const cplx pair = fv[j] + fv[14 - j];
        resk += kronrod_weights[j] * pair;
        resabs += kronrod_weights[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
        if (j % 2 == 1) resg += gauss_weights[j / 2] * pair;
    }
    const cplx mean = 0.5 * resk;
    double resasc = kronrod_weights[7] * std::abs(fv[7] - mean);
    for (int j = 0; j < 7; ++j) {
        resasc += kronrod_weights[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
    }
    const double h = std::abs(half);
    resasc *= h;
    resabs *= h;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(50.0 * eps * resabs, err);
    }
    return {a, b, resk * half, err};
}

}  // namespace detail

// Adaptive integral of f over [a, b]. `breakpoints` seed the initial
// partition (points outside (a, b) are ignored); max_subdivisions bounds the
// number of bisections beyond that partition.
template <class F>
QuadResult integrate_line(F&& f, double a, double b, const QuadConfig& cfg,
                          std::span<const double> breakpoints = {}) {
    cfg.validate();
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw ValidationError("integrate_line: need finite a < b");
    }
    std::vector<double> cuts{a};
    for (double p : breakpoints) {
        if (p > a && p < b) cuts.push_back(p);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<detail::Segment> heap;
    heap.reserve(cuts.size() + 2 * static_cast<std::size_t>(cfg.max_subdivisions));
    long evaluations = 0;
    for (std::size_t k = 1; k < cuts.size(); ++k) {
        heap.push_back(detail::gauss_kronrod_15(f, cuts[k - 1], cuts[k]));
        evaluations += 15;
    }
    std::make_heap(heap.begin(), heap.end());

    for (int step = 0;; ++step) {
        cplx value{0.0, 0.0};
        double error = 0.0;
        for (const auto& s : heap) {
            value += s.value;
            error += s.error;
        }
        if (error <= cfg.target(value)) {
            return {value, error, evaluations};
        }
        if (step >= cfg.max_subdivisions) {
            throw NoConvergence("integrate_line: no convergence after " + std::to_string(step) +
                                    " subdivisions (error estimate " + std::to_string(error) + ")",
                                {value, error, evaluations});
        }
        std::pop_heap(heap.begin(), heap.end());
        const detail::Segment worst = heap.back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw NoConvergence("integrate_line: subinterval cannot be bisected further",
                                {value, error, evaluations});
        }
        heap.back() = detail::gauss_kronrod_15(f, worst.a, mid);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(detail::gauss_kronrod_15(f, mid, worst.b));
        std::push_heap(heap.begin(), heap.end());
        evaluations += 30;
    }
}

// Integral over [origin, inf) (direction > 0) or (-inf, origin] (direction
// < 0) through nu = origin +- scale * t/(1-t). f must decay at least as
// 1/nu^2.
template <class F>
QuadResult integrate_half_line(F&& f, double origin, int direction, double scale, const QuadConfig& cfg) {
    const double sign = direction > 0 ? 1.0 : -1.0;
    auto mapped = [&](double t) -> cplx {
        const double u = 1.0 - t;
        const double nu = origin + sign * scale * t / u;
        if (!std::isfinite(nu)) return {0.0, 0.0};
        return f(nu) * (scale / (u * u));
    };
    return integrate_line(mapped, 0.0, 1.0, cfg);
}

// Integral over the whole real line. Features place breakpoints at
// center and center +- width; beyond ten widths of every feature the two
// half-lines are mapped to finite intervals.
template <class F>
QuadResult integrate_real_line(F&& f, std::span<const Feature> features, const QuadConfig& cfg) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double scale = 0.0;
    std::vector<double> cuts;
    for (const auto& ft : features) {
        const double w = std::max(ft.width, 1e-300);
        lo = std::min(lo, ft.center - 10.0 * w);
        hi = std::max(hi, ft.center + 10.0 * w);
        scale = std::max(scale, w);
        cuts.insert(cuts.end(), {ft.center - w, ft.center, ft.center + w});
    }
    if (features.empty()) {
        lo = -1.0;
        hi = 1.0;
        scale = 1.0;
    }
    QuadResult mid = integrate_line(f, lo, hi, cfg, cuts);
    QuadConfig tail_cfg = cfg;
    tail_cfg.abs_tol = std::max(cfg.abs_tol, 0.1 * cfg.rel_tol * std::abs(mid.value));
    const QuadResult left = integrate_half_line(f, lo, -1, scale, tail_cfg);
    const QuadResult right = integrate_half_line(f, hi, +1, scale, tail_cfg);
    return {mid.value + left.value + right.value,
            mid.abs_error_estimate + left.abs_error_estimate + right.abs_error_estimate,
            mid.evaluations + left.evaluations + right.evaluations};
}

// --------------------------------------------------------------------------
// Uniform-grid rules
// --------------------------------------------------------------------------

inline cplx trapezoid(std::span<const cplx> values, const FrequencyGrid& grid) {
    if (values.size() != grid.size()) {
        throw ShapeMismatch("trapezoid: " + std::to_string(values.size()) + " values for a grid of " +
                            std::to_string(grid.size()));
    }
    cplx sum{0.0, 0.0};
    for (std::size_t k = 0; k < values.size(); ++k) sum += grid.weight(k) * values[k];
    return sum;
}

inline cplx integrate_grid_2d(const Eigen::MatrixXcd& values, const FrequencyGrid& grid1,
                              const FrequencyGrid& grid2) {
    if (static_cast<std::size_t>(values.rows()) != grid1.size() ||
        static_cast<std::size_t>(values.cols()) != grid2.size()) {
        throw ShapeMismatch("integrate_grid_2d: matrix is " + std::to_string(values.rows()) + "x" +
                            std::to_string(values.cols()) + ", grids are " + std::to_string(grid1.size()) +
                            "x" + std::to_string(grid2.size()));
    }
    cplx sum{0.0, 0.0};
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        cplx row{0.0, 0.0};
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            row += grid2.weight(static_cast<std::size_t>(j)) * values(i, j);
        }
        sum += grid1.weight(static_cast<std::size_t>(i)) * row;
    }
    return sum;
}

}  // namespace photonsim
