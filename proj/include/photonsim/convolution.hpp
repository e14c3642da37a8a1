// convolution.hpp - the nonlinear convolution shared by T_LL, T_LR and T_RR
//
//     I(w1, w2) = int dnu  xiL[i nu] xiR[i(W - nu)] g(w1, w2, nu, W - nu),   W = w1 + w2
//
// With nu2 = W - nu every factor of g except the two "incoming" poles is
// independent of nu, so g = F(w1, w2) * h(nu; W) with
//
//     h(nu; W) = 1 / ((nu + wc - 2ik)(W - nu + wc - 2ik))
//
// and I = F(w1, w2) * J(W), J(W) = int xiL xiR h. convolve_g integrates g
// literally; convolve_g_factored uses the split and is what grid fills use,
// since J needs only one integral per distinct W.
//
// Lorentzian integrands decay as 1/nu^4. The Auto window starts from
// half-width max(50 gamma, 50 kappa, 10 |wc|) around the pole centres and is
// widened until the analytic tail bound drops below a tenth of the
// requested tolerance. Sampled pulses vanish outside their support, so the
// window is the support intersection and the tail is zero.

#pragma once

#include "photonsim/kernels.hpp"
#include "photonsim/model.hpp"
#include "photonsim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace photonsim {

using KernelFn = cplx (*)(double omega1, double omega2, double nu1, double nu2, const NetworkParams& params);

// nu-independent part of g on the line nu1 + nu2 = w1 + w2.
inline cplx convolution_factor(double omega1, double omega2, const NetworkParams& params) noexcept {
    const double k = params.kappa();
    if (k == 0.0) return {0.0, 0.0};
    const double wc = params.omega_c();
    const double s = omega1 + omega2 + 2.0 * wc;
    const cplx ratio = cplx(s, -4.0 * k) / cplx(s, -2.0 * k);
    const cplx out = s / (cplx(omega1 + wc, 2.0 * k) * cplx(omega2 + wc, -2.0 * k));
    return cplx(0.0, -k * std::sqrt(k) / pi) * ratio * out;
}

// Upper bound of |F| that holds for any kernel sharing g's magnitude.
inline double convolution_factor_bound(double omega1, double omega2, const NetworkParams& params) noexcept {
    return std::abs(convolution_factor(omega1, omega2, params));
}

struct ConvolutionWindow {
    double lo = 0.0;
    double hi = 0.0;
    double halfwidth = 0.0;
    bool empty = false;
    bool lorentzian_tails = false;
    std::vector<double> breakpoints;
    // Tail of int |xiL xiR h| outside [lo, hi] per unit |F|.
    double tail_bound = 0.0;
};

namespace detail {

inline double lorentzian_tail_coefficient(const TwoPhotonInput& input) {
    const double gl = input.left().as_lorentzian().gamma;
    const double gr = input.right().as_lorentzian().gamma;
    return std::sqrt(gl * gr) / (2.0 * pi);
}

// Every factor of |xiL(nu) xiR(W-nu) h(nu)| is bounded by 1/|nu - c| for one
// of the four centres c, so beyond a distance H from all of them the
// integrand is below C/(x + H)^4 and each side contributes C/(3 H^3).
inline double lorentzian_tail(const TwoPhotonInput& input, double halfwidth) {
    return 2.0 * lorentzian_tail_coefficient(input) / (3.0 * halfwidth * halfwidth * halfwidth);
}

inline void add_feature_cuts(std::vector<double>& cuts, double center, double width) {
    cuts.insert(cuts.end(), {center - width, center, center + width});
}

}  // namespace detail

inline ConvolutionWindow convolution_window(double omega_sum, const TwoPhotonInput& input,
                                            const NetworkParams& params, const QuadConfig& cfg) {
    const PulseSpec& pl = input.left();
    const PulseSpec& pr = input.right();
    const double wc = params.omega_c();
    const double k = params.kappa();
    ConvolutionWindow win;

    if (pl.is_sampled() || pr.is_sampled()) {
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        if (pl.is_sampled()) {
            lo = std::max(lo, pl.as_sampled().support_min());
            hi = std::min(hi, pl.as_sampled().support_max());
            for (double x : pl.as_sampled().nodes()) win.breakpoints.push_back(x);
        }
        if (pr.is_sampled()) {
            lo = std::max(lo, omega_sum - pr.as_sampled().support_max());
            hi = std::min(hi, omega_sum - pr.as_sampled().support_min());
            for (double x : pr.as_sampled().nodes()) win.breakpoints.push_back(omega_sum - x);
        }
        detail::add_feature_cuts(win.breakpoints, -wc, 2.0 * k);
        detail::add_feature_cuts(win.breakpoints, omega_sum + wc, 2.0 * k);
        if (pl.is_lorentzian()) {
            const auto& l = pl.as_lorentzian();
            detail::add_feature_cuts(win.breakpoints, -l.omega_o, 0.5 * l.gamma);
        }
        if (pr.is_lorentzian()) {
            const auto& l = pr.as_lorentzian();
            detail::add_feature_cuts(win.breakpoints, omega_sum + l.omega_o, 0.5 * l.gamma);
        }
        win.lo = lo;
        win.hi = hi;
        win.empty = !(hi > lo);
        win.halfwidth = 0.5 * (hi - lo);
        return win;
    }

    const auto& l = pl.as_lorentzian();
    const auto& r = pr.as_lorentzian();
    const double centers[4] = {-l.omega_o, omega_sum + r.omega_o, -wc, omega_sum + wc};
    const double cmin = *std::min_element(std::begin(centers), std::end(centers));
    const double cmax = *std::max_element(std::begin(centers), std::end(centers));
    const double halfwidth = cfg.window_halfwidth.value_or(
        std::max({50.0 * std::max(l.gamma, r.gamma), 50.0 * k, 10.0 * std::abs(wc)}));
    win.lo = cmin - halfwidth;
    win.hi = cmax + halfwidth;
    win.halfwidth = halfwidth;
    win.lorentzian_tails = true;
    win.tail_bound = detail::lorentzian_tail(input, halfwidth);
    detail::add_feature_cuts(win.breakpoints, centers[0], 0.5 * l.gamma);
    detail::add_feature_cuts(win.breakpoints, centers[1], 0.5 * r.gamma);
    detail::add_feature_cuts(win.breakpoints, centers[2], 2.0 * k);
    detail::add_feature_cuts(win.breakpoints, centers[3], 2.0 * k);
    return win;
}

namespace detail {

// Integrates `integrand` over the window; Auto windows grow until the tail
// (scaled by factor_bound) is below a tenth of the target.
template <class F>
QuadResult integrate_over_window(F&& integrand, ConvolutionWindow win, double factor_bound,
                                 const QuadConfig& cfg, const TwoPhotonInput& input) {
    if (win.empty) return {};
    QuadResult res = integrate_line(integrand, win.lo, win.hi, cfg, win.breakpoints);
    if (!win.lorentzian_tails) return res;

    double tail = factor_bound * win.tail_bound;
    if (!cfg.window_halfwidth) {
        for (int grow = 0; grow < 40 && tail > 0.1 * cfg.target(res.value); ++grow) {
            const double needed = std::cbrt(2.0 * factor_bound * lorentzian_tail_coefficient(input) /
                                            (3.0 * 0.1 * cfg.target(res.value)));
            const double extra = std::max(needed, 2.0 * win.halfwidth) - win.halfwidth;
            QuadConfig strip_cfg = cfg;
            strip_cfg.abs_tol = std::max(cfg.abs_tol, 0.05 * cfg.target(res.value));
            const QuadResult left = integrate_line(integrand, win.lo - extra, win.lo, strip_cfg);
            const QuadResult right = integrate_line(integrand, win.hi, win.hi + extra, strip_cfg);
            res.value += left.value + right.value;
            res.abs_error_estimate += left.abs_error_estimate + right.abs_error_estimate;
            res.evaluations += left.evaluations + right.evaluations;
            win.lo -= extra;
            win.hi += extra;
            win.halfwidth += extra;
            tail = factor_bound * lorentzian_tail(input, win.halfwidth);
        }
    }
    res.abs_error_estimate += tail;
    return res;
}

}  // namespace detail

// J(W) = int xiL[i nu] xiR[i(W - nu)] / ((nu + wc - 2ik)(W - nu + wc - 2ik)) dnu.
// Requires kappa > 0 (the integrand has real-axis poles at kappa = 0).
inline QuadResult reduced_convolution(double omega_sum, const TwoPhotonInput& input,
                                      const NetworkParams& params, const QuadConfig& cfg) {
    if (params.kappa() == 0.0) {
        throw ValidationError("reduced_convolution: kappa must be > 0");
    }
    const double wc = params.omega_c();
    const double k = params.kappa();
    auto integrand = [&](double nu) -> cplx {
        const cplx den = cplx(nu + wc, -2.0 * k) * cplx(omega_sum - nu + wc, -2.0 * k);
        return pulse_amplitude(input.left(), nu) * pulse_amplitude(input.right(), omega_sum - nu) / den;
    };
    return detail::integrate_over_window(integrand, convolution_window(omega_sum, input, params, cfg), 1.0,
                                         cfg, input);
}

// The bare convolution integral, without the channel prefactor
// 2 sqrt(k) (w1 + wc + 2ik)/(w1 + wc - 2ik). `kernel` replaces g_kernel when
// given (fault injection in the verification suite).
inline QuadResult convolve_g(double omega1, double omega2, const TwoPhotonInput& input,
                             const NetworkParams& params, const QuadConfig& cfg, KernelFn kernel = nullptr) {
    cfg.validate();
    if (params.kappa() == 0.0) return {};
    const KernelFn g = kernel ? kernel : &g_kernel;
    const double omega_sum = omega1 + omega2;
    auto integrand = [&](double nu) -> cplx {
        const double nu2 = omega_sum - nu;
        return pulse_amplitude(input.left(), nu) * pulse_amplitude(input.right(), nu2) *
               g(omega1, omega2, nu, nu2, params);
    };
    return detail::integrate_over_window(integrand, convolution_window(omega_sum, input, params, cfg),
                                         convolution_factor_bound(omega1, omega2, params), cfg, input);
}

inline QuadResult convolve_g_factored(double omega1, double omega2, const TwoPhotonInput& input,
                                      const NetworkParams& params, const QuadConfig& cfg) {
    cfg.validate();
    if (params.kappa() == 0.0) return {};
    const cplx factor = convolution_factor(omega1, omega2, params);
    QuadResult j = reduced_convolution(omega1 + omega2, input, params, cfg);
    return {factor * j.value, std::abs(factor) * j.abs_error_estimate, j.evaluations};
}

}  // namespace photonsim
