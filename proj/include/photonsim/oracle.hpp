// oracle.hpp - closed-form convolution for Lorentzian inputs by residues
//
// With W = w1 + w2 the convolution integrand is, as a function of nu,
//
//     -cL cR F / ((nu - pL)(nu - pR)(nu - pa)(nu - pb)),   cX = sqrt(gX / 2 pi)
//
//     pL = -wo - i gL/2        (xiL,            lower half-plane)
//     pR =  W + wo + i gR/2    (xiR(W - nu),    upper)
//     pa = -wc + 2ik           (kernel, nu1,    upper)
//     pb =  W + wc - 2ik       (kernel, nu2,    lower)
//
// and F is the nu-independent part of g. The integrand decays as |nu|^-4,
// so the integral is 2 pi i times the upper residues, or -2 pi i times the
// lower ones. When two poles on the closing side merge (gR = 4k with
// W = -wc - wo on the upper side) the double-pole residue is used.
//
// Nothing here calls the pulse, kernel or quadrature code; it is the
// independent reference for convolve_g.

#pragma once

#include "photonsim/convolution.hpp"
#include "photonsim/errors.hpp"
#include "photonsim/model.hpp"
#include "photonsim/parallel.hpp"
#include "photonsim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace photonsim::oracle {

enum class PoleOrigin { XiL, XiR, GNu1, GNu2 };
enum class Closure { Upper, Lower };

struct Pole {
    cplx location;
    int order;
    PoleOrigin origin;
};

struct PoleSet {
    std::vector<Pole> poles;  // after merging
    bool degenerate = false;
};

inline constexpr double default_merge_tol = 1e-9;

// Raw locations in origin order XiL, XiR, GNu1, GNu2.
inline std::array<cplx, 4> raw_poles(double omega_sum, double gamma_l, double gamma_r, double omega_o,
                                     const NetworkParams& params) {
    const double k = params.kappa();
    const double wc = params.omega_c();
    return {cplx(-omega_o, -0.5 * gamma_l), cplx(omega_sum + omega_o, 0.5 * gamma_r), cplx(-wc, 2.0 * k),
            cplx(omega_sum + wc, -2.0 * k)};
}

inline PoleSet pole_set(double omega_sum, double gamma_l, double gamma_r, double omega_o,
                        const NetworkParams& params, double merge_tol = default_merge_tol) {
    const auto p = raw_poles(omega_sum, gamma_l, gamma_r, omega_o, params);
    double scale = 0.0;
    for (const auto& z : p) scale = std::max(scale, std::abs(z));
    const double tol = merge_tol * std::max(scale, std::numeric_limits<double>::min());

    PoleSet set;
    auto add_pair = [&](cplx a, PoleOrigin oa, cplx b, PoleOrigin ob) {
        if (std::abs(a - b) <= tol) {
            set.poles.push_back({0.5 * (a + b), 2, oa});
            set.degenerate = true;
        } else {
            set.poles.push_back({a, 1, oa});
            set.poles.push_back({b, 1, ob});
        }
    };
    add_pair(p[1], PoleOrigin::XiR, p[2], PoleOrigin::GNu1);  // upper
    add_pair(p[0], PoleOrigin::XiL, p[3], PoleOrigin::GNu2);  // lower
    return set;
}

namespace detail {

// Sum of residues of 1/((z-p0)(z-p1)(z-q0)(z-q1)) at p0 and p1.
inline cplx residue_pair(cplx p0, cplx p1, cplx q0, cplx q1, double tol) {
    if (std::abs(p0 - p1) <= tol) {
        const cplx p = 0.5 * (p0 + p1);
        const cplx u = p - q0, v = p - q1;
        return -(1.0 / (u * u * v) + 1.0 / (u * v * v));
    }
    const cplx r0 = 1.0 / ((p0 - p1) * (p0 - q0) * (p0 - q1));
    const cplx r1 = 1.0 / ((p1 - p0) * (p1 - q0) * (p1 - q1));
    return r0 + r1;
}

}  // namespace detail

// J(W) = int xiL[i nu] xiR[i(W - nu)] / ((nu + wc - 2ik)(W - nu + wc - 2ik)) dnu
inline cplx residue_reduced(double omega_sum, double gamma_l, double gamma_r, double omega_o,
                            const NetworkParams& params, Closure side = Closure::Upper,
                            double merge_tol = default_merge_tol) {
    if (!(params.kappa() > 0.0) || !(gamma_l > 0.0) || !(gamma_r > 0.0)) {
        throw ValidationError("residue oracle: kappa, gamma_l and gamma_r must be > 0");
    }
    const auto p = raw_poles(omega_sum, gamma_l, gamma_r, omega_o, params);
    double scale = 0.0;
    for (const auto& z : p) scale = std::max(scale, std::abs(z));
    const double tol = merge_tol * scale;
    const double cl = std::sqrt(gamma_l / (2.0 * pi));
    const double cr = std::sqrt(gamma_r / (2.0 * pi));
    const cplx two_pi_i(0.0, 2.0 * pi);
    if (side == Closure::Upper) {
        return -cl * cr * two_pi_i * detail::residue_pair(p[1], p[2], p[0], p[3], tol);
    }
    return cl * cr * two_pi_i * detail::residue_pair(p[0], p[3], p[1], p[2], tol);
}

// The bare convolution integral I(w1, w2), same quantity as convolve_g.
inline cplx residue_convolution(double omega1, double omega2, double gamma_l, double gamma_r, double omega_o,
                                const NetworkParams& params, Closure side = Closure::Upper,
                                double merge_tol = default_merge_tol) {
    const double k = params.kappa();
    if (k == 0.0) return {0.0, 0.0};
    const double wc = params.omega_c();
    const double s = omega1 + omega2 + 2.0 * wc;
    if (s == 0.0) return {0.0, 0.0};
    const cplx num = cplx(0.0, -k * std::sqrt(k) / pi) * cplx(s, -4.0 * k) * s;
    const cplx den = cplx(omega1 + wc, 2.0 * k) * cplx(omega2 + wc, -2.0 * k) * cplx(s, -2.0 * k);
    return num / den * residue_reduced(omega1 + omega2, gamma_l, gamma_r, omega_o, params, side, merge_tol);
}

// --------------------------------------------------------------------------
// Grid comparison against convolve_g
// --------------------------------------------------------------------------

struct ComparisonEntry {
    std::size_t i, j;
    double omega1, omega2;
    cplx quadrature;
    cplx residue;
    double abs_error;
    double rel_error;        // 0 for nodes below the magnitude floor
    double error_estimate;   // quadrature's own estimate
};

struct ComparisonReport {
    std::vector<ComparisonEntry> entries;  // sorted by rel_error, then abs_error, descending
    double max_abs_error = 0.0;
    double max_rel_error = 0.0;
    double max_magnitude = 0.0;
    // Nodes with |value| <= 1e-12 * max_magnitude are judged by abs_error only.
    std::size_t floor_nodes = 0;
    bool near_zero = false;  // every value <= 1e-8 in magnitude
};

inline ComparisonReport compare_on_grid(const FrequencyGrid& grid, double gamma_l, double gamma_r,
                                        double omega_o, const NetworkParams& params, const QuadConfig& cfg,
                                        KernelFn kernel = nullptr, unsigned threads = 0) {
    const TwoPhotonInput input(PulseSpec::lorentzian(gamma_l, omega_o), PulseSpec::lorentzian(gamma_r, omega_o));
    const std::size_t n = grid.size();
    ComparisonReport rep;
    rep.entries.resize(n * n);
    parallel_for(n * n, threads, [&](std::size_t idx) {
        const std::size_t i = idx / n, j = idx % n;
        const double w1 = grid.node(i), w2 = grid.node(j);
        const QuadResult q = convolve_g(w1, w2, input, params, cfg, kernel);
        const cplx r = residue_convolution(w1, w2, gamma_l, gamma_r, omega_o, params);
        rep.entries[idx] = {i, j, w1, w2, q.value, r, std::abs(q.value - r), 0.0, q.abs_error_estimate};
    });
    for (const auto& e : rep.entries) {
        rep.max_magnitude = std::max({rep.max_magnitude, std::abs(e.quadrature), std::abs(e.residue)});
    }
    const double floor = 1e-12 * rep.max_magnitude;
    for (auto& e : rep.entries) {
        const double mag = std::max(std::abs(e.quadrature), std::abs(e.residue));
        if (mag > floor) {
            e.rel_error = e.abs_error / mag;
        } else {
            ++rep.floor_nodes;
        }
        rep.max_abs_error = std::max(rep.max_abs_error, e.abs_error);
        rep.max_rel_error = std::max(rep.max_rel_error, e.rel_error);
    }
    std::stable_sort(rep.entries.begin(), rep.entries.end(), [](const auto& a, const auto& b) {
        return a.rel_error != b.rel_error ? a.rel_error > b.rel_error : a.abs_error > b.abs_error;
    });
    rep.near_zero = rep.max_magnitude <= 1e-8;
    return rep;
}

}  // namespace photonsim::oracle
