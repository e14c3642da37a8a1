// kernels.hpp - closed-form kernels of the two-qubit feedback loop
//
// Linear response (one photon):
//     G[i w] = 1/(w + wc - 2 i k) * [[w + wc, 2 i k], [2 i k, w + wc]]
// with Theta1 the diagonal and Theta2 the off-diagonal entry. G is unitary
// for every real w.
//
// Two-photon nonlinear kernel:
//     g = -i k^{3/2}/pi * (s - 4ik) / ((w1 + wc + 2ik)(w2 + wc - 2ik))
//         * s / ((n1 + wc - 2ik)(n2 + wc - 2ik)(s - 2ik)),   s = n1 + n2 + 2 wc

#pragma once

#include "photonsim/errors.hpp"
#include "photonsim/model.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

namespace photonsim {

struct LinearResponse {
    cplx theta1;  // stays in its own channel
    cplx theta2;  // reflected into the other channel
};

// kappa == 0 is the decoupled loop; it returns (1, 0) everywhere, including
// the 0/0 point w = -omega_c.
inline LinearResponse theta(double omega, const NetworkParams& params) noexcept {
    const double k = params.kappa();
    if (k == 0.0) return {{1.0, 0.0}, {0.0, 0.0}};
    const double x = omega + params.omega_c();
    const cplx den(x, -2.0 * k);
    return {x / den, cplx(0.0, 2.0 * k) / den};
}

inline Eigen::Matrix2cd response_matrix(double omega, const NetworkParams& params) {
    const auto r = theta(omega, params);
    Eigen::Matrix2cd g;
    g << r.theta1, r.theta2, r.theta2, r.theta1;
    return g;
}

inline std::vector<Feature> response_features(const NetworkParams& params) {
    return {{-params.omega_c(), 2.0 * params.kappa()}};
}

// Factors are grouped as bounded ratios so |nu| ~ 1e6 stays far from overflow.
inline cplx g_kernel(double omega1, double omega2, double nu1, double nu2, const NetworkParams& params) noexcept {
    const double k = params.kappa();
    if (k == 0.0) return {0.0, 0.0};
    const double wc = params.omega_c();
    const double s = nu1 + nu2 + 2.0 * wc;
    const cplx ratio = cplx(s, -4.0 * k) / cplx(s, -2.0 * k);
    const cplx out1 = 1.0 / cplx(omega1 + wc, 2.0 * k);
    const cplx out2 = 1.0 / cplx(omega2 + wc, -2.0 * k);
    const cplx in1 = s / cplx(nu1 + wc, -2.0 * k);
    const cplx in2 = 1.0 / cplx(nu2 + wc, -2.0 * k);
    const cplx pref(0.0, -k * std::sqrt(k) / pi);
    return pref * ratio * out1 * out2 * in1 * in2;
}

// --------------------------------------------------------------------------
// Single-photon scattering (left input photon, right input in vacuum)
// --------------------------------------------------------------------------

struct SinglePhotonOutput {
    FrequencyGrid grid;
    std::vector<cplx> eta_L;
    std::vector<cplx> eta_R;
    double input_tail_mass = 0.0;  // |xi|^2 mass outside the grid
};

inline SinglePhotonOutput single_photon_output(const PulseSpec& pulse, const FrequencyGrid& grid,
                                               const NetworkParams& params) {
    const double tail = pulse_tail_mass(pulse, grid.min(), grid.max());
    if (tail > 1e-4) {
        throw WindowTooNarrow("single_photon_output: pulse mass " + std::to_string(tail) +
                              " lies outside the grid (limit 1e-4)");
    }
    SinglePhotonOutput out{grid, std::vector<cplx>(grid.size()), std::vector<cplx>(grid.size()), tail};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double w = grid.node(k);
        const cplx xi = pulse_amplitude(pulse, w);
        const auto r = theta(w, params);
        out.eta_L[k] = r.theta1 * xi;
        out.eta_R[k] = r.theta2 * xi;
    }
    return out;
}

}  // namespace photonsim
