// amplitudes.hpp - joint spectral amplitudes of the output two-photon state
//
// For photons xiL (left input) and xiR (right input), with
// D = (w1 + wc - 2ik)(w2 + wc - 2ik) and C(w1, w2) the shared convolution
// term 2 sqrt(k) (w1 + wc + 2ik)/(w1 + wc - 2ik) * I(w1, w2):
//
//   T_LL = xiL(w1) xiR(w2) 2ik(w1 + wc)/D + xiL(w2) xiR(w1) 2ik(w2 + wc)/D + C
//   T_LR = xiL(w1) xiR(w2) (w1 + wc)(w2 + wc)/D - xiL(w2) xiR(w1) (2k)^2/D + C
//   T_RR = xiL(w1) xiR(w2) 2ik(w2 + wc)/D + xiL(w2) xiR(w1) 2ik(w1 + wc)/D + C
//
// The output state is 1/2 T_LL b_L* b_L* + T_LR b_L* b_R* + 1/2 T_RR b_R* b_R*.

#pragma once

#include "photonsim/convolution.hpp"
#include "photonsim/errors.hpp"
#include "photonsim/kernels.hpp"
#include "photonsim/model.hpp"
#include "photonsim/parallel.hpp"
#include "photonsim/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace photonsim {

enum class Channel { LL, LR, RR };

inline std::string_view to_string(Channel c) noexcept {
    switch (c) {
        case Channel::LL: return "ll";
        case Channel::LR: return "lr";
        case Channel::RR: return "rr";
    }
    return "?";
}

inline Channel parse_channel(std::string_view s) {
    if (s == "ll" || s == "LL") return Channel::LL;
    if (s == "lr" || s == "LR") return Channel::LR;
    if (s == "rr" || s == "RR") return Channel::RR;
    throw ValidationError("unknown channel '" + std::string(s) + "' (expected ll, lr or rr)");
}

struct AmplitudeOptions {
    unsigned threads = 0;              // 0 = PHOTONSIM_THREADS or all cores
    bool include_convolution = true;   // false drops the nonlinear term
    KernelFn kernel = nullptr;         // non-null: literal integral of this kernel
};

struct PointAmplitudes {
    cplx ll;
    cplx lr;
    cplx rr;
    cplx convolution;          // C(w1, w2), already included in ll/lr/rr
    double convolution_error;  // error estimate of C
};

inline cplx channel_prefactor(double omega1, const NetworkParams& params) noexcept {
    const double k = params.kappa();
    const double x = omega1 + params.omega_c();
    return 2.0 * std::sqrt(k) * cplx(x, 2.0 * k) / cplx(x, -2.0 * k);
}

namespace detail {

struct LinearTerms {
    cplx ll, lr, rr;
};

inline LinearTerms linear_terms(double w1, double w2, const TwoPhotonInput& input, const NetworkParams& params) {
    const cplx a1 = pulse_amplitude(input.left(), w1);
    const cplx a2 = pulse_amplitude(input.left(), w2);
    const cplx b1 = pulse_amplitude(input.right(), w1);
    const cplx b2 = pulse_amplitude(input.right(), w2);
    const double k = params.kappa();
    if (k == 0.0) return {{0.0, 0.0}, a1 * b2, {0.0, 0.0}};
    const double x1 = w1 + params.omega_c();
    const double x2 = w2 + params.omega_c();
    const cplx d = cplx(x1, -2.0 * k) * cplx(x2, -2.0 * k);
    const cplx two_ik(0.0, 2.0 * k);
    const cplx direct = a1 * b2 / d;
    const cplx swapped = a2 * b1 / d;
    return {direct * two_ik * x1 + swapped * two_ik * x2,
            direct * (x1 * x2) - swapped * (4.0 * k * k),
            direct * two_ik * x2 + swapped * two_ik * x1};
}

}  // namespace detail

inline PointAmplitudes point_amplitudes(double omega1, double omega2, const TwoPhotonInput& input,
                                        const NetworkParams& params, const QuadConfig& cfg,
                                        const AmplitudeOptions& opts = {}) {
    const auto lin = detail::linear_terms(omega1, omega2, input, params);
    cplx conv{0.0, 0.0};
    double conv_err = 0.0;
    if (opts.include_convolution && params.kappa() > 0.0) {
        const QuadResult q = opts.kernel ? convolve_g(omega1, omega2, input, params, cfg, opts.kernel)
                                         : convolve_g_factored(omega1, omega2, input, params, cfg);
        const cplx pre = channel_prefactor(omega1, params);
        conv = pre * q.value;
        conv_err = std::abs(pre) * q.abs_error_estimate;
    }
    return {lin.ll + conv, lin.lr + conv, lin.rr + conv, conv, conv_err};
}

inline cplx t_ll(double omega1, double omega2, const TwoPhotonInput& input, const NetworkParams& params,
                 const QuadConfig& cfg = {}) {
    return point_amplitudes(omega1, omega2, input, params, cfg).ll;
}

inline cplx t_lr(double omega1, double omega2, const TwoPhotonInput& input, const NetworkParams& params,
                 const QuadConfig& cfg = {}) {
    return point_amplitudes(omega1, omega2, input, params, cfg).lr;
}

inline cplx t_rr(double omega1, double omega2, const TwoPhotonInput& input, const NetworkParams& params,
                 const QuadConfig& cfg = {}) {
    return point_amplitudes(omega1, omega2, input, params, cfg).rr;
}

// T_LR for identical pulses, written with a single linear term:
//   xi(w1) xi(w2) ((w1 + wc)(w2 + wc) - (2k)^2)/D + C
inline cplx t_lr_identical(double omega1, double omega2, const PulseSpec& pulse, const NetworkParams& params,
                           const QuadConfig& cfg = {}) {
    const cplx x1x2 = pulse_amplitude(pulse, omega1) * pulse_amplitude(pulse, omega2);
    const double k = params.kappa();
    if (k == 0.0) return x1x2;
    const double a = omega1 + params.omega_c();
    const double b = omega2 + params.omega_c();
    const cplx linear = x1x2 * (a * b - 4.0 * k * k) / (cplx(a, -2.0 * k) * cplx(b, -2.0 * k));
    const QuadResult q = convolve_g_factored(omega1, omega2, TwoPhotonInput::same(pulse), params, cfg);
    return linear + channel_prefactor(omega1, params) * q.value;
}

// --------------------------------------------------------------------------
// Grids
// --------------------------------------------------------------------------

struct JointAmplitude {
    Channel channel;
    FrequencyGrid grid1;
    FrequencyGrid grid2;
    Eigen::MatrixXcd values;  // values(i, j) = T(grid1.node(i), grid2.node(j))
    NetworkParams params;
    TwoPhotonInput input;
    double max_point_error = 0.0;
};

// All three channels on one grid; the convolution term is computed once.
struct AmplitudeSet {
    FrequencyGrid grid;
    Eigen::MatrixXcd ll;
    Eigen::MatrixXcd lr;
    Eigen::MatrixXcd rr;
    Eigen::MatrixXcd convolution;  // C(w1, w2), included in ll/lr/rr
    double max_point_error = 0.0;
};

namespace detail {

inline std::string node_label(const FrequencyGrid& grid, std::size_t i, std::size_t j) {
    return "node (" + std::to_string(i) + ", " + std::to_string(j) + ") at omega1=" +
           std::to_string(grid.node(i)) + ", omega2=" + std::to_string(grid.node(j));
}

// C(w_i, w_j) on the grid, with a per-node error estimate.
inline void fill_convolution(const FrequencyGrid& grid, const TwoPhotonInput& input, const NetworkParams& params,
                             const QuadConfig& cfg, const AmplitudeOptions& opts, Eigen::MatrixXcd& conv,
                             Eigen::MatrixXd& err) {
    const std::size_t n = grid.size();
    conv = Eigen::MatrixXcd::Zero(n, n);
    err = Eigen::MatrixXd::Zero(n, n);
    if (!opts.include_convolution || params.kappa() == 0.0) return;
    cfg.validate();
    const std::vector<double> w = grid.nodes();

    if (opts.kernel) {
        parallel_for(n * n, opts.threads, [&](std::size_t idx) {
            const std::size_t i = idx / n, j = idx % n;
            try {
                const QuadResult q = convolve_g(w[i], w[j], input, params, cfg, opts.kernel);
                const cplx pre = channel_prefactor(w[i], params);
                conv(i, j) = pre * q.value;
                err(i, j) = std::abs(pre) * q.abs_error_estimate;
            } catch (const NoConvergence& e) {
                throw NoConvergence(std::string(e.what()) + " at " + node_label(grid, i, j), e.partial());
            }
        });
        return;
    }

    // J depends on w_i + w_j only: one integral per anti-diagonal.
    const std::size_t sums = 2 * n - 1;
    std::vector<QuadResult> reduced(sums);
    parallel_for(sums, opts.threads, [&](std::size_t s) {
        const std::size_t i = s < n ? 0 : s - (n - 1);
        const std::size_t j = s - i;
        try {
            reduced[s] = reduced_convolution(w[i] + w[j], input, params, cfg);
        } catch (const NoConvergence& e) {
            throw NoConvergence(std::string(e.what()) + " at " + node_label(grid, i, j), e.partial());
        }
    });
    parallel_for(n, opts.threads, [&](std::size_t i) {
        const cplx pre = channel_prefactor(w[i], params);
        for (std::size_t j = 0; j < n; ++j) {
            const cplx f = pre * convolution_factor(w[i], w[j], params);
            conv(i, j) = f * reduced[i + j].value;
            err(i, j) = std::abs(f) * reduced[i + j].abs_error_estimate;
        }
    });
}

}  // namespace detail

inline AmplitudeSet amplitude_set(const FrequencyGrid& grid, const TwoPhotonInput& input,
                                  const NetworkParams& params, const QuadConfig& cfg,
                                  const AmplitudeOptions& opts = {}) {
    const std::size_t n = grid.size();
    AmplitudeSet out{grid, Eigen::MatrixXcd(n, n), Eigen::MatrixXcd(n, n), Eigen::MatrixXcd(n, n), {}, 0.0};
    Eigen::MatrixXd err;
    detail::fill_convolution(grid, input, params, cfg, opts, out.convolution, err);
    const std::vector<double> w = grid.nodes();
    parallel_for(n, opts.threads, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto lin = detail::linear_terms(w[i], w[j], input, params);
            out.ll(i, j) = lin.ll + out.convolution(i, j);
            out.lr(i, j) = lin.lr + out.convolution(i, j);
            out.rr(i, j) = lin.rr + out.convolution(i, j);
        }
    });
    out.max_point_error = n > 0 ? err.maxCoeff() : 0.0;
    return out;
}

inline JointAmplitude amplitude_grid(Channel channel, const FrequencyGrid& grid, const TwoPhotonInput& input,
                                     const NetworkParams& params, const QuadConfig& cfg,
                                     const AmplitudeOptions& opts = {}) {
    AmplitudeSet set = amplitude_set(grid, input, params, cfg, opts);
    Eigen::MatrixXcd values;
    switch (channel) {
        case Channel::LL: values = std::move(set.ll); break;
        case Channel::LR: values = std::move(set.lr); break;
        case Channel::RR: values = std::move(set.rr); break;
    }
    return {channel, grid, grid, std::move(values), params, input, set.max_point_error};
}

}  // namespace photonsim
