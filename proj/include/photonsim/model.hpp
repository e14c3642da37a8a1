// model.hpp - network parameters, input pulses and frequency grids
//
// Units are dimensionless throughout; a Lorentzian with gamma = 1 fixes the
// unit of rate. The Lorentzian spectrum
//
//     xi[i nu] = (1/sqrt(2 pi)) sqrt(gamma) / (i (nu + omega_o) - gamma/2)
//
// peaks at nu = -omega_o, even though omega_o is called the central
// frequency of the field. The formula is used verbatim and grids are
// centred at -omega_o.

#pragma once

#include "photonsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace photonsim {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// --------------------------------------------------------------------------
// NetworkParams
// --------------------------------------------------------------------------

class NetworkParams {
public:
    NetworkParams() = default;

    NetworkParams(double kappa, double omega_c, double omega_o = 0.0)
        : kappa_(kappa), omega_c_(omega_c), omega_o_(omega_o) {
        if (!std::isfinite(kappa) || !std::isfinite(omega_c) || !std::isfinite(omega_o)) {
            throw ValidationError("NetworkParams: all fields must be finite");
        }
        if (kappa < 0.0) {
            throw ValidationError("NetworkParams: kappa must be >= 0");
        }
    }

    double kappa() const noexcept { return kappa_; }
    double omega_c() const noexcept { return omega_c_; }
    double omega_o() const noexcept { return omega_o_; }

    // alpha = -i omega_c - kappa
    cplx alpha() const noexcept { return {-kappa_, -omega_c_}; }

    bool operator==(const NetworkParams&) const = default;

private:
    double kappa_ = 0.0;
    double omega_c_ = 0.0;
    double omega_o_ = 0.0;
};

// --------------------------------------------------------------------------
// FrequencyGrid: n uniformly spaced nodes, endpoints included
// --------------------------------------------------------------------------

class FrequencyGrid {
public:
    FrequencyGrid(double min, double max, std::size_t n) : min_(min), max_(max), n_(n) {
        if (!std::isfinite(min) || !std::isfinite(max)) {
            throw ValidationError("FrequencyGrid: bounds must be finite");
        }
        if (!(min < max)) {
            throw ValidationError("FrequencyGrid: min must be < max");
        }
        if (n < 3) {
            throw ValidationError("FrequencyGrid: n must be >= 3");
        }
        spacing_ = (max - min) / static_cast<double>(n - 1);
        if (!(spacing_ > 0.0)) {
            throw ValidationError("FrequencyGrid: spacing underflows");
        }
    }

    double min() const noexcept { return min_; }
    double max() const noexcept { return max_; }
    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return spacing_; }

    // Nodes in the upper half are measured from max, so a window symmetric
    // about zero yields node(n-1-k) == -node(k) exactly.
    double node(std::size_t k) const noexcept {
        const std::size_t last = n_ - 1;
        if (2 * k == last) return 0.5 * (min_ + max_);
        if (2 * k < last) return min_ + static_cast<double>(k) * spacing_;
        return max_ - static_cast<double>(last - k) * spacing_;
    }

    std::vector<double> nodes() const {
        std::vector<double> out(n_);
        for (std::size_t k = 0; k < n_; ++k) out[k] = node(k);
        return out;
    }

    // Composite trapezoid weight of node k.
    double weight(std::size_t k) const noexcept {
        return (k == 0 || k + 1 == n_) ? 0.5 * spacing_ : spacing_;
    }

    bool operator==(const FrequencyGrid& o) const noexcept {
        return min_ == o.min_ && max_ == o.max_ && n_ == o.n_;
    }

private:
    double min_;
    double max_;
    std::size_t n_;
    double spacing_ = 0.0;
};

// --------------------------------------------------------------------------
// Pulses
// --------------------------------------------------------------------------

struct Lorentzian {
    double gamma = 1.0;    // FWHM
    double omega_o = 0.0;

    bool operator==(const Lorentzian&) const = default;
};

// Tabulated spectrum, linearly interpolated between strictly increasing
// nodes and zero outside them. Values are scaled at construction so the
// exact integral of |interpolant|^2 is 1.
class SampledPulse {
public:
    SampledPulse(std::vector<double> nodes, std::vector<cplx> values)
        : nodes_(std::move(nodes)), values_(std::move(values)) {
        if (nodes_.size() != values_.size()) {
            throw ValidationError("SampledPulse: node and value counts differ");
        }
        if (nodes_.size() < 3) {
            throw ValidationError("SampledPulse: need at least 3 samples");
        }
        for (std::size_t k = 0; k < nodes_.size(); ++k) {
            if (!std::isfinite(nodes_[k]) || !std::isfinite(values_[k].real()) ||
                !std::isfinite(values_[k].imag())) {
                throw ValidationError("SampledPulse: non-finite sample");
            }
            if (k > 0 && !(nodes_[k] > nodes_[k - 1])) {
                throw NonMonotoneGrid("SampledPulse: nu must be strictly increasing (row " +
                                      std::to_string(k + 1) + ")");
            }
        }
        const double norm_sq = mass(nodes_.front(), nodes_.back());
        if (!(norm_sq > 0.0)) {
            throw ZeroNorm("SampledPulse: all samples are zero");
        }
        // Already-normalized input is kept bit-exact so emit/reload round trips.
        if (std::abs(norm_sq - 1.0) > 1e-12) {
            scale_ = 1.0 / std::sqrt(norm_sq);
            for (auto& v : values_) v *= scale_;
        }
    }

    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<cplx>& values() const noexcept { return values_; }
    double applied_scale() const noexcept { return scale_; }
    double support_min() const noexcept { return nodes_.front(); }
    double support_max() const noexcept { return nodes_.back(); }

    cplx operator()(double nu) const noexcept {
        if (!(nu >= nodes_.front() && nu <= nodes_.back())) return {0.0, 0.0};
        auto it = std::upper_bound(nodes_.begin(), nodes_.end(), nu);
        if (it == nodes_.end()) return values_.back();
        const std::size_t k = static_cast<std::size_t>(it - nodes_.begin());
        const double x0 = nodes_[k - 1], x1 = nodes_[k];
        const double t = (nu - x0) / (x1 - x0);
        return values_[k - 1] + (values_[k] - values_[k - 1]) * t;
    }

    // Exact integral of |interpolant|^2 over [a, b].
    double mass(double a, double b) const noexcept {
        double total = 0.0;
        for (std::size_t k = 1; k < nodes_.size(); ++k) {
            const double x0 = nodes_[k - 1], x1 = nodes_[k];
            const double lo = std::max(a, x0), hi = std::min(b, x1);
            if (!(hi > lo)) continue;
            const double h = x1 - x0;
            const double t0 = (lo - x0) / h, t1 = (hi - x0) / h;
            const cplx v0 = values_[k - 1];
            const cplx d = values_[k] - v0;
            total += h * (std::norm(v0) * (t1 - t0) + std::real(std::conj(v0) * d) * (t1 * t1 - t0 * t0) +
                          std::norm(d) * (t1 * t1 * t1 - t0 * t0 * t0) / 3.0);
        }
        return total;
    }

    bool operator==(const SampledPulse& o) const noexcept {
        return nodes_ == o.nodes_ && values_ == o.values_;
    }

private:
    std::vector<double> nodes_;
    std::vector<cplx> values_;
    double scale_ = 1.0;
};

class PulseSpec {
public:
    static PulseSpec lorentzian(double gamma, double omega_o) {
        if (!(std::isfinite(gamma) && gamma > 0.0)) {
            throw ValidationError("Lorentzian pulse: gamma must be finite and > 0");
        }
        if (!std::isfinite(omega_o)) {
            throw ValidationError("Lorentzian pulse: omega_o must be finite");
        }
        return PulseSpec(Lorentzian{gamma, omega_o});
    }

    static PulseSpec sampled(std::vector<double> nodes, std::vector<cplx> values) {
        return PulseSpec(SampledPulse(std::move(nodes), std::move(values)));
    }

    explicit PulseSpec(SampledPulse s) : v_(std::move(s)) {}

    bool is_lorentzian() const noexcept { return std::holds_alternative<Lorentzian>(v_); }
    bool is_sampled() const noexcept { return std::holds_alternative<SampledPulse>(v_); }
    const Lorentzian& as_lorentzian() const { return std::get<Lorentzian>(v_); }
    const SampledPulse& as_sampled() const { return std::get<SampledPulse>(v_); }

    bool operator==(const PulseSpec&) const = default;

private:
    explicit PulseSpec(Lorentzian l) : v_(l) {}
    std::variant<Lorentzian, SampledPulse> v_;
};

// Narrow spectral feature: the integrators place breakpoints around it.
struct Feature {
    double center;
    double width;
};

// --------------------------------------------------------------------------
// TwoPhotonInput: one photon per input channel
// --------------------------------------------------------------------------

class TwoPhotonInput {
public:
    TwoPhotonInput(PulseSpec left, PulseSpec right)
        : left_(std::move(left)), right_(std::move(right)), identical_(left_ == right_) {}

    static TwoPhotonInput same(const PulseSpec& pulse) { return {pulse, pulse}; }

    const PulseSpec& left() const noexcept { return left_; }
    const PulseSpec& right() const noexcept { return right_; }
    bool identical() const noexcept { return identical_; }

private:
    PulseSpec left_;
    PulseSpec right_;
    bool identical_;
};

// --------------------------------------------------------------------------
// Operations
// --------------------------------------------------------------------------

inline cplx lorentzian_amplitude(double gamma, double omega_o, double nu) noexcept {
    static const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * pi);
    return inv_sqrt_2pi * std::sqrt(gamma) / cplx(-0.5 * gamma, nu + omega_o);
}

inline cplx pulse_amplitude(const PulseSpec& pulse, double nu) noexcept {
    if (pulse.is_lorentzian()) {
        const auto& l = pulse.as_lorentzian();
        return lorentzian_amplitude(l.gamma, l.omega_o, nu);
    }
    return pulse.as_sampled()(nu);
}

// Mass of |xi|^2 outside [a, b]. Exact for both pulse kinds.
inline double pulse_tail_mass(const PulseSpec& pulse, double a, double b) {
    if (pulse.is_lorentzian()) {
        const auto& l = pulse.as_lorentzian();
        const double inside =
            (std::atan(2.0 * (b + l.omega_o) / l.gamma) - std::atan(2.0 * (a + l.omega_o) / l.gamma)) / pi;
        return std::max(0.0, 1.0 - inside);
    }
    const auto& s = pulse.as_sampled();
    return s.mass(s.support_min(), a) + s.mass(b, s.support_max());
}

// Integral of |xi|^2 over the window (trapezoid for Lorentzians, exact for
// sampled pulses) plus the exact mass outside it.
inline double pulse_norm_sq(const PulseSpec& pulse, const FrequencyGrid& window) {
    const double tail = pulse_tail_mass(pulse, window.min(), window.max());
    // The tail is added back analytically; a window missing more than 1%
    // of the pulse is still treated as a mistake.
    if (tail > 1e-2) {
        throw WindowTooNarrow("pulse_norm_sq: tail mass " + std::to_string(tail) +
                              " outside the window exceeds 1e-2");
    }
    if (pulse.is_sampled()) {
        return pulse.as_sampled().mass(window.min(), window.max()) + tail;
    }
    double inside = 0.0;
    for (std::size_t k = 0; k < window.size(); ++k) {
        inside += window.weight(k) * std::norm(pulse_amplitude(pulse, window.node(k)));
    }
    return inside + tail;
}

inline std::vector<Feature> pulse_features(const PulseSpec& pulse) {
    if (pulse.is_lorentzian()) {
        const auto& l = pulse.as_lorentzian();
        return {{-l.omega_o, 0.5 * l.gamma}};
    }
    const auto& s = pulse.as_sampled();
    return {{0.5 * (s.support_min() + s.support_max()), 0.5 * (s.support_max() - s.support_min())}};
}

// Values of the pulse at the grid nodes, renormalized as a SampledPulse.
inline PulseSpec tabulate_pulse(const PulseSpec& pulse, const FrequencyGrid& grid) {
    std::vector<cplx> values(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) values[k] = pulse_amplitude(pulse, grid.node(k));
    return PulseSpec::sampled(grid.nodes(), std::move(values));
}

}  // namespace photonsim
