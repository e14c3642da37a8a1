// observables.hpp - channel probabilities, HOM scans, Schmidt analysis
//
// The linear part of each T_xy is the symmetrized product of two
// independent single-photon scatterings, u = (theta1 xiL, theta2 xiL) and
// v = (theta2 xiR, theta1 xiR):
//
//   T_LL lin = (a t)(w1) (b r)(w2) + (a t)(w2) (b r)(w1)
//   T_LR lin = (a t)(w1) (b t)(w2) + (b r)(w1) (a r)(w2)
//   T_RR lin = (a r)(w1) (b t)(w2) + (a r)(w2) (b t)(w1)
//
// with a = xiL, b = xiR, t = theta1, r = theta2. Its channel masses are sums
// of products of 1D inner products, which are integrated over the whole
// real line. Only the remainder |T|^2 - |T_lin|^2, which involves the
// convolution term, is integrated on the grid. Lorentzian pulses carry
// 1/nu^2 tails, so a direct grid sum would lose a few percent of the mass
// on any practical window.

#pragma once

#include "photonsim/amplitudes.hpp"
#include "photonsim/errors.hpp"
#include "photonsim/kernels.hpp"
#include "photonsim/model.hpp"
#include "photonsim/parallel.hpp"
#include "photonsim/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace photonsim {

struct ScatteringProbabilities {
    double p_ll = 0.0;
    double p_lr = 0.0;
    double p_rr = 0.0;
    double total = 0.0;
    double est_error = 0.0;
    double tail_bound = 0.0;  // estimated convolution mass outside the grid
};

enum class ProbabilityMethod {
    Automatic,  // shortcut iff input.identical()
    General,    // symmetrized four-term P_LL / P_RR
    Shortcut,   // P_LL = P_RR = 1/2 int |T_LL|^2; requires identical input
};

struct ProbabilityOptions {
    unsigned threads = 0;
    bool include_convolution = true;
    KernelFn kernel = nullptr;
    ProbabilityMethod method = ProbabilityMethod::Automatic;
};

inline constexpr double window_tail_limit = 1e-2;

namespace detail {

// Integral of f over the real line, where f vanishes outside the support of
// every sampled pulse in `pulses`.
template <class F>
QuadResult integrate_pulse_product(F&& f, std::initializer_list<const PulseSpec*> pulses,
                                   const NetworkParams& params, const QuadConfig& cfg) {
    std::vector<Feature> features = response_features(params);
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    std::vector<double> cuts;
    bool sampled = false;
    for (const PulseSpec* p : pulses) {
        for (const auto& ft : pulse_features(*p)) features.push_back(ft);
        if (p->is_sampled()) {
            sampled = true;
            const auto& s = p->as_sampled();
            lo = std::max(lo, s.support_min());
            hi = std::min(hi, s.support_max());
            cuts.insert(cuts.end(), s.nodes().begin(), s.nodes().end());
        }
    }
    if (!sampled) return integrate_real_line(f, features, cfg);
    if (!(hi > lo)) return {};
    for (const auto& ft : features) cuts.insert(cuts.end(), {ft.center - ft.width, ft.center, ft.center + ft.width});
    return integrate_line(f, lo, hi, cfg, cuts);
}

}  // namespace detail

// Inner products of the single-photon output components.
struct LinearMoments {
    double at = 0.0;  // ||xiL theta1||^2
    double ar = 0.0;  // ||xiL theta2||^2
    double bt = 0.0;  // ||xiR theta1||^2
    double br = 0.0;  // ||xiR theta2||^2
    cplx x1;          // <xiL theta1, xiR theta2>
    cplx x2;          // <xiR theta1, xiL theta2>
    double error = 0.0;

    double p_ll() const { return at * br + std::norm(x1); }
    double p_rr() const { return ar * bt + std::norm(x2); }
    double p_lr() const { return at * bt + br * ar + 2.0 * std::real(x1 * x2); }
};

inline LinearMoments linear_moments(const TwoPhotonInput& input, const NetworkParams& params,
                                    const QuadConfig& cfg) {
    const PulseSpec& a = input.left();
    const PulseSpec& b = input.right();
    LinearMoments m;
    auto norm_part = [&](const PulseSpec& p, bool reflected) {
        auto f = [&](double w) -> cplx {
            const auto th = theta(w, params);
            return std::norm(pulse_amplitude(p, w)) * std::norm(reflected ? th.theta2 : th.theta1);
        };
        const QuadResult q = detail::integrate_pulse_product(f, {&p}, params, cfg);
        m.error += q.abs_error_estimate;
        return q.value.real();
    };
    auto cross = [&](const PulseSpec& p, const PulseSpec& q) {
        auto f = [&](double w) -> cplx {
            const auto th = theta(w, params);
            return std::conj(pulse_amplitude(p, w) * th.theta1) * pulse_amplitude(q, w) * th.theta2;
        };
        const QuadResult r = detail::integrate_pulse_product(f, {&p, &q}, params, cfg);
        m.error += r.abs_error_estimate;
        return r.value;
    };
    m.at = norm_part(a, false);
    m.ar = norm_part(a, true);
    m.bt = norm_part(b, false);
    m.br = norm_part(b, true);
    m.x1 = cross(a, b);
    m.x2 = cross(b, a);
    return m;
}

namespace detail {

// Grid sums of the convolution-dependent remainder and of the linear part.
struct GridParts {
    double corr_ll = 0.0, corr_lr = 0.0, corr_rr = 0.0;
    double lin_ll = 0.0, lin_lr = 0.0, lin_rr = 0.0;
    double abs_ll = 0.0, abs_lr = 0.0, abs_rr = 0.0;  // sum w |T|
    double conv_outside = 0.0;
};

inline GridParts grid_parts(const AmplitudeSet& set, const TwoPhotonInput& input, const NetworkParams& params) {
    const FrequencyGrid& g = set.grid;
    const std::size_t n = g.size();
    const std::vector<double> w = g.nodes();
    Eigen::MatrixXcd lin_ll(n, n), lin_lr(n, n), lin_rr(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto l = linear_terms(w[i], w[j], input, params);
            lin_ll(i, j) = l.ll;
            lin_lr(i, j) = l.lr;
            lin_rr(i, j) = l.rr;
        }
    }
    const Eigen::MatrixXcd& c = set.convolution;
    GridParts p;
    // 1/4 (|T|^2 + T*(i,j) T(j,i)) minus the same for the linear part.
    auto symmetric = [&](const Eigen::MatrixXcd& lin, std::size_t i, std::size_t j, double& corr, double& mass) {
        const cplx li = lin(i, j), lj = lin(j, i), ci = c(i, j), cj = c(j, i);
        const double direct = std::norm(ci) + 2.0 * std::real(std::conj(li) * ci);
        const double swapped = std::real(std::conj(ci) * lj + std::conj(li) * cj + std::conj(ci) * cj);
        corr = 0.25 * (direct + swapped);
        mass = 0.25 * (std::norm(li) + std::real(std::conj(li) * lj));
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double wt = g.weight(i) * g.weight(j);
            double corr = 0.0, mass = 0.0;
            symmetric(lin_ll, i, j, corr, mass);
            p.corr_ll += wt * corr;
            p.lin_ll += wt * mass;
            symmetric(lin_rr, i, j, corr, mass);
            p.corr_rr += wt * corr;
            p.lin_rr += wt * mass;
            const cplx l = lin_lr(i, j), ci = c(i, j);
            p.corr_lr += wt * (std::norm(ci) + 2.0 * std::real(std::conj(l) * ci));
            p.lin_lr += wt * std::norm(l);
            p.abs_ll += wt * std::abs(set.ll(i, j));
            p.abs_lr += wt * std::abs(set.lr(i, j));
            p.abs_rr += wt * std::abs(set.rr(i, j));
        }
    }
    // |C|^2 decays at least as 1/w^4 away from the window; the mass beyond
    // an edge at distance L is about L/3 times the edge line integral. Using
    // L instead of L/3 keeps the estimate conservative.
    const double half = 0.5 * (g.max() - g.min());
    double edge = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        edge += g.weight(k) * (std::norm(c(0, k)) + std::norm(c(n - 1, k)) + std::norm(c(k, 0)) +
                               std::norm(c(k, n - 1)));
    }
    p.conv_outside = edge * half;
    return p;
}

}  // namespace detail

inline ScatteringProbabilities probabilities(const TwoPhotonInput& input, const NetworkParams& params,
                                             const FrequencyGrid& grid, const QuadConfig& cfg,
                                             const ProbabilityOptions& opts = {}) {
    cfg.validate();
    bool shortcut = false;
    switch (opts.method) {
        case ProbabilityMethod::Automatic: shortcut = input.identical(); break;
        case ProbabilityMethod::General: shortcut = false; break;
        case ProbabilityMethod::Shortcut:
            if (!input.identical()) {
                throw ValidationError("probabilities: the shortcut formula needs identical pulses");
            }
            shortcut = true;
            break;
    }
    // Decoupled loop: T_LR = xiL xiR, and both pulses have unit norm.
    if (params.kappa() == 0.0) return {0.0, 1.0, 0.0, 1.0, 0.0, 0.0};

    const LinearMoments m = linear_moments(input, params, cfg);
    const AmplitudeSet set =
        amplitude_set(grid, input, params, cfg, {opts.threads, opts.include_convolution, opts.kernel});
    const detail::GridParts gp = detail::grid_parts(set, input, params);

    ScatteringProbabilities out;
    out.p_lr = m.p_lr() + gp.corr_lr;
    out.p_ll = m.p_ll() + gp.corr_ll;
    out.p_rr = shortcut ? out.p_ll : m.p_rr() + gp.corr_rr;
    out.total = out.p_ll + out.p_lr + out.p_rr;

    const double conv = gp.conv_outside;
    auto cross = [&](double full, double inside) { return 2.0 * std::sqrt(std::max(0.0, full - inside) * conv); };
    out.tail_bound = 2.0 * conv + cross(m.p_ll(), gp.lin_ll) + cross(m.p_lr(), gp.lin_lr) +
                     cross(m.p_rr(), gp.lin_rr);
    if (out.tail_bound > window_tail_limit) {
        throw WindowTooNarrow("probabilities: estimated convolution mass outside the grid is " +
                              std::to_string(out.tail_bound) + " (limit 1e-2); widen the grid");
    }
    const double e = set.max_point_error;
    out.est_error = out.tail_bound + 2.0 * e * (gp.abs_ll + gp.abs_lr + gp.abs_rr) + 4.0 * m.error;
    return out;
}

inline double conservation_check(const TwoPhotonInput& input, const NetworkParams& params,
                                 const FrequencyGrid& grid, const QuadConfig& cfg,
                                 const ProbabilityOptions& opts = {}) {
    return std::abs(probabilities(input, params, grid, cfg, opts).total - 1.0);
}

// ∫∫ |T_LR - target|^2 for a separable target f(w1) g(w2). The linear part
// of the difference is a sum of separable terms, handled exactly by Gram
// sums; the convolution part goes on the grid.
struct DistanceResult {
    double value = 0.0;
    double tail_bound = 0.0;
};

using SpectralFn = std::function<cplx(double)>;

inline DistanceResult lr_distance(const TwoPhotonInput& input, const NetworkParams& params,
                                  const FrequencyGrid& grid, const QuadConfig& cfg, const SpectralFn& target1,
                                  const SpectralFn& target2, const AmplitudeOptions& opts = {}) {
    auto a = [&](double w) { return pulse_amplitude(input.left(), w); };
    auto b = [&](double w) { return pulse_amplitude(input.right(), w); };
    auto t = [&](double w) { return theta(w, params).theta1; };
    auto r = [&](double w) { return theta(w, params).theta2; };
    struct Term {
        SpectralFn f, g;
        double sign;
    };
    const std::vector<Term> terms{
        {[&](double w) { return a(w) * t(w); }, [&](double w) { return b(w) * t(w); }, 1.0},
        {[&](double w) { return b(w) * r(w); }, [&](double w) { return a(w) * r(w); }, 1.0},
        {target1, target2, -1.0},
    };
    auto inner = [&](const SpectralFn& u, const SpectralFn& v) {
        auto f = [&](double w) { return std::conj(u(w)) * v(w); };
        return detail::integrate_pulse_product(f, {&input.left(), &input.right()}, params, cfg).value;
    };
    double lin = 0.0;
    for (const auto& p : terms) {
        for (const auto& q : terms) {
            lin += p.sign * q.sign * std::real(inner(p.f, q.f) * inner(p.g, q.g));
        }
    }

    DistanceResult out;
    const AmplitudeSet set = amplitude_set(grid, input, params, cfg, opts);
    const std::vector<double> w = grid.nodes();
    const std::size_t n = grid.size();
    double corr = 0.0, edge = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const cplx d = detail::linear_terms(w[i], w[j], input, params).lr - target1(w[i]) * target2(w[j]);
            const cplx c = set.convolution(i, j);
            corr += grid.weight(i) * grid.weight(j) * (std::norm(c) + 2.0 * std::real(std::conj(d) * c));
        }
        edge += grid.weight(i) * (std::norm(set.convolution(0, i)) + std::norm(set.convolution(n - 1, i)) +
                                  std::norm(set.convolution(i, 0)) + std::norm(set.convolution(i, n - 1)));
    }
    const double conv_out = edge * 0.5 * (grid.max() - grid.min());
    out.value = std::max(0.0, lin) + corr;
    out.tail_bound = conv_out + 2.0 * std::sqrt(std::max(0.0, lin) * conv_out);
    return out;
}

// --------------------------------------------------------------------------
// HOM scan
// --------------------------------------------------------------------------

struct HomScanRow {
    double kappa;
    double omega_c;
    double p_lr;
    double p_ll;
    double p_rr;
    double est_error;
};

inline std::vector<HomScanRow> hom_scan(const std::vector<double>& kappas, double ratio, const PulseSpec& pulse,
                                        const FrequencyGrid& grid, const QuadConfig& cfg,
                                        const ProbabilityOptions& opts = {}) {
    if (kappas.empty()) throw ValidationError("hom_scan: no kappa values");
    if (!std::isfinite(ratio)) throw ValidationError("hom_scan: ratio must be finite");
    for (std::size_t k = 0; k < kappas.size(); ++k) {
        if (!(kappas[k] > 0.0) || !std::isfinite(kappas[k])) {
            throw ValidationError("hom_scan: kappa values must be finite and > 0");
        }
        if (k > 0 && !(kappas[k] > kappas[k - 1])) {
            throw ValidationError("hom_scan: kappa values must be strictly increasing");
        }
    }
    const double omega_o = pulse.is_lorentzian() ? pulse.as_lorentzian().omega_o : 0.0;
    const TwoPhotonInput input = TwoPhotonInput::same(pulse);
    std::vector<HomScanRow> rows;
    rows.reserve(kappas.size());
    for (double k : kappas) {
        const NetworkParams params(k, ratio * k, omega_o);
        const auto p = probabilities(input, params, grid, cfg, opts);
        rows.push_back({k, ratio * k, p.p_lr, p.p_ll, p.p_rr, p.est_error});
    }
    return rows;
}

// --------------------------------------------------------------------------
// Schmidt decomposition
// --------------------------------------------------------------------------

struct SchmidtReport {
    std::vector<double> singular_values;  // normalized, descending
    double entropy = 0.0;                 // bits
    double schmidt_number = 1.0;
};

inline SchmidtReport schmidt_report(const Eigen::MatrixXcd& values, double spacing1, double spacing2) {
    double peak = 0.0;
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        const double v = std::abs(values.data()[k]);
        if (!std::isfinite(v)) throw ValidationError("schmidt_report: amplitude matrix has non-finite entries");
        peak = std::max(peak, v);
    }
    if (peak <= 1e-150) throw ZeroAmplitude("schmidt_report: amplitude matrix is numerically zero");

    const Eigen::MatrixXcd scaled = values * (std::sqrt(spacing1 * spacing2) / peak);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(scaled);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    if (!(smax > 0.0)) throw ZeroAmplitude("schmidt_report: amplitude matrix is numerically zero");

    SchmidtReport rep;
    double sum_sq = 0.0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv(k) < 1e-12 * smax) break;
        rep.singular_values.push_back(sv(k));
        sum_sq += sv(k) * sv(k);
    }
    const double norm = std::sqrt(sum_sq);
    double purity = 0.0;
    for (double& s : rep.singular_values) {
        s /= norm;
        const double p = s * s;
        purity += p * p;
        if (p > 0.0) rep.entropy -= p * std::log2(p);
    }
    rep.entropy = std::max(0.0, rep.entropy);
    rep.schmidt_number = 1.0 / purity;
    return rep;
}

inline SchmidtReport schmidt_report(const JointAmplitude& amp) {
    return schmidt_report(amp.values, amp.grid1.spacing(), amp.grid2.spacing());
}

// --------------------------------------------------------------------------
// Single photon
// --------------------------------------------------------------------------

struct SinglePhotonProbabilities {
    double p_left = 0.0;
    double p_right = 0.0;
    double est_error = 0.0;
};

// The grid fixes the tail precondition of single_photon_output; the
// integrals themselves run over the whole line.
inline SinglePhotonProbabilities single_photon_probabilities(const PulseSpec& pulse, const NetworkParams& params,
                                                             const FrequencyGrid& grid, const QuadConfig& cfg) {
    cfg.validate();
    const double tail = pulse_tail_mass(pulse, grid.min(), grid.max());
    if (tail > 1e-4) {
        throw WindowTooNarrow("single_photon_probabilities: pulse mass " + std::to_string(tail) +
                              " lies outside the grid (limit 1e-4)");
    }
    if (params.kappa() == 0.0) return {1.0, 0.0, 0.0};
    auto channel = [&](bool reflected) {
        auto f = [&](double w) -> cplx {
            const auto th = theta(w, params);
            return std::norm(pulse_amplitude(pulse, w)) * std::norm(reflected ? th.theta2 : th.theta1);
        };
        return detail::integrate_pulse_product(f, {&pulse}, params, cfg);
    };
    const QuadResult l = channel(false);
    const QuadResult r = channel(true);
    return {l.value.real(), r.value.real(), l.abs_error_estimate + r.abs_error_estimate};
}

}  // namespace photonsim
