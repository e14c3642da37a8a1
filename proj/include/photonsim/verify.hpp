// verify.hpp - self-check suite behind `photonsim verify`
//
// Each check compares a computed quantity with a threshold and reports the
// margin (positive when passing). An optional replacement kernel is routed
// into every check that integrates g literally, so a corrupted kernel shows
// up as an oracle mismatch.

#pragma once

#include "photonsim/amplitudes.hpp"
#include "photonsim/io.hpp"
#include "photonsim/kernels.hpp"
#include "photonsim/observables.hpp"
#include "photonsim/oracle.hpp"

#include <json.hpp>

#include <chrono>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace photonsim {

struct CheckResult {
    std::string name;
    std::string failure;  // label printed when the check fails
    double value = 0.0;
    double threshold = 0.0;
    bool upper_bound = true;  // pass iff value <= threshold (else >=)
    bool passed = false;
    std::string detail;
    double seconds = 0.0;

    double margin() const { return upper_bound ? threshold - value : value - threshold; }
};

struct VerifyReport {
    std::string mode;
    std::vector<CheckResult> checks;
    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }
};

struct VerifyOptions {
    bool quick = false;
    KernelFn kernel = nullptr;
    unsigned threads = 0;
};

// g with its overall sign flipped; used to demonstrate that verify catches
// a broken kernel.
inline cplx g_kernel_sign_flipped(double w1, double w2, double n1, double n2, const NetworkParams& p) noexcept {
    return -g_kernel(w1, w2, n1, n2, p);
}

namespace detail {

inline CheckResult run_check(const std::string& name, const std::string& failure, double threshold, bool upper,
                             const std::function<double(std::string&)>& body) {
    CheckResult c{name, failure, 0.0, threshold, upper, false, {}, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    try {
        c.value = body(c.detail);
        c.passed = std::isfinite(c.value) && (upper ? c.value <= threshold : c.value >= threshold);
    } catch (const std::exception& e) {
        c.value = std::numeric_limits<double>::quiet_NaN();
        c.detail = std::string("exception: ") + e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

inline double oracle_check(double omega_c, const VerifyOptions& o, std::string& detail) {
    const NetworkParams p(1.5, omega_c, 0.0);
    const auto rep = oracle::compare_on_grid(FrequencyGrid(-6, 6, 21), 1.0, 1.0, 0.0, p, QuadConfig{}, o.kernel,
                                             o.threads);
    // Nodes below the magnitude floor are judged on absolute error.
    double worst = rep.max_rel_error;
    for (const auto& e : rep.entries) {
        if (e.rel_error == 0.0 && e.abs_error > 1e-10 * rep.max_magnitude) worst = std::max(worst, 1.0);
    }
    const auto& w = rep.entries.front();
    detail = "worst node omega1=" + io::format_double(w.omega1) + " omega2=" + io::format_double(w.omega2);
    return worst;
}

}  // namespace detail

inline VerifyReport run_verification(const VerifyOptions& o) {
    VerifyReport rep;
    rep.mode = o.quick ? "quick" : "full";
    std::mt19937_64 rng(20240611);
    const QuadConfig cfg;
    const PulseSpec unit = PulseSpec::lorentzian(1.0, 0.0);
    const TwoPhotonInput same = TwoPhotonInput::same(unit);
    auto add = [&](CheckResult c) { rep.checks.push_back(std::move(c)); };

    add(detail::run_check("oracle agreement (omega_c=0)", "oracle-mismatch", 1e-6, true,
                          [&](std::string& d) { return detail::oracle_check(0.0, o, d); }));
    if (!o.quick) {
        add(detail::run_check("oracle agreement (omega_c=3)", "oracle-mismatch", 1e-6, true,
                              [&](std::string& d) { return detail::oracle_check(3.0, o, d); }));
    }

    add(detail::run_check("residue contour sides agree", "residue-inconsistency", 1e-10, true, [&](std::string&) {
        std::uniform_real_distribution<double> k(0.2, 10), g(0.3, 4), c(-5, 5), wo(-2, 2), w(-6, 6);
        double worst = 0.0;
        for (int t = 0; t < 200; ++t) {
            const NetworkParams p(k(rng), c(rng), 0.0);
            const double gl = g(rng), gr = g(rng), o_ = wo(rng), w1 = w(rng), w2 = w(rng);
            const cplx up = oracle::residue_convolution(w1, w2, gl, gr, o_, p, oracle::Closure::Upper);
            const cplx lo = oracle::residue_convolution(w1, w2, gl, gr, o_, p, oracle::Closure::Lower);
            worst = std::max(worst, std::abs(up - lo) / std::max(std::abs(up), 1e-300));
        }
        return worst;
    }));

    add(detail::run_check("linear response unitarity", "unitarity", 1e-12, true, [&](std::string&) {
        std::uniform_real_distribution<double> w(-50, 50), k(1e-3, 50), c(-20, 20);
        double worst = 0.0;
        for (int t = 0; t < 10000; ++t) {
            const auto gm = response_matrix(w(rng), NetworkParams(k(rng), c(rng)));
            worst = std::max(worst, (gm * gm.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff());
        }
        return worst;
    }));

    add(detail::run_check("identical pulses: T_LL == T_RR", "channel-symmetry", 1e-12, true, [&](std::string&) {
        std::uniform_real_distribution<double> w(-6, 6);
        const NetworkParams p(1.5, 0.0);
        double worst = 0.0;
        for (int t = 0; t < (o.quick ? 50 : 200); ++t) {
            const auto a = point_amplitudes(w(rng), w(rng), same, p, cfg, {o.threads, true, o.kernel});
            worst = std::max(worst, std::abs(a.ll - a.rr) / std::max(std::abs(a.ll), 1e-300));
        }
        return worst;
    }));

    add(detail::run_check("single-photon norm", "unitarity", 1e-6, true, [&](std::string&) {
        double worst = 0.0;
        for (double g : {0.5, 1.0, 2.0}) {
            for (double k : {0.1, 1.0, 10.0}) {
                const auto pr = single_photon_probabilities(PulseSpec::lorentzian(g, 0.0), NetworkParams(k, 0.0),
                                                            FrequencyGrid(-5000 * g, 5000 * g, 1001), cfg);
                worst = std::max(worst, std::abs(pr.p_left + pr.p_right - 1.0));
            }
        }
        return worst;
    }));

    const FrequencyGrid conservation_grid = o.quick ? FrequencyGrid(-40, 40, 401) : FrequencyGrid(-40, 40, 801);
    add(detail::run_check("conservation (gamma=1, kappa=1.5, omega_c=0)", "conservation", 2e-3, true,
                          [&](std::string& d) {
                              const auto p = probabilities(same, NetworkParams(1.5, 0.0), conservation_grid, cfg,
                                                           {o.threads});
                              d = "est_error " + io::format_double(p.est_error);
                              return std::abs(p.total - 1.0);
                          }));
    if (o.quick) return rep;

    add(detail::run_check("conservation (gamma=1, kappa=1.5, omega_c=3)", "conservation", 2e-3, true,
                          [&](std::string&) {
                              return conservation_check(same, NetworkParams(1.5, 3.0), conservation_grid, cfg,
                                                        {o.threads});
                          }));
    add(detail::run_check("conservation (gamma_l=1, gamma_r=2)", "conservation", 5e-3, true, [&](std::string&) {
        const TwoPhotonInput in(unit, PulseSpec::lorentzian(2.0, 0.0));
        return conservation_check(in, NetworkParams(1.5, 0.0), conservation_grid, cfg, {o.threads});
    }));

    add(detail::run_check("exchange identity T_RR*(w1,w2) T_RR(w2,w1) = |T_RR|^2", "channel-symmetry", 1e-8, true,
                          [&](std::string&) {
                              std::uniform_real_distribution<double> w(-6, 6);
                              const NetworkParams p(1.5, 0.0);
                              double worst = 0.0;
                              for (int t = 0; t < 100; ++t) {
                                  const double w1 = w(rng), w2 = w(rng);
                                  const cplx a = t_rr(w1, w2, same, p, cfg), b = t_rr(w2, w1, same, p, cfg);
                                  worst = std::max(worst, std::abs(std::conj(a) * b - std::norm(a)));
                              }
                              return worst;
                          }));

    add(detail::run_check("general and identical-pulse T_LR agree", "formula-mismatch", 1e-12, true,
                          [&](std::string&) {
                              std::uniform_real_distribution<double> w(-6, 6);
                              const NetworkParams p(1.5, 0.0);
                              double worst = 0.0;
                              for (int t = 0; t < 100; ++t) {
                                  const double w1 = w(rng), w2 = w(rng);
                                  const cplx a = t_lr(w1, w2, same, p, cfg);
                                  const cplx b = t_lr_identical(w1, w2, unit, p, cfg);
                                  worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), 1e-300));
                              }
                              return worst;
                          }));

    const FrequencyGrid hom_grid(-100, 100, 1001);
    std::vector<HomScanRow> rows;
    add(detail::run_check("HOM: P_LR strictly decreasing (omega_c = 2 kappa)", "hom-monotonicity", 0.0, false,
                          [&](std::string& d) {
                              rows = hom_scan({0.5, 1, 2, 5, 10, 20}, 2.0, unit, hom_grid, cfg, {o.threads});
                              double min_step = std::numeric_limits<double>::infinity();
                              for (std::size_t k = 1; k < rows.size(); ++k) {
                                  min_step = std::min(min_step, rows[k - 1].p_lr - rows[k].p_lr);
                              }
                              d = "P_LR(kappa=20) = " + io::format_double(rows.back().p_lr);
                              return min_step > 0.0 ? min_step : -1.0;
                          }));
    add(detail::run_check("HOM: P_LR(kappa=20) < 0.1", "hom-limit", 0.1, true, [&](std::string&) {
        if (rows.empty()) throw Error("HOM scan did not run");
        return rows.back().p_lr;
    }));
    add(detail::run_check("HOM: P_LR(kappa=100, omega_c=0) >= 0.99", "hom-limit", 0.99, false, [&](std::string&) {
        return hom_scan({100.0}, 0.0, unit, hom_grid, cfg, {o.threads}).front().p_lr;
    }));

    const FrequencyGrid limit_grid(-40, 40, 801);
    add(detail::run_check("kappa -> 0: int |T_LR - xiL xiR|^2", "limit", 1e-3, true, [&](std::string&) {
        auto xi = [&](double w) { return pulse_amplitude(unit, w); };
        return lr_distance(same, NetworkParams(1e-4, 0.0), limit_grid, cfg, xi, xi, {o.threads}).value;
    }));
    add(detail::run_check("kappa -> inf: int |T_LR - xiL(w2) xiR(w1)|^2", "limit", 1e-2, true, [&](std::string&) {
        const PulseSpec right = PulseSpec::lorentzian(2.0, 0.0);
        const TwoPhotonInput in(unit, right);
        return lr_distance(
                   in, NetworkParams(100.0, 0.0), limit_grid, cfg, [&](double w) { return pulse_amplitude(right, w); },
                   [&](double w) { return pulse_amplitude(unit, w); }, {o.threads})
            .value;
    }));
    return rep;
}

inline nlohmann::json to_json(const VerifyReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"value", c.value},
                          {"threshold", c.threshold},
                          {"comparison", c.upper_bound ? "<=" : ">="},
                          {"margin", c.margin()},
                          {"failure", c.passed ? "" : c.failure},
                          {"detail", c.detail}});
    }
    return {{"mode", r.mode}, {"passed", r.passed()}, {"checks", checks}};
}

}  // namespace photonsim
