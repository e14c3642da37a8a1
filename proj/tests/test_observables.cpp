#include "photonsim/observables.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace photonsim;

namespace {

const PulseSpec unit = PulseSpec::lorentzian(1.0, 0.0);
const FrequencyGrid wide(-40, 40, 801);

double reflection_probability(double gamma, double omega_o, double kappa, double omega_c) {
    const double s = 2 * kappa + gamma / 2;
    return 2 * kappa * s / ((omega_c - omega_o) * (omega_c - omega_o) + s * s);
}

}  // namespace

TEST(Probabilities, DecoupledLoopPassesBothPhotons) {
    const auto p = probabilities(TwoPhotonInput::same(unit), NetworkParams(0.0, 0.0), wide, QuadConfig{});
    EXPECT_EQ(p.p_ll, 0.0);
    EXPECT_EQ(p.p_lr, 1.0);
    EXPECT_EQ(p.p_rr, 0.0);
}

TEST(Probabilities, ConservedForIdenticalPulses) {
    for (double wc : {0.0, 3.0}) {
        const auto p = probabilities(TwoPhotonInput::same(unit), NetworkParams(1.5, wc), wide, QuadConfig{});
        EXPECT_LE(std::abs(p.total - 1.0), 2e-3) << "omega_c=" << wc;
        EXPECT_LE(std::abs(p.total - 1.0), p.est_error);
        EXPECT_EQ(p.p_ll, p.p_rr);
        for (double v : {p.p_ll, p.p_lr}) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
}

TEST(Probabilities, ConservedForDistinctPulses) {
    const TwoPhotonInput in(unit, PulseSpec::lorentzian(2.0, 0.0));
    const auto p = probabilities(in, NetworkParams(1.5, 0.0), wide, QuadConfig{});
    EXPECT_LE(std::abs(p.total - 1.0), 5e-3);
}

TEST(Probabilities, ConservedAcrossParameterGrid) {
    for (double k : {0.3, 1.5, 5.0}) {
        for (double wc : {-2.0, 0.0, 3.0}) {
            const double c = conservation_check(TwoPhotonInput::same(unit), NetworkParams(k, wc), wide, QuadConfig{});
            EXPECT_LE(c, 2e-3) << "kappa=" << k << " omega_c=" << wc;
        }
    }
}

TEST(Probabilities, ShortcutMatchesGeneralForm) {
    const TwoPhotonInput in = TwoPhotonInput::same(unit);
    for (double wc : {0.0, 3.0}) {
        const NetworkParams p(1.5, wc);
        const auto a = probabilities(in, p, wide, QuadConfig{}, {0, true, nullptr, ProbabilityMethod::Shortcut});
        const auto b = probabilities(in, p, wide, QuadConfig{}, {0, true, nullptr, ProbabilityMethod::General});
        EXPECT_LE(std::abs(a.p_ll - b.p_rr), 1e-6);
        EXPECT_LE(std::abs(a.p_ll - b.p_ll), 1e-6);
        EXPECT_EQ(a.p_lr, b.p_lr);
    }
    const TwoPhotonInput distinct(unit, PulseSpec::lorentzian(2.0, 0.0));
    EXPECT_THROW(probabilities(distinct, NetworkParams(1.5, 0.0), wide, QuadConfig{},
                               {0, true, nullptr, ProbabilityMethod::Shortcut}),
                 ValidationError);
}

TEST(Probabilities, GlobalPhaseDoesNotMatter) {
    const FrequencyGrid support(-30, 30, 121);
    const auto tab = tabulate_pulse(unit, support);
    const auto& s = tab.as_sampled();
    std::vector<cplx> rotated(s.values());
    for (auto& v : rotated) v *= std::polar(1.0, 0.9);
    const auto phased = PulseSpec::sampled(s.nodes(), rotated);
    const NetworkParams p(1.5, 0.0);
    const auto a = probabilities(TwoPhotonInput::same(tab), p, support, QuadConfig{});
    const auto b = probabilities(TwoPhotonInput::same(phased), p, support, QuadConfig{});
    EXPECT_NEAR(a.p_ll, b.p_ll, 1e-10);
    EXPECT_NEAR(a.p_lr, b.p_lr, 1e-10);
    EXPECT_NEAR(a.p_rr, b.p_rr, 1e-10);
}

TEST(Probabilities, NarrowWindowIsRejected) {
    EXPECT_THROW(probabilities(TwoPhotonInput::same(unit), NetworkParams(1.5, 0.0), FrequencyGrid(-3, 3, 61),
                               QuadConfig{}),
                 WindowTooNarrow);
}

TEST(Probabilities, DroppingConvolutionLosesNothingFromTheLinearPart) {
    // Without the nonlinear term the three channels sum to one exactly.
    const auto p = probabilities(TwoPhotonInput::same(unit), NetworkParams(1.5, 0.0), wide, QuadConfig{},
                                 {0, false});
    EXPECT_NEAR(p.total, 1.0, 1e-9);
}

TEST(LrDistance, WeakCouplingLeavesPhotonsAlone) {
    const TwoPhotonInput in = TwoPhotonInput::same(unit);
    auto xi = [](double w) { return pulse_amplitude(unit, w); };
    const auto d = lr_distance(in, NetworkParams(1e-4, 0.0), wide, QuadConfig{}, xi, xi);
    EXPECT_LE(d.value, 1e-3);
    EXPECT_GE(d.value, 0.0);
    // A clearly different target is far away.
    auto other = [](double w) { return pulse_amplitude(PulseSpec::lorentzian(1.0, 3.0), w); };
    EXPECT_GT(lr_distance(in, NetworkParams(1e-4, 0.0), wide, QuadConfig{}, other, xi).value, 0.5);
}

TEST(HomScan, CoincidencesFallWithCoupling) {
    const auto rows = hom_scan({0.5, 1.0, 2.0}, 2.0, unit, wide, QuadConfig{});
    ASSERT_EQ(rows.size(), 3u);
    for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_LT(rows[k].p_lr, rows[k - 1].p_lr);
    for (const auto& r : rows) {
        EXPECT_EQ(r.omega_c, 2.0 * r.kappa);
        EXPECT_LE(std::abs(r.p_ll - r.p_rr), 1e-6);
    }
}

TEST(HomScan, Validation) {
    EXPECT_THROW(hom_scan({}, 2.0, unit, wide, QuadConfig{}), ValidationError);
    EXPECT_THROW(hom_scan({1.0, 0.5}, 2.0, unit, wide, QuadConfig{}), ValidationError);
    EXPECT_THROW(hom_scan({0.0, 1.0}, 2.0, unit, wide, QuadConfig{}), ValidationError);
    EXPECT_THROW(hom_scan({1.0, 1.0}, 2.0, unit, wide, QuadConfig{}), ValidationError);
    EXPECT_THROW(hom_scan({1.0}, std::nan(""), unit, wide, QuadConfig{}), ValidationError);
}

TEST(Schmidt, ProductStateHasZeroEntropy) {
    const FrequencyGrid g(-5, 5, 41);
    Eigen::VectorXcd a(41), b(41);
    for (int k = 0; k < 41; ++k) {
        a(k) = std::exp(-g.node(k) * g.node(k));
        b(k) = cplx(1.0 / (1.0 + g.node(k) * g.node(k)), g.node(k));
    }
    const auto rep = schmidt_report(a * b.transpose(), g.spacing(), g.spacing());
    EXPECT_LE(rep.entropy, 1e-10);
    EXPECT_NEAR(rep.schmidt_number, 1.0, 1e-10);
    ASSERT_FALSE(rep.singular_values.empty());
    EXPECT_NEAR(rep.singular_values[0], 1.0, 1e-12);
}

TEST(Schmidt, MaximallyMixedDiagonal) {
    const auto rep = schmidt_report(Eigen::MatrixXcd::Identity(8, 8), 0.1, 0.1);
    EXPECT_NEAR(rep.entropy, 3.0, 1e-12);
    EXPECT_NEAR(rep.schmidt_number, 8.0, 1e-10);
}

TEST(Schmidt, ZeroAmplitudeIsAnError) {
    EXPECT_THROW(schmidt_report(Eigen::MatrixXcd::Zero(4, 4), 1, 1), ZeroAmplitude);
    const auto amp = amplitude_grid(Channel::LL, FrequencyGrid(-6, 6, 31), TwoPhotonInput::same(unit),
                                    NetworkParams(0.0, 0.0), QuadConfig{});
    EXPECT_THROW(schmidt_report(amp), ZeroAmplitude);
}

TEST(Schmidt, ScaleAndPhaseInvariant) {
    const auto amp = amplitude_grid(Channel::LR, FrequencyGrid(-6, 6, 61), TwoPhotonInput::same(unit),
                                    NetworkParams(1.5, 0.0), QuadConfig{});
    const auto a = schmidt_report(amp);
    const auto b = schmidt_report(amp.values * std::polar(1e-3, 2.0), amp.grid1.spacing(), amp.grid2.spacing());
    EXPECT_NEAR(a.entropy, b.entropy, 1e-10);
}

TEST(Schmidt, FrozenEntropies) {
    const FrequencyGrid g(-6, 6, 121);
    struct Case {
        double kappa, omega_c, entropy;
    };
    for (const Case c : {Case{1.5, 0.0, 0.2714}, Case{0.1, 0.0, 0.4311}, Case{1.5, 3.0, 1.431}}) {
        const auto amp = amplitude_grid(Channel::LR, g, TwoPhotonInput::same(unit), NetworkParams(c.kappa, c.omega_c),
                                        QuadConfig{});
        EXPECT_NEAR(schmidt_report(amp).entropy, c.entropy, 1e-3) << "kappa=" << c.kappa << " omega_c=" << c.omega_c;
    }
}

TEST(Schmidt, StableUnderRefinement) {
    const NetworkParams p(1.5, 0.0);
    const auto in = TwoPhotonInput::same(unit);
    const double a = schmidt_report(amplitude_grid(Channel::LR, FrequencyGrid(-6, 6, 121), in, p, QuadConfig{})).entropy;
    const double b = schmidt_report(amplitude_grid(Channel::LR, FrequencyGrid(-6, 6, 241), in, p, QuadConfig{})).entropy;
    EXPECT_LE(std::abs(a - b), 5e-2);
}

TEST(SinglePhoton, ProbabilitiesSumToOne) {
    const FrequencyGrid g(-20000, 20000, 1001);
    for (double gamma : {0.5, 1.0, 2.0}) {
        for (double k : {0.1, 1.0, 10.0}) {
            const auto r = single_photon_probabilities(PulseSpec::lorentzian(gamma, 0.0), NetworkParams(k, 0.0), g,
                                                       QuadConfig{});
            EXPECT_NEAR(r.p_left + r.p_right, 1.0, 1e-6) << "gamma=" << gamma << " kappa=" << k;
        }
    }
}

TEST(SinglePhoton, ReflectionMatchesClosedForm) {
    const FrequencyGrid g(-20000, 20000, 1001);
    for (double wc : {-1.0, 0.0, 2.5}) {
        for (double wo : {0.0, 0.7}) {
            const auto r = single_photon_probabilities(PulseSpec::lorentzian(1.0, wo), NetworkParams(0.8, wc, wo), g,
                                                       QuadConfig{});
            EXPECT_NEAR(r.p_right, reflection_probability(1.0, wo, 0.8, wc), 1e-8);
        }
    }
}

TEST(SinglePhoton, ResonantNarrowPulseIsReflected) {
    const auto r = single_photon_probabilities(PulseSpec::lorentzian(0.01, 0.0), NetworkParams(1.0, 0.0),
                                               FrequencyGrid(-200, 200, 1001), QuadConfig{});
    EXPECT_GE(r.p_right, 0.99);
}

TEST(SinglePhoton, DecoupledIsExactPassThrough) {
    const auto r = single_photon_probabilities(unit, NetworkParams(0.0, 0.0), FrequencyGrid(-20000, 20000, 101),
                                               QuadConfig{});
    EXPECT_EQ(r.p_left, 1.0);
    EXPECT_EQ(r.p_right, 0.0);
}

TEST(SinglePhoton, NarrowGridIsRejected) {
    EXPECT_THROW(single_photon_probabilities(unit, NetworkParams(1.0, 0.0), wide, QuadConfig{}), WindowTooNarrow);
}
