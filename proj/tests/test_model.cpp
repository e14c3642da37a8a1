#include "photonsim/model.hpp"
#include "photonsim/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace photonsim;

TEST(NetworkParams, AlphaIsMinusIOmegaCMinusKappa) {
    const NetworkParams p(1.5, 0.75, 0.2);
    EXPECT_EQ(p.alpha(), cplx(-1.5, -0.75));
    EXPECT_EQ(p.omega_o(), 0.2);
}

TEST(NetworkParams, RejectsNegativeOrNonFinite) {
    EXPECT_THROW(NetworkParams(-1e-9, 0.0), ValidationError);
    EXPECT_THROW(NetworkParams(1.0, std::nan("")), ValidationError);
    EXPECT_THROW(NetworkParams(INFINITY, 0.0), ValidationError);
    EXPECT_NO_THROW(NetworkParams(0.0, 0.0));
}

TEST(FrequencyGrid, Validation) {
    EXPECT_THROW(FrequencyGrid(0, 1, 2), ValidationError);
    EXPECT_THROW(FrequencyGrid(1, 1, 5), ValidationError);
    EXPECT_THROW(FrequencyGrid(2, 1, 5), ValidationError);
    const FrequencyGrid g(-1, 1, 5);
    EXPECT_DOUBLE_EQ(g.spacing(), 0.5);
    EXPECT_EQ(g.node(0), -1.0);
    EXPECT_EQ(g.node(4), 1.0);
    EXPECT_EQ(g.size(), 5u);
}

TEST(FrequencyGrid, SymmetricWindowGivesNegatedNodes) {
    const FrequencyGrid g(-6, 6, 121);
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(g.node(k), -g.node(g.size() - 1 - k));
    EXPECT_EQ(g.node(60), 0.0);
}

TEST(FrequencyGrid, TrapezoidWeights) {
    const FrequencyGrid g(0, 2, 5);
    EXPECT_DOUBLE_EQ(g.weight(0), 0.25);
    EXPECT_DOUBLE_EQ(g.weight(2), 0.5);
    EXPECT_DOUBLE_EQ(g.weight(4), 0.25);
}

TEST(PulseAmplitude, LorentzianAtCentre) {
    const auto p = PulseSpec::lorentzian(1.0, 0.0);
    const cplx v = pulse_amplitude(p, 0.0);
    EXPECT_NEAR(v.real(), -2.0 / std::sqrt(2.0 * pi), 1e-15);
    EXPECT_EQ(v.imag(), 0.0);
    EXPECT_NEAR(v.real(), -0.7979, 1e-4);
}

TEST(PulseAmplitude, HandEvaluation) {
    // sqrt(2) / (i*0 - 1) / sqrt(2 pi) = -1/sqrt(pi)
    const cplx v = pulse_amplitude(PulseSpec::lorentzian(2.0, 1.0), -1.0);
    EXPECT_NEAR(v.real(), -1.0 / std::sqrt(pi), 1e-15);
    EXPECT_NEAR(v.real(), -0.5642, 1e-4);
    EXPECT_NEAR(v.imag(), 0.0, 1e-16);
}

TEST(PulseAmplitude, LineShapeMatchesLorentzian) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> nu(-100, 100), g(0.1, 10), wo(-5, 5);
    for (int t = 0; t < 500; ++t) {
        const double gamma = g(rng), o = wo(rng), x = nu(rng);
        const double expect = gamma / (2.0 * pi) / ((x + o) * (x + o) + gamma * gamma / 4.0);
        EXPECT_NEAR(std::norm(pulse_amplitude(PulseSpec::lorentzian(gamma, o), x)) / expect, 1.0, 1e-12);
    }
}

TEST(PulseAmplitude, DecaysMonotonically) {
    const auto p = PulseSpec::lorentzian(1.0, 0.0);
    double prev = std::abs(pulse_amplitude(p, 0.01));
    for (double x = 0.02; x < 1e4; x *= 1.3) {
        const double a = std::abs(pulse_amplitude(p, x));
        const double b = std::abs(pulse_amplitude(p, -x));
        EXPECT_LT(a, prev);
        EXPECT_NEAR(a, b, 1e-15);
        prev = a;
    }
}

TEST(PulseSpec, RejectsBadGamma) {
    EXPECT_THROW(PulseSpec::lorentzian(0.0, 0.0), ValidationError);
    EXPECT_THROW(PulseSpec::lorentzian(-1.0, 0.0), ValidationError);
}

TEST(PulseNorm, UnitLorentzian) {
    EXPECT_NEAR(pulse_norm_sq(PulseSpec::lorentzian(1.0, 0.0), FrequencyGrid(-200, 200, 20001)), 1.0, 1e-4);
    EXPECT_NEAR(pulse_norm_sq(PulseSpec::lorentzian(4.0, 0.0), FrequencyGrid(-400, 400, 40001)), 1.0, 1e-4);
}

TEST(PulseNorm, WindowTooNarrow) {
    EXPECT_THROW(pulse_norm_sq(PulseSpec::lorentzian(1.0, 0.0), FrequencyGrid(-10, 10, 201)), WindowTooNarrow);
}

TEST(PulseNorm, BoundedForWideWindows) {
    for (double gamma : {0.5, 1.0, 3.0}) {
        for (double wo : {-2.0, 0.0, 1.5}) {
            const double w = 100.0 * gamma;
            const double n = pulse_norm_sq(PulseSpec::lorentzian(gamma, wo), FrequencyGrid(-wo - w, -wo + w, 80001));
            EXPECT_GE(n, 0.99);
            EXPECT_LE(n, 1.0 + 1e-9);
        }
    }
}

TEST(PulseTail, ArctanClosedForm) {
    // mass of a unit Lorentzian outside [-L, L] is 1 - (2/pi) atan(2L/gamma)
    const auto p = PulseSpec::lorentzian(1.0, 0.0);
    EXPECT_NEAR(pulse_tail_mass(p, -40, 40), 1.0 - 2.0 / pi * std::atan(80.0), 1e-15);
}

TEST(SampledPulse, SingleNonzeroSampleIsRenormalized) {
    const auto p = PulseSpec::sampled({0, 1, 2}, {{1, 0}, {0, 0}, {0, 0}});
    const auto& s = p.as_sampled();
    // |interpolant|^2 = (1 - x)^2 on [0, 1] integrates to 1/3.
    EXPECT_NEAR(s.applied_scale(), std::sqrt(3.0), 1e-14);
    EXPECT_NEAR(s.mass(0, 2), 1.0, 1e-14);
    EXPECT_NEAR(pulse_norm_sq(p, FrequencyGrid(0, 2, 3)), 1.0, 1e-6);
}

TEST(SampledPulse, Validation) {
    EXPECT_THROW(PulseSpec::sampled({0, 0, 1}, {{1, 0}, {1, 0}, {1, 0}}), NonMonotoneGrid);
    EXPECT_THROW(PulseSpec::sampled({0, 1, 2}, {{0, 0}, {0, 0}, {0, 0}}), ZeroNorm);
    EXPECT_THROW(PulseSpec::sampled({0, 1}, {{1, 0}, {1, 0}}), ValidationError);
    EXPECT_THROW(PulseSpec::sampled({0, 1, 2}, {{1, 0}, {1, 0}}), ValidationError);
}

TEST(SampledPulse, InterpolatesLinearlyAndVanishesOutside) {
    const auto p = PulseSpec::sampled({0, 1, 3}, {{1, 0}, {3, 0}, {1, 2}});
    const double s = p.as_sampled().applied_scale();
    EXPECT_NEAR(pulse_amplitude(p, 0.5).real(), 2.0 * s, 1e-14);
    EXPECT_NEAR(pulse_amplitude(p, 2.0).real(), 2.0 * s, 1e-14);
    EXPECT_NEAR(pulse_amplitude(p, 2.0).imag(), 1.0 * s, 1e-14);
    EXPECT_EQ(pulse_amplitude(p, -0.1), cplx(0, 0));
    EXPECT_EQ(pulse_amplitude(p, 3.1), cplx(0, 0));
}

TEST(SampledPulse, TabulatedLorentzianMatchesClosedForm) {
    const auto lor = PulseSpec::lorentzian(1.0, 0.0);
    const auto tab = tabulate_pulse(lor, FrequencyGrid(-50, 50, 4001));
    // Renormalization divides by the square root of the in-window mass.
    const double inside = 1.0 - pulse_tail_mass(lor, -50, 50);
    const cplx expect = pulse_amplitude(lor, 0.5) / std::sqrt(inside);
    EXPECT_LE(std::abs(pulse_amplitude(tab, 0.5) - expect), 1e-3);
}

TEST(TwoPhotonInput, IdenticalFlag) {
    const auto a = PulseSpec::lorentzian(1.0, 0.0);
    EXPECT_TRUE(TwoPhotonInput(a, PulseSpec::lorentzian(1.0, 0.0)).identical());
    EXPECT_FALSE(TwoPhotonInput(a, PulseSpec::lorentzian(2.0, 0.0)).identical());
    EXPECT_FALSE(TwoPhotonInput(a, PulseSpec::lorentzian(1.0, 0.1)).identical());
    EXPECT_TRUE(TwoPhotonInput::same(a).identical());
}
