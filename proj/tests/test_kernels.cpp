#include "photonsim/kernels.hpp"
#include "photonsim/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace photonsim;

namespace {

// Straight transcription of the kernel, one complex division at the end.
cplx g_reference(double w1, double w2, double n1, double n2, double k, double wc) {
    const cplx I(0, 1);
    const cplx s = n1 + n2 + 2 * wc;
    const cplx num = -I * std::pow(k, 1.5) / pi * (s - 4.0 * I * k) * s;
    const cplx den = (w1 + wc + 2.0 * I * k) * (w2 + wc - 2.0 * I * k) * (n1 + wc - 2.0 * I * k) *
                     (n2 + wc - 2.0 * I * k) * (s - 2.0 * I * k);
    return num / den;
}

}  // namespace

TEST(Theta, ResonanceIsAMirror) {
    const auto r = theta(-2.0, NetworkParams(1.0, 2.0));
    EXPECT_NEAR(std::abs(r.theta1), 0.0, 1e-15);
    EXPECT_NEAR(r.theta2.real(), -1.0, 1e-15);
    EXPECT_NEAR(r.theta2.imag(), 0.0, 1e-15);
}

TEST(Theta, DecoupledLimit) {
    for (double w : {5.0, 0.0, -3.0}) {
        const auto r = theta(w, NetworkParams(0.0, 3.0));
        EXPECT_EQ(r.theta1, cplx(1, 0));
        EXPECT_EQ(r.theta2, cplx(0, 0));
    }
}

TEST(Theta, HandRationalized) {
    const auto r = theta(1.5, NetworkParams(1.0, 0.5));
    EXPECT_NEAR(std::abs(r.theta1 - cplx(0.5, 0.5)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(r.theta2 - cplx(-0.5, 0.5)), 0.0, 1e-15);
}

TEST(Theta, RowInvariants) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> w(-100, 100), k(1e-4, 100), c(-30, 30);
    for (int t = 0; t < 2000; ++t) {
        const auto r = theta(w(rng), NetworkParams(k(rng), c(rng)));
        EXPECT_NEAR(std::norm(r.theta1) + std::norm(r.theta2), 1.0, 1e-12);
        EXPECT_NEAR(std::abs(r.theta1 * std::conj(r.theta2) + r.theta2 * std::conj(r.theta1)), 0.0, 1e-12);
    }
}

TEST(ResponseMatrix, Unitary) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> w(-100, 100), k(1e-4, 100), c(-30, 30);
    for (int t = 0; t < 2000; ++t) {
        const auto g = response_matrix(w(rng), NetworkParams(k(rng), c(rng)));
        EXPECT_LE((g * g.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Theta, ContinuousAcrossResonance) {
    const NetworkParams p(0.7, 1.3);
    for (double eps : {1e-3, 1e-5, 1e-7}) {
        const auto a = theta(-1.3 - eps, p), b = theta(-1.3 + eps, p);
        // |d theta / d omega| <= 1/(2 kappa) on the real axis
        EXPECT_LE(std::abs(a.theta1 - b.theta1), 2.0 * eps / (2.0 * 0.7) + 1e-15);
        EXPECT_LE(std::abs(a.theta2 - b.theta2), 2.0 * eps / (2.0 * 0.7) + 1e-15);
    }
}

TEST(GKernel, ZeroAtZeroCoupling) {
    EXPECT_EQ(g_kernel(0.3, 1.0, -2.0, 4.0, NetworkParams(0.0, 1.0)), cplx(0, 0));
}

TEST(GKernel, ZeroWhenNuSumCancelsDetuning) {
    EXPECT_EQ(g_kernel(0.2, -0.4, 1.0, -1.0, NetworkParams(1.0, 0.0)), cplx(0, 0));
    EXPECT_EQ(g_kernel(0.2, -0.4, 2.5, -0.5, NetworkParams(1.0, -1.0)), cplx(0, 0));
}

TEST(GKernel, AgreesWithReferenceTranscription) {
    const cplx a = g_kernel(1, 1, 1, 1, NetworkParams(1.0, 0.0));
    const cplx b = g_reference(1, 1, 1, 1, 1.0, 0.0);
    EXPECT_LE(std::abs(a - b), 1e-14);

    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> w(-20, 20), k(0.01, 20), c(-10, 10);
    for (int t = 0; t < 1000; ++t) {
        const double w1 = w(rng), w2 = w(rng), n1 = w(rng), n2 = w(rng), kk = k(rng), cc = c(rng);
        const cplx x = g_kernel(w1, w2, n1, n2, NetworkParams(kk, cc));
        const cplx y = g_reference(w1, w2, n1, n2, kk, cc);
        EXPECT_LE(std::abs(x - y), 1e-12 * std::abs(y) + 1e-300);
    }
}

TEST(GKernel, ConjugationUnderFullNegation) {
    // Negating every frequency and omega_c conjugates g.
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> w(-20, 20), k(0.01, 20), c(-10, 10);
    for (int t = 0; t < 500; ++t) {
        const double w1 = w(rng), w2 = w(rng), n1 = w(rng), n2 = w(rng), kk = k(rng), cc = c(rng);
        const cplx a = g_kernel(w1, w2, n1, n2, NetworkParams(kk, cc));
        const cplx b = g_kernel(-w1, -w2, -n1, -n2, NetworkParams(kk, -cc));
        EXPECT_LE(std::abs(b - std::conj(a)), 1e-12 * std::abs(a));
    }
}

TEST(GKernel, FiniteFarInTheTails) {
    const NetworkParams p(1.0, 0.0);
    for (double x : {1e3, 1e5, 1e6}) {
        const cplx v = g_kernel(x, -x, x, x, p);
        EXPECT_TRUE(std::isfinite(v.real()) && std::isfinite(v.imag()));
        EXPECT_LE(std::abs(v - g_reference(x, -x, x, x, 1.0, 0.0)), 1e-12 * std::abs(v));
    }
}

TEST(SinglePhoton, DecoupledIsPassThrough) {
    const auto pulse = PulseSpec::lorentzian(1.0, 0.0);
    const FrequencyGrid g(-5000, 5000, 2001);
    const auto out = single_photon_output(pulse, g, NetworkParams(0.0, 0.0));
    for (std::size_t k = 0; k < g.size(); ++k) {
        EXPECT_EQ(out.eta_L[k], pulse_amplitude(pulse, g.node(k)));
        EXPECT_EQ(out.eta_R[k], cplx(0, 0));
    }
}

TEST(SinglePhoton, OutputIsThetaTimesInput) {
    const auto pulse = PulseSpec::lorentzian(2.0, 0.5);
    const NetworkParams p(1.2, -0.3);
    const FrequencyGrid g(-20000, 20000, 801);
    const auto out = single_photon_output(pulse, g, p);
    for (std::size_t k = 0; k < g.size(); k += 37) {
        const auto r = theta(g.node(k), p);
        const cplx xi = pulse_amplitude(pulse, g.node(k));
        EXPECT_EQ(out.eta_L[k], r.theta1 * xi);
        EXPECT_EQ(out.eta_R[k], r.theta2 * xi);
        EXPECT_NEAR(std::norm(out.eta_L[k]) + std::norm(out.eta_R[k]), std::norm(xi), 1e-15);
    }
}

TEST(SinglePhoton, RequiresWindowCoveringThePulse) {
    EXPECT_THROW(single_photon_output(PulseSpec::lorentzian(1.0, 0.0), FrequencyGrid(-40, 40, 801),
                                      NetworkParams(1.0, 0.0)),
                 WindowTooNarrow);
}
