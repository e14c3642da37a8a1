// Runs the built photonsim binary and checks outputs and exit codes.

#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

std::string tmp(const std::string& name) {
    std::filesystem::create_directories(PHOTONSIM_TEST_TMP);
    return std::string(PHOTONSIM_TEST_TMP) + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Result run(const std::string& args) {
    static int counter = 0;
    const std::string tag = "cli" + std::to_string(::getpid()) + "_" + std::to_string(counter++);
    const std::string out = tmp(tag + ".out"), err = tmp(tag + ".err");
    const std::string cmd = std::string("\"") + PHOTONSIM_CLI + "\" " + args + " >\"" + out + "\" 2>\"" + err + "\"";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

}  // namespace

TEST(Cli, VersionAndHelp) {
    EXPECT_EQ(run("--version").code, 0);
    EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, ValidationErrorsExitTwo) {
    EXPECT_EQ(run("probabilities --kappa -1").code, 2);
    EXPECT_EQ(run("probabilities --gamma 0").code, 2);
    EXPECT_EQ(run("amplitudes --grid 1:2").code, 2);
    EXPECT_EQ(run("hom --kappas 2,1").code, 2);
    EXPECT_EQ(run("hom --kappas 1,x").code, 2);
    EXPECT_EQ(run("amplitudes --channel xy").code, 2);
    EXPECT_EQ(run("probabilities --no-such-flag").code, 2);
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("single --pulse-csv " + tmp("missing.csv")).code, 2);
}

TEST(Cli, NonConvergenceExitsThree) {
    const Result r = run("--max-subdivisions 1 --tol 1e-14 --abs-tol 1e-300 amplitudes --grid -6:6:5");
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("node ("), std::string::npos) << r.err;
}

TEST(Cli, SchmidtOfEmptyChannelExitsTwo) {
    const Result r = run("schmidt --channel ll --kappa 0");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("zero"), std::string::npos) << r.err;
}

TEST(Cli, ProbabilitiesJson) {
    const Result r = run("probabilities --gamma 1 --kappa 1.5 --omega-c 0");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["total"].get<double>(), 1.0, 2e-3);
    const Result z = run("probabilities --kappa 0 --gamma 1");
    ASSERT_EQ(z.code, 0) << z.err;
    EXPECT_EQ(nlohmann::json::parse(z.out)["p_lr"].get<double>(), 1.0);
}

TEST(Cli, SingleReflectsAtStrongCoupling) {
    const Result r = run("single --gamma 1 --omega-o 0 --kappa 100 --omega-c 0");
    ASSERT_EQ(r.code, 0) << r.err;
    // 2 kappa / (2 kappa + gamma / 2): the far tails pass straight through
    EXPECT_NEAR(nlohmann::json::parse(r.out)["p_right"].get<double>(), 200.0 / 200.5, 1e-6);
    const Result z = run("single --kappa 0");
    ASSERT_EQ(z.code, 0) << z.err;
    EXPECT_EQ(nlohmann::json::parse(z.out)["p_left"].get<double>(), 1.0);
}

TEST(Cli, SingleAcceptsSampledPulse) {
    const std::string path = tmp("single_pulse.csv");
    {
        std::ofstream f(path);
        f << "nu,re,im\n";
        for (int k = -200; k <= 200; ++k) {
            const double nu = 0.05 * k;
            f << nu << ',' << std::exp(-nu * nu) << ",0\n";
        }
    }
    const Result r = run("single --pulse-csv " + path + " --kappa 1");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(nlohmann::json::parse(r.out)["norm"].get<double>(), 1.0, 1e-4);
}

TEST(Cli, AmplitudesAreDeterministic) {
    const std::string a = tmp("amp_a.csv"), b = tmp("amp_b.csv");
    ASSERT_EQ(run("amplitudes --channel lr --kappa 1.5 --grid -6:6:31 --output " + a).code, 0);
    ASSERT_EQ(run("amplitudes --channel lr --kappa 1.5 --grid -6:6:31 --threads 3 --output " + b).code, 0);
    const std::string text = slurp(a);
    EXPECT_EQ(text, slurp(b));
    EXPECT_EQ(text.rfind("# photonsim", 0), 0u);
    EXPECT_NE(text.find("omega1,omega2,re,im,abs2\n"), std::string::npos);
}

TEST(Cli, DecoupledLeftChannelIsZero) {
    const Result r = run("amplitudes --channel ll --kappa 0 --grid -6:6:11");
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'o') continue;
        EXPECT_EQ(line.substr(line.rfind(',') + 1), "0") << line;
        ++rows;
    }
    EXPECT_EQ(rows, 121);
}

TEST(Cli, ConfigRoundTripReproducesTheRun) {
    const std::string cfg = tmp("hom.json"), a = tmp("hom_a.csv"), b = tmp("hom_b.csv");
    ASSERT_EQ(run("--save-config " + cfg + " --output " + a + " hom --ratio 2 --kappas 0.5,1 --grid -40:40:201").code, 0);
    // the saved config carries the output path; override it
    ASSERT_EQ(run("--config " + cfg + " --output " + b + " hom").code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_EQ(run("--config " + cfg + " probabilities").code, 2);
}

TEST(Cli, ConfigRejectsUnknownKeys) {
    const std::string cfg = tmp("bad.json");
    std::ofstream(cfg) << R"({"kapa": 1.0})";
    EXPECT_EQ(run("--config " + cfg + " probabilities").code, 2);
}

TEST(Cli, HomNeedsIdenticalPulses) { EXPECT_EQ(run("hom --gamma-l 1 --gamma-r 2 --kappas 1").code, 2); }

TEST(Cli, VerifyQuickPasses) {
    const std::string report = tmp("verify.json");
    const Result r = run("verify --quick --output " + report);
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
    const auto j = nlohmann::json::parse(slurp(report));
    EXPECT_TRUE(j["passed"].get<bool>());
}

TEST(Cli, VerifyCatchesASignFlippedKernel) {
    const Result r = run("verify --quick --inject-fault g-sign");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("FAIL"), std::string::npos);
    EXPECT_NE(r.out.find("oracle-mismatch"), std::string::npos) << r.out;
}
