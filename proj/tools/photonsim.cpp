// photonsim - command-line front end
//
// Exit codes: 0 success, 1 verify failure or I/O error, 2 invalid input,
// 3 quadrature did not converge.

#include "photonsim/photonsim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

using namespace photonsim;
using nlohmann::json;

namespace {

template <class T>
void flag(CLI::App* app, const std::string& name, std::optional<T>& dst, const std::string& help) {
    app->add_option_function<T>(name, [&dst](const T& v) { dst = v; }, help);
}

void add_pulse_flags(CLI::App* app, RunConfig& f) {
    flag(app, "--gamma", f.gamma, "Lorentzian FWHM of both photons (default 1)");
    flag(app, "--omega-o", f.omega_o, "field central frequency; spectra peak at nu = -omega_o (default 0)");
    flag(app, "--gamma-l", f.gamma_l, "FWHM of the left-input photon");
    flag(app, "--gamma-r", f.gamma_r, "FWHM of the right-input photon");
    flag(app, "--pulse-csv", f.pulse_csv, "sampled spectrum (nu,re,im) for both photons");
    flag(app, "--pulse-csv-l", f.pulse_csv_l, "sampled spectrum of the left-input photon");
    flag(app, "--pulse-csv-r", f.pulse_csv_r, "sampled spectrum of the right-input photon");
}

void add_network_flags(CLI::App* app, RunConfig& f) {
    flag(app, "--kappa", f.kappa, "coupling rate (default 1.5)");
    flag(app, "--omega-c", f.omega_c, "detuning omega_o - omega_a (default 0)");
    flag(app, "--grid", f.grid, "frequency grid min:max:n");
}

std::string pulse_label(const PulseSpec& p, const std::optional<std::string>& path) {
    if (p.is_lorentzian()) {
        const auto& l = p.as_lorentzian();
        return "lorentzian gamma=" + io::format_double(l.gamma) + " omega_o=" + io::format_double(l.omega_o);
    }
    return "sampled path=" + path.value_or("?") + " samples=" + std::to_string(p.as_sampled().nodes().size());
}

json pulse_json(const PulseSpec& p, const std::optional<std::string>& path) {
    if (p.is_lorentzian()) {
        return {{"kind", "lorentzian"}, {"gamma", p.as_lorentzian().gamma}, {"omega_o", p.as_lorentzian().omega_o}};
    }
    return {{"kind", "sampled"}, {"path", path.value_or("")}, {"samples", p.as_sampled().nodes().size()},
            {"applied_scale", p.as_sampled().applied_scale()}};
}

json params_json(const NetworkParams& p) {
    return {{"kappa", p.kappa()}, {"omega_c", p.omega_c()}, {"omega_o", p.omega_o()}};
}

json grid_json(const FrequencyGrid& g) { return {{"min", g.min()}, {"max", g.max()}, {"n", g.size()}}; }

std::string metadata(const std::string& command, const RunConfig& c, const TwoPhotonInput& in,
                     const NetworkParams& p, const FrequencyGrid& g, const QuadConfig& q) {
    std::ostringstream s;
    s << "# photonsim " << version << '\n'
      << "# command=" << command << '\n'
      << "# kappa=" << io::format_double(p.kappa()) << " omega_c=" << io::format_double(p.omega_c())
      << " omega_o=" << io::format_double(p.omega_o()) << '\n'
      << "# pulse_left=" << pulse_label(in.left(), c.pulse_csv_l ? c.pulse_csv_l : c.pulse_csv) << '\n'
      << "# pulse_right=" << pulse_label(in.right(), c.pulse_csv_r ? c.pulse_csv_r : c.pulse_csv) << '\n'
      << "# grid=" << io::format_grid(g) << '\n'
      << "# rel_tol=" << io::format_double(q.rel_tol) << " abs_tol=" << io::format_double(q.abs_tol)
      << " max_subdivisions=" << q.max_subdivisions << '\n';
    return s.str();
}

void emit(const RunConfig& c, const std::string& text) {
    if (!c.output) {
        std::cout << text;
        return;
    }
    std::ofstream out(*c.output, std::ios::binary);
    if (!out) throw Error("cannot write '" + *c.output + "'");
    out << text;
    if (!out) throw Error("write to '" + *c.output + "' failed");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

int cmd_single(const RunConfig& c) {
    const TwoPhotonInput in = c.input();
    const PulseSpec& pulse = in.left();
    const NetworkParams p = c.network();
    const QuadConfig q = c.quad();
    const FrequencyGrid g = c.grid_or(in, 5000.0, 100001);
    const auto out = single_photon_output(pulse, g, p);
    const auto pr = single_photon_probabilities(pulse, p, g, q);
    json summary = {{"p_left", pr.p_left},
                    {"p_right", pr.p_right},
                    {"norm", pr.p_left + pr.p_right},
                    {"est_error", pr.est_error},
                    {"input_tail_mass", out.input_tail_mass},
                    {"params", params_json(p)},
                    {"pulse", pulse_json(pulse, c.pulse_csv ? c.pulse_csv : c.pulse_csv_l)},
                    {"grid", grid_json(g)}};
    if (!c.output) {
        std::cout << dump(summary);
        return 0;
    }
    if (c.output_format(OutputFormat::Csv) == OutputFormat::Json) {
        json eta_l = json::array(), eta_r = json::array();
        for (std::size_t k = 0; k < g.size(); ++k) {
            eta_l.push_back({out.eta_L[k].real(), out.eta_L[k].imag()});
            eta_r.push_back({out.eta_R[k].real(), out.eta_R[k].imag()});
        }
        json all = summary;
        all["eta_l"] = eta_l;
        all["eta_r"] = eta_r;
        emit(c, dump(all));
    } else {
        std::string text = metadata("single", c, in, p, g, q);
        text += "nu,eta_l_re,eta_l_im,eta_r_re,eta_r_im,abs2_l,abs2_r\n";
        for (std::size_t k = 0; k < g.size(); ++k) {
            const cplx l = out.eta_L[k], r = out.eta_R[k];
            text += io::format_double(g.node(k)) + ',' + io::format_double(l.real()) + ',' +
                    io::format_double(l.imag()) + ',' + io::format_double(r.real()) + ',' +
                    io::format_double(r.imag()) + ',' + io::format_double(std::norm(l)) + ',' +
                    io::format_double(std::norm(r)) + '\n';
        }
        emit(c, text);
    }
    std::cout << dump(summary);
    return 0;
}

int cmd_amplitudes(const RunConfig& c, unsigned threads) {
    const TwoPhotonInput in = c.input();
    const NetworkParams p = c.network();
    const QuadConfig q = c.quad();
    const FrequencyGrid g = c.grid_or(in, 6.0, 121);
    const Channel ch = parse_channel(c.channel.value_or("lr"));
    const JointAmplitude amp = amplitude_grid(ch, g, in, p, q, {threads});

    if (c.output_format(OutputFormat::Csv) == OutputFormat::Json) {
        json re = json::array(), im = json::array();
        for (Eigen::Index i = 0; i < amp.values.rows(); ++i) {
            json rr = json::array(), ii = json::array();
            for (Eigen::Index j = 0; j < amp.values.cols(); ++j) {
                rr.push_back(amp.values(i, j).real());
                ii.push_back(amp.values(i, j).imag());
            }
            re.push_back(rr);
            im.push_back(ii);
        }
        emit(c, dump({{"photonsim", version},
                      {"channel", to_string(ch)},
                      {"params", params_json(p)},
                      {"grid", grid_json(g)},
                      {"max_point_error", amp.max_point_error},
                      {"re", re},
                      {"im", im}}));
        return 0;
    }
    std::string text = metadata("amplitudes", c, in, p, g, q);
    text += "# channel=" + std::string(to_string(ch)) + '\n';
    text += "# max_point_error=" + io::format_double(amp.max_point_error) + '\n';
    text += "omega1,omega2,re,im,abs2\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::string w1 = io::format_double(g.node(i)) + ',';
        for (std::size_t j = 0; j < g.size(); ++j) {
            const cplx v = amp.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            text += w1 + io::format_double(g.node(j)) + ',' + io::format_double(v.real()) + ',' +
                    io::format_double(v.imag()) + ',' + io::format_double(std::norm(v)) + '\n';
        }
    }
    emit(c, text);
    return 0;
}

int cmd_probabilities(const RunConfig& c, unsigned threads) {
    const TwoPhotonInput in = c.input();
    const NetworkParams p = c.network();
    const QuadConfig q = c.quad();
    const FrequencyGrid g = c.grid_or(in, 40.0, 801);
    const auto pr = probabilities(in, p, g, q, {threads});
    if (c.output_format(OutputFormat::Json) == OutputFormat::Csv) {
        std::string text = metadata("probabilities", c, in, p, g, q);
        text += "p_ll,p_lr,p_rr,total,est_error,tail_bound\n";
        text += io::format_double(pr.p_ll) + ',' + io::format_double(pr.p_lr) + ',' + io::format_double(pr.p_rr) +
                ',' + io::format_double(pr.total) + ',' + io::format_double(pr.est_error) + ',' +
                io::format_double(pr.tail_bound) + '\n';
        emit(c, text);
        return 0;
    }
    emit(c, dump({{"p_ll", pr.p_ll},
                  {"p_lr", pr.p_lr},
                  {"p_rr", pr.p_rr},
                  {"total", pr.total},
                  {"est_error", pr.est_error},
                  {"tail_bound", pr.tail_bound},
                  {"identical", in.identical()},
                  {"params", params_json(p)},
                  {"pulse_left", pulse_json(in.left(), c.pulse_csv_l ? c.pulse_csv_l : c.pulse_csv)},
                  {"pulse_right", pulse_json(in.right(), c.pulse_csv_r ? c.pulse_csv_r : c.pulse_csv)},
                  {"grid", grid_json(g)}}));
    return 0;
}

int cmd_hom(const RunConfig& c, unsigned threads) {
    const TwoPhotonInput in = c.input();
    if (!in.identical()) throw ValidationError("hom needs identical photons in both inputs");
    const QuadConfig q = c.quad();
    const FrequencyGrid g = c.grid_or(in, 100.0, 1001);
    const double ratio = c.ratio.value_or(2.0);
    const std::vector<double> kappas = c.kappas.value_or(std::vector<double>{0.5, 1, 2, 5, 10, 20});
    const auto rows = hom_scan(kappas, ratio, in.left(), g, q, {threads});
    if (c.output_format(OutputFormat::Csv) == OutputFormat::Json) {
        json arr = json::array();
        for (const auto& r : rows) {
            arr.push_back({{"kappa", r.kappa},
                           {"omega_c", r.omega_c},
                           {"p_lr", r.p_lr},
                           {"p_ll", r.p_ll},
                           {"p_rr", r.p_rr},
                           {"est_error", r.est_error}});
        }
        emit(c, dump({{"ratio", ratio}, {"grid", grid_json(g)}, {"rows", arr}}));
        return 0;
    }
    std::string text = metadata("hom", c, in, NetworkParams(kappas.front(), ratio * kappas.front()), g, q);
    text += "# ratio=" + io::format_double(ratio) + '\n';
    text += "kappa,omega_c,p_lr,p_ll,p_rr\n";
    for (const auto& r : rows) {
        text += io::format_double(r.kappa) + ',' + io::format_double(r.omega_c) + ',' + io::format_double(r.p_lr) +
                ',' + io::format_double(r.p_ll) + ',' + io::format_double(r.p_rr) + '\n';
    }
    emit(c, text);
    return 0;
}

int cmd_schmidt(const RunConfig& c, unsigned threads) {
    const TwoPhotonInput in = c.input();
    const NetworkParams p = c.network();
    const QuadConfig q = c.quad();
    const FrequencyGrid g = c.grid_or(in, 6.0, 121);
    const Channel ch = parse_channel(c.channel.value_or("lr"));
    const auto rep = schmidt_report(amplitude_grid(ch, g, in, p, q, {threads}));
    emit(c, dump({{"channel", to_string(ch)},
                  {"entropy", rep.entropy},
                  {"schmidt_number", rep.schmidt_number},
                  {"singular_values", rep.singular_values},
                  {"params", params_json(p)},
                  {"grid", grid_json(g)}}));
    return 0;
}

int cmd_verify(const RunConfig& c, unsigned threads, const std::string& fault) {
    VerifyOptions o;
    o.quick = c.quick.value_or(false);
    o.threads = threads;
    if (fault == "g-sign") {
        o.kernel = &g_kernel_sign_flipped;
    } else if (!fault.empty()) {
        throw ValidationError("unknown fault '" + fault + "'");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const VerifyReport rep = run_verification(o);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const bool json_stdout = c.output_format(OutputFormat::Csv) == OutputFormat::Json && !c.output;
    std::ostream& table = json_stdout ? std::cerr : std::cout;
    for (const auto& ch : rep.checks) {
        char line[512];
        std::snprintf(line, sizeof line, "%-4s %-58s value=%-12.4g %s %-9.3g margin=%.3g", ch.passed ? "PASS" : "FAIL",
                      ch.name.c_str(), ch.value, ch.upper_bound ? "<=" : ">=", ch.threshold, ch.margin());
        table << line;
        if (!ch.passed) table << "  [" << ch.failure << "]";
        if (!ch.detail.empty()) table << "  " << ch.detail;
        table << '\n';
    }
    char tail[128];
    std::snprintf(tail, sizeof tail, "%s: %zu checks in %.1f s\n", rep.passed() ? "PASS" : "FAIL", rep.checks.size(),
                  secs);
    table << tail;
    if (json_stdout) {
        std::cout << dump(to_json(rep));
    } else if (c.output) {
        emit(c, dump(to_json(rep)));
    }
    return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"photonsim: one- and two-photon scattering on a two-qubit coherent feedback loop"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", version);

    RunConfig flags;
    std::string config_path, save_config, fault;
    app.add_option("--config", config_path, "JSON run configuration; explicit flags override it");
    app.add_option("--save-config", save_config, "write the effective configuration to this path");
    flag(&app, "--output", flags.output, "output file (default stdout)");
    flag(&app, "--format", flags.format, "csv or json");
    flag(&app, "--threads", flags.threads, "worker threads (default PHOTONSIM_THREADS or all cores)");
    flag(&app, "--tol", flags.rel_tol, "relative quadrature tolerance (default 1e-8)");
    flag(&app, "--abs-tol", flags.abs_tol, "absolute quadrature tolerance (default 1e-12)");
    flag(&app, "--max-subdivisions", flags.max_subdivisions, "bisection budget per integral (default 2000)");
    flag(&app, "--window-halfwidth", flags.window_halfwidth, "fixed convolution window half-width");

    auto* single = app.add_subcommand("single", "one photon in the left input");
    add_pulse_flags(single, flags);
    add_network_flags(single, flags);

    auto* amplitudes = app.add_subcommand("amplitudes", "joint spectral amplitude on a grid");
    add_pulse_flags(amplitudes, flags);
    add_network_flags(amplitudes, flags);
    flag(amplitudes, "--channel", flags.channel, "ll, lr or rr (default lr)");

    auto* probs = app.add_subcommand("probabilities", "P_LL, P_LR, P_RR");
    add_pulse_flags(probs, flags);
    add_network_flags(probs, flags);

    auto* hom = app.add_subcommand("hom", "coincidence probability against kappa with omega_c = ratio * kappa");
    add_pulse_flags(hom, flags);
    flag(hom, "--grid", flags.grid, "frequency grid min:max:n");
    flag(hom, "--ratio", flags.ratio, "omega_c / kappa (default 2)");
    hom->add_option_function<std::string>(
        "--kappas", [&](const std::string& s) { flags.kappas = io::parse_double_list(s); },
        "comma-separated, strictly increasing (default 0.5,1,2,5,10,20)");

    auto* schmidt = app.add_subcommand("schmidt", "Schmidt decomposition of one channel");
    add_pulse_flags(schmidt, flags);
    add_network_flags(schmidt, flags);
    flag(schmidt, "--channel", flags.channel, "ll, lr or rr (default lr)");

    auto* verify = app.add_subcommand("verify", "run the self-check suite");
    verify->add_flag_function("--quick", [&](std::int64_t) { flags.quick = true; }, "fast subset");
    verify->add_option("--inject-fault", fault)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "photonsim: " << e.what() << '\n';
        return 2;
    }

    try {
        const std::string command = app.get_subcommands().front()->get_name();
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_run_config(config_path);
        cfg.merge(flags);
        if (cfg.command && *cfg.command != command) {
            throw ValidationError("config is for '" + *cfg.command + "', not '" + command + "'");
        }
        cfg.command = command;
        if (!save_config.empty()) save_run_config(save_config, cfg);
        const unsigned threads = cfg.threads.value_or(0);

        if (command == "single") return cmd_single(cfg);
        if (command == "amplitudes") return cmd_amplitudes(cfg, threads);
        if (command == "probabilities") return cmd_probabilities(cfg, threads);
        if (command == "hom") return cmd_hom(cfg, threads);
        if (command == "schmidt") return cmd_schmidt(cfg, threads);
        return cmd_verify(cfg, threads, fault);
    } catch (const NoConvergence& e) {
        std::cerr << "photonsim: no convergence: " << e.what() << '\n';
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "photonsim: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "photonsim: " << e.what() << '\n';
        return 1;
    }
}
