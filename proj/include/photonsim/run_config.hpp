// run_config.hpp - the parameter record behind every CLI run
//
// A RunConfig holds exactly what the user set; defaults are applied when the
// record is resolved into library objects. Saved configs therefore reproduce
// the run that wrote them, and a config with unknown keys is rejected.

#pragma once

#include "photonsim/errors.hpp"
#include "photonsim/io.hpp"
#include "photonsim/model.hpp"
#include "photonsim/quadrature.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace photonsim {

enum class OutputFormat { Csv, Json };

struct RunConfig {
    std::optional<std::string> command;

    std::optional<double> gamma;
    std::optional<double> omega_o;
    std::optional<double> gamma_l;
    std::optional<double> gamma_r;
    std::optional<std::string> pulse_csv;
    std::optional<std::string> pulse_csv_l;
    std::optional<std::string> pulse_csv_r;

    std::optional<double> kappa;
    std::optional<double> omega_c;

    std::optional<std::string> grid;
    std::optional<std::string> channel;
    std::optional<double> ratio;
    std::optional<std::vector<double>> kappas;
    std::optional<bool> quick;

    std::optional<double> rel_tol;
    std::optional<double> abs_tol;
    std::optional<int> max_subdivisions;
    std::optional<double> window_halfwidth;

    std::optional<unsigned> threads;
    std::optional<std::string> output;
    std::optional<std::string> format;

    bool operator==(const RunConfig&) const = default;

    // Fields set in `o` replace those here.
    void merge(const RunConfig& o) {
        auto take = [](auto& dst, const auto& src) {
            if (src) dst = src;
        };
        take(command, o.command);
        take(gamma, o.gamma);
        take(omega_o, o.omega_o);
        take(gamma_l, o.gamma_l);
        take(gamma_r, o.gamma_r);
        take(pulse_csv, o.pulse_csv);
        take(pulse_csv_l, o.pulse_csv_l);
        take(pulse_csv_r, o.pulse_csv_r);
        take(kappa, o.kappa);
        take(omega_c, o.omega_c);
        take(grid, o.grid);
        take(channel, o.channel);
        take(ratio, o.ratio);
        take(kappas, o.kappas);
        take(quick, o.quick);
        take(rel_tol, o.rel_tol);
        take(abs_tol, o.abs_tol);
        take(max_subdivisions, o.max_subdivisions);
        take(window_halfwidth, o.window_halfwidth);
        take(threads, o.threads);
        take(output, o.output);
        take(format, o.format);
    }

    // ---- resolution -------------------------------------------------------

    NetworkParams network() const { return NetworkParams(kappa.value_or(1.5), omega_c.value_or(0.0), omega_o.value_or(0.0)); }

    QuadConfig quad() const {
        QuadConfig q;
        if (rel_tol) q.rel_tol = *rel_tol;
        if (abs_tol) q.abs_tol = *abs_tol;
        if (max_subdivisions) q.max_subdivisions = *max_subdivisions;
        q.window_halfwidth = window_halfwidth;
        q.validate();
        return q;
    }

    OutputFormat output_format(OutputFormat fallback) const {
        if (!format) return fallback;
        if (*format == "csv") return OutputFormat::Csv;
        if (*format == "json") return OutputFormat::Json;
        throw ValidationError("format must be csv or json, got '" + *format + "'");
    }

    TwoPhotonInput input() const {
        if (pulse_csv && (pulse_csv_l || pulse_csv_r)) {
            throw ValidationError("pulse_csv cannot be combined with pulse_csv_l / pulse_csv_r");
        }
        const double g = gamma.value_or(1.0);
        const double wo = omega_o.value_or(0.0);
        if (pulse_csv) {
            if (gamma_l || gamma_r) throw ValidationError("pulse_csv cannot be combined with gamma_l / gamma_r");
            return TwoPhotonInput::same(io::load_sampled_pulse(*pulse_csv));
        }
        if (pulse_csv_l && gamma_l) throw ValidationError("pulse_csv_l cannot be combined with gamma_l");
        if (pulse_csv_r && gamma_r) throw ValidationError("pulse_csv_r cannot be combined with gamma_r");
        PulseSpec left = pulse_csv_l ? io::load_sampled_pulse(*pulse_csv_l) : PulseSpec::lorentzian(gamma_l.value_or(g), wo);
        PulseSpec right = pulse_csv_r ? io::load_sampled_pulse(*pulse_csv_r) : PulseSpec::lorentzian(gamma_r.value_or(g), wo);
        return TwoPhotonInput(std::move(left), std::move(right));
    }

    // Explicit grid, or `halfwidths` Lorentzian widths around the pulse
    // centre with `n` nodes. Sampled pulses default to their support.
    FrequencyGrid grid_or(const TwoPhotonInput& in, double halfwidths, std::size_t n) const {
        if (grid) return io::parse_grid(*grid);
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const PulseSpec* p : {&in.left(), &in.right()}) {
            if (p->is_sampled()) {
                lo = std::min(lo, p->as_sampled().support_min());
                hi = std::max(hi, p->as_sampled().support_max());
            } else {
                const auto& l = p->as_lorentzian();
                lo = std::min(lo, -l.omega_o - halfwidths * l.gamma);
                hi = std::max(hi, -l.omega_o + halfwidths * l.gamma);
            }
        }
        return FrequencyGrid(lo, hi, n);
    }
};

namespace detail {

using json = nlohmann::json;

template <class T>
void read_key(const json& j, const char* key, std::optional<T>& dst) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    try {
        dst = it->template get<T>();
    } catch (const json::exception&) {
        throw ParseError(std::string("config key '") + key + "' has the wrong type");
    }
}

template <class T>
void write_key(json& j, const char* key, const std::optional<T>& src) {
    if (src) j[key] = *src;
}

inline constexpr const char* config_keys[] = {
    "command", "gamma", "omega_o", "gamma_l", "gamma_r", "pulse_csv", "pulse_csv_l", "pulse_csv_r",
    "kappa", "omega_c", "grid", "channel", "ratio", "kappas", "quick", "rel_tol", "abs_tol",
    "max_subdivisions", "window_halfwidth", "threads", "output", "format"};

}  // namespace detail

inline nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json j = nlohmann::json::object();
    using detail::write_key;
    write_key(j, "command", c.command);
    write_key(j, "gamma", c.gamma);
    write_key(j, "omega_o", c.omega_o);
    write_key(j, "gamma_l", c.gamma_l);
    write_key(j, "gamma_r", c.gamma_r);
    write_key(j, "pulse_csv", c.pulse_csv);
    write_key(j, "pulse_csv_l", c.pulse_csv_l);
    write_key(j, "pulse_csv_r", c.pulse_csv_r);
    write_key(j, "kappa", c.kappa);
    write_key(j, "omega_c", c.omega_c);
    write_key(j, "grid", c.grid);
    write_key(j, "channel", c.channel);
    write_key(j, "ratio", c.ratio);
    write_key(j, "kappas", c.kappas);
    write_key(j, "quick", c.quick);
    write_key(j, "rel_tol", c.rel_tol);
    write_key(j, "abs_tol", c.abs_tol);
    write_key(j, "max_subdivisions", c.max_subdivisions);
    write_key(j, "window_halfwidth", c.window_halfwidth);
    write_key(j, "threads", c.threads);
    write_key(j, "output", c.output);
    write_key(j, "format", c.format);
    return j;
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        const bool known = std::any_of(std::begin(detail::config_keys), std::end(detail::config_keys),
                                       [&](const char* k) { return key == k; });
        if (!known) throw ParseError("unknown config key '" + key + "'");
    }
    RunConfig c;
    using detail::read_key;
    read_key(j, "command", c.command);
    read_key(j, "gamma", c.gamma);
    read_key(j, "omega_o", c.omega_o);
    read_key(j, "gamma_l", c.gamma_l);
    read_key(j, "gamma_r", c.gamma_r);
    read_key(j, "pulse_csv", c.pulse_csv);
    read_key(j, "pulse_csv_l", c.pulse_csv_l);
    read_key(j, "pulse_csv_r", c.pulse_csv_r);
    read_key(j, "kappa", c.kappa);
    read_key(j, "omega_c", c.omega_c);
    read_key(j, "grid", c.grid);
    read_key(j, "channel", c.channel);
    read_key(j, "ratio", c.ratio);
    read_key(j, "kappas", c.kappas);
    read_key(j, "quick", c.quick);
    read_key(j, "rel_tol", c.rel_tol);
    read_key(j, "abs_tol", c.abs_tol);
    read_key(j, "max_subdivisions", c.max_subdivisions);
    read_key(j, "window_halfwidth", c.window_halfwidth);
    read_key(j, "threads", c.threads);
    read_key(j, "output", c.output);
    read_key(j, "format", c.format);
    return c;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return run_config_from_json(j);
}

inline void save_run_config(const std::string& path, const RunConfig& c) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << to_json(c).dump(2) << '\n';
}

}  // namespace photonsim
