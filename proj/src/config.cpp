// SPDX-License-Identifier: Apache-2.0

#include "thzrelay/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace thzrelay::config {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config line " + std::to_string(line) +
                                    ": invalid number '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& v, int line) {
    const double x = parse_double(v, line);
    if (x < 0 || x != std::floor(x))
        throw std::invalid_argument("config line " + std::to_string(line) +
                                    ": expected a non-negative integer");
    return static_cast<std::uint64_t>(x);
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

Settings parse_config_text(const std::string& text) {
    Settings s;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line) +
                                        ": expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string val = trim(body.substr(eq + 1));

        if (key == "f_ghz") s.f_ghz = parse_double(val, line);
        else if (key == "d1_m") s.d1_m = parse_double(val, line);
        else if (key == "d2_m") s.d2_m = parse_double(val, line);
        else if (key == "ptx_dbm") s.ptx_dbm = parse_double(val, line);
        else if (key == "gain_dbi") s.gain_dbi = parse_double(val, line);
        else if (key == "k_abs_per_m") s.k_abs_per_m = parse_double(val, line);
        else if (key == "n0_dbm_hz") s.n0_dbm_hz = parse_double(val, line);
        else if (key == "bw_ghz") s.bw_ghz = parse_double(val, line);
        else if (key == "gamma_th_db") s.gamma_th_db = parse_double(val, line);
        else if (key == "alpha") s.alpha = parse_double(val, line);
        else if (key == "mu") s.mu = parse_double(val, line);
        else if (key == "omega") s.omega = parse_double(val, line);
        else if (key == "phi") s.phi = parse_double(val, line);
        else if (key == "s0") s.s0 = parse_double(val, line);
        else if (key == "mod_p") s.mod_p = parse_double(val, line);
        else if (key == "mod_q") s.mod_q = parse_double(val, line);
        else if (key == "samples") s.samples = parse_u64(val, line);
        else if (key == "seed") s.seed = parse_u64(val, line);
        else if (key == "threads") s.threads = static_cast<int>(parse_u64(val, line));
        else if (key == "gamma0_db") s.gamma0_db = parse_double(val, line);
        else
            throw std::invalid_argument("config line " + std::to_string(line) +
                                        ": unknown key '" + key + "'");
    }
    // Surface invariant violations with the key name; building the model
    // validates the rest.
    try {
        build_model(s);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    return s;
}

Settings parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string canonical_config(const Settings& s) {
    std::ostringstream out;
    out << "f_ghz = " << fmt(s.f_ghz) << "\n"
        << "d1_m = " << fmt(s.d1_m) << "\n"
        << "d2_m = " << fmt(s.d2_m) << "\n"
        << "ptx_dbm = " << fmt(s.ptx_dbm) << "\n"
        << "gain_dbi = " << fmt(s.gain_dbi) << "\n"
        << "k_abs_per_m = " << fmt(s.k_abs_per_m) << "\n"
        << "n0_dbm_hz = " << fmt(s.n0_dbm_hz) << "\n"
        << "bw_ghz = " << fmt(s.bw_ghz) << "\n"
        << "gamma_th_db = " << fmt(s.gamma_th_db) << "\n"
        << "alpha = " << fmt(s.alpha) << "\n"
        << "mu = " << fmt(s.mu) << "\n"
        << "omega = " << fmt(s.omega) << "\n"
        << "phi = " << fmt(s.phi) << "\n"
        << "s0 = " << fmt(s.s0) << "\n"
        << "mod_p = " << fmt(s.mod_p) << "\n"
        << "mod_q = " << fmt(s.mod_q) << "\n"
        << "samples = " << s.samples << "\n"
        << "seed = " << s.seed << "\n"
        << "threads = " << s.threads << "\n";
    if (s.gamma0_db) out << "gamma0_db = " << fmt(*s.gamma0_db) << "\n";
    return out.str();
}

channel::LinkBudget link_budget(const Settings& s, int hop) {
    channel::LinkBudget lb;
    lb.f_hz = s.f_ghz * 1e9;
    lb.d_m = hop == 1 ? s.d1_m : s.d2_m;
    lb.gain_tx = channel::db_to_linear(s.gain_dbi);
    lb.gain_rx = channel::db_to_linear(s.gain_dbi);
    lb.k_abs = s.k_abs_per_m;
    lb.ptx_w = channel::dbm_to_watt(s.ptx_dbm);
    lb.n0_w_hz = channel::dbm_to_watt(s.n0_dbm_hz);
    lb.bw_hz = s.bw_ghz * 1e9;
    return lb;
}

stats::DualHopModel build_model(const Settings& s) {
    const channel::FadingParams fading{s.alpha, s.mu, s.omega};
    const channel::PointingParams pointing{s.phi, s.s0};
    double g1, g2;
    if (s.gamma0_db) {
        g1 = g2 = channel::db_to_linear(*s.gamma0_db);
    } else {
        g1 = channel::snr_anchor(link_budget(s, 1));
        g2 = channel::snr_anchor(link_budget(s, 2));
    }
    const auto h1 = stats::derive_constants(fading, pointing, g1);
    if (g1 == g2) return stats::make_identical_model(h1);
    const auto h2 = stats::derive_constants(fading, pointing, g2);
    return stats::make_model(h1, h2);
}

mc::SimConfig sim_config(const Settings& s) {
    mc::SimConfig cfg;
    cfg.samples = s.samples;
    cfg.seed = s.seed;
    cfg.threads = s.threads;
    return cfg;
}

metrics::ModulationParams modulation(const Settings& s) {
    metrics::ModulationParams m{s.mod_p, s.mod_q, "custom"};
    if (s.mod_p == 0.5 && s.mod_q == 1.0) m.label = "bpsk";
    else if (s.mod_p == 0.5 && s.mod_q == 0.5) m.label = "bfsk";
    else if (s.mod_p == 1.0 && s.mod_q == 1.0) m.label = "dpsk";
    m.validate();
    return m;
}

}  // namespace thzrelay::config
