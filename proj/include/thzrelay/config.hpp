// SPDX-License-Identifier: Apache-2.0
//
// thzrelay: flat key = value configuration surface shared by the CLI.
//
// Defaults reproduce the reference backhaul setup: 275 GHz carrier, 45 dBi
// antennas, -174 dBm/Hz noise PSD, 10 GHz bandwidth, 10 m hops, 4 dB outage
// threshold, alpha = 1, mu = 1.5, phi = 2.4, S0 = 0.8, 1e7 MC samples.

#ifndef THZRELAY_CONFIG_HPP
#define THZRELAY_CONFIG_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "thzrelay/metrics.hpp"
#include "thzrelay/monte_carlo.hpp"
#include "thzrelay/statistics.hpp"

namespace thzrelay::config {

struct Settings {
    double f_ghz = 275.0;
    double d1_m = 10.0;
    double d2_m = 10.0;
    double ptx_dbm = 20.0;
    double gain_dbi = 45.0;
    double k_abs_per_m = 0.0033;  // standard-atmosphere class value at 275 GHz
    double n0_dbm_hz = -174.0;
    double bw_ghz = 10.0;
    double gamma_th_db = 4.0;
    double alpha = 1.0;
    double mu = 1.5;
    double omega = 1.0;
    double phi = 2.4;
    double s0 = 0.8;
    double mod_p = 0.5;  // conditional-BER family; default BPSK
    double mod_q = 1.0;
    std::uint64_t samples = 10'000'000;
    std::uint64_t seed = 20250814;
    int threads = 0;
    // optional direct anchor override (otherwise derived from the budget)
    std::optional<double> gamma0_db;
};

// Parse `key = value` lines with '#' comments over the defaults.
// Unknown keys or invariant violations throw std::invalid_argument with the
// offending line number.
Settings parse_config_text(const std::string& text);
Settings parse_config_file(const std::string& path);

// Canonical emission; parse(emit(s)) == s.
std::string canonical_config(const Settings& s);

channel::LinkBudget link_budget(const Settings& s, int hop /*1 or 2*/);
stats::DualHopModel build_model(const Settings& s);
mc::SimConfig sim_config(const Settings& s);
metrics::ModulationParams modulation(const Settings& s);

}  // namespace thzrelay::config

#endif
