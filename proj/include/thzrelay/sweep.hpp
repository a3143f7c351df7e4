// SPDX-License-Identifier: Apache-2.0
//
// thzrelay: parameter sweeps and the analytic-vs-MC comparison report.
// CSV is the plotting contract; output is byte-deterministic for a fixed
// seed, independent of worker thread count.

#ifndef THZRELAY_SWEEP_HPP
#define THZRELAY_SWEEP_HPP

#include <string>
#include <vector>

#include "thzrelay/config.hpp"

namespace thzrelay::sweep {

enum class SweepVar { gamma0_db, ptx_dbm, phi, d_m, gamma_th_db };

const char* sweep_var_name(SweepVar v);
SweepVar sweep_var_from_name(const std::string& name);

struct SweepSpec {
    SweepVar variable = SweepVar::gamma0_db;
    double start = 0.0;
    double stop = 40.0;
    double step = 5.0;
    config::Settings base;                      // fixed parameter set
    std::vector<std::string> metrics = {"outage"};  // outage|ber|avg_snr|capacity
    std::vector<metrics::Method> methods = {metrics::Method::quadrature};
    int workers = 0;  // 0: pick from hardware

    void validate() const;
};

// One CSV row per sweep point per metric per method, deterministic order.
// Columns: sweep_var, sweep_value, metric, method, value, error_estimate,
// alpha, mu, phi, s0, gamma0_db_hop1, gamma0_db_hop2.
// Metric failures surface as nan-valued rows; the sweep keeps going.
std::string run_sweep(const SweepSpec& spec);

// Presets reproducing the reference figures.
SweepSpec preset_fig1a(const config::Settings& base);  // outage vs gamma0
SweepSpec preset_fig1b(const config::Settings& base);  // BER vs gamma0
SweepSpec preset_fig2a(const config::Settings& base);  // avg SNR vs phi
SweepSpec preset_fig2b(const config::Settings& base);  // capacity vs distance

// Runs a preset over its curve family (several fixed-parameter sets) and
// concatenates the CSV blocks.
std::string run_preset(const std::string& name, const config::Settings& base);

// metric | closed | quadrature | MC +/- sigma | verdict table.
std::string compare_report(const config::Settings& settings);

}  // namespace thzrelay::sweep

#endif
