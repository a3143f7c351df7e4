// SPDX-License-Identifier: Apache-2.0
//
// thzrelay command line front end.
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "thzrelay/config.hpp"
#include "thzrelay/metrics.hpp"
#include "thzrelay/monte_carlo.hpp"
#include "thzrelay/sweep.hpp"

namespace {

using thzrelay::config::Settings;

void add_model_flags(CLI::App* cmd, Settings& s) {
    cmd->add_option("--f-ghz", s.f_ghz, "carrier frequency, GHz");
    cmd->add_option("--d1-m", s.d1_m, "first-hop distance, m");
    cmd->add_option("--d2-m", s.d2_m, "second-hop distance, m");
    cmd->add_option("--ptx-dbm", s.ptx_dbm, "transmit power, dBm");
    cmd->add_option("--gain-dbi", s.gain_dbi, "antenna gain (both ends), dBi");
    cmd->add_option("--k-abs-per-m", s.k_abs_per_m, "absorption coefficient, 1/m");
    cmd->add_option("--n0-dbm-hz", s.n0_dbm_hz, "noise PSD, dBm/Hz");
    cmd->add_option("--bw-ghz", s.bw_ghz, "bandwidth, GHz");
    cmd->add_option("--gamma-th-db", s.gamma_th_db, "outage SNR threshold, dB");
    cmd->add_option("--alpha", s.alpha, "fading nonlinearity");
    cmd->add_option("--mu", s.mu, "fading clustering");
    cmd->add_option("--omega", s.omega, "alpha-root mean envelope");
    cmd->add_option("--phi", s.phi, "pointing-error shape");
    cmd->add_option("--s0", s.s0, "maximum pointing gain");
    cmd->add_option("--mod-p", s.mod_p, "conditional-BER parameter p");
    cmd->add_option("--mod-q", s.mod_q, "conditional-BER parameter q");
    cmd->add_option("--samples", s.samples, "Monte-Carlo samples");
    cmd->add_option("--seed", s.seed, "Monte-Carlo seed");
    cmd->add_option("--threads", s.threads, "worker threads (0 = auto)");
    auto g0 = cmd->add_option("--gamma0-db",
                              "per-hop SNR anchor override, dB");
    g0->each([&s](const std::string& v) { s.gamma0_db = std::stod(v); });
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open --out file " + out_path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "thzrelay: dual-hop THz relay performance over alpha-mu fading with "
        "pointing errors"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    app.add_option("--config", config_path, "key = value configuration file")
        ->expected(1);
    app.add_option("--out", out_path, "write output to a file instead of stdout");

    Settings flags;  // flag values layered over the config file
    bool flags_touched = false;
    // CLI11 parses into `flags`; we detect explicit use via counts below.

    auto* outage = app.add_subcommand("outage", "min-bound outage probability");
    auto* ber = app.add_subcommand("ber", "average bit error rate");
    auto* avg = app.add_subcommand("avg-snr", "average end-to-end SNR");
    auto* cap = app.add_subcommand("capacity", "ergodic-capacity lower bound");
    auto* sim = app.add_subcommand("simulate", "Monte-Carlo estimates of all metrics");
    auto* swp = app.add_subcommand("sweep", "CSV sweep over one variable");
    auto* cmp = app.add_subcommand("compare", "closed vs quadrature vs MC table");
    auto* pre = app.add_subcommand("preset", "figure presets: fig1a|fig1b|fig2a|fig2b");

    for (auto* cmd : {outage, ber, avg, cap, sim, swp, cmp, pre}) {
        cmd->fallthrough();  // let --config/--out appear after the subcommand
        add_model_flags(cmd, flags);
    }

    std::string sweep_var = "gamma0_db", preset_name;
    double sweep_start = 0.0, sweep_stop = 40.0, sweep_step = 5.0;
    std::vector<std::string> sweep_metrics = {"outage"};
    std::vector<std::string> sweep_methods = {"quadrature", "monte_carlo"};
    swp->add_option("--var", sweep_var, "gamma0_db|ptx_dbm|phi|d_m|gamma_th_db");
    swp->add_option("--start", sweep_start, "sweep start");
    swp->add_option("--stop", sweep_stop, "sweep stop");
    swp->add_option("--step", sweep_step, "sweep step");
    swp->add_option("--metrics", sweep_metrics,
                    "outage|ber|avg_snr|capacity (repeatable)");
    swp->add_option("--methods", sweep_methods,
                    "closed_form|quadrature|monte_carlo (repeatable)");
    pre->add_option("name", preset_name, "fig1a|fig1b|fig2a|fig2b")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        Settings s = config_path.empty()
                         ? Settings{}
                         : thzrelay::config::parse_config_file(config_path);
        // Layer flags over the file.  CLI11 parsed into `flags`, whose
        // untouched fields still equal the defaults, so a field that differs
        // from a fresh default was set on the command line.
        auto* active = app.get_subcommands().front();
        for (const auto* opt : active->get_options()) {
            if (opt->count() == 0) continue;
            flags_touched = true;
        }
        if (flags_touched) {
            Settings base = s;
            Settings defaults;
            auto pick = [](double flag, double def, double file) {
                return flag != def ? flag : file;
            };
            base.f_ghz = pick(flags.f_ghz, defaults.f_ghz, s.f_ghz);
            base.d1_m = pick(flags.d1_m, defaults.d1_m, s.d1_m);
            base.d2_m = pick(flags.d2_m, defaults.d2_m, s.d2_m);
            base.ptx_dbm = pick(flags.ptx_dbm, defaults.ptx_dbm, s.ptx_dbm);
            base.gain_dbi = pick(flags.gain_dbi, defaults.gain_dbi, s.gain_dbi);
            base.k_abs_per_m =
                pick(flags.k_abs_per_m, defaults.k_abs_per_m, s.k_abs_per_m);
            base.n0_dbm_hz = pick(flags.n0_dbm_hz, defaults.n0_dbm_hz, s.n0_dbm_hz);
            base.bw_ghz = pick(flags.bw_ghz, defaults.bw_ghz, s.bw_ghz);
            base.gamma_th_db =
                pick(flags.gamma_th_db, defaults.gamma_th_db, s.gamma_th_db);
            base.alpha = pick(flags.alpha, defaults.alpha, s.alpha);
            base.mu = pick(flags.mu, defaults.mu, s.mu);
            base.omega = pick(flags.omega, defaults.omega, s.omega);
            base.phi = pick(flags.phi, defaults.phi, s.phi);
            base.s0 = pick(flags.s0, defaults.s0, s.s0);
            base.mod_p = pick(flags.mod_p, defaults.mod_p, s.mod_p);
            base.mod_q = pick(flags.mod_q, defaults.mod_q, s.mod_q);
            if (flags.samples != defaults.samples) base.samples = flags.samples;
            if (flags.seed != defaults.seed) base.seed = flags.seed;
            if (flags.threads != defaults.threads) base.threads = flags.threads;
            if (flags.gamma0_db) base.gamma0_db = flags.gamma0_db;
            s = base;
        }

        using namespace thzrelay;
        const auto model = config::build_model(s);
        const auto mod = config::modulation(s);
        const double gamma_th = channel::db_to_linear(s.gamma_th_db);
        std::ostringstream text;

        if (*outage) {
            const double v = metrics::outage_probability(gamma_th, model);
            text << "outage_probability " << v << " (gamma_th " << s.gamma_th_db
                 << " dB, diversity order "
                 << metrics::diversity_order(model.hop1.fading,
                                             model.hop1.pointing)
                 << ")\n";
        } else if (*ber) {
            const auto q = metrics::average_ber_quadrature(mod, model);
            text << "average_ber quadrature " << q.value << " +- " << q.error
                 << "\n";
            try {
                const auto c = metrics::average_ber_closed_form(mod, model);
                text << "average_ber closed_form " << c.value << " +- "
                     << c.error << "\n";
            } catch (const std::domain_error& e) {
                text << "average_ber closed_form n/a (" << e.what() << ")\n";
            }
        } else if (*avg) {
            const auto q = metrics::average_snr_quadrature(model);
            text << "average_snr quadrature " << q.value << " +- " << q.error
                 << "\n";
            const auto c = metrics::average_snr_closed(model);
            text << "average_snr closed_form " << c.value << " +- " << c.error
                 << "\n";
        } else if (*cap) {
            const auto q = metrics::ergodic_capacity_lower_quadrature(model);
            text << "capacity_lower quadrature " << q.value << " bits/s/Hz ("
                 << q.value * s.bw_ghz << " Gbit/s at " << s.bw_ghz
                 << " GHz)\n";
            const auto c = metrics::ergodic_capacity_lower_closed(model);
            text << "capacity_lower closed_form " << c.value << " +- "
                 << c.error << "\n";
        } else if (*sim) {
            const auto cfg = config::sim_config(s);
            const auto out_ = mc::empirical_outage(gamma_th, model, cfg);
            const auto berr = mc::empirical_ber(mod.p, mod.q, model, cfg);
            const auto capn = mc::empirical_capacity(model, cfg);
            const auto snr = mc::empirical_avg_snr(model, cfg);
            text << "outage " << out_.mean << " +- " << out_.std_error << "\n"
                 << "ber_min " << berr.min_bound.mean << " +- "
                 << berr.min_bound.std_error << "\n"
                 << "ber_exact " << berr.exact.mean << " +- "
                 << berr.exact.std_error << "\n"
                 << "capacity_log2_min " << capn.log2_min.mean << " +- "
                 << capn.log2_min.std_error << "\n"
                 << "avg_snr_min " << snr.min_bound.mean << " +- "
                 << snr.min_bound.std_error << "\n"
                 << "avg_snr_exact " << snr.exact.mean << " +- "
                 << snr.exact.std_error << "\n";
        } else if (*swp) {
            sweep::SweepSpec spec;
            spec.variable = sweep::sweep_var_from_name(sweep_var);
            spec.start = sweep_start;
            spec.stop = sweep_stop;
            spec.step = sweep_step;
            spec.base = s;
            spec.metrics = sweep_metrics;
            spec.methods.clear();
            for (const auto& m : sweep_methods) {
                if (m == "closed_form")
                    spec.methods.push_back(metrics::Method::closed_form);
                else if (m == "quadrature")
                    spec.methods.push_back(metrics::Method::quadrature);
                else if (m == "monte_carlo")
                    spec.methods.push_back(metrics::Method::monte_carlo);
                else
                    throw std::invalid_argument("unknown method '" + m + "'");
            }
            text << sweep::run_sweep(spec);
        } else if (*cmp) {
            text << sweep::compare_report(s);
        } else if (*pre) {
            text << sweep::run_preset(preset_name, s);
        }

        emit(text.str(), out_path);
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    }
}
