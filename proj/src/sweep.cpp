// SPDX-License-Identifier: Apache-2.0

#include "thzrelay/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace thzrelay::sweep {

namespace {

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

config::Settings apply_sweep_value(const config::Settings& base, SweepVar var,
                                   double value) {
    config::Settings s = base;
    switch (var) {
        case SweepVar::gamma0_db: s.gamma0_db = value; break;
        case SweepVar::ptx_dbm: s.ptx_dbm = value; break;
        case SweepVar::phi: s.phi = value; break;
        case SweepVar::d_m: s.d1_m = s.d2_m = value; break;
        case SweepVar::gamma_th_db: s.gamma_th_db = value; break;
    }
    return s;
}

struct Cell {
    double value = std::nan("");
    double error = std::nan("");
};

Cell eval_metric(const std::string& metric, metrics::Method method,
                 const config::Settings& s, const stats::DualHopModel& model) {
    const double gamma_th = channel::db_to_linear(s.gamma_th_db);
    const auto mod = config::modulation(s);
    const auto cfg = config::sim_config(s);
    Cell c;
    try {
        if (metric == "outage") {
            if (method == metrics::Method::monte_carlo) {
                const auto e = mc::empirical_outage(gamma_th, model, cfg);
                c = {e.mean, e.std_error};
            } else {
                // same closed form either way; there is no quadrature twin
                c = {metrics::outage_probability(gamma_th, model), 0.0};
            }
        } else if (metric == "ber") {
            if (method == metrics::Method::monte_carlo) {
                const auto e = mc::empirical_ber(mod.p, mod.q, model, cfg);
                c = {e.min_bound.mean, e.min_bound.std_error};
            } else if (method == metrics::Method::closed_form) {
                const auto v = metrics::average_ber_closed_form(mod, model);
                c = {v.value, v.error};
            } else {
                const auto v = metrics::average_ber_quadrature(mod, model);
                c = {v.value, v.error};
            }
        } else if (metric == "avg_snr") {
            if (method == metrics::Method::monte_carlo) {
                const auto e = mc::empirical_avg_snr(model, cfg);
                c = {e.min_bound.mean, e.min_bound.std_error};
            } else if (method == metrics::Method::closed_form) {
                const auto v = metrics::average_snr_closed(model);
                c = {v.value, v.error};
            } else {
                const auto v = metrics::average_snr_quadrature(model);
                c = {v.value, v.error};
            }
        } else if (metric == "capacity") {
            if (method == metrics::Method::monte_carlo) {
                const auto e = mc::empirical_capacity(model, cfg);
                c = {e.log2_min.mean, e.log2_min.std_error};
            } else if (method == metrics::Method::closed_form) {
                const auto v = metrics::ergodic_capacity_lower_closed(model);
                c = {v.value, v.error};
            } else {
                const auto v = metrics::ergodic_capacity_lower_quadrature(model);
                c = {v.value, v.error};
            }
        } else {
            throw std::invalid_argument("unknown metric '" + metric + "'");
        }
    } catch (const std::domain_error&) {
        // closed form not applicable at this point: nan row, keep sweeping
    } catch (const std::runtime_error&) {
        // numerical failure at this point: nan row, keep sweeping
    }
    return c;
}

}  // namespace

const char* sweep_var_name(SweepVar v) {
    switch (v) {
        case SweepVar::gamma0_db: return "gamma0_db";
        case SweepVar::ptx_dbm: return "ptx_dbm";
        case SweepVar::phi: return "phi";
        case SweepVar::d_m: return "d_m";
        case SweepVar::gamma_th_db: return "gamma_th_db";
    }
    return "unknown";
}

SweepVar sweep_var_from_name(const std::string& name) {
    if (name == "gamma0_db") return SweepVar::gamma0_db;
    if (name == "ptx_dbm") return SweepVar::ptx_dbm;
    if (name == "phi") return SweepVar::phi;
    if (name == "d_m") return SweepVar::d_m;
    if (name == "gamma_th_db") return SweepVar::gamma_th_db;
    throw std::invalid_argument("unknown sweep variable '" + name + "'");
}

void SweepSpec::validate() const {
    if (!(start < stop)) throw std::invalid_argument("sweep: start must be < stop");
    if (!(step > 0.0)) throw std::invalid_argument("sweep: step must be > 0");
    if (metrics.empty() || methods.empty())
        throw std::invalid_argument("sweep: need at least one metric and method");
}

std::string run_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<double> points;
    for (double v = spec.start; v <= spec.stop + 1e-9 * spec.step; v += spec.step)
        points.push_back(v);

    std::vector<std::string> blocks(points.size());
    auto run_point = [&](std::size_t i) {
        const auto s = apply_sweep_value(spec.base, spec.variable, points[i]);
        std::ostringstream out;
        stats::DualHopModel model = config::build_model(s);
        for (const auto& metric : spec.metrics) {
            for (const auto method : spec.methods) {
                const Cell c = eval_metric(metric, method, s, model);
                out << sweep_var_name(spec.variable) << ',' << num(points[i])
                    << ',' << metric << ',' << metrics::method_name(method)
                    << ',' << num(c.value) << ',' << num(c.error) << ','
                    << num(s.alpha) << ',' << num(s.mu) << ',' << num(s.phi)
                    << ',' << num(s.s0) << ','
                    << num(channel::linear_to_db(model.hop1.gamma0)) << ','
                    << num(channel::linear_to_db(model.hop2.gamma0)) << '\n';
            }
        }
        blocks[i] = out.str();
    };

    unsigned hw = std::thread::hardware_concurrency();
    int workers = spec.workers > 0 ? spec.workers : static_cast<int>(hw ? hw : 2);
    workers = std::min<int>(workers, static_cast<int>(points.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < points.size(); ++i) run_point(i);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t)
            pool.emplace_back([&, t]() {
                for (std::size_t i = t; i < points.size();
                     i += static_cast<std::size_t>(workers))
                    run_point(i);
            });
        for (auto& th : pool) th.join();
    }

    std::string csv =
        "sweep_var,sweep_value,metric,method,value,error_estimate,alpha,mu,"
        "phi,s0,gamma0_db_hop1,gamma0_db_hop2\n";
    for (const auto& b : blocks) csv += b;
    return csv;
}

SweepSpec preset_fig1a(const config::Settings& base) {
    SweepSpec s;
    s.variable = SweepVar::gamma0_db;
    s.start = 0.0;
    s.stop = 40.0;
    s.step = 2.0;
    s.base = base;
    s.metrics = {"outage"};
    s.methods = {metrics::Method::closed_form, metrics::Method::monte_carlo};
    return s;
}

SweepSpec preset_fig1b(const config::Settings& base) {
    SweepSpec s = preset_fig1a(base);
    s.metrics = {"ber"};
    s.methods = {metrics::Method::quadrature, metrics::Method::closed_form,
                 metrics::Method::monte_carlo};
    return s;
}

SweepSpec preset_fig2a(const config::Settings& base) {
    SweepSpec s;
    s.variable = SweepVar::phi;
    s.start = 1.0;
    s.stop = 12.0;
    s.step = 0.5;
    s.base = base;
    s.metrics = {"avg_snr"};
    s.methods = {metrics::Method::closed_form, metrics::Method::monte_carlo};
    return s;
}

SweepSpec preset_fig2b(const config::Settings& base) {
    SweepSpec s;
    s.variable = SweepVar::d_m;
    s.start = 10.0;
    s.stop = 50.0;
    s.step = 5.0;
    s.base = base;
    s.metrics = {"capacity"};
    s.methods = {metrics::Method::quadrature, metrics::Method::monte_carlo};
    return s;
}

std::string run_preset(const std::string& name, const config::Settings& base) {
    std::string out;
    auto append = [&out](const std::string& block) {
        if (out.empty()) { out = block; return; }
        // strip the repeated header
        out += block.substr(block.find('\n') + 1);
    };
    if (name == "fig1a" || name == "fig1b") {
        struct Curve { double alpha, mu, phi; };
        const Curve curves[] = {{1.0, 1.5, 2.4}, {1.0, 1.5, 6.7}, {2.0, 2.5, 6.7}};
        for (const auto& c : curves) {
            config::Settings s = base;
            s.alpha = c.alpha;
            s.mu = c.mu;
            s.phi = c.phi;
            append(run_sweep(name == "fig1a" ? preset_fig1a(s) : preset_fig1b(s)));
        }
        return out;
    }
    if (name == "fig2a") {
        for (double ptx : {10.0, 20.0, 30.0}) {
            config::Settings s = base;
            s.ptx_dbm = ptx;
            s.gamma0_db.reset();
            append(run_sweep(preset_fig2a(s)));
        }
        return out;
    }
    if (name == "fig2b") {
        for (double ptx : {0.0, 10.0, 20.0, 30.0}) {
            config::Settings s = base;
            s.ptx_dbm = ptx;
            s.gamma0_db.reset();
            append(run_sweep(preset_fig2b(s)));
        }
        return out;
    }
    throw std::invalid_argument("unknown preset '" + name +
                                "' (use fig1a|fig1b|fig2a|fig2b)");
}

std::string compare_report(const config::Settings& settings) {
    const auto model = config::build_model(settings);
    const auto cfg = config::sim_config(settings);
    const auto mod = config::modulation(settings);
    const double gamma_th = channel::db_to_linear(settings.gamma_th_db);

    std::ostringstream out;
    out << "metric,closed_form,quadrature,monte_carlo,mc_sigma,verdict\n";

    struct Closed {
        std::string text = "n/a";
        double value = 0.0;
        double error = 0.0;
        bool ok = false;
    };
    auto run_closed = [&](auto&& fn) {
        Closed c;
        try {
            const metrics::ValueWithError v = fn();
            c.text = num(v.value);
            c.value = v.value;
            c.error = v.error;
            c.ok = true;
        } catch (const std::exception&) {
            // precondition not met or contour failure: report n/a
        }
        return c;
    };

    // verdicts: MC within 3 sigma of quadrature; where a closed form
    // applies, closed within max(1%, combined error estimates) of quadrature.
    auto row = [&](const std::string& name, const Closed& closed,
                   const metrics::ValueWithError& quadr, double mc,
                   double sigma) {
        std::string verdict = "PASS";
        if (std::fabs(mc - quadr.value) > 3.0 * sigma + 1e-12) verdict = "FAIL";
        if (closed.ok) {
            const double tol = std::max(0.01 * std::fabs(quadr.value),
                                        closed.error + quadr.error);
            if (std::fabs(closed.value - quadr.value) > tol) verdict = "FAIL";
        }
        out << name << ',' << closed.text << ',' << num(quadr.value) << ','
            << num(mc) << ',' << num(sigma) << ',' << verdict << '\n';
    };

    {
        const double an = metrics::outage_probability(gamma_th, model);
        const auto e = mc::empirical_outage(gamma_th, model, cfg);
        Closed c{num(an), an, 0.0, true};
        row("outage", c, {an, 0.0}, e.mean, e.std_error);
    }
    {
        const auto q = metrics::average_ber_quadrature(mod, model);
        const auto c = run_closed(
            [&] { return metrics::average_ber_closed_form(mod, model); });
        const auto e = mc::empirical_ber(mod.p, mod.q, model, cfg);
        row("ber", c, q, e.min_bound.mean, e.min_bound.std_error);
    }
    {
        const auto q = metrics::average_snr_quadrature(model);
        const auto c =
            run_closed([&] { return metrics::average_snr_closed(model); });
        const auto e = mc::empirical_avg_snr(model, cfg);
        row("avg_snr", c, q, e.min_bound.mean, e.min_bound.std_error);
    }
    {
        const auto q = metrics::ergodic_capacity_lower_quadrature(model);
        const auto c = run_closed(
            [&] { return metrics::ergodic_capacity_lower_closed(model); });
        const auto e = mc::empirical_capacity(model, cfg);
        row("capacity", c, q, e.log2_min.mean, e.log2_min.std_error);
    }
    return out.str();
}

}  // namespace thzrelay::sweep
