// SPDX-License-Identifier: Apache-2.0

#include "thzrelay/monte_carlo.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "thzrelay/special_functions.hpp"

namespace thzrelay::mc {

namespace {

constexpr std::uint64_t kTagHop1 = 0x68'6f'70'31;  // per-hop stream tags
constexpr std::uint64_t kTagHop2 = 0x68'6f'70'32;

struct Welford {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    void merge(const Welford& o) {
        if (o.n == 0) return;
        if (n == 0) { *this = o; return; }
        const double d = o.mean - mean;
        const std::uint64_t nt = n + o.n;
        mean += d * static_cast<double>(o.n) / static_cast<double>(nt);
        m2 += o.m2 + d * d * static_cast<double>(n) *
                          static_cast<double>(o.n) / static_cast<double>(nt);
        n = nt;
    }

    EmpiricalEstimate estimate() const {
        EmpiricalEstimate e;
        e.n = n;
        e.mean = mean;
        if (n > 1) {
            const double var = m2 / static_cast<double>(n - 1);
            e.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
        }
        return e;
    }
};

struct HopDraw {
    double g1, g2;
};

HopDraw draw_pair(const stats::DualHopModel& model, const SimConfig& cfg,
                  std::uint64_t idx) {
    rng::Substream r1(cfg.seed, idx, kTagHop1, cfg.antithetic && (idx & 1));
    rng::Substream r2(cfg.seed, idx, kTagHop2, cfg.antithetic && (idx & 1));
    const double e1 = sample_alpha_mu(model.hop1.fading, r1) *
                      sample_pointing(model.hop1.pointing, r1);
    const double e2 = sample_alpha_mu(model.hop2.fading, r2) *
                      sample_pointing(model.hop2.pointing, r2);
    return {model.hop1.gamma0 * e1 * e1, model.hop2.gamma0 * e2 * e2};
}

// Sharded deterministic reduction: shard i covers indices
// [i*batch, (i+1)*batch); shards are folded in index order no matter how the
// work was distributed over threads.
template <std::size_t K, typename PerSample>
std::array<EmpiricalEstimate, K> accumulate(const stats::DualHopModel& model,
                                            const SimConfig& cfg,
                                            PerSample per_sample) {
    if (cfg.samples < 1)
        throw std::invalid_argument("monte_carlo: samples must be >= 1");
    const std::uint64_t batch = std::max<std::uint64_t>(cfg.batch, 1);
    const std::uint64_t n_shards = (cfg.samples + batch - 1) / batch;
    std::vector<std::array<Welford, K>> shard(n_shards);

    auto run_shard = [&](std::uint64_t si) {
        const std::uint64_t lo = si * batch;
        const std::uint64_t hi = std::min(cfg.samples, lo + batch);
        auto& acc = shard[si];
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            const HopDraw d = draw_pair(model, cfg, idx);
            const std::array<double, K> vals = per_sample(d.g1, d.g2);
            for (std::size_t k = 0; k < K; ++k) acc[k].add(vals[k]);
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    int n_threads = cfg.threads > 0 ? cfg.threads
                                    : static_cast<int>(hw ? hw : 2);
    n_threads = std::min<int>(n_threads, static_cast<int>(n_shards));
    if (n_threads <= 1) {
        for (std::uint64_t si = 0; si < n_shards; ++si) run_shard(si);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&, t]() {
                for (std::uint64_t si = t; si < n_shards;
                     si += static_cast<std::uint64_t>(n_threads))
                    run_shard(si);
            });
        }
        for (auto& th : pool) th.join();
    }

    std::array<Welford, K> total;
    for (std::uint64_t si = 0; si < n_shards; ++si)
        for (std::size_t k = 0; k < K; ++k) total[k].merge(shard[si][k]);
    std::array<EmpiricalEstimate, K> out;
    for (std::size_t k = 0; k < K; ++k) out[k] = total[k].estimate();
    return out;
}

}  // namespace

double sample_alpha_mu(const channel::FadingParams& fading, rng::Substream& rs) {
    const double scale =
        std::pow(fading.omega, fading.alpha) / fading.mu;
    const double g = rs.gamma_variate(fading.mu) * scale;
    return std::pow(g, 1.0 / fading.alpha);
}

double sample_pointing(const channel::PointingParams& pointing,
                       rng::Substream& rs) {
    return pointing.s0 * std::pow(rs.uniform(), 1.0 / pointing.phi);
}

std::vector<std::pair<double, double>> simulate_e2e(
    const stats::DualHopModel& model, const SimConfig& cfg) {
    std::vector<std::pair<double, double>> out;
    out.reserve(cfg.samples);
    for (std::uint64_t idx = 0; idx < cfg.samples; ++idx) {
        const HopDraw d = draw_pair(model, cfg, idx);
        out.emplace_back(stats::exact_af_snr(d.g1, d.g2), std::min(d.g1, d.g2));
    }
    return out;
}

EmpiricalEstimate empirical_outage(double gamma_th,
                                   const stats::DualHopModel& model,
                                   const SimConfig& cfg) {
    auto est = accumulate<1>(model, cfg, [gamma_th](double g1, double g2) {
        return std::array<double, 1>{std::min(g1, g2) < gamma_th ? 1.0 : 0.0};
    });
    return est[0];
}

EmpiricalEstimate empirical_outage_exact(double gamma_th,
                                         const stats::DualHopModel& model,
                                         const SimConfig& cfg) {
    auto est = accumulate<1>(model, cfg, [gamma_th](double g1, double g2) {
        return std::array<double, 1>{
            stats::exact_af_snr(g1, g2) < gamma_th ? 1.0 : 0.0};
    });
    return est[0];
}

BothBounds empirical_ber(double mod_p, double mod_q,
                         const stats::DualHopModel& model,
                         const SimConfig& cfg) {
    if (!(mod_p > 0.0) || !(mod_q > 0.0))
        throw std::invalid_argument("empirical_ber: p, q must be > 0");
    auto est = accumulate<2>(model, cfg, [=](double g1, double g2) {
        const double bmin =
            0.5 * sf::regularized_gamma_q(mod_p, mod_q * std::min(g1, g2));
        const double bex = 0.5 * sf::regularized_gamma_q(
                                     mod_p, mod_q * stats::exact_af_snr(g1, g2));
        return std::array<double, 2>{bmin, bex};
    });
    return {est[0], est[1]};
}

CapacityEstimates empirical_capacity(const stats::DualHopModel& model,
                                     const SimConfig& cfg) {
    constexpr double inv_ln2 = 1.4426950408889634074;
    auto est = accumulate<4>(model, cfg, [=](double g1, double g2) {
        const double gmin = std::min(g1, g2);
        const double gaf = stats::exact_af_snr(g1, g2);
        return std::array<double, 4>{
            std::log1p(gmin) * inv_ln2, std::log(gmin) * inv_ln2,
            std::log1p(gaf) * inv_ln2, std::log(gaf) * inv_ln2};
    });
    return {est[0], est[1], est[2], est[3]};
}

BothBounds empirical_avg_snr(const stats::DualHopModel& model,
                             const SimConfig& cfg) {
    auto est = accumulate<2>(model, cfg, [](double g1, double g2) {
        return std::array<double, 2>{std::min(g1, g2),
                                     stats::exact_af_snr(g1, g2)};
    });
    return {est[0], est[1]};
}

}  // namespace thzrelay::mc
