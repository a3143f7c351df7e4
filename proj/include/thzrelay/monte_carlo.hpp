// SPDX-License-Identifier: Apache-2.0
//
// thzrelay: Monte-Carlo oracle for the dual-hop link.
//
// Sharded, counter-seeded accumulation: estimates are bit-identical for a
// given (seed, samples, model) regardless of thread count.

#ifndef THZRELAY_MONTE_CARLO_HPP
#define THZRELAY_MONTE_CARLO_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "thzrelay/rng.hpp"
#include "thzrelay/statistics.hpp"

namespace thzrelay::mc {

struct SimConfig {
    std::uint64_t samples = 10'000'000;
    std::uint64_t seed = 20250814;
    bool antithetic = false;
    std::uint64_t batch = 1u << 15;  // shard size for streaming accumulation
    int threads = 0;                 // 0: pick from hardware
};

struct EmpiricalEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
};

// One draw of the alpha-mu envelope: R = G^{1/alpha}, R^alpha ~
// Gamma(mu, Omega^alpha / mu).
double sample_alpha_mu(const channel::FadingParams& fading, rng::Substream& rs);

// One pointing-error gain draw: h_p = S0 * U^{1/phi}.
double sample_pointing(const channel::PointingParams& pointing,
                       rng::Substream& rs);

// Materialized realizations of (gamma_exact, gamma_min); intended for
// moderate n (distribution tests).
std::vector<std::pair<double, double>> simulate_e2e(
    const stats::DualHopModel& model, const SimConfig& cfg);

struct BothBounds {
    EmpiricalEstimate min_bound;  // statistic of min(g1, g2)
    EmpiricalEstimate exact;      // statistic of g1 g2 / (g1 + g2 + 1)
};

EmpiricalEstimate empirical_outage(double gamma_th,
                                   const stats::DualHopModel& model,
                                   const SimConfig& cfg);
// Outage of the exact AF combiner (for the bound-direction checks).
EmpiricalEstimate empirical_outage_exact(double gamma_th,
                                         const stats::DualHopModel& model,
                                         const SimConfig& cfg);

// Mean conditional BER Gamma(p, q gamma) / (2 Gamma(p)).
BothBounds empirical_ber(double mod_p, double mod_q,
                         const stats::DualHopModel& model,
                         const SimConfig& cfg);

struct CapacityEstimates {
    EmpiricalEstimate log2_one_plus_min;   // E[log2(1 + gamma_min)]
    EmpiricalEstimate log2_min;            // E[log2(gamma_min)]
    EmpiricalEstimate log2_one_plus_exact; // E[log2(1 + gamma_af)]
    EmpiricalEstimate log2_exact;          // E[log2(gamma_af)]
};

CapacityEstimates empirical_capacity(const stats::DualHopModel& model,
                                     const SimConfig& cfg);

BothBounds empirical_avg_snr(const stats::DualHopModel& model,
                             const SimConfig& cfg);

}  // namespace thzrelay::mc

#endif
