// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "thzrelay/metrics.hpp"
#include "thzrelay/monte_carlo.hpp"
#include "thzrelay/special_functions.hpp"

using namespace thzrelay;

namespace {

stats::HopStatistics make_hop(double alpha, double mu, double phi, double s0,
                              double gamma0, double omega = 1.0) {
    return stats::derive_constants({alpha, mu, omega}, {phi, s0}, gamma0);
}

mc::SimConfig small_cfg(std::uint64_t n, std::uint64_t seed = 99) {
    mc::SimConfig cfg;
    cfg.samples = n;
    cfg.seed = seed;
    return cfg;
}

// KS critical value at the 1% level.
double ks_crit_1pct(std::size_t n) { return 1.628 / std::sqrt(double(n)); }

}  // namespace

TEST_CASE("alpha-mu sampler: moments and special cases") {
    const channel::FadingParams rayleigh{2.0, 1.0, 1.0};
    const channel::FadingParams generic{1.7, 2.2, 1.3};
    const std::size_t n = 400000;

    double sum_sq = 0.0, sum_pow = 0.0, sq_pow2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        rng::Substream rs(7, i, 1);
        const double r = mc::sample_alpha_mu(rayleigh, rs);
        sum_sq += r * r;
        rng::Substream rs2(7, i, 2);
        const double g = std::pow(mc::sample_alpha_mu(generic, rs2), generic.alpha);
        sum_pow += g;
        sq_pow2 += g * g;
    }
    // Rayleigh special case: E[R^2] = Omega^2 = 1; Var(R^2) = 1
    CHECK(std::fabs(sum_sq / n - 1.0) < 3.0 / std::sqrt(double(n)));
    // defining moment: E[R^alpha] = Omega^alpha
    const double want = std::pow(generic.omega, generic.alpha);
    const double mean = sum_pow / n;
    const double sd = std::sqrt(sq_pow2 / n - mean * mean);
    CHECK(std::fabs(mean - want) < 3.0 * sd / std::sqrt(double(n)) + 1e-12);
}

TEST_CASE("alpha-mu sampler matches the analytic CDF (KS at 1%)") {
    // P(R <= x) = P(mu R^alpha / Omega^alpha) via the regularized gamma.
    const channel::FadingParams f{1.6, 1.8, 1.3};
    const std::size_t n = 200000;
    std::vector<double> samples;
    samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        rng::Substream rs(11, i, 5);
        samples.push_back(mc::sample_alpha_mu(f, rs));
    }
    const double d = oracle::ks_statistic(samples, [&](double x) {
        const double z =
            f.mu * std::pow(x, f.alpha) / std::pow(f.omega, f.alpha);
        return 1.0 - sf::regularized_gamma_q(f.mu, z);
    });
    CHECK(d < ks_crit_1pct(n));
}

TEST_CASE("envelope product sampler matches the combined density's CDF") {
    const auto h = make_hop(1.6, 1.8, 2.4, 0.8, 1.0);
    const std::size_t n = 150000;
    std::vector<double> samples;
    samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        rng::Substream rs(12, i, 6);
        samples.push_back(mc::sample_alpha_mu(h.fading, rs) *
                          mc::sample_pointing(h.pointing, rs));
    }
    const double d = oracle::ks_statistic(samples, [&](double x) {
        return stats::hop_snr_cdf(x * x, h);  // gamma0 = 1
    });
    CHECK(d < ks_crit_1pct(n));
}

TEST_CASE("pointing sampler: support and mean") {
    const channel::PointingParams p{2.4, 0.8};
    const std::size_t n = 300000;
    double acc = 0.0;
    double acc2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        rng::Substream rs(13, i, 3);
        const double hp = mc::sample_pointing(p, rs);
        CHECK(hp >= 0.0);
        CHECK(hp <= p.s0);
        acc += hp;
        acc2 += hp * hp;
    }
    const double mean = acc / n;
    const double want = p.phi * p.s0 / (p.phi + 1.0);
    const double sd = std::sqrt(acc2 / n - mean * mean);
    CHECK(std::fabs(mean - want) < 3.0 * sd / std::sqrt(double(n)));
}

TEST_CASE("hop substreams are exchangeable and effectively independent") {
    const channel::FadingParams f{1.0, 1.5, 1.0};
    const std::size_t n = 100000;
    std::vector<double> tag1, tag2;
    double xsum = 0, ysum = 0, xy = 0, xx = 0, yy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        rng::Substream r1(21, i, 1), r2(21, i, 2);
        const double a = mc::sample_alpha_mu(f, r1);
        const double b = mc::sample_alpha_mu(f, r2);
        tag1.push_back(a);
        tag2.push_back(b);
        xsum += a; ysum += b; xy += a * b; xx += a * a; yy += b * b;
    }
    // swapping the streams leaves the law unchanged
    CHECK(oracle::ks_two_sample(tag1, tag2) < ks_crit_1pct(n) * std::sqrt(2.0));
    // cross-correlation below 3/sqrt(n)
    const double mx = xsum / n, my = ysum / n;
    const double corr = (xy / n - mx * my) /
                        std::sqrt((xx / n - mx * mx) * (yy / n - my * my));
    CHECK(std::fabs(corr) < 3.0 / std::sqrt(double(n)));
}

TEST_CASE("simulated end-to-end pairs respect the min bound sample-wise") {
    const auto model = stats::make_identical_model(make_hop(1.0, 1.5, 2.4, 0.8, 8.0));
    const auto pairs = mc::simulate_e2e(model, small_cfg(20000));
    REQUIRE(pairs.size() == 20000);
    for (const auto& [g_exact, g_min] : pairs) CHECK(g_exact <= g_min);
}

TEST_CASE("min-bound SNR samples match the analytic CDF (KS at 1%)") {
    const auto model = stats::make_identical_model(make_hop(2.0, 1.5, 2.4, 0.8, 12.0));
    const auto pairs = mc::simulate_e2e(model, small_cfg(150000, 1234));
    std::vector<double> gmin;
    gmin.reserve(pairs.size());
    for (const auto& pr : pairs) gmin.push_back(pr.second);
    const double d = oracle::ks_statistic(gmin, [&](double g) {
        return stats::e2e_cdf_min_bound(g, model);
    });
    CHECK(d < ks_crit_1pct(gmin.size()));
}

TEST_CASE("estimates agree with analytic values within 3 sigma") {
    const auto model = stats::make_identical_model(make_hop(1.0, 1.5, 2.4, 0.8,
                                                            channel::db_to_linear(12.0)));
    const auto cfg = small_cfg(400000, 777);

    const double gth = channel::db_to_linear(4.0);
    const auto out = mc::empirical_outage(gth, model, cfg);
    const double want_out = metrics::outage_probability(gth, model);
    CHECK(std::fabs(out.mean - want_out) < 3.0 * out.std_error);

    const auto snr = mc::empirical_avg_snr(model, cfg);
    const auto want_snr = metrics::average_snr_quadrature(model);
    CHECK(std::fabs(snr.min_bound.mean - want_snr.value) <
          3.0 * snr.min_bound.std_error);

    const auto ber = mc::empirical_ber(0.5, 1.0, model, cfg);
    const auto want_ber =
        metrics::average_ber_quadrature(metrics::bpsk(), model);
    CHECK(std::fabs(ber.min_bound.mean - want_ber.value) <
          3.0 * ber.min_bound.std_error);

    const auto cap = mc::empirical_capacity(model, cfg);
    const auto want_cap = metrics::ergodic_capacity_lower_quadrature(model);
    CHECK(std::fabs(cap.log2_min.mean - want_cap.value) <
          3.0 * cap.log2_min.std_error);
    // lower bound property: E[log2 gamma] <= E[log2(1 + gamma)]
    CHECK(cap.log2_min.mean < cap.log2_one_plus_min.mean);
}

TEST_CASE("reproducibility: same seed bit-identical, thread-count invariant") {
    const auto model = stats::make_identical_model(make_hop(1.0, 1.5, 2.4, 0.8, 9.0));
    mc::SimConfig a = small_cfg(120000, 4242);
    a.threads = 1;
    mc::SimConfig b = a;
    b.threads = 3;
    const auto ea = mc::empirical_avg_snr(model, a);
    const auto eb = mc::empirical_avg_snr(model, b);
    CHECK(ea.min_bound.mean == eb.min_bound.mean);
    CHECK(ea.min_bound.std_error == eb.min_bound.std_error);
    CHECK(ea.exact.mean == eb.exact.mean);

    const auto ec = mc::empirical_avg_snr(model, a);
    CHECK(ea.min_bound.mean == ec.min_bound.mean);

    mc::SimConfig other = a;
    other.seed = 4243;
    const auto ed = mc::empirical_avg_snr(model, other);
    CHECK(ea.min_bound.mean != ed.min_bound.mean);
}

TEST_CASE("standard error shrinks like 1/sqrt(n)") {
    const auto model = stats::make_identical_model(make_hop(1.0, 1.5, 2.4, 0.8, 9.0));
    const auto e1 = mc::empirical_avg_snr(model, small_cfg(50000, 5));
    const auto e2 = mc::empirical_avg_snr(model, small_cfg(200000, 5));
    const double ratio = e1.min_bound.std_error / e2.min_bound.std_error;
    CHECK(ratio > 1.6);
    CHECK(ratio < 2.4);
}

TEST_CASE("degenerate nearly-deterministic channel concentrates") {
    // phi enormous pins the pointing gain at s0; mu enormous pins the fading
    // envelope at omega.  The analytic constants overflow in this corner, so
    // the hop is assembled by hand: the sampler only reads the parameters.
    stats::HopStatistics h{};
    h.fading = {2.0, 1e6, 1.0};
    h.pointing = {1e6, 0.8};
    h.gamma0 = 10.0;
    const auto model = stats::make_identical_model(h);
    const auto est = mc::empirical_avg_snr(model, small_cfg(20000, 31));
    const double deterministic = 10.0 * 0.8 * 0.8;  // gamma0 s0^2 omega^2
    CHECK(est.min_bound.mean ==
          doctest::Approx(deterministic).epsilon(2e-3));
    CHECK(est.min_bound.std_error < 2e-3 * deterministic);
}

TEST_CASE("antithetic pairing keeps the mean unbiased") {
    const auto model = stats::make_identical_model(make_hop(1.0, 1.5, 2.4, 0.8, 9.0));
    mc::SimConfig cfg = small_cfg(200000, 808);
    cfg.antithetic = true;
    const auto est = mc::empirical_avg_snr(model, cfg);
    const auto want = metrics::average_snr_quadrature(model);
    CHECK(std::fabs(est.min_bound.mean - want.value) <
          4.0 * est.min_bound.std_error);
}
