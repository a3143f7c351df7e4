// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "thzrelay/metrics.hpp"
#include "thzrelay/special_functions.hpp"

using namespace thzrelay;

namespace {

stats::DualHopModel model_of(double alpha, double mu, double phi, double s0,
                             double gamma0_db) {
    return stats::make_identical_model(stats::derive_constants(
        {alpha, mu, 1.0}, {phi, s0}, channel::db_to_linear(gamma0_db)));
}

}  // namespace

TEST_CASE("modulation presets") {
    CHECK(metrics::bpsk().p == 0.5);
    CHECK(metrics::bpsk().q == 1.0);
    CHECK(metrics::coherent_bfsk().q == 0.5);
    CHECK(metrics::dpsk().p == 1.0);
    CHECK_THROWS_AS(metrics::ModulationParams({-1.0, 1.0, "x"}).validate(),
                    std::invalid_argument);
}

TEST_CASE("outage probability") {
    const auto model = model_of(1.0, 1.5, 2.4, 0.8, 10.0);
    // vanishing threshold
    CHECK(metrics::outage_probability(1e-14, model) <= 1e-8);
    // equals the min-bound CDF by definition
    const double gth = channel::db_to_linear(4.0);
    CHECK(metrics::outage_probability(gth, model) ==
          doctest::Approx(stats::e2e_cdf_min_bound(gth, model)));
    // monotone decreasing in gamma0
    double prev = 1.0;
    for (double db : {5.0, 15.0, 25.0, 35.0}) {
        const double p = metrics::outage_probability(
            gth, model_of(1.0, 1.5, 2.4, 0.8, db));
        CHECK(p < prev);
        prev = p;
    }
    CHECK_THROWS_AS(metrics::outage_probability(0.0, model),
                    std::invalid_argument);
}

TEST_CASE("diversity order") {
    CHECK(metrics::diversity_order({1.0, 1.5, 1.0}, {2.4, 0.8}) ==
          doctest::Approx(0.75));
    CHECK(metrics::diversity_order({2.0, 2.5, 1.0}, {6.7, 0.8}) ==
          doctest::Approx(2.5));
    // tie case
    CHECK(metrics::diversity_order({2.0, 1.2, 1.0}, {2.4, 0.8}) ==
          doctest::Approx(1.2));
}

TEST_CASE("BER integral against a degenerate always-outage channel") {
    const auto half = metrics::detail::average_ber_from_cdf(
        [](double) { return 1.0; }, 0.5, 1.0, 1e-11);
    CHECK(half.value == doctest::Approx(0.5).epsilon(1e-9));
    const auto half2 = metrics::detail::average_ber_from_cdf(
        [](double) { return 1.0; }, 1.7, 0.4, 1e-11);
    CHECK(half2.value == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("BER quadrature vanishes at high SNR and matches the conditional kernel") {
    const auto lo = metrics::average_ber_quadrature(metrics::bpsk(),
                                                    model_of(1.0, 1.5, 2.4, 0.8, 10.0));
    const auto hi = metrics::average_ber_quadrature(metrics::bpsk(),
                                                    model_of(1.0, 1.5, 2.4, 0.8, 35.0));
    CHECK(hi.value < 0.06 * lo.value);  // diversity 0.75 over 25 dB
    const auto vhi = metrics::average_ber_quadrature(
        metrics::bpsk(), model_of(2.0, 2.5, 6.7, 0.8, 40.0));
    CHECK(vhi.value < 1e-8);

    // integration-by-parts consistency: the CDF form equals the expectation
    // of the conditional BER under the min-bound density
    const auto model = model_of(1.0, 1.5, 2.4, 0.8, 14.0);
    const double direct = oracle::integrate_to_inf(
        [&](double g) {
            return 0.5 * sf::regularized_gamma_q(0.5, g) *
                   stats::e2e_pdf_min_bound(g, model);
        },
        0.0, 1e-12);
    const auto viacdf = metrics::average_ber_quadrature(metrics::bpsk(), model);
    CHECK(viacdf.value == doctest::Approx(direct).epsilon(1e-7));
}

TEST_CASE("BER closed form matches quadrature on integer grids") {
    for (double alpha : {1.0, 2.0}) {
        for (double mu : {1.0, 2.0, 3.0}) {
            for (double phi : {2.4, 6.7}) {
                const auto model = model_of(alpha, mu, phi, 0.8, 15.0);
                const auto closed =
                    metrics::average_ber_closed_form(metrics::bpsk(), model);
                const auto quadr =
                    metrics::average_ber_quadrature(metrics::bpsk(), model);
                CAPTURE(alpha);
                CAPTURE(mu);
                CAPTURE(phi);
                CHECK(std::fabs(closed.value - quadr.value) <=
                      0.002 * quadr.value + closed.error + quadr.error);
            }
        }
    }
    // spot checks on the other modulation presets and on alpha = 3
    const auto model = model_of(2.0, 2.0, 6.7, 0.8, 18.0);
    const auto closed = metrics::average_ber_closed_form(metrics::dpsk(), model);
    const auto quadr = metrics::average_ber_quadrature(metrics::dpsk(), model);
    CHECK(closed.value == doctest::Approx(quadr.value).epsilon(2e-3));

    const auto bfsk_model = model_of(2.0, 2.0, 6.7, 0.8, 15.0);
    CHECK(metrics::average_ber_closed_form(metrics::coherent_bfsk(), bfsk_model)
              .value ==
          doctest::Approx(
              metrics::average_ber_quadrature(metrics::coherent_bfsk(),
                                              bfsk_model)
                  .value)
              .epsilon(2e-3));

    const auto a3 = model_of(3.0, 2.0, 2.4, 0.8, 20.0);
    CHECK(metrics::average_ber_closed_form(metrics::bpsk(), a3).value ==
          doctest::Approx(
              metrics::average_ber_quadrature(metrics::bpsk(), a3).value)
              .epsilon(2e-3));
}

TEST_CASE("BER closed form rejects non-integer parameters") {
    CHECK_THROWS_AS(metrics::average_ber_closed_form(
                        metrics::bpsk(), model_of(1.0, 1.5, 2.4, 0.8, 15.0)),
                    std::domain_error);
    CHECK_THROWS_AS(metrics::average_ber_closed_form(
                        metrics::bpsk(), model_of(1.5, 2.0, 2.4, 0.8, 15.0)),
                    std::domain_error);
    // non-identical anchors are rejected as well
    const auto h1 = stats::derive_constants({1.0, 2.0, 1.0}, {2.4, 0.8}, 10.0);
    const auto h2 = stats::derive_constants({1.0, 2.0, 1.0}, {2.4, 0.8}, 90.0);
    const auto model = stats::make_model(h1, h2);
    CHECK_THROWS_AS(metrics::average_ber_closed_form(metrics::bpsk(), model),
                    std::invalid_argument);
}

TEST_CASE("BER slope at high SNR reproduces the diversity order") {
    // (2, 2.5, 6.7): M = 2.5; quadrature path (mu non-integer)
    std::vector<std::pair<double, double>> pts;
    for (double db : {30.0, 32.5, 35.0, 37.5, 40.0}) {
        const auto v = metrics::average_ber_quadrature(
            metrics::bpsk(), model_of(2.0, 2.5, 6.7, 0.8, db));
        pts.emplace_back(db, v.value);
    }
    const double slope = metrics::fit_diversity_slope(pts);
    CHECK(slope == doctest::Approx(2.5).epsilon(0.10));

    // (2, 3, 6.7): M = 3 via the closed form, which must survive the deep
    // term cancellation at 30-40 dB
    std::vector<std::pair<double, double>> cpts;
    for (double db : {30.0, 32.5, 35.0, 37.5, 40.0}) {
        const auto v = metrics::average_ber_closed_form(
            metrics::bpsk(), model_of(2.0, 3.0, 6.7, 0.8, db));
        cpts.emplace_back(db, v.value);
    }
    CHECK(metrics::fit_diversity_slope(cpts) ==
          doctest::Approx(3.0).epsilon(0.10));
}

TEST_CASE("capacity lower bound: scale family and closed form") {
    const auto base = model_of(1.0, 1.5, 2.4, 0.8, 42.0);
    const auto shifted = model_of(1.0, 1.5, 2.4, 0.8, 52.0);
    const auto c1 = metrics::ergodic_capacity_lower_quadrature(base);
    const auto c2 = metrics::ergodic_capacity_lower_quadrature(shifted);
    // multiplying gamma0 by 10 adds exactly log2(10)
    CHECK(c2.value - c1.value ==
          doctest::Approx(std::log2(10.0)).epsilon(1e-7));

    // closed form: additive up to its shrinking high-SNR gap
    const auto cc1 = metrics::ergodic_capacity_lower_closed(
        model_of(1.0, 1.5, 2.4, 0.8, 60.0));
    const auto cc2 = metrics::ergodic_capacity_lower_closed(
        model_of(1.0, 1.5, 2.4, 0.8, 70.0));
    CHECK(cc2.value - cc1.value ==
          doctest::Approx(std::log2(10.0)).epsilon(0.01));

    // closed vs quadrature: covered by the self-reported estimates at
    // moderate SNR, tight at high SNR
    const auto cb = metrics::ergodic_capacity_lower_closed(base);
    CHECK(std::fabs(cb.value - c1.value) <= cb.error + c1.error);
    const auto q60 = metrics::ergodic_capacity_lower_quadrature(
        model_of(1.0, 1.5, 2.4, 0.8, 60.0));
    CHECK(std::fabs(cc1.value - q60.value) <= 0.005 * q60.value);

    // mu = 1: psi(1) = -euler_gamma path stays consistent
    const auto m1 = model_of(1.0, 1.0, 2.4, 0.8, 42.0);
    const auto cm1 = metrics::ergodic_capacity_lower_closed(m1);
    const auto qm1 = metrics::ergodic_capacity_lower_quadrature(m1);
    CHECK(std::fabs(cm1.value - qm1.value) <= cm1.error + qm1.error);

    // non-integer alpha and mu carry no preconditions here
    const auto mf = model_of(1.7, 2.2, 3.3, 0.9, 45.0);
    const auto cf = metrics::ergodic_capacity_lower_closed(mf);
    const auto qf = metrics::ergodic_capacity_lower_quadrature(mf);
    CHECK(std::fabs(cf.value - qf.value) <= cf.error + qf.error);
}

TEST_CASE("average SNR: closed form vs quadrature on the phi sweep") {
    for (double phi = 1.0; phi <= 12.0; phi += 1.0) {
        const auto model = model_of(1.0, 1.5, phi, 0.8, 15.0);
        const auto closed = metrics::average_snr_closed(model);
        const auto quadr = metrics::average_snr_quadrature(model);
        CAPTURE(phi);
        CHECK(std::fabs(closed.value - quadr.value) <= 0.005 * quadr.value);
    }
    // non-integer alpha and mu are fine here (no series preconditions)
    const auto frac = model_of(3.0, 2.5, 6.7, 0.8, 15.0);
    CHECK(metrics::average_snr_closed(frac).value ==
          doctest::Approx(metrics::average_snr_quadrature(frac).value)
              .epsilon(1e-10));
    const auto frac2 = model_of(1.7, 2.2, 3.3, 0.9, 12.0);
    CHECK(metrics::average_snr_closed(frac2).value ==
          doctest::Approx(metrics::average_snr_quadrature(frac2).value)
              .epsilon(1e-10));
}

TEST_CASE("average SNR: linear in gamma0, bounded by a single hop") {
    const auto m1 = model_of(1.0, 1.5, 2.4, 0.8, 10.0);
    const auto m2 = model_of(1.0, 1.5, 2.4, 0.8, 20.0);
    const auto v1 = metrics::average_snr_closed(m1);
    const auto v2 = metrics::average_snr_closed(m2);
    CHECK(v2.value == doctest::Approx(10.0 * v1.value).epsilon(1e-9));

    // min of two hops is below the single-hop mean gamma0 E|h|^2
    const double single = oracle::integrate_to_inf(
        [&](double g) { return g * stats::hop_snr_pdf(g, m1.hop1); }, 0.0,
        1e-11);
    CHECK(v1.value < single);
}

TEST_CASE("average SNR saturates in phi") {
    double prev = 0.0;
    double prev_inc = 1e9;
    for (double phi = 2.0; phi <= 12.0; phi += 2.0) {
        const auto v =
            metrics::average_snr_closed(model_of(1.0, 1.5, phi, 0.8, 15.0));
        if (prev > 0.0) {
            const double inc = v.value - prev;
            CHECK(inc > 0.0);        // increasing
            CHECK(inc < prev_inc);   // with vanishing increments
            prev_inc = inc;
        }
        prev = v.value;
    }
}

TEST_CASE("milder pointing error improves every metric") {
    const auto tight = model_of(1.0, 1.5, 6.7, 0.8, 14.0);
    const auto loose = model_of(1.0, 1.5, 2.4, 0.8, 14.0);
    const double gth = channel::db_to_linear(4.0);
    CHECK(metrics::outage_probability(gth, tight) <
          metrics::outage_probability(gth, loose));
    CHECK(metrics::average_ber_quadrature(metrics::bpsk(), tight).value <
          metrics::average_ber_quadrature(metrics::bpsk(), loose).value);
    CHECK(metrics::ergodic_capacity_lower_quadrature(tight).value >
          metrics::ergodic_capacity_lower_quadrature(loose).value);
    CHECK(metrics::average_snr_closed(tight).value >
          metrics::average_snr_closed(loose).value);
}

TEST_CASE("slope fit helper recovers an exact synthetic slope") {
    std::vector<std::pair<double, double>> pts;
    for (double db : {30.0, 32.0, 34.0, 36.0, 38.0, 40.0})
        pts.emplace_back(db, 3.5 * std::pow(10.0, -1.75 * db / 10.0));
    CHECK(metrics::fit_diversity_slope(pts) == doctest::Approx(1.75).epsilon(1e-12));
    CHECK_THROWS_AS(metrics::fit_diversity_slope({{30.0, 0.1}}),
                    std::invalid_argument);
}

TEST_CASE("metric reports carry the parameter echo") {
    const auto model = model_of(2.0, 2.5, 6.7, 0.8, 20.0);
    const auto r = metrics::make_report("outage", 0.125,
                                        metrics::Method::closed_form, 1e-9, model);
    CHECK(r.metric == "outage");
    CHECK(r.alpha == 2.0);
    CHECK(r.mu == 2.5);
    CHECK(r.phi == 6.7);
    CHECK(r.s0 == 0.8);
    CHECK(r.gamma0_db_hop1 == doctest::Approx(20.0));
    CHECK(std::string(metrics::method_name(r.method)) == "closed_form");
}
