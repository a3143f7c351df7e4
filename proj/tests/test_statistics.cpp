// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "thzrelay/statistics.hpp"

using namespace thzrelay;

namespace {

stats::HopStatistics make_hop(double alpha, double mu, double phi, double s0,
                              double gamma0, double omega = 1.0) {
    return stats::derive_constants({alpha, mu, omega}, {phi, s0}, gamma0);
}

}  // namespace

TEST_CASE("derived constants match direct substitution") {
    const auto h = make_hop(1.0, 1.0, 2.4, 0.8, 10.0);
    CHECK(h.tail_order == doctest::Approx(-1.4).epsilon(1e-14));
    CHECK(h.power_scale == doctest::Approx(1.25).epsilon(1e-14));
    CHECK_FALSE(h.renormalized);
    // printed normalization constant for omega = 1
    CHECK(h.pdf_norm ==
          doctest::Approx(2.4 * std::pow(0.8, -2.4)).epsilon(1e-12));

    const auto h2 = make_hop(2.0, 2.5, 6.7, 0.8, 10.0);
    CHECK(h2.tail_order == doctest::Approx(-0.85).epsilon(1e-14));

    CHECK_THROWS_AS(make_hop(0.0, 1.0, 2.4, 0.8, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(make_hop(1.0, 1.0, 2.4, 0.8, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_hop(1.0, 1.0, 2.4, 1.5, 10.0), std::invalid_argument);
}

TEST_CASE("integer tail order is nudged away from the pole") {
    // phi = alpha(mu - 1) makes B = 1... pick phi = alpha*mu so B = 0
    const auto h = make_hop(1.0, 2.0, 2.0, 0.8, 10.0);
    CHECK(h.nudged);
    CHECK(h.tail_order != 0.0);
    CHECK(std::fabs(h.tail_order) < 1e-5);
    // density still integrates to 1 (the nudged tail order makes the
    // evaluations noisy near 1e-10, so the oracle runs at 1e-8)
    const double norm = oracle::integrate_to_inf(
        [&](double x) { return stats::envelope_pdf(x, h); }, 0.0, 1e-8);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("envelope density normalizes on the parameter grid") {
    for (double alpha : {1.0, 2.0, 3.0}) {
        for (double mu : {1.0, 1.5, 2.5}) {
            for (double phi : {1.2, 2.4, 6.7}) {
                const auto h = make_hop(alpha, mu, phi, 0.8, 5.0);
                const double norm = oracle::integrate_to_inf(
                    [&](double x) { return stats::envelope_pdf(x, h); }, 0.0,
                    1e-9);
                CAPTURE(alpha);
                CAPTURE(mu);
                CAPTURE(phi);
                CHECK(std::fabs(norm - 1.0) < 1e-6);
            }
        }
    }
    // the s0 endpoints, including the boundary value 1
    for (double s0 : {0.5, 1.0}) {
        for (const auto& [alpha, mu, phi] :
             {std::tuple{1.0, 1.0, 1.2}, {2.0, 1.5, 2.4}, {3.0, 2.5, 6.7}}) {
            const auto h = make_hop(alpha, mu, phi, s0, 5.0);
            const double norm = oracle::integrate_to_inf(
                [&](double x) { return stats::envelope_pdf(x, h); }, 0.0, 1e-9);
            CAPTURE(s0);
            CAPTURE(alpha);
            CHECK(std::fabs(norm - 1.0) < 1e-6);
        }
    }
}

TEST_CASE("printed constant is renormalized when omega != 1") {
    const auto h = make_hop(1.0, 1.5, 2.4, 0.8, 10.0, 1.4);
    CHECK(h.renormalized);
    CHECK(std::fabs(h.norm_defect) > 1e-6);
    const double norm = oracle::integrate_to_inf(
        [&](double x) { return stats::envelope_pdf(x, h); }, 0.0, 1e-11);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("envelope pdf edge values") {
    const auto h = make_hop(1.0, 1.5, 2.4, 0.8, 10.0);
    CHECK(stats::envelope_pdf(0.0, h) == 0.0);  // phi > 1
    const auto hs = make_hop(1.0, 1.5, 0.7, 0.8, 10.0);
    CHECK(std::isinf(stats::envelope_pdf(0.0, hs)));
    CHECK_THROWS_AS(stats::envelope_pdf(-0.1, h), std::invalid_argument);
}

TEST_CASE("SNR density is the envelope density under the change of variables") {
    const auto h = make_hop(2.0, 1.5, 2.4, 0.8, 14.0);
    for (double g : {0.01, 0.4, 2.0, 13.0, 60.0}) {
        const double env = std::sqrt(g / h.gamma0);
        const double want =
            stats::envelope_pdf(env, h) / (2.0 * std::sqrt(g * h.gamma0));
        CHECK(stats::hop_snr_pdf(g, h) == doctest::Approx(want).epsilon(1e-13));
    }
    // sentinel at gamma = 0 for phi <= 1
    const auto hs = make_hop(2.0, 1.5, 0.9, 0.8, 14.0);
    CHECK(std::isinf(stats::hop_snr_pdf(0.0, hs)));
}

TEST_CASE("SNR pdf integrates to one and matches the CDF") {
    const auto h = make_hop(1.0, 1.5, 2.4, 0.8, 12.0);
    // gamma = u^4 removes the integrable endpoint singularity for the oracle
    auto pdf_mass = [&](double g_hi) {
        return oracle::integrate(
            [&](double u) {
                const double g = u * u * u * u;
                return stats::hop_snr_pdf(g, h) * 4.0 * u * u * u;
            },
            0.0, std::pow(g_hi, 0.25), 1e-12);
    };
    // the Gamma tail beyond 400 gamma0 is below 1e-16
    CHECK(pdf_mass(400.0 * h.gamma0) == doctest::Approx(1.0).epsilon(1e-8));

    CHECK(stats::hop_snr_cdf(0.0, h) == 0.0);
    CHECK(stats::hop_snr_cdf(1e9 * h.gamma0, h) == doctest::Approx(1.0));
    for (double g : {0.001, 0.05, 0.9, 6.0, 40.0, 300.0}) {
        CHECK(std::fabs(stats::hop_snr_cdf(g, h) - pdf_mass(g)) < 1e-8);
    }
}

TEST_CASE("CDF depends on gamma only through gamma/gamma0") {
    for (double scale : {3.7, 120.0}) {
        const auto h1 = make_hop(1.0, 1.5, 2.4, 0.8, 8.0);
        const auto h2 = make_hop(1.0, 1.5, 2.4, 0.8, 8.0 * scale);
        for (double g : {0.2, 1.0, 5.0}) {
            CHECK(stats::hop_snr_cdf(g, h1) ==
                  doctest::Approx(stats::hop_snr_cdf(g * scale, h2))
                      .epsilon(1e-12));
        }
    }
}

TEST_CASE("CDF is monotone and bounded, stable into the deep tail") {
    const auto h = make_hop(2.0, 2.5, 6.7, 0.8, 1e4);
    double prev = 0.0;
    for (double lg = -14.0; lg < 6.0; lg += 0.25) {
        const double f = stats::hop_snr_cdf(h.gamma0 * std::pow(10.0, lg), h);
        CHECK(f >= prev);
        CHECK(f <= 1.0);
        prev = f;
    }
    // deep underflow region stays finite and positive
    const double tiny = stats::hop_snr_cdf(h.gamma0 * 1e-14, h);
    CHECK(tiny >= 0.0);
    CHECK(tiny < 1e-10);
}

TEST_CASE("exact AF SNR") {
    CHECK(stats::exact_af_snr(0.0, 3.0) == 0.0);
    CHECK(stats::exact_af_snr(1.0, 1.0) == doctest::Approx(1.0 / 3.0));
    for (double g1 : {0.1, 1.0, 7.0}) {
        for (double g2 : {0.3, 2.0, 50.0}) {
            const double af = stats::exact_af_snr(g1, g2);
            CHECK(af <= std::min(g1, g2));
            CHECK(af >= 0.0);
        }
    }
    CHECK_THROWS_AS(stats::exact_af_snr(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("min-bound end-to-end distribution") {
    const auto h = make_hop(1.0, 1.5, 2.4, 0.8, 11.0);
    const auto model = stats::make_identical_model(h);

    // algebra: F1 = F2 = 0.1 -> 0.19 (synthetic check via the formula)
    const double f = stats::hop_snr_cdf(1.0, h);
    CHECK(stats::e2e_cdf_min_bound(1.0, model) ==
          doctest::Approx(2.0 * f - f * f).epsilon(1e-13));

    CHECK(stats::e2e_cdf_min_bound(0.0, model) == 0.0);
    CHECK(stats::e2e_cdf_min_bound(1e8 * h.gamma0, model) ==
          doctest::Approx(1.0));

    // identical hops: density reduces to 2 f (1 - F)
    for (double g : {0.2, 1.5, 9.0}) {
        const double want = 2.0 * stats::hop_snr_pdf(g, h) *
                            (1.0 - stats::hop_snr_cdf(g, h));
        CHECK(stats::e2e_pdf_min_bound(g, model) ==
              doctest::Approx(want).epsilon(1e-12));
    }

    // numerical derivative of the CDF matches the density
    for (double g : {0.5, 2.0, 6.0}) {
        const double eps = 1e-5 * g;
        const double der = (stats::e2e_cdf_min_bound(g + eps, model) -
                            stats::e2e_cdf_min_bound(g - eps, model)) /
                           (2.0 * eps);
        CHECK(der == doctest::Approx(stats::e2e_pdf_min_bound(g, model))
                         .epsilon(1e-6));
    }

    // density integrates to one (gamma = u^4 to smooth the origin)
    const double mass = oracle::integrate(
        [&](double u) {
            const double g = u * u * u * u;
            return stats::e2e_pdf_min_bound(g, model) * 4.0 * u * u * u;
        },
        0.0, std::pow(400.0 * h.gamma0, 0.25), 1e-12);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("non-identical hops are supported by the combination formulas") {
    const auto h1 = make_hop(1.0, 1.5, 2.4, 0.8, 5.0);
    const auto h2 = make_hop(1.0, 1.5, 2.4, 0.8, 50.0);
    const auto model = stats::make_model(h1, h2);
    for (double g : {0.5, 3.0}) {
        const double f1 = stats::hop_snr_cdf(g, h1);
        const double f2 = stats::hop_snr_cdf(g, h2);
        CHECK(stats::e2e_cdf_min_bound(g, model) ==
              doctest::Approx(f1 + f2 - f1 * f2).epsilon(1e-13));
    }
    // closed forms refuse hops with different anchors
    CHECK_THROWS_AS(model.require_identical(true), std::invalid_argument);
    CHECK_NOTHROW(model.require_identical(false));

    const auto hx = make_hop(2.0, 1.5, 2.4, 0.8, 5.0);
    const auto mixed = stats::make_model(h1, hx);
    CHECK_THROWS_AS(mixed.require_identical(false), std::invalid_argument);
}
