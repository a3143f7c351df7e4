// SPDX-License-Identifier: Apache-2.0

#include "thzrelay/statistics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "thzrelay/quadrature.hpp"
#include "thzrelay/special_functions.hpp"

namespace thzrelay::stats {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gamma(B) and the ascending series sum_n (-z)^n / (n! (B+n)), so callers can
// combine z^{phi/alpha} Gamma(B, z) = z^{phi/alpha} Gamma(B) - z^mu * series
// without forming the huge z^B intermediate.  Requires B off the poles.
double ascending_series(double b, double z) {
    double pow_term = 1.0;  // (-z)^n / n!
    double sum = 1.0 / b;
    for (int n = 1; n < 200; ++n) {
        pow_term *= -z / n;
        const double add = pow_term / (b + n);
        sum += add;
        if (std::fabs(add) < 1e-18 * std::fabs(sum) + 1e-300) break;
    }
    return sum;
}

}  // namespace

HopStatistics derive_constants(const channel::FadingParams& fading_in,
                               const channel::PointingParams& pointing_in,
                               double gamma0) {
    channel::FadingParams fading = fading_in;
    channel::PointingParams pointing = pointing_in;
    fading.validate();
    pointing.validate();
    if (!(gamma0 > 0.0))
        throw std::invalid_argument("derive_constants: gamma0 must be > 0");

    HopStatistics hop;
    hop.nudged = false;

    // Keep tail_order away from non-positive integers, where the upper
    // incomplete gamma of the envelope sits on a pole of its expansions.
    {
        const double b = (fading.alpha * fading.mu - pointing.phi) / fading.alpha;
        const double r = std::round(b);
        if (r <= 0.0 && std::fabs(b - r) < 1e-8) {
            pointing.phi += 1e-6 * fading.alpha;
            hop.nudged = true;
        }
    }

    hop.fading = fading;
    hop.pointing = pointing;
    hop.gamma0 = gamma0;

    const double alpha = fading.alpha, mu = fading.mu, omega = fading.omega;
    const double phi = pointing.phi, s0 = pointing.s0;
    const double omega_alpha = std::pow(omega, alpha);

    hop.tail_order = (alpha * mu - phi) / alpha;
    hop.power_scale = mu / omega_alpha * std::pow(s0, -alpha);
    hop.pdf_norm = phi * std::pow(s0, -phi) * std::pow(mu, phi / alpha) /
                   (omega_alpha * sf::gamma_fn(mu));
    if (!std::isfinite(hop.pdf_norm) || hop.tail_order < -1000.0)
        throw std::invalid_argument(
            "derive_constants: parameter regime overflows double precision "
            "(phi or mu too extreme)");

    // Normalization oracle: the envelope density must integrate to one.
    HopStatistics probe = hop;
    auto pdf = [&probe](double x) { return envelope_pdf(x, probe); };
    const auto norm = quad::integrate_zero_to_inf(
        pdf, 1e-12, 1e-10, std::log(std::max(s0 * omega, 1e-6)));
    hop.norm_defect = norm.value - 1.0;
    if (std::fabs(hop.norm_defect) > 1e-6) {
        if (!(norm.value > 0.0) || !std::isfinite(norm.value))
            throw std::invalid_argument(
                "derive_constants: envelope density is not normalizable");
        hop.pdf_norm /= norm.value;
        hop.renormalized = true;
    }
    return hop;
}

void DualHopModel::require_identical(bool and_anchor) const {
    auto same = [](double x, double y) {
        return std::fabs(x - y) <= 1e-12 * std::max(std::fabs(x), std::fabs(y));
    };
    const bool shape_ok =
        identical && same(hop1.fading.alpha, hop2.fading.alpha) &&
        same(hop1.fading.mu, hop2.fading.mu) &&
        same(hop1.fading.omega, hop2.fading.omega) &&
        same(hop1.pointing.phi, hop2.pointing.phi) &&
        same(hop1.pointing.s0, hop2.pointing.s0);
    if (!shape_ok)
        throw std::invalid_argument(
            "closed form requires identically distributed hops");
    if (and_anchor && !same(hop1.gamma0, hop2.gamma0))
        throw std::invalid_argument(
            "closed form requires equal per-hop SNR anchors");
}

DualHopModel make_identical_model(const HopStatistics& hop) {
    return DualHopModel{hop, hop, true};
}

DualHopModel make_model(const HopStatistics& h1, const HopStatistics& h2) {
    DualHopModel m{h1, h2, false};
    m.identical =
        h1.fading.alpha == h2.fading.alpha && h1.fading.mu == h2.fading.mu &&
        h1.fading.omega == h2.fading.omega &&
        h1.pointing.phi == h2.pointing.phi && h1.pointing.s0 == h2.pointing.s0;
    return m;
}

double envelope_pdf(double x, const HopStatistics& hop) {
    if (x < 0.0) throw std::invalid_argument("envelope_pdf: x must be >= 0");
    const double phi = hop.pointing.phi;
    if (x == 0.0) {
        if (phi > 1.0) return 0.0;
        if (phi < 1.0) return kInf;
        // phi == 1: A * Gamma(B, 0)
        return hop.tail_order > 0.0
                   ? hop.pdf_norm * sf::gamma_fn(hop.tail_order)
                   : kInf;
    }
    const double z = hop.power_scale * std::pow(x, hop.fading.alpha);
    const double g = sf::upper_incomplete_gamma(hop.tail_order, z);
    return hop.pdf_norm * std::pow(x, phi - 1.0) * g;
}

double hop_snr_pdf(double gamma, const HopStatistics& hop) {
    if (gamma < 0.0) throw std::invalid_argument("hop_snr_pdf: gamma >= 0");
    const double alpha = hop.fading.alpha, mu = hop.fading.mu;
    const double phi = hop.pointing.phi;
    if (gamma == 0.0) {
        const double e0 = std::min(phi, alpha * mu) / 2.0 - 1.0;
        if (e0 < -1e-12) return kInf;
        if (e0 > 1e-12) return 0.0;
        // finite limit at gamma -> 0
        if (phi < alpha * mu)
            return hop.pdf_norm * sf::gamma_fn(hop.tail_order) / (2.0 * hop.gamma0);
        return hop.pdf_norm * std::pow(hop.power_scale, hop.tail_order) /
               (-2.0 * hop.tail_order * hop.gamma0);
    }
    const double env = std::sqrt(gamma / hop.gamma0);
    return envelope_pdf(env, hop) / (2.0 * std::sqrt(gamma * hop.gamma0));
}

double hop_snr_cdf(double gamma, const HopStatistics& hop) {
    if (gamma < 0.0) throw std::invalid_argument("hop_snr_cdf: gamma >= 0");
    if (gamma == 0.0) return 0.0;
    const double alpha = hop.fading.alpha, mu = hop.fading.mu;
    const double phi = hop.pointing.phi;
    const double b = hop.tail_order;
    const double scale = hop.pdf_norm * std::pow(hop.power_scale, -phi / alpha) / phi;
    const double log_z = alpha * 0.5 * std::log(gamma / hop.gamma0) +
                         std::log(hop.power_scale);
    double f;
    if (log_z < std::log(0.25)) {
        // Small-argument path: combine exponents analytically so that the
        // z^{phi/alpha} * z^B product never forms huge/tiny intermediates.
        const double z = std::exp(log_z);
        const double low = sf::lower_incomplete_gamma(mu, z);
        double tail;
        if (b > 0.0) {
            tail = std::exp(phi / alpha * log_z) *
                       (sf::gamma_fn(b) - sf::lower_incomplete_gamma(b, z)) /
                       1.0;
        } else {
            // Gamma(B, z) = Gamma(B) - z^B * ascending_series(B, z)
            tail = std::exp(phi / alpha * log_z) * sf::gamma_fn(b) -
                   std::exp(mu * log_z) * ascending_series(b, z);
        }
        f = scale * (low + tail);
    } else {
        const double z = std::exp(log_z);
        f = scale * (sf::lower_incomplete_gamma(mu, z) +
                     std::exp(phi / alpha * log_z) *
                         sf::upper_incomplete_gamma(b, z));
    }
    if (f < 0.0) return 0.0;
    if (f > 1.0) return 1.0;
    return f;
}

double exact_af_snr(double g1, double g2) {
    if (g1 < 0.0 || g2 < 0.0)
        throw std::invalid_argument("exact_af_snr: SNRs must be >= 0");
    if (g1 == 0.0 || g2 == 0.0) return 0.0;
    return g1 * g2 / (g1 + g2 + 1.0);
}

double e2e_cdf_min_bound(double gamma, const DualHopModel& model) {
    const double f1 = hop_snr_cdf(gamma, model.hop1);
    const double f2 = hop_snr_cdf(gamma, model.hop2);
    return f1 + f2 - f1 * f2;
}

double e2e_pdf_min_bound(double gamma, const DualHopModel& model) {
    const double p1 = hop_snr_pdf(gamma, model.hop1);
    const double p2 = hop_snr_pdf(gamma, model.hop2);
    if (std::isinf(p1) || std::isinf(p2)) return kInf;
    const double f1 = hop_snr_cdf(gamma, model.hop1);
    const double f2 = hop_snr_cdf(gamma, model.hop2);
    return p1 * (1.0 - f2) + p2 * (1.0 - f1);
}

}  // namespace thzrelay::stats
