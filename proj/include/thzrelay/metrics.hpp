// SPDX-License-Identifier: Apache-2.0
//
// thzrelay: link performance metrics.
//
// Every metric has a quadrature path (always available, driven by the
// min-bound distribution) and a closed-form fast path with restricted
// validity.  Reports carry the method tag and an error estimate.

#ifndef THZRELAY_METRICS_HPP
#define THZRELAY_METRICS_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "thzrelay/statistics.hpp"

namespace thzrelay::metrics {

struct ModulationParams {
    double p;
    double q;
    std::string label;

    void validate() const;
};

// Conditional-BER family Gamma(p, q gamma) / (2 Gamma(p)).
ModulationParams bpsk();           // (0.5, 1)
ModulationParams coherent_bfsk();  // (0.5, 0.5)
ModulationParams dpsk();           // (1, 1)

enum class Method { closed_form, quadrature, monte_carlo };

const char* method_name(Method m);

struct MetricReport {
    std::string metric;
    double value = 0.0;
    Method method = Method::quadrature;
    double error_estimate = 0.0;
    // parameter echo
    double alpha = 0.0, mu = 0.0, phi = 0.0, s0 = 0.0;
    double gamma0_db_hop1 = 0.0, gamma0_db_hop2 = 0.0;
};

MetricReport make_report(const std::string& metric, double value, Method method,
                         double error_estimate, const stats::DualHopModel& model);

// P(min(g1,g2) < gamma_th), the min-bound outage.
double outage_probability(double gamma_th, const stats::DualHopModel& model);

// min(alpha mu / 2, phi / 2).
double diversity_order(const channel::FadingParams& fading,
                       const channel::PointingParams& pointing);

struct ValueWithError {
    double value = 0.0;
    double error = 0.0;
};

// q^p/(2 Gamma(p)) Int_0^inf g^{p-1} e^{-q g} F(g) dg with the min-bound CDF.
ValueWithError average_ber_quadrature(const ModulationParams& mod,
                                      const stats::DualHopModel& model,
                                      double tol = 1e-10);

// Finite Meijer-G series; requires identical hops, integer alpha >= 1 and
// integer mu >= 2 (see docs/derivations.md for the validity discussion).
// Throws std::domain_error otherwise, directing the caller to quadrature.
ValueWithError average_ber_closed_form(const ModulationParams& mod,
                                       const stats::DualHopModel& model);

// E[log2 gamma] under the min-bound density (ergodic-capacity lower bound),
// in bits/s/Hz.
ValueWithError ergodic_capacity_lower_quadrature(
    const stats::DualHopModel& model, double tol = 1e-10);

// Digamma term plus two bivariate Meijer-G terms; requires identical hops
// with equal anchors.  The error estimate includes the documented
// log(1+x) ~ log(x) replacement gap of the two G terms.
ValueWithError ergodic_capacity_lower_closed(const stats::DualHopModel& model);

// E[min(g1, g2)].
ValueWithError average_snr_quadrature(const stats::DualHopModel& model,
                                      double tol = 1e-10);

// Gamma / 2F1 / signed-incomplete-beta closed form; identical hops with
// equal anchors.
ValueWithError average_snr_closed(const stats::DualHopModel& model);

// Least-squares slope of -log10(metric) against gamma0_dB/10; used by the
// diversity-order checks.  `points` are (gamma0_db, metric_value) pairs.
double fit_diversity_slope(const std::vector<std::pair<double, double>>& points);

namespace detail {

// The defining BER integral against an arbitrary CDF (the degenerate
// always-outage channel with F == 1 integrates to exactly 1/2).
ValueWithError average_ber_from_cdf(const std::function<double(double)>& cdf,
                                    double p, double q, double tol);

// Int_0^inf g^{rho-1} e^{-lam g} e^{-c g^{alpha/2}} dg via a Meijer G of
// argument c^2 lam^-alpha alpha^alpha / 4 (exact for integer alpha >= 1).
ValueWithError laplace_power_exp(double rho, double lam, double c, int alpha);

// Int_0^inf g^{rho-1} e^{-lam g} Gamma(b, c g^{alpha/2}) dg, exact.
ValueWithError laplace_power_upper_gamma(double rho, double lam, double c,
                                         int alpha, double b);

// S(nu, a)  = Int_0^inf u^{nu-1} e^{-u} Gamma(a, u) du, through the signed
//             incomplete beta at z = -1 (imaginary parts cancel in pairs).
// Slow(nu,a) = Int_0^inf u^{nu-1} e^{-u} gamma_lower(a, u) du via 2F1(-1).
double exp_weighted_upper_gamma_moment(double nu, double a);
double exp_weighted_lower_gamma_moment(double nu, double a);

// Int_0^inf t^{rho-1} Gamma(b, C t) Gamma(b2, C t) dt  (b2 = mu or b) and the
// log-weighted variant Int t^{rho-1} ln(1+y t) Gamma(b,Ct) Gamma(b2,Ct) dt.
double product_gamma_moment_bb(double rho, double b, double c);      // (G(b,Ct))^2
double product_gamma_moment_bmu(double rho, double b, double mu, double c);
ValueWithError log_weighted_product_moment(double rho, double b, double b2,
                                           double c, double y);

}  // namespace detail

}  // namespace thzrelay::metrics

#endif
