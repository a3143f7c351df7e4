// SPDX-License-Identifier: Apache-2.0
//
// thzrelay: probability model of one THz hop and of the dual-hop link.
//
// The combined fading + misalignment envelope has density
//   f(x) = pdf_norm * x^{phi-1} * Gamma(tail_order, power_scale * x^alpha)
// with
//   pdf_norm    = phi S0^-phi mu^{phi/alpha} / (Omega^alpha Gamma(mu))
//   tail_order  = (alpha mu - phi) / alpha
//   power_scale = (mu / Omega^alpha) S0^-alpha.
// Construction re-normalizes pdf_norm numerically when the printed constant
// does not integrate to one (it does for omega = 1).

#ifndef THZRELAY_STATISTICS_HPP
#define THZRELAY_STATISTICS_HPP

#include "thzrelay/channel_model.hpp"

namespace thzrelay::stats {

struct HopStatistics {
    channel::FadingParams fading;
    channel::PointingParams pointing;
    double gamma0;       // SNR anchor, linear, > 0

    // derived constants
    double pdf_norm;     // A
    double tail_order;   // B = (alpha mu - phi) / alpha
    double power_scale;  // C = mu Omega^-alpha S0^-alpha

    bool renormalized = false;   // pdf_norm was rescaled to integrate to 1
    double norm_defect = 0.0;    // printed-constant integral minus 1
    bool nudged = false;         // phi was epsilon-shifted off an integer B
};

// Derives (A, B, C), runs the normalization oracle, and nudges phi when
// tail_order sits within 1e-8 of a non-positive integer (which would place
// Gamma(B, .) on a pole of its series representation).
HopStatistics derive_constants(const channel::FadingParams& fading,
                               const channel::PointingParams& pointing,
                               double gamma0);

struct DualHopModel {
    HopStatistics hop1;
    HopStatistics hop2;
    bool identical = true;  // same fading/pointing law on both hops

    // Throws unless the hops carry the same distribution shape (and, when
    // `and_anchor` is set, the same gamma0) -- preconditions of the
    // single-integral closed forms.
    void require_identical(bool and_anchor) const;
};

DualHopModel make_identical_model(const HopStatistics& hop);
DualHopModel make_model(const HopStatistics& h1, const HopStatistics& h2);

// Combined envelope density of |h_pf| at x >= 0.
double envelope_pdf(double x, const HopStatistics& hop);

// Per-hop SNR density / distribution at gamma >= 0 (gamma = gamma0 |h_pf|^2).
// The density returns +inf at gamma == 0 when the limit diverges there.
double hop_snr_pdf(double gamma, const HopStatistics& hop);
double hop_snr_cdf(double gamma, const HopStatistics& hop);

// Exact CSI-assisted amplify-and-forward end-to-end SNR.
double exact_af_snr(double g1, double g2);

// Distribution of min(gamma1, gamma2) under independent hops.
double e2e_cdf_min_bound(double gamma, const DualHopModel& model);
double e2e_pdf_min_bound(double gamma, const DualHopModel& model);

}  // namespace thzrelay::stats

#endif
