// SPDX-License-Identifier: Apache-2.0

#include "thzrelay/channel_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace thzrelay::channel {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("channel_model: ") + what);
}
}  // namespace

void LinkBudget::validate() const {
    require(f_hz > 0.0, "carrier frequency must be > 0");
    require(d_m > 0.0, "distance must be > 0");
    require(gain_tx >= 0.0 && gain_rx >= 0.0, "antenna gains must be >= 0");
    require(k_abs >= 0.0, "absorption coefficient must be >= 0");
    require(ptx_w > 0.0, "transmit power must be > 0");
    require(n0_w_hz > 0.0, "noise PSD must be > 0");
    require(bw_hz > 0.0, "bandwidth must be > 0");
}

void PointingParams::validate() const {
    require(phi > 0.0, "pointing shape phi must be > 0");
    require(s0 > 0.0 && s0 <= 1.0, "pointing gain s0 must be in (0, 1]");
}

void FadingParams::validate() const {
    require(alpha > 0.0, "fading alpha must be > 0");
    require(mu > 0.0, "fading mu must be > 0");
    require(omega > 0.0, "fading omega must be > 0");
}

double path_gain(const LinkBudget& lb) {
    lb.validate();
    const double spreading =
        speed_of_light * std::sqrt(lb.gain_tx * lb.gain_rx) /
        (4.0 * kPi * lb.f_hz * lb.d_m);
    return spreading * std::exp(-0.5 * lb.k_abs * lb.d_m);
}

double snr_anchor(const LinkBudget& lb) {
    const double h = path_gain(lb);
    return lb.ptx_w * h * h / (lb.n0_w_hz * lb.bw_hz);
}

PointingParams pointing_from_geometry(double aperture_radius_m,
                                      double beam_waist_at_rx_m,
                                      double jitter_sigma_m) {
    require(aperture_radius_m > 0.0, "aperture radius must be > 0");
    require(beam_waist_at_rx_m > 0.0, "beam waist must be > 0");
    require(jitter_sigma_m > 0.0, "jitter sigma must be > 0");
    const double v =
        std::sqrt(kPi) * aperture_radius_m / (std::sqrt(2.0) * beam_waist_at_rx_m);
    const double erf_v = std::erf(v);
    const double s0 = erf_v * erf_v;
    const double w_eq_sq = beam_waist_at_rx_m * beam_waist_at_rx_m *
                           std::sqrt(kPi) * erf_v /
                           (2.0 * v * std::exp(-v * v));
    const double phi = std::sqrt(w_eq_sq) / (2.0 * jitter_sigma_m);
    // The jitter -> infinity limit drives phi to 0+, outside the model.
    require(phi > 1e-9, "jitter collapses the pointing shape phi to 0");
    PointingParams p{phi, std::min(s0, 1.0)};
    p.validate();
    return p;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double x) { return 10.0 * std::log10(x); }
double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

}  // namespace thzrelay::channel
