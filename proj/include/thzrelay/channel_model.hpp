// SPDX-License-Identifier: Apache-2.0
//
// thzrelay: deterministic THz link budget and pointing-error geometry.

#ifndef THZRELAY_CHANNEL_MODEL_HPP
#define THZRELAY_CHANNEL_MODEL_HPP

namespace thzrelay::channel {

inline constexpr double speed_of_light = 299792458.0;  // m/s

// Deterministic part of one hop.  Linear units throughout; helpers below
// convert from the dB-flavored config surface.
struct LinkBudget {
    double f_hz;        // carrier frequency
    double d_m;         // hop distance
    double gain_tx;     // linear antenna gains
    double gain_rx;
    double k_abs;       // molecular absorption coefficient, 1/m
    double ptx_w;       // transmit power
    double n0_w_hz;     // noise PSD
    double bw_hz;       // bandwidth

    void validate() const;  // throws std::invalid_argument
};

struct PointingParams {
    double phi;  // pointing-error shape, > 0
    double s0;   // maximum collected fraction, in (0, 1]

    void validate() const;
};

struct FadingParams {
    double alpha;  // nonlinearity, > 0
    double mu;     // clustering, > 0
    double omega;  // alpha-root mean envelope value, > 0

    void validate() const;
};

// Amplitude path gain c sqrt(Gt Gr) / (4 pi f d) * exp(-k d / 2).
double path_gain(const LinkBudget& lb);

// SNR without fading: gamma0 = Ptx h_l^2 / (N0 B).
double snr_anchor(const LinkBudget& lb);

// Farid-Hranilovic construction from beam geometry:
//   v = sqrt(pi) a / (sqrt(2) w_z), s0 = erf(v)^2,
//   w_eq^2 = w_z^2 sqrt(pi) erf(v) / (2 v exp(-v^2)), phi = w_eq / (2 sigma).
PointingParams pointing_from_geometry(double aperture_radius_m,
                                      double beam_waist_at_rx_m,
                                      double jitter_sigma_m);

double db_to_linear(double db);
double linear_to_db(double x);
double dbm_to_watt(double dbm);
double watt_to_dbm(double w);

}  // namespace thzrelay::channel

#endif
