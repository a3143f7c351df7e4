// SPDX-License-Identifier: Apache-2.0
//
// thzrelay: real and complex special functions used by the link statistics.
//
// Gamma family (including the upper incomplete gamma with negative first
// argument), digamma, Gauss 2F1 with the transformations needed near z = -1,
// and the generalized incomplete beta B_z(a, b) evaluated through the 2F1
// identity.  Everything here is a pure function of its arguments.

#ifndef THZRELAY_SPECIAL_FUNCTIONS_HPP
#define THZRELAY_SPECIAL_FUNCTIONS_HPP

#include <complex>

namespace thzrelay::sf {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

struct LogGamma {
    double log_abs;  // ln |Gamma(a)|
    int sign;        // sign of Gamma(a), +1 or -1
};

// ln |Gamma(a)| with sign; throws std::domain_error at the poles.
LogGamma ln_gamma(double a);

// Gamma(a); may overflow to +/-inf for large a.
double gamma_fn(double a);

// psi(x) = d/dx ln Gamma(x), x > 0.
double digamma(double x);

// Upper incomplete gamma Gamma(a, x) = int_x^inf t^{a-1} e^{-t} dt.
// a may be negative (handled by the raising recurrence
// Gamma(a,x) = (Gamma(a+1,x) - x^a e^{-x}) / a); a <= 0 requires x > 0.
double upper_incomplete_gamma(double a, double x);

// Lower incomplete gamma for a > 0, computed stably as a series for small x
// and as Gamma(a) - Gamma(a,x) otherwise.
double lower_incomplete_gamma(double a, double x);

// Regularized Q(a, x) = Gamma(a,x)/Gamma(a), a > 0.  Stays in [0, 1] and does
// not overflow for large a; used per-sample by the Monte-Carlo BER estimator.
double regularized_gamma_q(double a, double x);

// Gauss hypergeometric 2F1(a, b; c; z) for real parameters and z <= 1.
// Direct series for |z| <= 0.6, Pfaff transformation toward z/(z-1) for
// z < -0.6, the Gamma-connection formula on (0.6, 1), and Gauss's theorem at
// z = 1 (requires c - a - b > 0).
double gauss_2f1(double a, double b, double c, double z);

// B_z(a, b) = z^a / a * 2F1(a, 1-b; a+1; z).  For z < 0 and non-integer a
// the principal branch of z^a makes the value complex.
std::complex<double> incomplete_beta_signed_complex(double z, double a, double b);

// Real part of the principal-branch value above.  The metric closed forms
// pair (-1)^x prefactors so that the imaginary parts cancel; this is the
// scalar surface for callers that only need the paired real result.
double incomplete_beta_signed(double z, double a, double b);

// ln Gamma(z) for complex z, any branch (only exp of it is ever used).
std::complex<double> log_gamma(std::complex<double> z);

// (-1)^e on the principal branch, exp(i pi e).
std::complex<double> minus_one_pow(double e);

}  // namespace thzrelay::sf

#endif
