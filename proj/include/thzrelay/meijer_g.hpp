// SPDX-License-Identifier: Apache-2.0
//
// thzrelay: numerical Meijer G-function, univariate and bivariate.
//
// Both evaluators run a Mellin-Barnes contour integral along a vertical line
// whose abscissa is placed at the modulus minimum of the integrand on the
// real axis, inside the strip separating the two pole families.  When the
// strip is empty the line is placed right of the left family and the crossed
// right-family poles are added back as residues.  Every evaluation returns a
// self-reported error estimate.

#ifndef THZRELAY_MEIJER_G_HPP
#define THZRELAY_MEIJER_G_HPP

#include <cstddef>
#include <vector>

namespace thzrelay::mg {

struct ContourOptions {
    double abs_tol = 1e-12;   // stop when the panel tail is below this...
    double rel_tol = 1e-9;    // ...or below rel_tol * |accumulated|
    double t_max = 600.0;     // hard cap on the imaginary excursion
};

// G^{m,n}_{p,q}(x | a_1..a_p ; b_1..b_q)
struct MeijerGSpec {
    int m = 0;
    int n = 0;
    std::vector<double> a;
    std::vector<double> b;
};

struct GResult {
    double value = 0.0;
    double error = 0.0;       // absolute error estimate, >= 0
    std::size_t evals = 0;
    double sigma = 0.0;       // contour abscissa used
    bool nudged = false;      // parameters were epsilon-perturbed
    int residues = 0;         // right-family poles crossed by the contour
};

// Delta(k, c) = {c/k, (c+1)/k, ..., (c+k-1)/k}.
std::vector<double> delta_list(int k, double c);

// Throws std::invalid_argument on bad orders and std::runtime_error when the
// contour cannot converge (2(m+n) <= p+q) or truncation fails.
GResult meijer_g(const MeijerGSpec& spec, double x,
                 const ContourOptions& opt = {});

// Extended bivariate Meijer G:
//   (1/(2 pi i))^2 Int Int psi_glue(s+t) psi_x(s) psi_y(t) x^s y^t ds dt
// where each psi is the usual Gamma kernel of its group.
struct BivariateGroup {
    int m = 0;
    int n = 0;
    std::vector<double> upper;  // 'a' parameters, size p
    std::vector<double> lower;  // 'b' parameters, size q
};

struct BivariateGSpec {
    BivariateGroup glue;     // acts on s + t
    BivariateGroup block_x;  // acts on s
    BivariateGroup block_y;  // acts on t
};

GResult bivariate_meijer_g(const BivariateGSpec& spec, double x, double y,
                           const ContourOptions& opt = {});

}  // namespace thzrelay::mg

#endif
