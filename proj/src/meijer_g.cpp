// SPDX-License-Identifier: Apache-2.0

#include "thzrelay/meijer_g.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include "thzrelay/quadrature.hpp"
#include "thzrelay/special_functions.hpp"

namespace thzrelay::mg {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kInf = std::numeric_limits<double>::infinity();

double dist_to_nonpositive_int(double x) {
    if (x > 0.5) return x;  // distance to 0 is enough of a guard above
    return std::fabs(x - std::round(x));
}

// ----------------------------------------------------------------------
// univariate kernel

struct Kernel {
    // numerator Gamma(num_minus[i] - s), Gamma(num_plus[i] + s)
    // denominator Gamma(den_minus[i] - s), Gamma(den_plus[i] + s)
    std::vector<double> num_minus, num_plus, den_minus, den_plus;
    double log_x = 0.0;

    cplx log_at(cplx s) const {
        cplx acc = s * log_x;
        for (double c : num_minus) acc += sf::log_gamma(c - s);
        for (double c : num_plus) acc += sf::log_gamma(c + s);
        for (double c : den_minus) acc -= sf::log_gamma(c - s);
        for (double c : den_plus) acc -= sf::log_gamma(c + s);
        return acc;
    }

    // Real-axis log-modulus; +inf near a pole of a numerator factor.
    double real_log_mod(double sigma) const {
        for (double c : num_minus)
            if (dist_to_nonpositive_int(c - sigma) < 1e-3) return kInf;
        for (double c : num_plus)
            if (dist_to_nonpositive_int(c + sigma) < 1e-3) return kInf;
        return log_at(cplx(sigma, 0.0)).real();
    }
};

Kernel build_kernel(const MeijerGSpec& g, double x) {
    Kernel k;
    k.log_x = std::log(x);
    const int p = static_cast<int>(g.a.size());
    const int q = static_cast<int>(g.b.size());
    for (int j = 0; j < g.m; ++j) k.num_minus.push_back(g.b[j]);
    for (int i = 0; i < g.n; ++i) k.num_plus.push_back(1.0 - g.a[i]);
    for (int j = g.m; j < q; ++j) k.den_plus.push_back(1.0 - g.b[j]);
    for (int i = g.n; i < p; ++i) k.den_minus.push_back(g.a[i]);
    return k;
}

// Golden-section minimum of f over [lo, hi].
template <typename F>
double golden_min(F&& f, double lo, double hi, int iters = 70) {
    const double gr = 0.61803398874989484820;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < iters; ++it) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = f(x2);
        }
    }
    return 0.5 * (lo + hi);
}

// Minimize a real profile on (lo, hi) where either end may be infinite; the
// open sides are explored with a geometrically expanding search first.
template <typename F>
double minimize_on_interval(F&& f, double lo, double hi) {
    if (std::isfinite(lo) && std::isfinite(hi)) {
        const double margin = std::min(0.05, (hi - lo) / 8.0);
        return golden_min(f, lo + margin, hi - margin);
    }
    if (!std::isfinite(lo) && !std::isfinite(hi)) {
        // scan both ways from 0
        double best = 0.0, fbest = f(0.0);
        for (int dir : {-1, 1}) {
            double step = 0.5, s = 0.0;
            int rising = 0;
            while (std::fabs(s) < 320.0 && rising < 4) {
                s += dir * step;
                step *= 1.35;
                const double fs = f(s);
                if (fs < fbest) { fbest = fs; best = s; rising = 0; }
                else ++rising;
            }
        }
        const double w = std::max(1.0, 0.2 * std::fabs(best));
        return golden_min(f, best - w, best + w);
    }
    if (!std::isfinite(lo)) {
        const double b = hi - 0.05;
        double best = b, fbest = f(b);
        double step = 0.5, s = b;
        int rising = 0;
        while (s > -320.0 && rising < 4) {
            s -= step;
            step *= 1.35;
            const double fs = f(s);
            if (fs < fbest) { fbest = fs; best = s; rising = 0; }
            else ++rising;
        }
        const double w = std::max(1.0, 0.2 * std::fabs(best));
        return golden_min(f, std::max(best - w, -340.0), std::min(best + w, b));
    }
    const double a = lo + 0.05;
    double best = a, fbest = f(a);
    double step = 0.5, s = a;
    int rising = 0;
    while (s < 320.0 && rising < 4) {
        s += step;
        step *= 1.35;
        const double fs = f(s);
        if (fs < fbest) { fbest = fs; best = s; rising = 0; }
        else ++rising;
    }
    const double w = std::max(1.0, 0.2 * std::fabs(best));
    return golden_min(f, std::max(best - w, a), std::min(best + w, 340.0));
}

// Minimize kernel modulus on (lo, hi) where either end may be infinite.
double find_abscissa(const Kernel& k, double lo, double hi) {
    return minimize_on_interval([&](double s) { return k.real_log_mod(s); }, lo,
                                hi);
}

struct LineIntegral {
    double value = 0.0;       // (1/pi) Re int_0^inf exp(ker) dt
    double abs_mass = 0.0;    // accumulated |panel| mass for the error floor
    double error = 0.0;
    std::size_t evals = 0;
    bool converged = false;
};

// Integrate exp(log kernel) along sigma + i t, t in [0, inf), using the
// conjugate symmetry of real-parameter kernels.
LineIntegral integrate_line(const Kernel& k, double sigma,
                            const ContourOptions& opt) {
    LineIntegral out;
    auto f = [&](double t) -> cplx {
        const cplx lk = k.log_at(cplx(sigma, t));
        if (lk.real() > 690.0)
            throw std::runtime_error("meijer_g: contour integrand overflow");
        return std::exp(lk);
    };
    const double h = std::clamp(kPi / (1.0 + std::fabs(k.log_x)), 0.125, 1.2);
    double t = 0.0;
    int idle = 0;
    double prev_mag = kInf;
    double peak = 0.0;
    while (t < opt.t_max) {
        cplx acc{0.0, 0.0};
        double err = 0.0;
        bool conv = true;
        quad::detail::adapt(f, t, t + h, opt.abs_tol * 0.05, 0, acc, err,
                            out.evals, conv);
        const double mag = std::abs(acc);
        peak = std::max(peak, mag);
        out.value += acc.real() / kPi;
        out.abs_mass += mag / kPi;
        out.error += err / kPi;
        t += h;
        // Stop only once the panels are negligible against the tolerance AND
        // have decayed far below the peak mass (so that exponentially small
        // results keep relative accuracy).
        const double thresh =
            std::max({opt.abs_tol, opt.rel_tol * std::fabs(out.value),
                      1e-9 * peak}) *
            0.02;
        if (mag < thresh && prev_mag < thresh && mag <= 2e-9 * peak) {
            if (++idle >= 2) {
                // Geometric tail bound from the last two panels.
                const double r = prev_mag > 0 ? std::min(0.9, mag / prev_mag) : 0.0;
                out.error += (mag / kPi) * r / (1.0 - r);
                out.converged = true;
                break;
            }
        } else {
            idle = 0;
        }
        prev_mag = mag;
    }
    return out;
}

// Residue of kernel * x^s at the right-family pole b_j + k_off (simple pole).
double residue_at(const MeijerGSpec& g, double x, int j, int k_off) {
    const double s0 = g.b[j] + k_off;
    double log_abs = s0 * std::log(x) - std::lgamma(k_off + 1.0);
    int sign = (k_off % 2 == 0) ? 1 : -1;  // (-1)^k
    sign = -sign;                          // leading minus of the residue
    const int p = static_cast<int>(g.a.size());
    const int q = static_cast<int>(g.b.size());
    auto mul = [&](double arg, bool numerator) {
        const sf::LogGamma lg = sf::ln_gamma(arg);
        log_abs += numerator ? lg.log_abs : -lg.log_abs;
        sign *= lg.sign;
    };
    for (int jj = 0; jj < g.m; ++jj)
        if (jj != j) mul(g.b[jj] - s0, true);
    for (int i = 0; i < g.n; ++i) mul(1.0 - g.a[i] + s0, true);
    for (int jj = g.m; jj < q; ++jj) mul(1.0 - g.b[jj] + s0, false);
    for (int i = g.n; i < p; ++i) mul(g.a[i] - s0, false);
    return sign * std::exp(log_abs);
}

// Nudge parameters until no right-family pole collides with a left-family
// pole (contour-separation condition).
bool sanitize(MeijerGSpec& g) {
    bool nudged = false;
    for (int pass = 0; pass < 8; ++pass) {
        bool collision = false;
        for (int i = 0; i < g.n && !collision; ++i) {
            for (int j = 0; j < g.m && !collision; ++j) {
                const double d = g.a[i] - g.b[j] - 1.0;
                if (d > -1e-8 && std::fabs(d - std::round(d)) < 1e-8) {
                    g.a[i] += 1e-6;
                    collision = true;
                    nudged = true;
                }
            }
        }
        if (!collision) return nudged;
    }
    throw std::invalid_argument("meijer_g: unresolvable pole collision");
}

void validate_orders(int m, int n, std::size_t p, std::size_t q,
                     const char* who) {
    if (m < 0 || n < 0 || m > static_cast<int>(q) || n > static_cast<int>(p))
        throw std::invalid_argument(std::string(who) +
                                    ": orders must satisfy 0<=m<=q, 0<=n<=p");
}

}  // namespace

std::vector<double> delta_list(int k, double c) {
    std::vector<double> out;
    out.reserve(k);
    for (int j = 0; j < k; ++j) out.push_back((c + j) / k);
    return out;
}

GResult meijer_g(const MeijerGSpec& spec_in, double x,
                 const ContourOptions& opt) {
    if (!(x > 0.0)) throw std::invalid_argument("meijer_g: requires x > 0");
    MeijerGSpec g = spec_in;
    validate_orders(g.m, g.n, g.a.size(), g.b.size(), "meijer_g");
    if (g.m + g.n == 0)
        throw std::invalid_argument("meijer_g: m + n must be positive");
    const double cstar =
        g.m + g.n - 0.5 * (static_cast<double>(g.a.size()) + g.b.size());
    if (cstar <= 0.0)
        throw std::runtime_error(
            "meijer_g: contour does not converge (2(m+n) <= p+q), c*=" +
            std::to_string(cstar));

    GResult res;
    res.nudged = sanitize(g);

    // Pole family bounds on the real axis.
    double left = -kInf, right = kInf;
    for (int i = 0; i < g.n; ++i) left = std::max(left, g.a[i] - 1.0);
    for (int j = 0; j < g.m; ++j) right = std::min(right, g.b[j]);

    const Kernel k = build_kernel(g, x);
    double sigma;
    double residue_sum = 0.0;
    double residue_mass = 0.0;
    if (left < right - 1e-9) {
        sigma = find_abscissa(k, g.n ? left : -kInf, g.m ? right : kInf);
    } else {
        // Empty strip: put the line right of the left family and add back the
        // right-family poles it crossed.
        sigma = left + 0.5;
        auto near_pole = [&](double s) {
            for (int j = 0; j < g.m; ++j) {
                const double d = s - g.b[j];
                if (d > -0.08 && std::fabs(d - std::round(d)) < 0.08) return true;
            }
            return false;
        };
        int guard = 0;
        while (near_pole(sigma) && guard++ < 40) sigma += 0.13;
        int crossed = 0;
        for (int j = 0; j < g.m; ++j) {
            for (int kk = 0; g.b[j] + kk < sigma; ++kk) {
                const double r = residue_at(g, x, j, kk);
                residue_sum += r;
                residue_mass += std::fabs(r);
                if (++crossed > 64)
                    throw std::runtime_error(
                        "meijer_g: contour stranded behind too many poles");
            }
        }
        res.residues = crossed;
    }

    const LineIntegral line = integrate_line(k, sigma, opt);
    if (!line.converged)
        throw std::runtime_error(
            "meijer_g: contour truncation failed before t_max; x=" +
            std::to_string(x));

    res.value = line.value - residue_sum;
    res.sigma = sigma;
    res.evals = line.evals;
    res.error = line.error + 2e-14 * (line.abs_mass + residue_mass) +
                1e-15 * std::fabs(res.value);
    return res;
}

// ----------------------------------------------------------------------
// bivariate

namespace {

struct GroupKernel {
    std::vector<double> num_minus, num_plus, den_minus, den_plus;

    cplx log_at(cplx s) const {
        cplx acc{0.0, 0.0};
        for (double c : num_minus) acc += sf::log_gamma(c - s);
        for (double c : num_plus) acc += sf::log_gamma(c + s);
        for (double c : den_minus) acc -= sf::log_gamma(c - s);
        for (double c : den_plus) acc -= sf::log_gamma(c + s);
        return acc;
    }

    double real_log_mod(double sigma) const {
        for (double c : num_minus)
            if (dist_to_nonpositive_int(c - sigma) < 1e-3) return kInf;
        for (double c : num_plus)
            if (dist_to_nonpositive_int(c + sigma) < 1e-3) return kInf;
        return log_at(cplx(sigma, 0.0)).real();
    }

    // (max left pole, min right pole) on the real axis
    std::pair<double, double> bounds() const {
        double left = -kInf, right = kInf;
        for (double c : num_plus) left = std::max(left, -c);      // 1-a+s poles
        for (double c : num_minus) right = std::min(right, c);    // b-s poles
        return {left, right};
    }

    double conv_rate() const {
        return static_cast<double>(num_minus.size() + num_plus.size()) -
               static_cast<double>(den_minus.size() + den_plus.size());
    }
};

GroupKernel build_group(const BivariateGroup& grp, const char* who) {
    validate_orders(grp.m, grp.n, grp.upper.size(), grp.lower.size(), who);
    GroupKernel k;
    const int p = static_cast<int>(grp.upper.size());
    const int q = static_cast<int>(grp.lower.size());
    for (int j = 0; j < grp.m; ++j) k.num_minus.push_back(grp.lower[j]);
    for (int i = 0; i < grp.n; ++i) k.num_plus.push_back(1.0 - grp.upper[i]);
    for (int j = grp.m; j < q; ++j) k.den_plus.push_back(1.0 - grp.lower[j]);
    for (int i = grp.n; i < p; ++i) k.den_minus.push_back(grp.upper[i]);
    return k;
}

}  // namespace

GResult bivariate_meijer_g(const BivariateGSpec& spec, double x, double y,
                           const ContourOptions& opt) {
    if (!(x > 0.0) || !(y > 0.0))
        throw std::invalid_argument("bivariate_meijer_g: requires x, y > 0");
    const GroupKernel glue = build_group(spec.glue, "bivariate glue");
    const GroupKernel gx = build_group(spec.block_x, "bivariate block_x");
    const GroupKernel gy = build_group(spec.block_y, "bivariate block_y");
    const double log_x = std::log(x);
    const double log_y = std::log(y);

    // Exponential decay rates (in units of pi/2 per gamma factor).
    const double rate_x = gx.conv_rate() + glue.conv_rate();
    const double rate_y = gy.conv_rate() + glue.conv_rate();
    const double rate_diag = gx.conv_rate() + gy.conv_rate();
    if (rate_x <= 0.0 || rate_y <= 0.0 || rate_diag <= 0.0)
        throw std::runtime_error(
            "bivariate_meijer_g: contour does not converge on some axis");

    const auto [ly, ry] = gy.bounds();
    const auto [lx, rx] = gx.bounds();
    const auto [lg, rg] = glue.bounds();
    if (!(ly < ry) || !(lx < rx))
        throw std::runtime_error(
            "bivariate_meijer_g: empty separating strip on a block axis");

    // Choose the y abscissa inside its strip, then the x abscissa inside the
    // intersection with the glue constraint; scan y candidates if needed.
    auto x_interval = [&](double sy) -> std::pair<double, double> {
        double lo = lx, hi = rx;
        if (std::isfinite(lg)) lo = std::max(lo, lg - sy);
        if (std::isfinite(rg)) hi = std::min(hi, rg - sy);
        return {lo, hi};
    };
    const double wy = ry - ly;
    double sig_y = 0.0, sig_x = 0.0;
    bool found = false;
    for (int cand = 0; cand < 17 && !found; ++cand) {
        const double frac = 0.5 + ((cand % 2) ? 1 : -1) * 0.05 * ((cand + 1) / 2);
        if (frac <= 0.02 || frac >= 0.98) break;
        double sy;
        if (std::isfinite(wy)) sy = ly + frac * wy;
        else if (std::isfinite(ly)) sy = ly + 0.5;
        else if (std::isfinite(ry)) sy = ry - 0.5;
        else sy = 0.0;
        const auto [lo, hi] = x_interval(sy);
        if (lo < hi - 1e-6) {
            sig_y = sy;
            // modulus-minimizing x abscissa with the glue factor pinned at sy
            auto prof = [&](double s) {
                const double v = gx.real_log_mod(s) + s * log_x;
                const double gl = glue.real_log_mod(s + sy);
                return v + gl;
            };
            sig_x = minimize_on_interval(prof, lo, hi);
            found = true;
        }
        if (!std::isfinite(wy)) break;  // nothing further to scan
    }
    if (!found)
        throw std::runtime_error(
            "bivariate_meijer_g: no feasible contour pair (glue constraint)");

    GResult res;
    res.sigma = sig_x;

    // Inner integral over the x variable at fixed t-offset v.
    double inner_err_accum = 0.0;
    auto inner = [&](double v) -> cplx {
        const cplx t(sig_y, v);
        auto f = [&](double u) -> cplx {
            const cplx s(sig_x, u);
            const cplx lk = glue.log_at(s + t) + gx.log_at(s) + gy.log_at(t) +
                            s * log_x + t * log_y;
            if (lk.real() > 690.0)
                throw std::runtime_error("bivariate_meijer_g: overflow");
            return std::exp(lk);
        };
        cplx acc{0.0, 0.0};
        const double h = std::clamp(kPi / (1.0 + std::fabs(log_x)), 0.25, 1.0);
        // outward panels in both directions
        double peak = 0.0;
        for (int dir = 0; dir < 2; ++dir) {
            int idle = 0;
            for (int k = 0; k < 400 && idle < 2; ++k) {
                const double t0 = (dir == 0) ? k * h : -(k + 1) * h;
                const double t1 = t0 + h;
                cplx pa{0.0, 0.0};
                double pe = 0.0;
                bool conv = true;
                quad::detail::adapt(f, t0, t1, opt.abs_tol * 0.02, 0, pa, pe,
                                    res.evals, conv);
                acc += pa;
                peak = std::max(peak, std::abs(pa));
                inner_err_accum += pe;
                if (std::abs(pa) < std::max(opt.abs_tol * 0.05,
                                            1e-10 * peak))
                    ++idle;
                else
                    idle = 0;
            }
        }
        return acc;
    };

    // Outer integral over v in [0, inf).
    double value = 0.0, abs_mass = 0.0, outer_err = 0.0;
    const double hv = std::clamp(kPi / (1.0 + std::fabs(log_y)), 0.15, 1.0);
    double v = 0.0;
    double prev_mag = kInf;
    double peak = 0.0;
    int idle = 0;
    bool converged = false;
    while (v < opt.t_max) {
        cplx acc{0.0, 0.0};
        double pe = 0.0;
        bool conv = true;
        std::size_t dummy = 0;
        quad::detail::adapt(inner, v, v + hv, opt.abs_tol * 0.05, 0, acc, pe,
                            dummy, conv);
        const double mag = std::abs(acc);
        peak = std::max(peak, mag);
        value += acc.real();
        abs_mass += mag;
        outer_err += pe;
        v += hv;
        const double thresh =
            std::max({opt.abs_tol, opt.rel_tol * std::fabs(value),
                      1e-9 * peak}) *
            0.02;
        if (mag < thresh && prev_mag < thresh && mag <= 2e-9 * peak) {
            if (++idle >= 2) {
                const double r = prev_mag > 0 ? std::min(0.9, mag / prev_mag) : 0.0;
                outer_err += mag * r / (1.0 - r);
                converged = true;
                break;
            }
        } else {
            idle = 0;
        }
        prev_mag = mag;
    }
    if (!converged)
        throw std::runtime_error(
            "bivariate_meijer_g: outer contour truncation failed");

    const double scale = 1.0 / (2.0 * kPi * kPi);
    res.value = scale * value;
    // The floor covers the relative truncation of the inner panels, which
    // stop once they decay below 1e-10 of their running peak.
    res.error = scale * (outer_err + inner_err_accum) +
                2e-14 * scale * abs_mass + 3e-11 * std::fabs(res.value);
    return res;
}

}  // namespace thzrelay::mg
