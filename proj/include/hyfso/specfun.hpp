#pragma once

/// Special-function kernel: gamma/erf wrappers with explicit domain checks,
/// Pochhammer products, a complex log-gamma, the Meijer-G family used by the
/// pointing-error irradiance CDF, and the Humbert Phi2 double series.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "hyfso/errors.hpp"

namespace hyfso::specfun {

/// Truncation policy for every series evaluation in the library.
/// tol is a dimensionless absolute tail tolerance.
struct SeriesControl {
    int max_terms = 50;
    double tol = 1e-10;

    void validate() const {
        if (max_terms < 1) throw domain_error("SeriesControl: max_terms must be >= 1");
        if (!(tol > 0.0)) throw domain_error("SeriesControl: tol must be > 0");
    }
};

inline bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

/// Gamma function. Poles (non-positive integers) are rejected, not reflected.
inline double gamma_fn(double x) {
    if (is_nonpositive_integer(x))
        throw domain_error("gamma_fn: pole at non-positive integer argument");
    return std::tgamma(x);
}

/// Rising factorial (a)_p = a (a+1) ... (a+p-1); (a)_0 = 1.
/// Valid for any real a, including non-positive integers (where it may be 0).
inline double pochhammer(double a, int p) {
    if (p < 0) throw domain_error("pochhammer: order must be >= 0");
    double acc = 1.0;
    for (int k = 0; k < p; ++k) acc *= a + k;
    return acc;
}

inline double erf_fn(double x) { return std::erf(x); }

/// log(sin(pi z)) without overflowing for large |Im z|. The imaginary part is
/// correct only up to multiples of 2*pi, which exp() erases.
inline std::complex<double> log_sin_pi(std::complex<double> z) {
    if (z.imag() < -20.0) {
        const std::complex<double> i_pi(0.0, M_PI);
        return i_pi * z - std::log(std::complex<double>(0.0, 2.0)) +
               std::log(1.0 - std::exp(std::complex<double>(0.0, -2.0 * M_PI) * z));
    }
    if (z.imag() > 20.0) {
        const std::complex<double> i_pi(0.0, -M_PI);
        return i_pi * z - std::log(std::complex<double>(0.0, -2.0)) +
               std::log(1.0 - std::exp(std::complex<double>(0.0, 2.0 * M_PI) * z));
    }
    return std::log(std::sin(M_PI * z));
}

/// log Gamma on the complex plane (Lanczos, g = 7). Only ever consumed through
/// exp() of sums, so the imaginary part may differ from the principal branch
/// by multiples of 2*pi without affecting results.
inline std::complex<double> log_gamma_complex(std::complex<double> z) {
    static const double lanczos[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    constexpr double half_log_two_pi = 0.91893853320467274178;
    if (z.real() < 0.5) {
        // Reflection: log Gamma(z) = log(pi) - log(sin(pi z)) - log Gamma(1 - z).
        return std::log(M_PI) - log_sin_pi(z) - log_gamma_complex(1.0 - z);
    }
    const std::complex<double> zm1 = z - 1.0;
    std::complex<double> x = lanczos[0];
    for (int i = 1; i < 9; ++i) x += lanczos[i] / (zm1 + static_cast<double>(i));
    const std::complex<double> t = zm1 + 7.5;
    return half_log_two_pi + (zm1 + 0.5) * std::log(t) - t + std::log(x);
}

namespace detail {

// Kronrod-15 / Gauss-7 nodes and weights on [-1, 1].
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <typename F>
double qk15(F&& f, double a, double b, double& err) {
    const double hl = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const double fc = f(mid);
    double kron = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = hl * kXgk[i];
        const double fsum = f(mid - dx) + f(mid + dx);
        kron += kWgk[i] * fsum;
        if (i % 2 == 1) gauss += kWg[i / 2] * fsum;
    }
    kron *= hl;
    gauss *= hl;
    err = std::abs(kron - gauss);
    return kron;
}

template <typename F>
double adaptive_qk(F&& f, double a, double b, double abstol, int depth, double& err_out) {
    double err = 0.0;
    const double whole = qk15(f, a, b, err);
    if (err <= abstol || depth >= 24) {
        err_out += err;
        return whole;
    }
    const double mid = 0.5 * (a + b);
    return adaptive_qk(f, a, mid, 0.5 * abstol, depth + 1, err_out) +
           adaptive_qk(f, mid, b, 0.5 * abstol, depth + 1, err_out);
}

} // namespace detail

/// Meijer-G kernel of the pointing-error irradiance CDF:
/// the (j+2,1;j+2,j+3) instance with upper row {1, (T1+1) x (j+1)} and lower
/// row {1, T1 x (j+1), 0}. After gamma-ratio cancellation its Mellin-Barnes
/// integrand collapses to
///     Gamma(1-s) x^s / (s (T1-s)^(j+1)),
/// which this routine integrates along the vertical contour Re s = c with
/// 0 < c < min(1, T1). Non-decreasing in x; saturates at T1^-(j+1).
inline double meijer_g_pointing(double x, double t1, int j) {
    if (!(x >= 0.0)) throw domain_error("meijer_g_pointing: x must be >= 0");
    if (!(t1 > 0.0)) throw domain_error("meijer_g_pointing: T1 must be > 0");
    if (j < 0) throw domain_error("meijer_g_pointing: j must be >= 0");
    if (x == 0.0) return 0.0;

    const double cap = std::min(1.0, t1);
    const double lnx = std::log(x);
    // Center the contour between the s = 0 and s = min(1, T1) poles. The
    // (T1 - s)^(j+1) factor amplifies any closer approach by j+1 powers, and
    // the resulting peak cancels along the contour, so a biased c loses
    // roughly (cap / dist)^(j+1) digits to roundoff. Centering caps the
    // amplitude at ~2^(j+1) times the answer.
    const double c = 0.5 * cap;

    const auto integrand = [&](double t) {
        const std::complex<double> s(c, t);
        std::complex<double> ln = log_gamma_complex(1.0 - s);
        ln += s * lnx;
        ln -= std::log(s);
        ln -= static_cast<double>(j + 1) * std::log(t1 - s);
        return std::exp(ln).real();
    };

    // Magnitude scale at t = 0 anchors the absolute tolerance floor.
    const double scale0 = std::abs(std::exp(
        log_gamma_complex(std::complex<double>(1.0 - c, 0.0)) +
        std::complex<double>(c * lnx - std::log(c) - (j + 1) * std::log(std::abs(t1 - c)), 0.0)));

    const double seg = std::clamp(2.0 * M_PI / std::max(std::abs(lnx), 1.0), 0.25, 2.0);
    double acc = 0.0;
    double err_total = 0.0;
    double t0 = 0.0;
    int quiet = 0;
    // Per-segment tolerance must stay above the K15-G7 estimate's roundoff
    // floor (~1e-15 of the local scale) or refinement never terminates.
    const double abstol_seg = std::max(3e-14 * scale0, 5e-308);
    for (int k = 0; k < 4000; ++k) {
        double err_seg = 0.0;
        const double part =
            detail::adaptive_qk(integrand, t0, t0 + seg, abstol_seg, 0, err_seg);
        acc += part;
        err_total += err_seg;
        t0 += seg;
        if (t0 > 3.0 && std::abs(part) < 1e-18 * (std::abs(acc) + scale0)) {
            if (++quiet >= 2) break;
        } else {
            quiet = 0;
        }
        if (k == 3999)
            throw numerical_error("meijer_g_pointing", k, std::abs(part),
                                  "contour integration did not decay");
    }
    double g = acc / M_PI;
    // Relative gate on the answer, floored at the roundoff of summing an
    // integrand of amplitude scale0; high-order poles make scale0 >> |g|
    // and the cancellation noise then scales with scale0, not with g.
    if (err_total > std::max(1e-6 * std::abs(g), 5e-12 * scale0))
        throw numerical_error("meijer_g_pointing", static_cast<long>(t0 / seg), err_total,
                              "contour quadrature error estimate above tolerance");
    // Quadrature noise floor: the exact kernel is non-negative.
    if (g < 0.0 && g > -1e-12 * scale0) g = 0.0;
    return g;
}

/// Residue-series evaluation of the same kernel (sum over the right poles of
/// the Mellin-Barnes integrand). Independent of the contour path; used to
/// cross-check it. Requires T1 away from positive integers (pole collision)
/// and moderate x (factorial growth before decay).
inline double meijer_g_pointing_series(double x, double t1, int j) {
    if (!(x >= 0.0)) throw domain_error("meijer_g_pointing_series: x must be >= 0");
    if (!(t1 > 0.0)) throw domain_error("meijer_g_pointing_series: T1 must be > 0");
    if (j < 0) throw domain_error("meijer_g_pointing_series: j must be >= 0");
    // The circle quadrature below resolves Taylor coefficients 0..63 only.
    if (j >= 64)
        throw domain_error("meijer_g_pointing_series: j exceeds the circle resolution");
    // The k-sum's largest term is ~e^x / sqrt(2 pi x) before alternating
    // decay; past x = 20 its roundoff exceeds 1e-9 of the j = 0 result.
    if (x > 20.0)
        throw domain_error("meijer_g_pointing_series: x too large for the residue series");
    const double nearest = std::max(1.0, std::round(t1));
    const double pole_dist = std::min(t1, std::abs(t1 - nearest));
    if (pole_dist < 0.01)
        throw domain_error("meijer_g_pointing_series: T1 too close to a positive integer");
    if (x == 0.0) return 0.0;

    // Simple poles of Gamma(1-s) at s = k.
    double acc = 0.0;
    double term = 1.0; // tracks x^k / k!
    for (int k = 1; k <= 500; ++k) {
        term *= x / k;
        const double contrib =
            (k % 2 == 1 ? term : -term) / std::pow(t1 - k, j + 1);
        acc += contrib;
        if (k > x && std::abs(term) < 1e-18 * (std::abs(acc) + 1e-300)) break;
    }

    // Order-(j+1) pole at s = T1: Taylor coefficient j of
    // h(s) = Gamma(1-s) x^s / s about T1, by quadrature on a circle that
    // stays clear of the poles of h.
    const double r = 0.45 * std::min({t1, std::abs(t1 - nearest), 1.0});
    const int m_points = 64;
    const double lnx = std::log(x);
    double coeff = 0.0;
    for (int m = 0; m < m_points; ++m) {
        const double theta = 2.0 * M_PI * m / m_points;
        const std::complex<double> s =
            t1 + r * std::complex<double>(std::cos(theta), std::sin(theta));
        const std::complex<double> h =
            std::exp(log_gamma_complex(1.0 - s) + s * lnx - std::log(s));
        coeff += (h * std::exp(std::complex<double>(0.0, -j * theta))).real();
    }
    coeff /= m_points * std::pow(r, j);

    return acc + (j % 2 == 0 ? coeff : -coeff);
}

/// Humbert Phi2 confluent hypergeometric of two variables:
///   Phi2(b1, b2; c; x, y) = sum_{i,j} (b1)_i (b2)_j x^i y^j / ((c)_{i+j} i! j!).
/// Summed by anti-diagonals in extended precision; fails loudly when the
/// alternating cancellation exceeds what the tolerance can support.
inline double phi2(double b1, double b2, double c, double x, double y,
                   const SeriesControl& ctl = {}) {
    ctl.validate();
    if (is_nonpositive_integer(c)) throw domain_error("phi2: c must not be a non-positive integer");

    const int budget = std::max(ctl.max_terms, 8);
    std::vector<long double> a(static_cast<std::size_t>(budget) + 1);
    std::vector<long double> b(static_cast<std::size_t>(budget) + 1);
    a[0] = 1.0L;
    b[0] = 1.0L;
    for (int i = 0; i < budget; ++i) {
        a[i + 1] = a[i] * (static_cast<long double>(b1) + i) * x / (i + 1);
        b[i + 1] = b[i] * (static_cast<long double>(b2) + i) * y / (i + 1);
    }

    long double acc = 0.0L;
    long double poch_c = 1.0L; // (c)_n
    long double max_mag = 0.0L;
    int calm = 0;
    for (int n = 0; n <= budget; ++n) {
        long double diag = 0.0L;
        const long double poch_mag = std::abs(poch_c);
        for (int i = 0; i <= n; ++i) {
            const long double t = a[i] * b[n - i];
            if (std::abs(t) > max_mag * poch_mag) max_mag = std::abs(t) / poch_mag;
            diag += t;
        }
        const long double term = diag / poch_c;
        acc += term;
        max_mag = std::max(max_mag, std::abs(term));
        poch_c *= static_cast<long double>(c) + n;

        if (std::abs(static_cast<double>(term)) <
            ctl.tol * std::max(1.0, std::abs(static_cast<double>(acc)))) {
            if (++calm >= 3 && n >= 4) {
                const double noise = static_cast<double>(max_mag) * 1.1e-19 * (n + 1);
                if (noise > ctl.tol * std::max(1.0, std::abs(static_cast<double>(acc))))
                    throw numerical_error("phi2", n, noise,
                                          "cancellation noise exceeds tolerance");
                return static_cast<double>(acc);
            }
        } else {
            calm = 0;
        }
    }
    throw numerical_error("phi2", budget, std::abs(static_cast<double>(acc)),
                          "series budget exhausted before convergence");
}

} // namespace hyfso::specfun
