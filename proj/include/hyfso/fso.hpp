#pragma once

/// Optical branch: exponentiated-Weibull irradiance fading, Gaussian-beam
/// collection geometry, misaligned-beam (pointing error) statistics, and the
/// series CDF of the combined attenuation x fading x pointing irradiance.

#include <algorithm>
#include <cmath>

#include "hyfso/errors.hpp"
#include "hyfso/rng.hpp"
#include "hyfso/specfun.hpp"

namespace hyfso::fso {

/// Exponentiated-Weibull irradiance fading. alpha, beta are the shape pair,
/// eta the scale; the scale carries the mean optical gain of the link, so
/// irradiance here is dimensionally whatever eta is.
struct EwParams {
    double alpha = 1.0;
    double beta = 1.0;
    double eta = 1.0;

    friend bool operator==(const EwParams&, const EwParams&) = default;

    void validate() const {
        if (!(alpha > 0.0) || !(beta > 0.0) || !(eta > 0.0))
            throw domain_error("EwParams: alpha, beta, eta must all be > 0");
    }
};

inline double ew_cdf(double irradiance, const EwParams& p) {
    p.validate();
    if (irradiance <= 0.0) return 0.0;
    const double t = std::pow(irradiance / p.eta, p.beta);
    return std::pow(-std::expm1(-t), p.alpha);
}

/// Printed binomial expansion of the same CDF,
///   sum_p C(alpha, p) (-1)^p exp(-p (I/eta)^beta),
/// kept separate so truncation behaviour can be probed; the closed form above
/// is the production path.
inline double ew_cdf_series(double irradiance, const EwParams& p,
                            const specfun::SeriesControl& ctl = {}) {
    p.validate();
    ctl.validate();
    if (irradiance <= 0.0) return 0.0;
    const double x = std::pow(irradiance / p.eta, p.beta);
    double acc = 0.0;
    double binom = 1.0; // C(alpha, p) * (-1)^p, tracked incrementally
    int calm = 0;
    for (int term_idx = 0; term_idx <= ctl.max_terms; ++term_idx) {
        const double term = binom * std::exp(-term_idx * x);
        acc += term;
        if (std::abs(term) < ctl.tol) {
            if (++calm >= 2) return acc;
        } else {
            calm = 0;
        }
        binom *= -(p.alpha - term_idx) / (term_idx + 1);
        if (binom == 0.0) return acc; // integer alpha: exact termination
    }
    throw numerical_error("ew_cdf_series", ctl.max_terms, std::abs(binom),
                          "series budget exhausted before convergence");
}

/// Inverse-transform draw from the exponentiated-Weibull law.
inline double ew_sample(rng::Rng& gen, const EwParams& p) {
    p.validate();
    const double u = gen.uniform();
    const double t = -std::log1p(-std::exp(std::log(u) / p.alpha));
    return p.eta * std::pow(t, 1.0 / p.beta);
}

/// Gaussian-beam footprint and aperture-collection geometry at the receiver.
struct BeamGeometry {
    double w_z_m = 0.0;   // beam radius at the receiver plane
    double v = 0.0;       // aperture-to-beam ratio sqrt(pi/2) a / w_z
    double a0 = 0.0;      // peak collected fraction erf(v)^2
    double w_eq_m = 0.0;  // equivalent beamwidth seen through the aperture
};

inline BeamGeometry beam_geometry(double divergence_theta_mrad, double beam_distance_km,
                                  double aperture_diameter_m) {
    if (!(divergence_theta_mrad > 0.0))
        throw domain_error("beam_geometry: divergence must be > 0");
    if (!(beam_distance_km > 0.0)) throw domain_error("beam_geometry: distance must be > 0");
    if (!(aperture_diameter_m > 0.0)) throw domain_error("beam_geometry: aperture must be > 0");
    BeamGeometry out;
    // mrad * km = m, so the beam radius needs no unit factor.
    out.w_z_m = divergence_theta_mrad * beam_distance_km;
    const double radius = 0.5 * aperture_diameter_m;
    out.v = std::sqrt(M_PI / 2.0) * radius / out.w_z_m;
    const double erf_v = specfun::erf_fn(out.v);
    out.a0 = erf_v * erf_v;
    out.w_eq_m = out.w_z_m * std::sqrt(std::sqrt(M_PI) * erf_v /
                                       (2.0 * out.v * std::exp(-out.v * out.v)));
    return out;
}

/// Radial displacement model: boresight offset s plus isotropic Gaussian
/// jitter of scale sigma per axis, collected through the aperture.
struct PointingParams {
    double boresight_s_m = 0.0;
    double jitter_sigma_m = 1.0;

    void validate() const {
        if (!(boresight_s_m >= 0.0)) throw domain_error("PointingParams: s must be >= 0");
        if (!(jitter_sigma_m > 0.0)) throw domain_error("PointingParams: sigma must be > 0");
    }
};

/// One draw of the pointing gain Ip in (0, a0].
inline double pointing_gain_sample(rng::Rng& gen, const BeamGeometry& geom,
                                   const PointingParams& pt) {
    pt.validate();
    const double dx = pt.boresight_s_m + pt.jitter_sigma_m * gen.normal();
    const double dy = pt.jitter_sigma_m * gen.normal();
    const double r2 = dx * dx + dy * dy;
    return geom.a0 * std::exp(-2.0 * r2 / (geom.w_eq_m * geom.w_eq_m));
}

/// CDF of the combined irradiance I = Ia * If * Ip (deterministic attenuation
/// Ia, exponentiated-Weibull If, pointing gain Ip). Evaluated through the
/// double series over the fading binomial index i and the boresight index j,
/// each j-term carrying one Meijer-G kernel evaluation:
///   F(I) = (alpha g^2 / beta) e^{-s^2/(2 sigma^2)}
///          sum_i w_i sum_j rho^j/j! G_j((1+i) x^beta),
/// x = I / (eta a0 Ia), g = w_eq/(2 sigma), T1 = g^2/beta,
/// rho = s^2 g^2 / (2 sigma^2 beta).
/// The j-tail is certified against the saturation bound G_j <= T1^-(j+1).
inline double combined_irradiance_cdf(double irradiance, const EwParams& ew,
                                      const BeamGeometry& geom, const PointingParams& pt,
                                      double attenuation_ia,
                                      const specfun::SeriesControl& ctl = {}) {
    ew.validate();
    pt.validate();
    ctl.validate();
    if (!(attenuation_ia > 0.0) || attenuation_ia > 1.0)
        throw domain_error("combined_irradiance_cdf: attenuation must lie in (0, 1]");
    if (irradiance <= 0.0) return 0.0;

    const double sigma = pt.jitter_sigma_m;
    const double s = pt.boresight_s_m;
    const double g = geom.w_eq_m / (2.0 * sigma);
    const double g2 = g * g;
    const double t1 = g2 / ew.beta;
    const double rho = s * s * g2 / (2.0 * sigma * sigma * ew.beta);
    const double x = irradiance / (ew.eta * geom.a0 * attenuation_ia);
    const double prefactor =
        (ew.alpha * g2 / ew.beta) * std::exp(-s * s / (2.0 * sigma * sigma));
    if (prefactor == 0.0)
        throw numerical_error("combined_irradiance_cdf", 0, s * s / (2.0 * sigma * sigma),
                              "boresight prefactor underflows; model outside usable regime");

    const double xb = std::pow(x, ew.beta);

    double outer_acc = 0.0;
    double w_num = 1.0; // (-1)^i prod_{l=1..i} (alpha - l)
    double fact = 1.0;  // (1+i)!
    int outer_calm = 0;
    bool outer_done = false;
    for (int i = 0; i <= ctl.max_terms; ++i) {
        fact *= i + 1;
        const double w_i = w_num / fact;
        double inner_acc = 0.0;
        if (w_i != 0.0) {
            const double arg = (1.0 + i) * xb;
            double rho_pow = 1.0; // rho^j / j!
            for (int j = 0;; ++j) {
                if (j > ctl.max_terms)
                    throw numerical_error("combined_irradiance_cdf", j, rho_pow,
                                          "boresight series budget exhausted");
                inner_acc += rho_pow * specfun::meijer_g_pointing(arg, t1, j);
                rho_pow *= rho / (j + 1);
                // Saturation bound certifies the remaining tail.
                const double tail_bound = rho_pow / std::pow(t1, j + 2);
                if (rho_pow == 0.0 ||
                    ((j + 1) > 2.0 * rho / t1 && 2.0 * tail_bound < ctl.tol)) break;
            }
        }
        // Each term obeys |prefactor * term| <= alpha |w_i| (the saturation
        // bound cancels the boresight exponential), so the series cannot
        // diverge; slow |w_i| decay can only exhaust the budget.
        const double term = w_i * inner_acc;
        outer_acc += term;
        if (std::abs(prefactor * term) < ctl.tol) {
            if (++outer_calm >= 2) {
                outer_done = true;
                break;
            }
        } else {
            outer_calm = 0;
        }
        w_num *= -(ew.alpha - (i + 1));
        if (w_num == 0.0) { // integer alpha: remaining weights vanish
            outer_done = true;
            break;
        }
    }
    if (!outer_done)
        throw numerical_error("combined_irradiance_cdf", ctl.max_terms, std::abs(outer_acc),
                              "fading series budget exhausted");

    double cdf = prefactor * outer_acc;
    const double band = std::max(100.0 * ctl.tol, 1e-8);
    if (cdf < -band || cdf > 1.0 + band)
        throw numerical_error("combined_irradiance_cdf", 0, cdf,
                              "result escaped [0, 1]; series inconsistent");
    return std::clamp(cdf, 0.0, 1.0);
}

} // namespace hyfso::fso
