#pragma once

/// Radio branch: shadowed-Rician fading statistics (closed-form SNR CDF for
/// integer Nakagami parameter, Humbert-series cross path, and a sampler) plus
/// the per-state RF channel gain budget.

#include <cmath>

#include "hyfso/errors.hpp"
#include "hyfso/linkgeo.hpp"
#include "hyfso/rng.hpp"
#include "hyfso/specfun.hpp"

namespace hyfso::rf {

/// Shadowed-Rician fading: line-of-sight power Omega shadowed with Nakagami
/// parameter m over multipath of average power 2b.
struct SrParams {
    double m = 1.0;
    double b = 0.063;
    double omega = 8.94e-4;

    friend bool operator==(const SrParams&, const SrParams&) = default;

    void validate() const {
        if (!(m >= 1.0)) throw domain_error("SrParams: m must be >= 1");
        if (!(b > 0.0) || !(omega > 0.0))
            throw domain_error("SrParams: b and omega must be > 0");
    }
};

/// Constants of the shadowed-Rician density in the usual parameterisation.
struct SrDerived {
    double mu = 0.0;     // density prefactor (1/2b) (2bm / (2bm + Omega))^m
    double nu = 0.0;     // 1 / 2b
    double theta = 0.0;  // m / (2bm + Omega)
    double delta = 0.0;  // Omega / (2b (2bm + Omega))
};

inline SrDerived sr_derive(const SrParams& p) {
    p.validate();
    SrDerived d;
    const double denom = 2.0 * p.b * p.m + p.omega;
    d.mu = (1.0 / (2.0 * p.b)) * std::pow(2.0 * p.b * p.m / denom, p.m);
    d.nu = 1.0 / (2.0 * p.b);
    d.theta = p.m / denom;
    d.delta = p.omega / (2.0 * p.b * denom);
    return d;
}

/// Mean squared-envelope power; dividing the SNR by it makes mean_snr the
/// true average SNR of the branch.
inline double sr_mean_power(const SrParams& p) {
    p.validate();
    return p.omega + 2.0 * p.b;
}

inline bool is_positive_integer(double m) { return m >= 1.0 && m == std::floor(m); }

/// SNR CDF for integer m: the finite double sum
///   F(y) = 1 - e^{-phi y} sum_{p=0}^{m-1} sum_{q=0}^{p}
///          mu (1-m)_p (-delta)^p y^q / (p! q! gs^{p+1} phi^{p-q+1}),
/// phi = (nu - delta) / gs, gs the mean branch SNR. Every retained term is
/// positive, so no cancellation occurs.
inline double sr_cdf_finite(double snr, const SrParams& p, double mean_snr) {
    p.validate();
    if (!is_positive_integer(p.m))
        throw domain_error("sr_cdf_finite: m must be a positive integer");
    if (!(mean_snr >= 0.0)) throw domain_error("sr_cdf_finite: mean SNR must be >= 0");
    if (snr <= 0.0) return 0.0;
    // Continuous limit for a branch whose gain underflowed to zero.
    if (mean_snr == 0.0) return 1.0;
    const SrDerived d = sr_derive(p);
    const double phi = (d.nu - d.delta) / mean_snr;
    const int m_int = static_cast<int>(p.m);

    double survival = 0.0;
    double cp = d.mu; // mu (1-m)_p (-delta)^p / p!
    for (int pw = 0; pw < m_int; ++pw) {
        double term = cp / (std::pow(mean_snr, pw + 1) * std::pow(phi, pw + 1));
        for (int q = 0; q <= pw; ++q) {
            survival += term;
            term *= snr * phi / (q + 1);
        }
        cp *= (1.0 - p.m + pw) * (-d.delta) / (pw + 1);
    }
    return 1.0 - std::exp(-phi * snr) * survival;
}

/// Same CDF through the Humbert Phi2 series,
///   F(y) = mu h Phi2(1-m, m; 2; -nu h, -theta h), h = y / gs.
/// Converges only for moderate |nu h|; kept as an independent cross path.
inline double sr_cdf_phi2(double snr, const SrParams& p, double mean_snr,
                          const specfun::SeriesControl& ctl = {}) {
    p.validate();
    if (!(mean_snr >= 0.0)) throw domain_error("sr_cdf_phi2: mean SNR must be >= 0");
    if (snr <= 0.0) return 0.0;
    if (mean_snr == 0.0) return 1.0;
    const SrDerived d = sr_derive(p);
    const double h = snr / mean_snr;
    return d.mu * h * specfun::phi2(1.0 - p.m, p.m, 2.0, -d.nu * h, -d.theta * h, ctl);
}

/// One draw of the squared envelope |A e^{j phi} + c|^2 with A^2 ~
/// Gamma(m, Omega/m) and c circularly normal of total power 2b.
inline double sr_sample_power(rng::Rng& gen, const SrParams& p) {
    p.validate();
    const double amplitude = std::sqrt(gen.gamma(p.m, p.omega / p.m));
    const double scatter = std::sqrt(p.b);
    const double re = amplitude + scatter * gen.normal();
    const double im = scatter * gen.normal();
    return re * re + im * im;
}

/// Deterministic RF channel gain in dB for one weather state: antenna gains
/// minus free-space, oxygen, and (when raining) rain absorption over the
/// whole slant path.
struct RfLink {
    double tx_gain_db = 0.0;
    double rx_gain_db = 0.0;
    double carrier_frequency_ghz = 1.0;
    double oxygen_attenuation_db_km = 0.0;
    linkgeo::RainCoefficients rain_coeff{};

    void validate() const {
        if (!(carrier_frequency_ghz > 0.0))
            throw domain_error("RfLink: carrier frequency must be > 0");
        if (!(oxygen_attenuation_db_km >= 0.0))
            throw domain_error("RfLink: oxygen attenuation must be >= 0");
    }
};

inline double rf_channel_gain_db(const RfLink& link, double slant_range_km,
                                 double rain_rate_mm_h) {
    link.validate();
    double loss_db = linkgeo::fspl_db(slant_range_km, link.carrier_frequency_ghz);
    loss_db += link.oxygen_attenuation_db_km * slant_range_km;
    if (rain_rate_mm_h > 0.0) {
        loss_db += linkgeo::rain_specific_attenuation_db_km(
                       link.rain_coeff.k, link.rain_coeff.rho, rain_rate_mm_h) *
                   slant_range_km;
    }
    return link.tx_gain_db + link.rx_gain_db - loss_db;
}

} // namespace hyfso::rf
