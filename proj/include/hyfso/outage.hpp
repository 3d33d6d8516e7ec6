#pragma once

/// Outage assembly: derives the deterministic link budget from a scenario,
/// evaluates per-branch and per-weather-state outage probabilities for the
/// adaptive power-switching scheme and the always-split baseline, and exposes
/// the matching high-SNR asymptotes and diversity orders.

#include <array>
#include <cmath>
#include <optional>

#include "hyfso/errors.hpp"
#include "hyfso/fso.hpp"
#include "hyfso/linkgeo.hpp"
#include "hyfso/rf.hpp"
#include "hyfso/scenario.hpp"
#include "hyfso/specfun.hpp"

namespace hyfso::outage {

/// Weather states: 0 thin cloud (both branches, half power each), 1 rain
/// (optical only, full power), 2 fog (radio only, full power).
inline constexpr int kNumStates = 3;

/// Optical rain specific attenuation in dB/km for rain rate in mm/h.
inline double fso_rain_specific_attenuation_db_km(double rain_rate_mm_h) {
    if (!(rain_rate_mm_h >= 0.0))
        throw domain_error("fso_rain_specific_attenuation: rain rate must be >= 0");
    if (rain_rate_mm_h == 0.0) return 0.0;
    return 1.067 * std::pow(rain_rate_mm_h, 0.67);
}

/// Everything deterministic that the stochastic models sit on top of.
struct LinkBudget {
    double slant_range_km = 0.0;
    double ia_thin_cloud = 1.0; // optical amplitude transmittance per weather
    double ia_rain = 1.0;
    double ia_fog = 1.0;
    double hl_clear_db = 0.0; // radio channel gain, clear air (thin cloud / fog)
    double hl_rain_db = 0.0;  // radio channel gain under rain
    double hl_clear = 0.0;
    double hl_rain = 0.0;
    double noise_power_mw = 0.0;
    double snr_threshold = 0.0;
    std::optional<fso::BeamGeometry> beam; // set when the scenario has pointing
};

/// Rain regression coefficients, either inline or interpolated from the
/// table file referenced by the scenario (relative to its directory).
inline linkgeo::RainCoefficients resolve_rain_coefficients(const scenario::Scenario& sc) {
    if (sc.rf.rain_coeff) return *sc.rf.rain_coeff;
    std::string path = *sc.rf.rain_coeff_table;
    if (!path.empty() && path.front() != '/' && !sc.base_dir.empty())
        path = sc.base_dir + "/" + path;
    const auto table = linkgeo::load_rain_coefficient_table(path);
    return linkgeo::rain_coefficients_at(table, sc.rf.carrier_frequency_ghz);
}

inline LinkBudget derive_link_budget(const scenario::Scenario& sc) {
    LinkBudget lb;
    lb.slant_range_km = linkgeo::slant_range_km(
        sc.geometry.sat_altitude_km, sc.geometry.gs_altitude_km, sc.geometry.zenith_angle_deg);

    lb.ia_thin_cloud = linkgeo::amplitude_transmittance(
        sc.weather.thin_cloud_attenuation_db_km * sc.weather.thin_cloud_path_km);
    lb.ia_rain = linkgeo::amplitude_transmittance(
        fso_rain_specific_attenuation_db_km(sc.weather.rain_rate_mm_h) *
        sc.weather.rain_path_km);
    lb.ia_fog = linkgeo::amplitude_transmittance(sc.weather.fog_attenuation_db_km *
                                                 sc.weather.fog_path_km);

    rf::RfLink link;
    link.tx_gain_db = sc.rf.tx_gain_db;
    link.rx_gain_db = sc.rf.rx_gain_db;
    link.carrier_frequency_ghz = sc.rf.carrier_frequency_ghz;
    link.oxygen_attenuation_db_km = sc.rf.oxygen_attenuation_db_km;
    link.rain_coeff = resolve_rain_coefficients(sc);
    lb.hl_clear_db = rf::rf_channel_gain_db(link, lb.slant_range_km, 0.0);
    lb.hl_rain_db = rf::rf_channel_gain_db(link, lb.slant_range_km, sc.weather.rain_rate_mm_h);
    lb.hl_clear = linkgeo::power_gain(lb.hl_clear_db);
    lb.hl_rain = linkgeo::power_gain(lb.hl_rain_db);

    lb.noise_power_mw = linkgeo::power_gain(sc.power.noise_psd_dbm); // dBm -> mW
    lb.snr_threshold = linkgeo::power_gain(sc.power.snr_threshold_db);

    if (sc.pointing) {
        const double z_km = sc.pointing->beam_distance_km.value_or(lb.slant_range_km);
        lb.beam = fso::beam_geometry(sc.pointing->divergence_theta_mrad, z_km,
                                     sc.pointing->aperture_diameter_m);
    }
    return lb;
}

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

/// Analytic outage evaluator for one scenario. Pointing error is applied to
/// the optical branch only when the scenario carries a [pointing] section and
/// use_pointing is set.
class OutageModel {
public:
    OutageModel(scenario::Scenario sc, specfun::SeriesControl ctl = {}, bool use_pointing = false)
        : sc_(std::move(sc)), ctl_(ctl), budget_(derive_link_budget(sc_)),
          use_pointing_(use_pointing) {
        ctl_.validate();
        if (use_pointing_ && !sc_.pointing)
            throw domain_error("OutageModel: scenario has no [pointing] section");
    }

    const scenario::Scenario& scenario_ref() const { return sc_; }
    const LinkBudget& budget() const { return budget_; }
    bool pointing_active() const { return use_pointing_; }

    /// Optical ingredients for a weather state; fog reuses the thin-cloud
    /// fading shape behind its (enormous) extra attenuation, which only the
    /// always-split baseline ever evaluates.
    struct FsoIngredients {
        fso::EwParams ew;
        double ia;
    };

    FsoIngredients fso_ingredients(int state) const {
        switch (state) {
            case 0: return {sc_.fso.thin_cloud, budget_.ia_thin_cloud};
            case 1: return {sc_.fso.rain, budget_.ia_rain};
            case 2: return {sc_.fso.thin_cloud, budget_.ia_fog};
            default: throw domain_error("fso_ingredients: state must be 0, 1, or 2");
        }
    }

    double rf_channel_gain(int state) const {
        if (state == 1) return budget_.hl_rain;
        if (state == 0 || state == 2) return budget_.hl_clear;
        throw domain_error("rf_channel_gain: state must be 0, 1, or 2");
    }

    /// Mean SNR parameter handed to the shadowed-Rician CDF.
    double rf_mean_snr(double power_mw, int state) const {
        double gs = power_mw * rf_channel_gain(state) / budget_.noise_power_mw;
        if (sc_.rf.normalize_fading_power) gs /= rf::sr_mean_power(sc_.rf.sr);
        return gs;
    }

    /// Outage of the optical branch alone at transmit power power_mw under
    /// the given weather state. SNR model: snr = (zeta P I / N0)^2.
    double fso_branch_outage(double power_mw, int state) const {
        if (!(power_mw > 0.0)) throw domain_error("fso_branch_outage: power must be > 0");
        const auto ing = fso_ingredients(state);
        const double i_th = std::sqrt(budget_.snr_threshold) * budget_.noise_power_mw /
                            (sc_.fso.conversion_zeta * power_mw);
        if (use_pointing_) {
            fso::PointingParams pt;
            pt.boresight_s_m = sc_.pointing->boresight_s_m;
            pt.jitter_sigma_m = sc_.pointing->jitter_sigma_m;
            return fso::combined_irradiance_cdf(i_th, ing.ew, *budget_.beam, pt, ing.ia, ctl_);
        }
        return fso::ew_cdf(i_th / ing.ia, ing.ew);
    }

    /// Outage of the radio branch alone at transmit power power_mw.
    double rf_branch_outage(double power_mw, int state) const {
        if (!(power_mw > 0.0)) throw domain_error("rf_branch_outage: power must be > 0");
        return rf::sr_cdf_finite(budget_.snr_threshold, sc_.rf.sr,
                                 rf_mean_snr(power_mw, state));
    }

    /// Adaptive scheme: state 0 selection-combines both branches at half
    /// power; state 1 sends everything optical; state 2 everything radio.
    double state_outage(int state, double total_power_dbm) const {
        const double pt_mw = dbm_to_mw(total_power_dbm);
        switch (state) {
            case 0:
                return fso_branch_outage(0.5 * pt_mw, 0) * rf_branch_outage(0.5 * pt_mw, 0);
            case 1: return fso_branch_outage(pt_mw, 1);
            case 2: return rf_branch_outage(pt_mw, 2);
            default: throw domain_error("state_outage: state must be 0, 1, or 2");
        }
    }

    /// Always-split baseline: both branches carry half the power in every
    /// state, outage only when both fail.
    double state_outage_dual(int state, double total_power_dbm) const {
        const double half = 0.5 * dbm_to_mw(total_power_dbm);
        return fso_branch_outage(half, state) * rf_branch_outage(half, state);
    }

    /// Printed series path for the thin-cloud state (binomial expansion of
    /// the optical CDF times the radio finite sum); the production
    /// state_outage(0, .) uses the closed forms directly.
    double state0_outage_series(double total_power_dbm,
                                const specfun::SeriesControl& ctl) const {
        const double half = 0.5 * dbm_to_mw(total_power_dbm);
        const auto ing = fso_ingredients(0);
        const double i_th = std::sqrt(budget_.snr_threshold) * budget_.noise_power_mw /
                            (sc_.fso.conversion_zeta * half);
        fso::EwParams scaled = ing.ew;
        scaled.eta *= ing.ia;
        const double f_fso = fso::ew_cdf_series(i_th, scaled, ctl);
        return f_fso * rf_branch_outage(half, 0);
    }

    /// High-SNR asymptote of the optical branch (pointing-free by
    /// construction; a pointing run's asymptote column is the underlying
    /// fading-only slope).
    double fso_branch_asymptote(double power_mw, int state) const {
        const auto ing = fso_ingredients(state);
        const double i_th = std::sqrt(budget_.snr_threshold) * budget_.noise_power_mw /
                            (sc_.fso.conversion_zeta * power_mw);
        return std::pow(i_th / (ing.ew.eta * ing.ia), ing.ew.alpha * ing.ew.beta);
    }

    double rf_branch_asymptote(double power_mw, int state) const {
        const rf::SrDerived d = rf::sr_derive(sc_.rf.sr);
        return d.mu * budget_.snr_threshold / rf_mean_snr(power_mw, state);
    }

    double state_outage_asymptotic(int state, double total_power_dbm) const {
        const double pt_mw = dbm_to_mw(total_power_dbm);
        switch (state) {
            case 0:
                return fso_branch_asymptote(0.5 * pt_mw, 0) *
                       rf_branch_asymptote(0.5 * pt_mw, 0);
            case 1: return fso_branch_asymptote(pt_mw, 1);
            case 2: return rf_branch_asymptote(pt_mw, 2);
            default: throw domain_error("state_outage_asymptotic: state must be 0, 1, or 2");
        }
    }

    /// Long-run outage across the weather process.
    double average_outage(double total_power_dbm) const {
        return sc_.states.p0 * state_outage(0, total_power_dbm) +
               sc_.states.p1 * state_outage(1, total_power_dbm) +
               sc_.states.p2 * state_outage(2, total_power_dbm);
    }

private:
    scenario::Scenario sc_;
    specfun::SeriesControl ctl_;
    LinkBudget budget_;
    bool use_pointing_ = false;
};

/// Nominal diversity order of each state's outage curve: the thin-cloud state
/// is limited by its stronger branch, rain by the optical fading shape, fog
/// by the radio branch's unit slope.
inline std::array<double, 3> diversity_order(const scenario::Scenario& sc) {
    const double d_fso_tc = sc.fso.thin_cloud.alpha * sc.fso.thin_cloud.beta / 2.0;
    const double d_fso_rain = sc.fso.rain.alpha * sc.fso.rain.beta / 2.0;
    return {std::max(d_fso_tc, 1.0), d_fso_rain, 1.0};
}

/// Diversity order is a slope against mean SNR, and the branches scale
/// differently with transmit power: optical SNR grows with its square
/// (intensity detection), radio SNR linearly. This is the dB-per-dB exponent
/// of the SNR axis each state's order is defined against; state 0 follows
/// whichever branch sets its diversity_order entry.
inline double snr_power_exponent(const scenario::Scenario& sc, int state) {
    switch (state) {
        case 0:
            return sc.fso.thin_cloud.alpha * sc.fso.thin_cloud.beta / 2.0 >= 1.0 ? 2.0 : 1.0;
        case 1: return 2.0;
        case 2: return 1.0;
        default: throw domain_error("snr_power_exponent: state must be 0, 1, or 2");
    }
}

} // namespace hyfso::outage
