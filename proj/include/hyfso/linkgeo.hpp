#pragma once

/// Slant-path geometry and deterministic link-budget pieces shared by the
/// optical and radio branches: secant slant range, free-space path loss, and
/// rain specific attenuation with an interpolated coefficient table.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hyfso/errors.hpp"

namespace hyfso::linkgeo {

inline constexpr double kSpeedOfLightMps = 299792458.0;

/// Slant range through a plane-stratified atmosphere (secant model).
/// Valid away from the horizon; the zenith angle must stay below 90 degrees.
inline double slant_range_km(double sat_altitude_km, double gs_altitude_km,
                             double zenith_angle_deg) {
    if (!(sat_altitude_km > gs_altitude_km))
        throw domain_error("slant_range_km: satellite must be above the ground station");
    if (!(zenith_angle_deg >= 0.0) || zenith_angle_deg >= 90.0)
        throw domain_error("slant_range_km: zenith angle must lie in [0, 90) degrees");
    const double zenith_rad = zenith_angle_deg * M_PI / 180.0;
    return (sat_altitude_km - gs_altitude_km) / std::cos(zenith_rad);
}

/// Free-space path loss 20 log10(4 pi d / lambda) in dB.
inline double fspl_db(double distance_km, double carrier_frequency_ghz) {
    if (!(distance_km > 0.0)) throw domain_error("fspl_db: distance must be > 0");
    if (!(carrier_frequency_ghz > 0.0))
        throw domain_error("fspl_db: carrier frequency must be > 0");
    const double lambda_m = kSpeedOfLightMps / (carrier_frequency_ghz * 1e9);
    return 20.0 * std::log10(4.0 * M_PI * distance_km * 1e3 / lambda_m);
}

/// Rain specific attenuation k R^rho in dB/km for rain rate R in mm/h.
inline double rain_specific_attenuation_db_km(double coeff_k, double coeff_rho,
                                              double rain_rate_mm_h) {
    if (!(coeff_k > 0.0)) throw domain_error("rain_specific_attenuation: k must be > 0");
    if (!(rain_rate_mm_h >= 0.0))
        throw domain_error("rain_specific_attenuation: rain rate must be >= 0");
    if (rain_rate_mm_h == 0.0) return 0.0;
    return coeff_k * std::pow(rain_rate_mm_h, coeff_rho);
}

/// Field-amplitude transmittance of a loss given in dB (irradiance scales
/// with the square).
inline double amplitude_transmittance(double loss_db) { return std::pow(10.0, -loss_db / 20.0); }

/// Power ratio of a gain given in dB.
inline double power_gain(double gain_db) { return std::pow(10.0, gain_db / 10.0); }

struct RainCoefficients {
    double k = 0.0;
    double rho = 0.0;

    friend bool operator==(const RainCoefficients&, const RainCoefficients&) = default;
};

struct RainCoefficientRow {
    double frequency_ghz;
    double k;
    double rho;
};

/// Parses a whitespace-separated coefficient table: one row per line,
/// "frequency_ghz k rho", '#' starts a comment. Rows must be strictly
/// increasing in frequency.
inline std::vector<RainCoefficientRow> parse_rain_coefficient_table(std::istream& in,
                                                                    const std::string& origin) {
    std::vector<RainCoefficientRow> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        RainCoefficientRow row{};
        if (!(fields >> row.frequency_ghz)) continue; // blank or comment-only line
        if (!(fields >> row.k >> row.rho)) {
            throw scenario_error(origin + ":" + std::to_string(lineno) +
                                 ": expected 'frequency_ghz k rho'");
        }
        std::string extra;
        if (fields >> extra)
            throw scenario_error(origin + ":" + std::to_string(lineno) +
                                 ": trailing fields after rho");
        if (!(row.frequency_ghz > 0.0) || !(row.k > 0.0) || !(row.rho > 0.0))
            throw scenario_error(origin + ":" + std::to_string(lineno) +
                                 ": frequency, k, and rho must be positive");
        if (!rows.empty() && row.frequency_ghz <= rows.back().frequency_ghz)
            throw scenario_error(origin + ":" + std::to_string(lineno) +
                                 ": frequencies must be strictly increasing");
        rows.push_back(row);
    }
    if (rows.empty()) throw scenario_error(origin + ": no coefficient rows found");
    return rows;
}

inline std::vector<RainCoefficientRow> load_rain_coefficient_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw scenario_error(path + ": cannot open rain coefficient table");
    return parse_rain_coefficient_table(in, path);
}

/// Coefficients at an arbitrary frequency: k interpolated log-log,
/// rho linearly against log frequency, matching how the regression
/// coefficients behave between tabulated points.
inline RainCoefficients rain_coefficients_at(const std::vector<RainCoefficientRow>& table,
                                             double frequency_ghz) {
    if (table.empty()) throw domain_error("rain_coefficients_at: empty table");
    if (frequency_ghz < table.front().frequency_ghz ||
        frequency_ghz > table.back().frequency_ghz)
        throw domain_error("rain_coefficients_at: frequency outside tabulated range");
    const auto upper = std::lower_bound(
        table.begin(), table.end(), frequency_ghz,
        [](const RainCoefficientRow& row, double f) { return row.frequency_ghz < f; });
    if (upper->frequency_ghz == frequency_ghz) return {upper->k, upper->rho};
    const auto lo = *(upper - 1);
    const auto hi = *upper;
    const double w = (std::log(frequency_ghz) - std::log(lo.frequency_ghz)) /
                     (std::log(hi.frequency_ghz) - std::log(lo.frequency_ghz));
    RainCoefficients out;
    out.k = std::exp((1.0 - w) * std::log(lo.k) + w * std::log(hi.k));
    out.rho = (1.0 - w) * lo.rho + w * hi.rho;
    return out;
}

} // namespace hyfso::linkgeo
