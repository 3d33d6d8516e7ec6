#pragma once

/// Scenario files (.scn): a strict INI dialect describing one downlink
/// configuration. Every key is unit-suffixed, unknown or missing keys are
/// rejected with the offending line, and serialization is canonical so that
/// parse -> serialize -> parse is the identity.

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "hyfso/errors.hpp"
#include "hyfso/fso.hpp"
#include "hyfso/linkgeo.hpp"
#include "hyfso/rf.hpp"

namespace hyfso::scenario {

struct Geometry {
    double sat_altitude_km = 0.0;
    double gs_altitude_km = 0.0;
    double zenith_angle_deg = 0.0;

    friend bool operator==(const Geometry&, const Geometry&) = default;
};

struct Weather {
    double thin_cloud_attenuation_db_km = 0.0;
    double thin_cloud_path_km = 0.0;
    double rain_rate_mm_h = 0.0;
    double rain_path_km = 0.0;
    double fog_attenuation_db_km = 0.0;
    double fog_path_km = 0.0;

    friend bool operator==(const Weather&, const Weather&) = default;
};

struct FsoSection {
    fso::EwParams thin_cloud{};
    fso::EwParams rain{};
    double conversion_zeta = 1.0;

    friend bool operator==(const FsoSection&, const FsoSection&) = default;
};

struct Pointing {
    double boresight_s_m = 0.0;
    double jitter_sigma_m = 0.0;
    double divergence_theta_mrad = 0.0;
    double aperture_diameter_m = 0.0;
    std::optional<double> beam_distance_km; // defaults to the slant range

    friend bool operator==(const Pointing&, const Pointing&) = default;
};

struct RfSection {
    double tx_gain_db = 0.0;
    double rx_gain_db = 0.0;
    double carrier_frequency_ghz = 0.0;
    double oxygen_attenuation_db_km = 0.0;
    std::optional<linkgeo::RainCoefficients> rain_coeff;
    std::optional<std::string> rain_coeff_table; // exactly one of the two
    bool normalize_fading_power = false;
    rf::SrParams sr{};

    friend bool operator==(const RfSection&, const RfSection&) = default;
};

struct PowerSection {
    double total_power_dbm = 0.0;
    double noise_psd_dbm = 0.0;
    double snr_threshold_db = 0.0;

    friend bool operator==(const PowerSection&, const PowerSection&) = default;
};

struct McSection {
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::uint64_t batch = 0;

    friend bool operator==(const McSection&, const McSection&) = default;
};

struct StateProbabilities {
    double p0 = 0.0; // thin cloud: both branches carry half the power
    double p1 = 0.0; // rain: optical branch only
    double p2 = 0.0; // fog: radio branch only

    friend bool operator==(const StateProbabilities&, const StateProbabilities&) = default;
};

struct Scenario {
    Geometry geometry{};
    Weather weather{};
    FsoSection fso{};
    std::optional<Pointing> pointing;
    RfSection rf{};
    PowerSection power{};
    McSection mc{};
    StateProbabilities states{};

    /// Directory of the file this scenario was loaded from; resolves relative
    /// table paths. Not part of the value.
    std::string base_dir;

    friend bool operator==(const Scenario& a, const Scenario& b) {
        return a.geometry == b.geometry && a.weather == b.weather && a.fso == b.fso &&
               a.pointing == b.pointing && a.rf == b.rf && a.power == b.power &&
               a.mc == b.mc && a.states == b.states;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct RawValue {
    std::string text;
    int line = 0;
};

using RawSection = std::map<std::string, RawValue>;
using RawFile = std::map<std::string, RawSection>;

inline RawFile tokenize(std::istream& in, const std::string& origin) {
    RawFile out;
    std::string line;
    std::string section;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw scenario_error(origin + ":" + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) fail("empty section name");
            if (out.count(section)) fail("duplicate section [" + section + "]");
            out[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        if (section.empty()) fail("key before any section header");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail("empty key");
        if (value.empty()) fail("empty value for key '" + key + "'");
        auto& sec = out[section];
        if (sec.count(key)) fail("duplicate key '" + key + "'");
        sec[key] = RawValue{value, lineno};
    }
    return out;
}

/// Pops keys from one tokenized section, enforcing the strict schema.
class SectionReader {
public:
    SectionReader(RawFile& file, std::string name, const std::string& origin, bool required)
        : name_(std::move(name)), origin_(origin) {
        auto it = file.find(name_);
        if (it == file.end()) {
            if (required)
                throw scenario_error(origin_ + ": missing required section [" + name_ + "]");
            present_ = false;
            return;
        }
        section_ = std::move(it->second);
        file.erase(it);
    }

    bool present() const { return present_; }

    std::optional<std::string> take_raw(const std::string& key) {
        auto it = section_.find(key);
        if (it == section_.end()) return std::nullopt;
        std::string v = it->second.text;
        section_.erase(it);
        return v;
    }

    std::string require_raw(const std::string& key) {
        auto v = take_raw(key);
        if (!v)
            throw scenario_error(origin_ + ": [" + name_ + "] missing required key '" + key +
                                 "'");
        return *v;
    }

    double require_double(const std::string& key) { return parse_double(key, require_raw(key)); }

    std::optional<double> take_double(const std::string& key) {
        auto v = take_raw(key);
        if (!v) return std::nullopt;
        return parse_double(key, *v);
    }

    std::uint64_t require_uint(const std::string& key) {
        const std::string text = require_raw(key);
        if (text.find('-') != std::string::npos) bad_value(key, text, "unsigned integer");
        errno = 0;
        char* end = nullptr;
        const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
        if (errno != 0 || end == text.c_str() || *end != '\0')
            bad_value(key, text, "unsigned integer");
        return static_cast<std::uint64_t>(v);
    }

    bool take_bool(const std::string& key, bool fallback) {
        auto v = take_raw(key);
        if (!v) return fallback;
        if (*v == "true") return true;
        if (*v == "false") return false;
        bad_value(key, *v, "'true' or 'false'");
        return fallback;
    }

    void finish() {
        if (!section_.empty()) {
            const auto& [key, raw] = *section_.begin();
            throw scenario_error(origin_ + ":" + std::to_string(raw.line) + ": unknown key '" +
                                 key + "' in section [" + name_ + "]");
        }
    }

private:
    double parse_double(const std::string& key, const std::string& text) {
        errno = 0;
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (errno != 0 || end == text.c_str() || *end != '\0') bad_value(key, text, "number");
        return v;
    }

    [[noreturn]] void bad_value(const std::string& key, const std::string& text,
                                const std::string& want) {
        throw scenario_error(origin_ + ": [" + name_ + "] key '" + key + "': expected " + want +
                             ", got '" + text + "'");
    }

    std::string name_;
    const std::string& origin_;
    RawSection section_;
    bool present_ = true;
};

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

inline Scenario parse_scenario(std::istream& in, const std::string& origin) {
    detail::RawFile raw = detail::tokenize(in, origin);
    Scenario sc;

    {
        detail::SectionReader sec(raw, "geometry", origin, true);
        sc.geometry.sat_altitude_km = sec.require_double("sat_altitude_km");
        sc.geometry.gs_altitude_km = sec.require_double("gs_altitude_km");
        sc.geometry.zenith_angle_deg = sec.require_double("zenith_angle_deg");
        sec.finish();
    }
    {
        detail::SectionReader sec(raw, "weather", origin, true);
        sc.weather.thin_cloud_attenuation_db_km = sec.require_double("thin_cloud_attenuation_db_km");
        sc.weather.thin_cloud_path_km = sec.require_double("thin_cloud_path_km");
        sc.weather.rain_rate_mm_h = sec.require_double("rain_rate_mm_h");
        sc.weather.rain_path_km = sec.require_double("rain_path_km");
        sc.weather.fog_attenuation_db_km = sec.require_double("fog_attenuation_db_km");
        sc.weather.fog_path_km = sec.require_double("fog_path_km");
        sec.finish();
    }
    {
        detail::SectionReader sec(raw, "fso", origin, true);
        sc.fso.thin_cloud.alpha = sec.require_double("thin_cloud_alpha");
        sc.fso.thin_cloud.beta = sec.require_double("thin_cloud_beta");
        sc.fso.thin_cloud.eta = sec.require_double("thin_cloud_eta");
        sc.fso.rain.alpha = sec.require_double("rain_alpha");
        sc.fso.rain.beta = sec.require_double("rain_beta");
        sc.fso.rain.eta = sec.require_double("rain_eta");
        sc.fso.conversion_zeta = sec.require_double("conversion_zeta");
        sec.finish();
    }
    {
        detail::SectionReader sec(raw, "pointing", origin, false);
        if (sec.present()) {
            Pointing pt;
            pt.boresight_s_m = sec.require_double("boresight_s_m");
            pt.jitter_sigma_m = sec.require_double("jitter_sigma_m");
            pt.divergence_theta_mrad = sec.require_double("divergence_theta_mrad");
            pt.aperture_diameter_m = sec.require_double("aperture_diameter_m");
            pt.beam_distance_km = sec.take_double("beam_distance_km");
            sec.finish();
            sc.pointing = pt;
        }
    }
    {
        detail::SectionReader sec(raw, "rf", origin, true);
        sc.rf.tx_gain_db = sec.require_double("tx_gain_db");
        sc.rf.rx_gain_db = sec.require_double("rx_gain_db");
        sc.rf.carrier_frequency_ghz = sec.require_double("carrier_frequency_ghz");
        sc.rf.oxygen_attenuation_db_km = sec.require_double("oxygen_attenuation_db_km");
        const auto k = sec.take_double("rain_coeff_k");
        const auto rho = sec.take_double("rain_coeff_rho");
        const auto table = sec.take_raw("rain_coeff_table");
        if (table && (k || rho))
            throw scenario_error(origin +
                                 ": [rf] rain_coeff_table excludes rain_coeff_k/rain_coeff_rho");
        if (table) {
            sc.rf.rain_coeff_table = *table;
        } else if (k && rho) {
            sc.rf.rain_coeff = linkgeo::RainCoefficients{*k, *rho};
        } else {
            throw scenario_error(origin +
                                 ": [rf] needs rain_coeff_k and rain_coeff_rho, or "
                                 "rain_coeff_table");
        }
        sc.rf.normalize_fading_power = sec.take_bool("normalize_fading_power", false);
        sc.rf.sr.m = sec.require_double("sr_m");
        sc.rf.sr.b = sec.require_double("sr_b");
        sc.rf.sr.omega = sec.require_double("sr_omega");
        sec.finish();
    }
    {
        detail::SectionReader sec(raw, "power", origin, true);
        sc.power.total_power_dbm = sec.require_double("total_power_dbm");
        sc.power.noise_psd_dbm = sec.require_double("noise_psd_dbm");
        sc.power.snr_threshold_db = sec.require_double("snr_threshold_db");
        sec.finish();
    }
    {
        detail::SectionReader sec(raw, "mc", origin, true);
        sc.mc.samples = sec.require_uint("samples");
        sc.mc.seed = sec.require_uint("seed");
        sc.mc.batch = sec.require_uint("batch");
        sec.finish();
    }
    {
        detail::SectionReader sec(raw, "states", origin, true);
        sc.states.p0 = sec.require_double("p0");
        sc.states.p1 = sec.require_double("p1");
        sc.states.p2 = sec.require_double("p2");
        sec.finish();
    }
    if (!raw.empty())
        throw scenario_error(origin + ": unknown section [" + raw.begin()->first + "]");

    // Semantic validation beyond syntax.
    auto fail = [&](const std::string& msg) { throw scenario_error(origin + ": " + msg); };
    if (!(sc.geometry.sat_altitude_km > sc.geometry.gs_altitude_km))
        fail("satellite altitude must exceed ground-station altitude");
    if (!(sc.geometry.zenith_angle_deg >= 0.0) || sc.geometry.zenith_angle_deg >= 90.0)
        fail("zenith angle must lie in [0, 90) degrees");
    for (double v : {sc.weather.thin_cloud_attenuation_db_km, sc.weather.thin_cloud_path_km,
                     sc.weather.rain_rate_mm_h, sc.weather.rain_path_km,
                     sc.weather.fog_attenuation_db_km, sc.weather.fog_path_km})
        if (!(v >= 0.0)) fail("[weather] values must be >= 0");
    try {
        sc.fso.thin_cloud.validate();
        sc.fso.rain.validate();
        sc.rf.sr.validate();
    } catch (const domain_error& e) {
        fail(e.what());
    }
    if (!(sc.fso.conversion_zeta > 0.0)) fail("conversion_zeta must be > 0");
    if (!rf::is_positive_integer(sc.rf.sr.m)) fail("sr_m must be a positive integer");
    if (sc.pointing) {
        if (!(sc.pointing->boresight_s_m >= 0.0)) fail("boresight_s_m must be >= 0");
        if (!(sc.pointing->jitter_sigma_m > 0.0)) fail("jitter_sigma_m must be > 0");
        if (!(sc.pointing->divergence_theta_mrad > 0.0))
            fail("divergence_theta_mrad must be > 0");
        if (!(sc.pointing->aperture_diameter_m > 0.0)) fail("aperture_diameter_m must be > 0");
        if (sc.pointing->beam_distance_km && !(*sc.pointing->beam_distance_km > 0.0))
            fail("beam_distance_km must be > 0");
    }
    if (sc.rf.rain_coeff && !(sc.rf.rain_coeff->k > 0.0)) fail("rain_coeff_k must be > 0");
    if (!(sc.rf.carrier_frequency_ghz > 0.0)) fail("carrier_frequency_ghz must be > 0");
    if (!(sc.rf.oxygen_attenuation_db_km >= 0.0)) fail("oxygen_attenuation_db_km must be >= 0");
    if (sc.mc.samples < 1) fail("[mc] samples must be >= 1");
    if (sc.mc.batch < 1) fail("[mc] batch must be >= 1");
    const double psum = sc.states.p0 + sc.states.p1 + sc.states.p2;
    if (!(sc.states.p0 >= 0.0) || !(sc.states.p1 >= 0.0) || !(sc.states.p2 >= 0.0))
        fail("[states] probabilities must be >= 0");
    if (std::abs(psum - 1.0) > 1e-9) fail("[states] probabilities must sum to 1");
    // Renormalize only genuine drift; a sum already within rounding noise of 1
    // is kept verbatim so serialization round-trips exactly.
    if (std::abs(psum - 1.0) > 1e-15) {
        sc.states.p0 /= psum;
        sc.states.p1 /= psum;
        sc.states.p2 /= psum;
    }
    return sc;
}

inline Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw scenario_error(path + ": cannot open scenario file");
    Scenario sc = parse_scenario(in, path);
    const auto slash = path.find_last_of('/');
    sc.base_dir = slash == std::string::npos ? std::string(".") : path.substr(0, slash);
    return sc;
}

/// Canonical text form; parsing it reproduces the scenario exactly.
inline std::string serialize_scenario(const Scenario& sc) {
    using detail::fmt_double;
    std::ostringstream out;
    out << "[geometry]\n";
    out << "sat_altitude_km = " << fmt_double(sc.geometry.sat_altitude_km) << "\n";
    out << "gs_altitude_km = " << fmt_double(sc.geometry.gs_altitude_km) << "\n";
    out << "zenith_angle_deg = " << fmt_double(sc.geometry.zenith_angle_deg) << "\n\n";

    out << "[weather]\n";
    out << "thin_cloud_attenuation_db_km = "
        << fmt_double(sc.weather.thin_cloud_attenuation_db_km) << "\n";
    out << "thin_cloud_path_km = " << fmt_double(sc.weather.thin_cloud_path_km) << "\n";
    out << "rain_rate_mm_h = " << fmt_double(sc.weather.rain_rate_mm_h) << "\n";
    out << "rain_path_km = " << fmt_double(sc.weather.rain_path_km) << "\n";
    out << "fog_attenuation_db_km = " << fmt_double(sc.weather.fog_attenuation_db_km) << "\n";
    out << "fog_path_km = " << fmt_double(sc.weather.fog_path_km) << "\n\n";

    out << "[fso]\n";
    out << "thin_cloud_alpha = " << fmt_double(sc.fso.thin_cloud.alpha) << "\n";
    out << "thin_cloud_beta = " << fmt_double(sc.fso.thin_cloud.beta) << "\n";
    out << "thin_cloud_eta = " << fmt_double(sc.fso.thin_cloud.eta) << "\n";
    out << "rain_alpha = " << fmt_double(sc.fso.rain.alpha) << "\n";
    out << "rain_beta = " << fmt_double(sc.fso.rain.beta) << "\n";
    out << "rain_eta = " << fmt_double(sc.fso.rain.eta) << "\n";
    out << "conversion_zeta = " << fmt_double(sc.fso.conversion_zeta) << "\n\n";

    if (sc.pointing) {
        out << "[pointing]\n";
        out << "boresight_s_m = " << fmt_double(sc.pointing->boresight_s_m) << "\n";
        out << "jitter_sigma_m = " << fmt_double(sc.pointing->jitter_sigma_m) << "\n";
        out << "divergence_theta_mrad = " << fmt_double(sc.pointing->divergence_theta_mrad)
            << "\n";
        out << "aperture_diameter_m = " << fmt_double(sc.pointing->aperture_diameter_m) << "\n";
        if (sc.pointing->beam_distance_km)
            out << "beam_distance_km = " << fmt_double(*sc.pointing->beam_distance_km) << "\n";
        out << "\n";
    }

    out << "[rf]\n";
    out << "tx_gain_db = " << fmt_double(sc.rf.tx_gain_db) << "\n";
    out << "rx_gain_db = " << fmt_double(sc.rf.rx_gain_db) << "\n";
    out << "carrier_frequency_ghz = " << fmt_double(sc.rf.carrier_frequency_ghz) << "\n";
    out << "oxygen_attenuation_db_km = " << fmt_double(sc.rf.oxygen_attenuation_db_km) << "\n";
    if (sc.rf.rain_coeff_table) {
        out << "rain_coeff_table = " << *sc.rf.rain_coeff_table << "\n";
    } else if (sc.rf.rain_coeff) {
        out << "rain_coeff_k = " << fmt_double(sc.rf.rain_coeff->k) << "\n";
        out << "rain_coeff_rho = " << fmt_double(sc.rf.rain_coeff->rho) << "\n";
    }
    out << "normalize_fading_power = " << (sc.rf.normalize_fading_power ? "true" : "false")
        << "\n";
    out << "sr_m = " << fmt_double(sc.rf.sr.m) << "\n";
    out << "sr_b = " << fmt_double(sc.rf.sr.b) << "\n";
    out << "sr_omega = " << fmt_double(sc.rf.sr.omega) << "\n\n";

    out << "[power]\n";
    out << "total_power_dbm = " << fmt_double(sc.power.total_power_dbm) << "\n";
    out << "noise_psd_dbm = " << fmt_double(sc.power.noise_psd_dbm) << "\n";
    out << "snr_threshold_db = " << fmt_double(sc.power.snr_threshold_db) << "\n\n";

    out << "[mc]\n";
    out << "samples = " << sc.mc.samples << "\n";
    out << "seed = " << sc.mc.seed << "\n";
    out << "batch = " << sc.mc.batch << "\n\n";

    out << "[states]\n";
    out << "p0 = " << fmt_double(sc.states.p0) << "\n";
    out << "p1 = " << fmt_double(sc.states.p1) << "\n";
    out << "p2 = " << fmt_double(sc.states.p2) << "\n";
    return out.str();
}

} // namespace hyfso::scenario
