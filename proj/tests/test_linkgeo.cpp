#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "hyfso/linkgeo.hpp"
#include "support/checks.hpp"

using namespace hyfso;
using testsupport::rel_diff;
using testsupport::scenario_path;

TEST_CASE("slant_range_km is the secant-scaled altitude difference", "[linkgeo]") {
    // 500 km orbit, 0.8 km site, 65 degrees off zenith.
    const double d = linkgeo::slant_range_km(500.0, 0.8, 65.0);
    REQUIRE(rel_diff(d, 1181.2078303097271) < 1e-14);
    REQUIRE(linkgeo::slant_range_km(500.0, 0.8, 0.0) == Catch::Approx(499.2).epsilon(1e-15));
    // Monotone in zenith angle.
    REQUIRE(linkgeo::slant_range_km(500.0, 0.8, 40.0) <
            linkgeo::slant_range_km(500.0, 0.8, 70.0));
    REQUIRE_THROWS_AS(linkgeo::slant_range_km(500.0, 0.8, 90.0), domain_error);
    REQUIRE_THROWS_AS(linkgeo::slant_range_km(500.0, 0.8, -1.0), domain_error);
    REQUIRE_THROWS_AS(linkgeo::slant_range_km(0.5, 0.8, 10.0), domain_error);
}

TEST_CASE("fspl_db matches 20 log10(4 pi d f / c)", "[linkgeo]") {
    REQUIRE(rel_diff(linkgeo::fspl_db(1181.2078303097271, 40.0), 185.93550939386716) < 1e-14);
    // Doubling the distance adds exactly 20 log10(2) dB.
    const double base = linkgeo::fspl_db(100.0, 40.0);
    REQUIRE(rel_diff(linkgeo::fspl_db(200.0, 40.0) - base, 20.0 * std::log10(2.0)) < 1e-12);
    // Same for frequency.
    REQUIRE(rel_diff(linkgeo::fspl_db(100.0, 80.0) - base, 20.0 * std::log10(2.0)) < 1e-12);
    REQUIRE_THROWS_AS(linkgeo::fspl_db(0.0, 40.0), domain_error);
    REQUIRE_THROWS_AS(linkgeo::fspl_db(100.0, 0.0), domain_error);
}

TEST_CASE("dB conversions invert each other", "[linkgeo]") {
    REQUIRE(rel_diff(linkgeo::amplitude_transmittance(0.45), 0.9495109992021983) < 1e-15);
    REQUIRE(linkgeo::amplitude_transmittance(0.0) == 1.0);
    REQUIRE(linkgeo::power_gain(0.0) == 1.0);
    REQUIRE(rel_diff(linkgeo::power_gain(7.0), 5.011872336272722) < 1e-15);
    // Amplitude transmittance squared is the power transmittance.
    const double amp = linkgeo::amplitude_transmittance(3.7);
    REQUIRE(rel_diff(amp * amp, linkgeo::power_gain(-3.7)) < 1e-14);
}

TEST_CASE("rain_specific_attenuation_db_km applies the power law", "[linkgeo]") {
    REQUIRE(rel_diff(linkgeo::rain_specific_attenuation_db_km(0.4001, 0.8816, 25.0),
                     6.832701734349671) < 1e-14);
    REQUIRE(linkgeo::rain_specific_attenuation_db_km(0.4001, 0.8816, 0.0) == 0.0);
    REQUIRE_THROWS_AS(linkgeo::rain_specific_attenuation_db_km(0.0, 0.8816, 25.0),
                      domain_error);
    REQUIRE_THROWS_AS(linkgeo::rain_specific_attenuation_db_km(0.4, 0.8816, -1.0),
                      domain_error);
}

TEST_CASE("parse_rain_coefficient_table accepts comments and rejects malformed rows",
          "[linkgeo]") {
    std::istringstream good("# header\n10 0.1 1.2\n\n20 0.2 1.0 # trailing comment\n");
    const auto rows = linkgeo::parse_rain_coefficient_table(good, "mem");
    REQUIRE(rows.size() == 2);
    REQUIRE(rows[0].frequency_ghz == 10.0);
    REQUIRE(rows[1].k == 0.2);

    const char* bad_tables[] = {
        "10 0.1\n",             // missing column
        "10 0.1 1.0 9\n",       // extra column
        "10 0.1 1.0\n10 0.2 0.9\n", // non-increasing frequency
        "10 -0.1 1.0\n",        // negative k
        "10 0.1 0.0\n",         // rho must be positive
        "ten 0.1 1.0\n",        // unparsable frequency
        "",                     // empty table
    };
    for (const char* text : bad_tables) {
        INFO("table: " << text);
        std::istringstream in(text);
        REQUIRE_THROWS_AS(linkgeo::parse_rain_coefficient_table(in, "mem"), scenario_error);
    }
    // Errors name the origin and line.
    std::istringstream in("10 0.1 1.0\n20 bad 1.0\n");
    REQUIRE_THROWS_WITH(linkgeo::parse_rain_coefficient_table(in, "mem"),
                        Catch::Matchers::ContainsSubstring("mem:2"));
}

TEST_CASE("rain_coefficients_at interpolates log-log in k, linear-in-log-f in rho",
          "[linkgeo]") {
    std::istringstream in("30 0.2403 0.9485\n40 0.4001 0.8816\n");
    const auto table = linkgeo::parse_rain_coefficient_table(in, "mem");
    // Exact at the rows.
    REQUIRE(linkgeo::rain_coefficients_at(table, 30.0).k == 0.2403);
    REQUIRE(linkgeo::rain_coefficients_at(table, 40.0).rho == 0.8816);
    // Geometric midpoint in frequency lands on the geometric mean of k and
    // the arithmetic mean of rho.
    const double f_mid = std::sqrt(30.0 * 40.0);
    const auto mid = linkgeo::rain_coefficients_at(table, f_mid);
    REQUIRE(rel_diff(mid.k, std::sqrt(0.2403 * 0.4001)) < 1e-12);
    REQUIRE(rel_diff(mid.rho, 0.5 * (0.9485 + 0.8816)) < 1e-12);
    REQUIRE_THROWS_AS(linkgeo::rain_coefficients_at(table, 29.9), domain_error);
    REQUIRE_THROWS_AS(linkgeo::rain_coefficients_at(table, 40.1), domain_error);
}

TEST_CASE("bundled coefficient table loads and covers 40 GHz", "[linkgeo]") {
    const auto table =
        linkgeo::load_rain_coefficient_table(scenario_path("itu_rain_coefficients.txt"));
    REQUIRE(table.size() == 5);
    const auto at40 = linkgeo::rain_coefficients_at(table, 40.0);
    REQUIRE(at40.k == 0.4001);
    REQUIRE(at40.rho == 0.8816);
    // Endpoints are inclusive.
    REQUIRE_NOTHROW(linkgeo::rain_coefficients_at(table, 10.0));
    REQUIRE_NOTHROW(linkgeo::rain_coefficients_at(table, 50.0));
    REQUIRE_THROWS_AS(linkgeo::load_rain_coefficient_table("/nonexistent/table.txt"),
                      scenario_error);
}
