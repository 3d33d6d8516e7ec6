#pragma once

/// Monte Carlo outage estimator: samples the physical channel models directly
/// (no reuse of the analytic CDFs) so the two paths can cross-validate each
/// other. Batched, seeded per batch, and deterministic for a given (seed,
/// samples, batch) triple regardless of thread count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include "hyfso/outage.hpp"
#include "hyfso/rng.hpp"

namespace hyfso::mc {

struct McResult {
    std::uint64_t samples = 0;
    std::uint64_t failures = 0;
    double p_hat = 0.0;
    double std_error = 0.0;
    double ci95_lo = 0.0;
    double ci95_hi = 0.0;
};

namespace detail {

/// Channel draw shared by the estimator; returns the outage indicator for one
/// weather state at total power pt_mw.
inline bool outage_event(rng::Rng& gen, const outage::OutageModel& model, int state,
                         double pt_mw) {
    const auto& sc = model.scenario_ref();
    const auto& lb = model.budget();
    const double gamma_th = lb.snr_threshold;

    const auto fso_snr = [&](double power_mw, int weather) {
        const auto ing = model.fso_ingredients(weather);
        double irradiance = ing.ia * fso::ew_sample(gen, ing.ew);
        if (model.pointing_active()) {
            fso::PointingParams pt;
            pt.boresight_s_m = sc.pointing->boresight_s_m;
            pt.jitter_sigma_m = sc.pointing->jitter_sigma_m;
            irradiance *= fso::pointing_gain_sample(gen, *lb.beam, pt);
        }
        const double amp = sc.fso.conversion_zeta * power_mw * irradiance / lb.noise_power_mw;
        return amp * amp;
    };
    const auto rf_snr = [&](double power_mw, int weather) {
        double h2 = rf::sr_sample_power(gen, sc.rf.sr);
        if (sc.rf.normalize_fading_power) h2 /= rf::sr_mean_power(sc.rf.sr);
        return power_mw * model.rf_channel_gain(weather) * h2 / lb.noise_power_mw;
    };

    switch (state) {
        case 0:
            return fso_snr(0.5 * pt_mw, 0) < gamma_th && rf_snr(0.5 * pt_mw, 0) < gamma_th;
        case 1: return fso_snr(pt_mw, 1) < gamma_th;
        case 2: return rf_snr(pt_mw, 2) < gamma_th;
        default: throw domain_error("outage_event: state must be 0, 1, or 2");
    }
}

} // namespace detail

/// Estimates the outage probability of one weather state by direct channel
/// simulation. Batches are seeded independently from (seed, batch index), so
/// the failure count is a pure function of the arguments.
inline McResult estimate_state_outage(const outage::OutageModel& model, int state,
                                      double total_power_dbm, std::uint64_t samples,
                                      std::uint64_t seed, std::uint64_t batch_size) {
    if (samples < 1) throw domain_error("estimate_state_outage: samples must be >= 1");
    if (batch_size < 1) throw domain_error("estimate_state_outage: batch size must be >= 1");
    const double pt_mw = outage::dbm_to_mw(total_power_dbm);
    const std::uint64_t n_batches = (samples + batch_size - 1) / batch_size;

    const auto run_batch = [&](std::uint64_t index) {
        rng::Rng gen(rng::substream_seed(seed, index));
        const std::uint64_t begin = index * batch_size;
        const std::uint64_t count = std::min(batch_size, samples - begin);
        std::uint64_t failures = 0;
        for (std::uint64_t i = 0; i < count; ++i)
            failures += detail::outage_event(gen, model, state, pt_mw) ? 1 : 0;
        return failures;
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t failures = 0;
    std::uint64_t next = 0;
    while (next < n_batches) {
        const std::uint64_t wave = std::min<std::uint64_t>(hw, n_batches - next);
        std::vector<std::future<std::uint64_t>> futures;
        futures.reserve(wave);
        for (std::uint64_t w = 0; w < wave; ++w)
            futures.push_back(std::async(std::launch::async, run_batch, next + w));
        for (auto& f : futures) failures += f.get();
        next += wave;
    }

    McResult out;
    out.samples = samples;
    out.failures = failures;
    out.p_hat = static_cast<double>(failures) / static_cast<double>(samples);
    out.std_error = std::sqrt(out.p_hat * (1.0 - out.p_hat) / static_cast<double>(samples));
    const double z = 1.959964;
    out.ci95_lo = std::max(0.0, out.p_hat - z * out.std_error);
    out.ci95_hi = std::min(1.0, out.p_hat + z * out.std_error);
    return out;
}

enum class Flag { ok, flagged, insufficient };

inline std::string flag_name(Flag f) {
    switch (f) {
        case Flag::ok: return "ok";
        case Flag::flagged: return "flagged";
        default: return "insufficient";
    }
}

/// Agreement rule between an analytic value and its estimate. The sample size
/// must resolve the rarer side of the event (expected count >= 10) before the
/// comparison means anything; past that, a 4-sigma normal test under the
/// analytic null, with exact-zero/one outcomes treated as failures whenever
/// the analytic value makes them astronomically unlikely.
inline Flag compare_one(double analytic, const McResult& mc) {
    const double n = static_cast<double>(mc.samples);
    const double rare = std::min(analytic, 1.0 - analytic);
    if (rare * n < 10.0) return Flag::insufficient;
    if (mc.failures == 0 || mc.failures == mc.samples) return Flag::flagged;
    const double se = std::sqrt(analytic * (1.0 - analytic) / n);
    return std::abs(mc.p_hat - analytic) > 4.0 * se ? Flag::flagged : Flag::ok;
}

inline std::vector<Flag> compare_rows(const std::vector<double>& analytic_values,
                                      const std::vector<McResult>& estimates) {
    if (analytic_values.size() != estimates.size())
        throw domain_error("compare_rows: size mismatch");
    std::vector<Flag> flags;
    flags.reserve(estimates.size());
    for (std::size_t i = 0; i < estimates.size(); ++i)
        flags.push_back(compare_one(analytic_values[i], estimates[i]));
    return flags;
}

} // namespace hyfso::mc
