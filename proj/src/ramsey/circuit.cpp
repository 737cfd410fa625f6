#include "cavmeas/ramsey/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cavmeas/errors.hpp"
#include "cavmeas/readout/classifier.hpp"
#include "cavmeas/sim/batch.hpp"
#include "cavmeas/sim/rng.hpp"
#include "cavmeas/sim/trajectory.hpp"

namespace cavmeas::ramsey {

using sim::Method;
using sim::TweezerState;

namespace {

// Keeps Ramsey streams apart from the readout batches.
constexpr std::uint64_t kRamseyStreamTag = 0x52414d5345590000ULL;

}  // namespace

void RamseyConfig::validate() const {
    if (phases.empty()) throw ConfigError("phases", "at least one phase is required");
    if (!(distance >= 0.0)) throw ConfigError("distance", "must be >= 0");
    if (n_shots < 1) throw ConfigError("n_shots", "must be >= 1");
    if (!(transport_time >= 0.0)) throw ConfigError("transport_time", "must be >= 0");
    if (!(t2_star > 0.0)) throw ConfigError("t2_star", "must be positive");
    if (!(n_scatter_at_center >= 0.0)) throw ConfigError("n_scatter_at_center", "must be >= 0");
    if (backaction_waist && !(*backaction_waist > 0.0)) throw ConfigError("backaction_waist", "must be positive");
    if (!(contrast_factor > 0.0 && contrast_factor <= 1.0)) throw ConfigError("contrast_factor", "must lie in (0, 1]");
    if (!std::isfinite(phase_kick)) throw ConfigError("phase_kick", "must be finite");
    if (!ideal_readout) {
        readout_config.validate();
        readout_model.validate(readout_config.method);
    }
}

double default_scatter_number(Method m) { return m == Method::Fluorescence ? 100.0 : 14.0; }

double default_backaction_waist(Method m, const cqed::SystemParams& system) {
    return m == Method::Fluorescence ? system.w_probe : system.w0_cavity;
}

RamseyConfig ramsey_defaults(std::optional<Method> method) {
    RamseyConfig c;
    c.phases = uniform_phases(12);
    c.method = method;
    c.n_scatter_at_center = default_scatter_number(method.value_or(Method::Fluorescence));
    return c;
}

std::vector<double> uniform_phases(int n) {
    if (n < 1) throw std::invalid_argument("phase count must be >= 1");
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) p[i] = 2.0 * std::numbers::pi * i / n;
    return p;
}

QubitState backaction(const QubitState& b, const RamseyConfig& config, const cqed::SystemParams& system) {
    if (!config.method) return b;
    const double waist = config.backaction_waist.value_or(default_backaction_waist(*config.method, system));
    return dephase(b, backaction_factor(config.n_scatter_at_center, config.distance, waist), config.phase_kick);
}

double ideal_p_f1(double phase, const RamseyConfig& config, const cqed::SystemParams& system) {
    QubitState s = rotate(QubitState::f2_pole(), 0.0, std::numbers::pi / 2);
    s = backaction(s, config, system);
    if (std::isfinite(config.t2_star)) s = dephase(s, std::exp(-config.transport_time / config.t2_star));
    s = dephase(s, config.contrast_factor);
    s = rotate(s, phase, std::numbers::pi / 2);
    return std::clamp(s.p_f1(), 0.0, 1.0);
}

namespace {

RamseyRun simulate(const RamseyConfig& config, const cqed::SystemParams& system, std::uint64_t seed,
                   std::uint64_t stream, unsigned workers) {
    const std::size_t n_phase = config.phases.size();
    const std::size_t shots = static_cast<std::size_t>(config.n_shots);
    std::vector<double> p(n_phase);
    for (std::size_t i = 0; i < n_phase; ++i) p[i] = ideal_p_f1(config.phases[i], config, system);

    sim::RateModel model = config.readout_model;
    model.eps_prep_empty = model.eps_prep_f1 = model.eps_prep_f2 = 0.0;

    std::vector<unsigned char> is_f1(n_phase * shots);
    sim::parallel_for(is_f1.size(), workers, [&](std::size_t k) {
        sim::Rng rng({seed, stream, k});
        const TweezerState truth = rng.bernoulli(p[k / shots]) ? TweezerState::F1 : TweezerState::F2;
        TweezerState measured = truth;
        if (!config.ideal_readout) {
            const auto o = sim::simulate_measurement(truth, config.readout_config, model, rng);
            measured = readout::classify_two_interval(o.counts1, o.counts2, config.readout_config.threshold,
                                                      config.readout_config.method);
        }
        is_f1[k] = measured == TweezerState::F1;
    });

    RamseyRun run;
    std::vector<double> values;
    for (std::size_t i = 0; i < n_phase; ++i) {
        long k = 0;
        for (std::size_t j = 0; j < shots; ++j) k += is_f1[i * shots + j];
        run.f1_counts.push_back(k);
        run.p_f1.push_back(readout::wilson_interval(k, config.n_shots));
        values.push_back(run.p_f1.back().value);
    }
    run.fit = fit_fringe(config.phases, values);
    return run;
}

}  // namespace

RamseyResult run_ramsey(const RamseyConfig& config, const cqed::SystemParams& system, std::uint64_t seed,
                        const RamseyOptions& options) {
    config.validate();
    RamseyConfig reference = config;
    reference.method.reset();

    RamseyResult r;
    r.phases = config.phases;
    r.n_shots = config.n_shots;
    r.measured = simulate(config, system, seed, kRamseyStreamTag ^ (2 * options.stream), options.workers);
    r.reference = simulate(reference, system, seed, kRamseyStreamTag ^ (2 * options.stream + 1), options.workers);
    if (!(r.reference.fit.contrast > 0.0)) throw ConvergenceError("reference fringe has zero contrast");
    r.normalized_contrast = r.measured.fit.contrast / r.reference.fit.contrast;
    return r;
}

std::vector<DistancePoint> contrast_vs_distance(const std::vector<double>& distances, const RamseyConfig& config,
                                                const cqed::SystemParams& system, std::uint64_t seed,
                                                const RamseyOptions& options) {
    if (distances.empty()) throw std::invalid_argument("distance list is empty");
    std::vector<DistancePoint> out;
    for (std::size_t i = 0; i < distances.size(); ++i) {
        RamseyConfig c = config;
        c.distance = distances[i];
        RamseyOptions o = options;
        o.stream = options.stream * 65536 + i;
        const RamseyResult r = run_ramsey(c, system, seed, o);
        out.push_back({distances[i], r.measured.fit.contrast, r.reference.fit.contrast, r.normalized_contrast});
    }
    return out;
}

}  // namespace cavmeas::ramsey
