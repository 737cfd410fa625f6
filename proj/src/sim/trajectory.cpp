#include "cavmeas/sim/trajectory.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace cavmeas::sim {

TweezerState apply_prep_error(TweezerState intended, const RateModel& model, Rng& rng) {
    switch (intended) {
        case TweezerState::Empty:
            return rng.bernoulli(model.eps_prep_empty) ? TweezerState::F2 : TweezerState::Empty;
        case TweezerState::F1:
            return rng.bernoulli(model.eps_prep_f1) ? TweezerState::F2 : TweezerState::F1;
        case TweezerState::F2:
            return rng.bernoulli(model.eps_prep_f2) ? TweezerState::F1 : TweezerState::F2;
        case TweezerState::Lost: break;
    }
    throw std::invalid_argument("cannot prepare a Lost tweezer");
}

TweezerState apply_repump(TweezerState state, const RateModel& model, Rng& rng) {
    if (state == TweezerState::F1 && rng.bernoulli(model.p_repump)) return TweezerState::F2;
    return state;
}

double draw_rate_scale(const RateModel& model, Rng& rng) {
    if (model.rate_jitter <= 0.0) return 1.0;
    const double shape = 1.0 / (model.rate_jitter * model.rate_jitter);
    std::gamma_distribution<double> gamma(shape, 1.0 / shape);
    return gamma(rng);
}

IntervalResult simulate_interval(TweezerState state, const RateModel& model, Method method,
                                 double duration, Rng& rng, AttemptState& attempt) {
    if (duration < 0.0) throw std::invalid_argument("interval duration must be >= 0");
    IntervalResult out{0, state};
    double t = 0.0;

    const double bright = attempt.rate_scale * model.f2_rate(method);
    const double hazard = bright + model.gamma_depump;
    while (out.end_state == TweezerState::F2 && hazard > 0.0) {
        t += -std::log1p(-rng.uniform()) / hazard;
        if (t >= duration) {
            t = duration;
            break;
        }
        if (rng.uniform() * hazard < model.gamma_depump) {
            out.end_state = TweezerState::F1;
            break;
        }
        ++out.counts;
        const double p_loss = model.loss_probability(attempt.attributable);
        ++attempt.attributable;
        if (p_loss > 0.0 && rng.bernoulli(p_loss)) out.end_state = TweezerState::Lost;
    }
    if (out.end_state == TweezerState::F2) return out;

    // Every non-F2 state counts at the same constant rate until the end.
    const double mean = attempt.rate_scale * model.other_rate(method) * (duration - t);
    if (mean > 0.0) {
        std::poisson_distribution<int> poisson(mean);
        out.counts += poisson(rng);
    }
    return out;
}

IntervalResult simulate_interval(TweezerState state, const RateModel& model, Method method,
                                 double duration, Rng& rng) {
    AttemptState attempt;
    return simulate_interval(state, model, method, duration, rng, attempt);
}

TrajectoryOutcome simulate_measurement(TweezerState prepared, const MethodConfig& config,
                                       const RateModel& model, Rng& rng) {
    TrajectoryOutcome out;
    out.prepared = prepared;
    out.actual_initial = apply_prep_error(prepared, model, rng);

    AttemptState attempt;
    attempt.rate_scale = draw_rate_scale(model, rng);

    const auto first = simulate_interval(out.actual_initial, model, config.method, config.tau, rng, attempt);
    out.counts1 = first.counts;

    // Fluorescence: the repump opens interval 2 and the atom is treated as
    // repumped for the whole window, so interval 2 is a single counted
    // stretch of length tau. Transmission: an uncounted pulse sits between
    // the intervals. Both reduce to repump followed by a tau interval.
    const TweezerState repumped = apply_repump(first.end_state, model, rng);
    const auto second = simulate_interval(repumped, model, config.method, config.tau, rng, attempt);
    out.counts2 = second.counts;
    out.final = second.end_state;
    return out;
}

}  // namespace cavmeas::sim
