#pragma once

#include <cstdint>

#include "cavmeas/sim/rate_model.hpp"
#include "cavmeas/sim/rng.hpp"
#include "cavmeas/sim/tweezer_state.hpp"

namespace cavmeas::sim {

struct TrajectoryOutcome {
    int counts1 = 0;
    int counts2 = 0;
    TweezerState prepared = TweezerState::Empty;        // intended
    TweezerState actual_initial = TweezerState::Empty;  // after preparation error
    TweezerState final = TweezerState::Empty;
    std::uint64_t seed_index = 0;
};

// Per-attempt bookkeeping carried from one interval into the next.
struct AttemptState {
    double rate_scale = 1.0;  // probe-power factor applied to photon rates
    long attributable = 0;    // photons detected so far while the atom was in F2
};

struct IntervalResult {
    int counts = 0;
    TweezerState end_state = TweezerState::Empty;
};

TweezerState apply_prep_error(TweezerState intended, const RateModel& model, Rng& rng);

TweezerState apply_repump(TweezerState state, const RateModel& model, Rng& rng);

// Event-driven simulation of one probe interval with competing
// exponential clocks for photon detection and depumping. Every photon
// detected in F2 is subject to a loss trial; a lost atom keeps counting
// at the empty-tweezer rate.
IntervalResult simulate_interval(TweezerState state, const RateModel& model, Method method,
                                 double duration, Rng& rng, AttemptState& attempt);

IntervalResult simulate_interval(TweezerState state, const RateModel& model, Method method,
                                 double duration, Rng& rng);

// Draws the per-attempt probe-power factor (1 when rate_jitter == 0).
double draw_rate_scale(const RateModel& model, Rng& rng);

TrajectoryOutcome simulate_measurement(TweezerState prepared, const MethodConfig& config,
                                       const RateModel& model, Rng& rng);

}  // namespace cavmeas::sim
