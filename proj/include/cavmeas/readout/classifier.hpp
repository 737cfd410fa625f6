#pragma once

#include "cavmeas/sim/tweezer_state.hpp"

namespace cavmeas::readout {

enum class Level { Low, High };

// High iff counts > threshold.
Level classify_interval(int counts, int threshold);

// Two-interval decision. Fluorescence: High first -> F2, Low then High ->
// F1, Low-Low -> Empty. Transmission: Low first -> F2, High then Low ->
// F1, High-High -> Empty. Never returns Lost.
sim::TweezerState classify_two_interval(int counts1, int counts2, int threshold, sim::Method method);

}  // namespace cavmeas::readout
