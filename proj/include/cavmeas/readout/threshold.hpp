#pragma once

#include <string>
#include <string_view>

#include "cavmeas/readout/error_model.hpp"

namespace cavmeas::readout {

enum class Objective { MaxState, Mean };

std::string to_string(Objective o);
Objective parse_objective(std::string_view name);

struct ThresholdChoice {
    int threshold = 0;
    double objective = 0.0;
    StateTriple infidelity;
};

double objective_value(const StateTriple& infidelity, Objective objective);

// Exhaustive scan over [0, threshold_search_limit(tau, model)]; ties go to
// the smaller threshold.
ThresholdChoice optimize_threshold(double tau, const sim::RateModel& model, sim::Method method,
                                   Objective objective = Objective::MaxState);

}  // namespace cavmeas::readout
