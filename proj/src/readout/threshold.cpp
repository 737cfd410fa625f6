#include "cavmeas/readout/threshold.hpp"

#include <stdexcept>

namespace cavmeas::readout {

std::string to_string(Objective o) { return o == Objective::MaxState ? "max" : "mean"; }

Objective parse_objective(std::string_view name) {
    if (name == "max" || name == "max_state") return Objective::MaxState;
    if (name == "mean") return Objective::Mean;
    throw std::invalid_argument("unknown objective '" + std::string(name) + "'");
}

double objective_value(const StateTriple& infidelity, Objective objective) {
    return objective == Objective::MaxState ? infidelity.max() : infidelity.mean();
}

ThresholdChoice optimize_threshold(double tau, const sim::RateModel& model, sim::Method method,
                                   Objective objective) {
    const int limit = threshold_search_limit(tau, model);
    const ReadoutErrorModel em(tau, model, method, limit);
    ThresholdChoice best;
    for (int th = 0; th <= limit; ++th) {
        const StateTriple inf = em.infidelity(th);
        const double v = objective_value(inf, objective);
        if (th == 0 || v < best.objective) best = {th, v, inf};
    }
    return best;
}

}  // namespace cavmeas::readout
