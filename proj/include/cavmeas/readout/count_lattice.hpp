#pragma once

#include <array>
#include <vector>

namespace cavmeas::readout {

// Internal condition of an atom that started an interval in F2.
enum class EndState { F2 = 0, F1 = 1, Gone = 2 };

// Exact joint distribution of (photon count, end state) for one interval
// started in F2. Rows 0..cap-1 are exact counts, row `cap` collects
// every count >= cap.
struct IntervalCountTable {
    int cap = 0;
    std::array<std::vector<double>, 3> by_end;

    double at(EndState e, int n) const { return by_end[static_cast<int>(e)][n]; }

    // P(count <= threshold, end = e); threshold must be < cap.
    double low(EndState e, int threshold) const;
    double low(int threshold) const;
    double total(EndState e) const;
};

struct F2IntervalRates {
    double f2_rate = 0.0;      // photons/s while in F2
    double other_rate = 0.0;   // photons/s after depump or loss
    double gamma_depump = 0.0; // 1/s
    double p_loss = 0.0;       // loss probability of the first attributable photon
    double loss_heating = 0.0; // increment per prior attributable photon
    long prior_attributable = 0;
};

// Solves the counting master equation on the (count, state) lattice by
// uniformisation. Photons are counted up to `cap`; a photon that triggers
// loss is itself counted.
IntervalCountTable f2_interval_table(const F2IntervalRates& rates, double duration, int cap);

// Poisson(mean) probabilities for n = 0..cap-1, with the tail >= cap in
// the last slot.
std::vector<double> poisson_table(double mean, int cap);

}  // namespace cavmeas::readout
