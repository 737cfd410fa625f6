#pragma once

#include <array>
#include <vector>

#include "cavmeas/readout/statistics.hpp"
#include "cavmeas/sim/trajectory.hpp"

namespace cavmeas::readout {

// Rows prepared, columns measured, both indexed Empty, F1, F2.
struct ConfusionMatrix {
    std::array<std::array<long, 3>, 3> counts{};
    std::array<long, 3> lost{};

    void add(const sim::TrajectoryOutcome& outcome, sim::TweezerState measured);
    long row_sum(int prepared) const;
    ConfusionMatrix& operator+=(const ConfusionMatrix& other);
};

struct SpamReport {
    ConfusionMatrix matrix;
    std::array<Estimate, 3> infidelity;
    std::array<Estimate, 3> loss;  // the Empty entry is reported but meaningless
    int threshold = 0;
    double tau = 0.0;
    sim::Method method = sim::Method::Fluorescence;
};

ConfusionMatrix tally(const std::vector<sim::TrajectoryOutcome>& outcomes, int threshold, sim::Method method);

// Throws std::invalid_argument if any prepared state has no trials.
SpamReport make_spam_report(const ConfusionMatrix& matrix, int threshold, double tau, sim::Method method);

SpamReport build_spam_report(const std::vector<sim::TrajectoryOutcome>& outcomes, const sim::MethodConfig& config);

}  // namespace cavmeas::readout
