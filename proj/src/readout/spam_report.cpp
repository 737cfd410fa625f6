#include "cavmeas/readout/spam_report.hpp"

#include <stdexcept>

#include "cavmeas/readout/classifier.hpp"

namespace cavmeas::readout {

using sim::TweezerState;

void ConfusionMatrix::add(const sim::TrajectoryOutcome& outcome, TweezerState measured) {
    const int row = sim::state_index(outcome.prepared);
    ++counts[row][sim::state_index(measured)];
    if (outcome.final == TweezerState::Lost) ++lost[row];
}

long ConfusionMatrix::row_sum(int prepared) const {
    long s = 0;
    for (long v : counts[prepared]) s += v;
    return s;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) counts[i][j] += other.counts[i][j];
        lost[i] += other.lost[i];
    }
    return *this;
}

ConfusionMatrix tally(const std::vector<sim::TrajectoryOutcome>& outcomes, int threshold, sim::Method method) {
    ConfusionMatrix m;
    for (const auto& o : outcomes) m.add(o, classify_two_interval(o.counts1, o.counts2, threshold, method));
    return m;
}

SpamReport make_spam_report(const ConfusionMatrix& matrix, int threshold, double tau, sim::Method method) {
    SpamReport r;
    r.matrix = matrix;
    r.threshold = threshold;
    r.tau = tau;
    r.method = method;
    for (int i = 0; i < 3; ++i) {
        const long n = matrix.row_sum(i);
        if (n == 0) {
            throw std::invalid_argument("no trials for prepared state " + sim::to_string(sim::kPreparedStates[i]));
        }
        r.infidelity[i] = wilson_interval(n - matrix.counts[i][i], n);
        r.loss[i] = wilson_interval(matrix.lost[i], n);
    }
    return r;
}

SpamReport build_spam_report(const std::vector<sim::TrajectoryOutcome>& outcomes, const sim::MethodConfig& config) {
    if (outcomes.empty()) throw std::invalid_argument("empty batch");
    return make_spam_report(tally(outcomes, config.threshold, config.method), config.threshold, config.tau,
                            config.method);
}

}  // namespace cavmeas::readout
