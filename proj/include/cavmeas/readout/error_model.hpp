#pragma once

#include <array>
#include <map>
#include <vector>

#include "cavmeas/readout/count_lattice.hpp"
#include "cavmeas/sim/rate_model.hpp"

namespace cavmeas::readout {

// A value per prepared tweezer state, indexed Empty, F1, F2.
struct StateTriple {
    double empty = 0.0;
    double f1 = 0.0;
    double f2 = 0.0;

    double operator[](sim::TweezerState s) const;
    double max() const;
    double mean() const;
};

// P(counts <= threshold) for an emitter at r_signal that switches to
// r_other at an exponential(gamma_depump) time:
//   e^{-G tau} F(th; r_s tau) + int_0^tau G e^{-G t} F(th; r_s t + r_o (tau - t)) dt
// with F the Poisson CDF, integrated adaptively to 1e-10 absolute.
// Throws ConvergenceError if the quadrature misses that tolerance.
double miss_probability(double r_signal, double r_other, double gamma_depump, double tau, int threshold);

// Exact outcome probabilities of the two-interval protocol for one
// (tau, model, method). Tables are built once for every threshold up to
// max_threshold, so a threshold scan costs one construction.
//
// The protocol is composed from the prep error, a first interval, the
// repump and a second interval. Intervals started in F2 are solved on the
// count lattice (depumping, photon-triggered loss with heating), intervals
// started dark are Poisson. Probe-power jitter is integrated over its
// Gamma distribution with Gauss-Legendre nodes.
//
// Approximations, both only relevant when loss_heating > 0: an atom
// repumped after depumping restarts its attributable-photon count at zero,
// and a first-interval count in the lumped tail row is taken as exactly
// max_threshold + 1.
class ReadoutErrorModel {
public:
    ReadoutErrorModel(double tau, const sim::RateModel& model, sim::Method method, int max_threshold);

    int max_threshold() const { return max_threshold_; }

    // P(measured = column | prepared = row), rows/columns Empty, F1, F2.
    std::array<std::array<double, 3>, 3> outcome_matrix(int threshold) const;

    StateTriple infidelity(int threshold) const;

private:
    struct Node {
        double weight = 1.0;
        std::vector<double> other;                    // Poisson table, dark states
        std::map<long, IntervalCountTable> f2_tables; // keyed by prior attributable count
    };

    const IntervalCountTable& f2_table(const Node& node, long prior) const;
    std::array<std::array<double, 3>, 3> node_matrix(const Node& node, int threshold) const;

    double tau_;
    sim::RateModel model_;
    sim::Method method_;
    int max_threshold_;
    std::vector<Node> nodes_;
};

StateTriple infidelity_model(double tau, int threshold, const sim::RateModel& model, sim::Method method);

// Scan limit used by the threshold optimiser: ceil(mu + 10 sqrt(mu)) for
// the larger of the two interval means.
int threshold_search_limit(double tau, const sim::RateModel& model);

}  // namespace cavmeas::readout
