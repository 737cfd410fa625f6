#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "cavmeas/cqed/system_params.hpp"
#include "cavmeas/ramsey/fringe_fit.hpp"
#include "cavmeas/ramsey/qubit.hpp"
#include "cavmeas/readout/statistics.hpp"
#include "cavmeas/sim/rate_model.hpp"

namespace cavmeas::ramsey {

struct RamseyConfig {
    std::vector<double> phases;
    double distance = 0.0;            // initial distance of B from the cavity centre (m)
    std::optional<sim::Method> method;  // mid-circuit measurement of A; none = reference

    // Readout of B at the end of the circuit. Preparation errors of the
    // model are ignored, B's state comes from the circuit.
    bool ideal_readout = false;
    sim::MethodConfig readout_config = sim::MethodConfig::defaults(sim::Method::Fluorescence);
    sim::RateModel readout_model = sim::RateModel::fluorescence_defaults();

    double transport_time = 200e-6;
    double t2_star = std::numeric_limits<double>::infinity();
    int n_shots = 2000;
    double phase_kick = 0.0;
    double n_scatter_at_center = 100.0;
    std::optional<double> backaction_waist;  // unset: probe waist or cavity waist by method
    double contrast_factor = 1.0;            // lumped reference imperfections

    void validate() const;
};

double default_scatter_number(sim::Method m);
double default_backaction_waist(sim::Method m, const cqed::SystemParams& system);

// Config with N0 for `method` and twelve uniformly spaced phases.
RamseyConfig ramsey_defaults(std::optional<sim::Method> method);

std::vector<double> uniform_phases(int n);

// Coherence factor and phase kick from the mid-circuit measurement of A.
// Identity when config.method is unset.
QubitState backaction(const QubitState& b, const RamseyConfig& config, const cqed::SystemParams& system);

// Ideal F1 probability after the full circuit (before B's readout).
double ideal_p_f1(double phase, const RamseyConfig& config, const cqed::SystemParams& system);

struct RamseyRun {
    std::vector<long> f1_counts;
    std::vector<readout::Estimate> p_f1;
    FringeFit fit;
};

struct RamseyResult {
    std::vector<double> phases;
    int n_shots = 0;
    RamseyRun measured;
    RamseyRun reference;  // same circuit without the mid-circuit measurement
    double normalized_contrast = 0.0;
};

struct RamseyOptions {
    std::uint64_t stream = 0;
    unsigned workers = 1;
};

// Shot (phase i, shot j) draws from its own counter-based stream; the
// reference run uses a disjoint stream id.
RamseyResult run_ramsey(const RamseyConfig& config, const cqed::SystemParams& system, std::uint64_t seed,
                        const RamseyOptions& options = {});

struct DistancePoint {
    double distance = 0.0;
    double contrast = 0.0;
    double reference_contrast = 0.0;
    double normalized_contrast = 0.0;
};

std::vector<DistancePoint> contrast_vs_distance(const std::vector<double>& distances, const RamseyConfig& config,
                                                const cqed::SystemParams& system, std::uint64_t seed,
                                                const RamseyOptions& options = {});

}  // namespace cavmeas::ramsey
