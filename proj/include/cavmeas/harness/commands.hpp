#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cavmeas/harness/config.hpp"
#include "cavmeas/harness/manifest.hpp"
#include "cavmeas/ramsey/circuit.hpp"
#include "cavmeas/readout/spam_report.hpp"

namespace cavmeas::harness {

std::string tool_version();

struct CommandOptions {
    unsigned workers = 1;
    std::ostream* log = nullptr;       // human-readable summary, optional
    std::optional<std::string> input;  // spam: classify an external count CSV
};

struct RateEntry {
    std::string key;
    double value = 0.0;
    std::string unit;
};

struct RatesReport {
    std::vector<RateEntry> entries;
    double at(const std::string& key) const;
};

struct NumericTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::vector<double> column(const std::string& name) const;
};

struct HistogramSummary {
    // [prepared][interval] mean counts
    std::array<std::array<double, 2>, 3> mean{};
    std::array<std::array<int, 2>, 3> max{};
};

struct SpamResult {
    readout::SpamReport report;
    std::optional<readout::StateTriple> model;  // analytic prediction, simulated runs only
};

// The report is computed without touching the file system; cmd_* also
// write their CSV files and a manifest into config.out.
RatesReport compute_rates(const RunConfig& config);

RatesReport cmd_rates(const RunConfig& config, const CommandOptions& options = {});
HistogramSummary cmd_histogram(const RunConfig& config, const CommandOptions& options = {});
SpamResult cmd_spam(const RunConfig& config, const CommandOptions& options = {});
NumericTable cmd_sweep(const RunConfig& config, const CommandOptions& options = {});
ramsey::RamseyResult cmd_ramsey(const RunConfig& config, const CommandOptions& options = {});

// Ramsey circuit for the given mid-circuit method from the config.
ramsey::RamseyConfig ramsey_config(const RunConfig& config, std::optional<sim::Method> method);

// Outcome label of each prepared state, e.g. "low-high".
std::array<std::string, 3> outcome_labels(sim::Method m);

// Reads prepared,counts1,counts2[,final] rows (the histogram trial format).
std::vector<sim::TrajectoryOutcome> read_count_csv(const std::string& path);

}  // namespace cavmeas::harness
