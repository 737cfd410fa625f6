#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cavmeas/cqed/rates.hpp"
#include "cavmeas/cqed/system_params.hpp"
#include "cavmeas/cqed/transmission.hpp"
#include "cavmeas/readout/threshold.hpp"
#include "cavmeas/sim/rate_model.hpp"

namespace cavmeas::harness {

using json = nlohmann::ordered_json;

struct MethodSettings {
    sim::MethodConfig config;
    sim::RateModel model;
};

// Saturation and broadening inputs of the transmission probe.
struct TransmissionProbe {
    double saturated_difference = 2.4e6;  // R_high - R_low at high drive (1/s)
    double detuning_spread = 0.0;         // rms atomic detuning spread (rad/s)
    cqed::SpreadShape spread_shape = cqed::SpreadShape::Gaussian;
};

struct RamseySettings {
    std::optional<sim::Method> method;  // mid-circuit measurement of A
    sim::Method readout_method = sim::Method::Fluorescence;
    bool ideal_readout = false;
    double distance = 0.0;
    int n_phases = 12;
    int n_shots = 2000;
    double transport_time = 200e-6;
    std::optional<double> t2_star;  // unset: no transport dephasing
    double phase_kick = 0.0;
    double contrast_factor = 1.0;
    double n_scatter_fluorescence = 100.0;
    double n_scatter_transmission = 14.0;
    std::optional<double> waist_fluorescence;  // unset: system w_probe
    std::optional<double> waist_transmission;  // unset: system w0_cavity
};

struct SweepSpec {
    std::string parameter;  // tau, intensity, threshold or distance
    std::vector<double> values;
};

struct RunConfig {
    cqed::SystemParams system;
    bool gaussian_axial = false;
    TransmissionProbe probe;
    MethodSettings fluorescence;
    MethodSettings transmission;
    RamseySettings ramsey;
    std::optional<SweepSpec> sweep;
    sim::Method method = sim::Method::Fluorescence;
    readout::Objective objective = readout::Objective::MaxState;
    std::uint64_t seed = 1;
    long trials = 100000;
    std::string out = "out";

    const MethodSettings& settings(sim::Method m) const {
        return m == sim::Method::Fluorescence ? fluorescence : transmission;
    }
    const MethodSettings& active() const { return settings(method); }
    cqed::AxialDistribution axial() const;

    // Throws ConfigError naming the offending key.
    void validate() const;
};

inline const std::vector<std::string> kSweepParameters = {"tau", "intensity", "threshold", "distance"};

// Built-in defaults; the shipped config/defaults.json is identical.
json default_config_json();

RunConfig from_json(const json& j);
json to_json(const RunConfig& c);

// Overlays `patch` onto `base`. Every key of `patch` must exist in `base`
// (ConfigError otherwise); objects merge recursively, other values replace.
void merge_config(json& base, const json& patch, const std::string& path = "");

// "a.b.c=value"; value is parsed as JSON, falling back to a string.
void apply_override(json& tree, std::string_view assignment);

json load_json_file(const std::string& path);

// defaults <- file <- overrides, then parsed and validated.
RunConfig resolve_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides);

}  // namespace cavmeas::harness
