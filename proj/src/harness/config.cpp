#include "cavmeas/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "cavmeas/cqed/units.hpp"
#include "cavmeas/errors.hpp"

namespace cavmeas::harness {

using namespace units;
using sim::Method;

namespace {

json method_json(const MethodSettings& s) {
    const auto& c = s.config;
    const auto& m = s.model;
    return {
        {"tau_us", to_us(c.tau)},
        {"tau_rp_us", to_us(c.tau_rp)},
        {"threshold", c.threshold},
        {"r_bright_per_us", to_per_us(m.r_bright)},
        {"r_dark_per_us", to_per_us(m.r_dark)},
        {"gamma_depump_per_us", to_per_us(m.gamma_depump)},
        {"p_repump", m.p_repump},
        {"p_loss_per_detected_photon", m.p_loss_per_detected_photon},
        {"loss_heating", m.loss_heating},
        {"eps_prep_f1", m.eps_prep_f1},
        {"eps_prep_f2", m.eps_prep_f2},
        {"eps_prep_empty", m.eps_prep_empty},
        {"rate_jitter", m.rate_jitter},
    };
}

json optional_number(const std::optional<double>& v, double (*convert)(double)) {
    return v ? json(convert(*v)) : json(nullptr);
}

std::string optional_method_name(const std::optional<Method>& m) { return m ? sim::to_string(*m) : "none"; }

std::string shape_name(cqed::SpreadShape s) { return s == cqed::SpreadShape::Gaussian ? "gaussian" : "uniform"; }

// Typed access by dotted key with errors that name the key.
class Reader {
public:
    explicit Reader(const json& root) : root_(root) {}

    const json& at(const std::string& key) const {
        const json* node = &root_;
        std::size_t start = 0;
        while (true) {
            const std::size_t dot = key.find('.', start);
            const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
            if (!node->is_object() || !node->contains(part)) throw ConfigError(key, "missing");
            node = &(*node)[part];
            if (dot == std::string::npos) return *node;
            start = dot + 1;
        }
    }

    bool has(const std::string& key) const {
        try {
            at(key);
            return true;
        } catch (const ConfigError&) {
            return false;
        }
    }

    double num(const std::string& key) const {
        const json& v = at(key);
        if (!v.is_number()) throw ConfigError(key, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(key, "must be finite");
        return d;
    }

    std::optional<double> opt_num(const std::string& key) const {
        if (at(key).is_null()) return std::nullopt;
        return num(key);
    }

    long integer(const std::string& key) const {
        const json& v = at(key);
        if (v.is_number_integer()) return v.get<long>();
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<long>(d);
        }
        throw ConfigError(key, "expected an integer");
    }

    std::uint64_t u64(const std::string& key) const {
        const json& v = at(key);
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
        throw ConfigError(key, "expected a non-negative 64-bit integer");
    }

    bool boolean(const std::string& key) const {
        const json& v = at(key);
        if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
        return v.get<bool>();
    }

    std::string str(const std::string& key) const {
        const json& v = at(key);
        if (!v.is_string()) throw ConfigError(key, "expected a string");
        return v.get<std::string>();
    }

    template <class F>
    auto parsed(const std::string& key, F parse) const {
        try {
            return parse(str(key));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(key, e.what());
        }
    }

private:
    const json& root_;
};

MethodSettings read_method(const Reader& r, const std::string& p, Method method) {
    MethodSettings s;
    s.config.method = method;
    s.config.tau = us(r.num(p + ".tau_us"));
    s.config.tau_rp = us(r.num(p + ".tau_rp_us"));
    const long th = r.integer(p + ".threshold");
    if (th < 0 || th > std::numeric_limits<int>::max()) throw ConfigError(p + ".threshold", "out of range");
    s.config.threshold = static_cast<int>(th);
    s.model.r_bright = per_us(r.num(p + ".r_bright_per_us"));
    s.model.r_dark = per_us(r.num(p + ".r_dark_per_us"));
    s.model.gamma_depump = per_us(r.num(p + ".gamma_depump_per_us"));
    s.model.p_repump = r.num(p + ".p_repump");
    s.model.p_loss_per_detected_photon = r.num(p + ".p_loss_per_detected_photon");
    s.model.loss_heating = r.num(p + ".loss_heating");
    s.model.eps_prep_f1 = r.num(p + ".eps_prep_f1");
    s.model.eps_prep_f2 = r.num(p + ".eps_prep_f2");
    s.model.eps_prep_empty = r.num(p + ".eps_prep_empty");
    s.model.rate_jitter = r.num(p + ".rate_jitter");
    return s;
}

// Maps the field names used by the library validators to config keys.
std::string method_key(const std::string& section, const std::string& field) {
    static const std::pair<const char*, const char*> names[] = {
        {"tau", "tau_us"},
        {"tau_rp", "tau_rp_us"},
        {"r_bright", "r_bright_per_us"},
        {"r_dark", "r_dark_per_us"},
        {"gamma_depump", "gamma_depump_per_us"},
    };
    for (const auto& [from, to] : names) {
        if (field == from) return section + "." + to;
    }
    return section + "." + field;
}

std::string system_key(const std::string& field) {
    static const std::pair<const char*, const char*> names[] = {
        {"g0", "g0_mhz"},           {"kappa", "kappa_mhz"},         {"gamma", "gamma_mhz"},
        {"lambda", "wavelength_nm"}, {"w0_cavity", "w0_cavity_um"}, {"w_probe", "w_probe_um"},
        {"delta_ca", "delta_ca_mhz"}, {"delta_pc", "delta_pc_mhz"}, {"axial_sigma", "axial_sigma_nm"},
    };
    for (const auto& [from, to] : names) {
        if (field == from) return std::string("system.") + to;
    }
    return "system." + field;
}

}  // namespace

cqed::AxialDistribution RunConfig::axial() const {
    if (gaussian_axial) return cqed::GaussianAxial{system.axial_sigma};
    return cqed::UniformAxial{};
}

void RunConfig::validate() const {
    try {
        system.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(system_key(e.field()), e.what());
    }
    for (Method m : {Method::Fluorescence, Method::Transmission}) {
        const std::string section = sim::to_string(m);
        try {
            settings(m).config.validate();
            settings(m).model.validate(m);
        } catch (const ConfigError& e) {
            throw ConfigError(method_key(section, e.field()), e.what());
        }
    }
    if (!(probe.saturated_difference > 0.0)) {
        throw ConfigError("transmission_probe.saturated_difference_per_us", "must be positive");
    }
    if (!(probe.detuning_spread >= 0.0)) throw ConfigError("transmission_probe.detuning_spread_mhz", "must be >= 0");
    const auto& rs = ramsey;
    if (!(rs.distance >= 0.0)) throw ConfigError("ramsey.distance_um", "must be >= 0");
    if (rs.n_phases < 4) throw ConfigError("ramsey.n_phases", "must be >= 4");
    if (rs.n_shots < 1) throw ConfigError("ramsey.n_shots", "must be >= 1");
    if (!(rs.transport_time >= 0.0)) throw ConfigError("ramsey.transport_time_us", "must be >= 0");
    if (rs.t2_star && !(*rs.t2_star > 0.0)) throw ConfigError("ramsey.t2_star_us", "must be positive or null");
    if (!(rs.contrast_factor > 0.0 && rs.contrast_factor <= 1.0)) {
        throw ConfigError("ramsey.contrast_factor", "must lie in (0, 1]");
    }
    if (!(rs.n_scatter_fluorescence >= 0.0)) throw ConfigError("ramsey.n_scatter_fluorescence", "must be >= 0");
    if (!(rs.n_scatter_transmission >= 0.0)) throw ConfigError("ramsey.n_scatter_transmission", "must be >= 0");
    if (rs.waist_fluorescence && !(*rs.waist_fluorescence > 0.0)) {
        throw ConfigError("ramsey.backaction_waist_fluorescence_um", "must be positive or null");
    }
    if (rs.waist_transmission && !(*rs.waist_transmission > 0.0)) {
        throw ConfigError("ramsey.backaction_waist_transmission_um", "must be positive or null");
    }
    if (sweep) {
        if (std::find(kSweepParameters.begin(), kSweepParameters.end(), sweep->parameter) == kSweepParameters.end()) {
            throw ConfigError("sweep.parameter", "unknown sweep parameter '" + sweep->parameter + "'");
        }
        if (sweep->values.empty()) throw ConfigError("sweep.values", "must not be empty");
    }
    if (trials < 0) throw ConfigError("run.trials", "must be >= 0");
    if (out.empty()) throw ConfigError("run.out", "must not be empty");
}

json default_config_json() {
    RunConfig c;
    c.system = cqed::SystemParams::defaults();
    c.probe.detuning_spread = mhz(4.5);
    c.fluorescence = {sim::MethodConfig::defaults(Method::Fluorescence), sim::RateModel::fluorescence_defaults()};
    c.transmission = {sim::MethodConfig::defaults(Method::Transmission), sim::RateModel::transmission_defaults()};
    return to_json(c);
}

json to_json(const RunConfig& c) {
    const auto& s = c.system;
    const auto& rs = c.ramsey;
    json j;
    j["system"] = {
        {"g0_mhz", to_mhz(s.g0)},
        {"kappa_mhz", to_mhz(s.kappa)},
        {"gamma_mhz", to_mhz(s.gamma)},
        {"eta", s.eta},
        {"wavelength_nm", to_nm(s.wavelength)},
        {"w0_cavity_um", to_um(s.w0_cavity)},
        {"w_probe_um", to_um(s.w_probe)},
        {"delta_ca_mhz", to_mhz(s.delta_ca)},
        {"delta_pc_mhz", to_mhz(s.delta_pc)},
        {"axial_sigma_nm", to_nm(s.axial_sigma)},
        {"internal_factor", s.internal_factor},
        {"axial_distribution", c.gaussian_axial ? "gaussian" : "uniform"},
    };
    j["transmission_probe"] = {
        {"saturated_difference_per_us", to_per_us(c.probe.saturated_difference)},
        {"detuning_spread_mhz", to_mhz(c.probe.detuning_spread)},
        {"spread_shape", shape_name(c.probe.spread_shape)},
    };
    j["fluorescence"] = method_json(c.fluorescence);
    j["transmission"] = method_json(c.transmission);
    j["ramsey"] = {
        {"method", optional_method_name(rs.method)},
        {"readout_method", sim::to_string(rs.readout_method)},
        {"ideal_readout", rs.ideal_readout},
        {"distance_um", to_um(rs.distance)},
        {"n_phases", rs.n_phases},
        {"n_shots", rs.n_shots},
        {"transport_time_us", to_us(rs.transport_time)},
        {"t2_star_us", optional_number(rs.t2_star, to_us)},
        {"phase_kick_rad", rs.phase_kick},
        {"contrast_factor", rs.contrast_factor},
        {"n_scatter_fluorescence", rs.n_scatter_fluorescence},
        {"n_scatter_transmission", rs.n_scatter_transmission},
        {"backaction_waist_fluorescence_um", optional_number(rs.waist_fluorescence, to_um)},
        {"backaction_waist_transmission_um", optional_number(rs.waist_transmission, to_um)},
    };
    if (c.sweep) {
        j["sweep"] = {{"parameter", c.sweep->parameter}, {"values", c.sweep->values}};
    } else {
        j["sweep"] = {{"parameter", nullptr}, {"values", json::array()}};
    }
    j["run"] = {
        {"method", sim::to_string(c.method)},
        {"objective", readout::to_string(c.objective)},
        {"seed", c.seed},
        {"trials", c.trials},
        {"out", c.out},
    };
    return j;
}

RunConfig from_json(const json& j) {
    const Reader r(j);
    RunConfig c;
    auto& s = c.system;
    s.g0 = mhz(r.num("system.g0_mhz"));
    s.kappa = mhz(r.num("system.kappa_mhz"));
    s.gamma = mhz(r.num("system.gamma_mhz"));
    s.eta = r.num("system.eta");
    s.wavelength = nm(r.num("system.wavelength_nm"));
    s.w0_cavity = um(r.num("system.w0_cavity_um"));
    s.w_probe = um(r.num("system.w_probe_um"));
    s.delta_ca = mhz(r.num("system.delta_ca_mhz"));
    s.delta_pc = mhz(r.num("system.delta_pc_mhz"));
    s.axial_sigma = nm(r.num("system.axial_sigma_nm"));
    s.internal_factor = r.num("system.internal_factor");
    const std::string axial = r.str("system.axial_distribution");
    if (axial != "uniform" && axial != "gaussian") {
        throw ConfigError("system.axial_distribution", "expected 'uniform' or 'gaussian'");
    }
    c.gaussian_axial = axial == "gaussian";

    c.probe.saturated_difference = per_us(r.num("transmission_probe.saturated_difference_per_us"));
    c.probe.detuning_spread = mhz(r.num("transmission_probe.detuning_spread_mhz"));
    const std::string shape = r.str("transmission_probe.spread_shape");
    if (shape != "gaussian" && shape != "uniform") {
        throw ConfigError("transmission_probe.spread_shape", "expected 'gaussian' or 'uniform'");
    }
    c.probe.spread_shape = shape == "gaussian" ? cqed::SpreadShape::Gaussian : cqed::SpreadShape::Uniform;

    c.fluorescence = read_method(r, "fluorescence", Method::Fluorescence);
    c.transmission = read_method(r, "transmission", Method::Transmission);

    auto& rs = c.ramsey;
    const std::string mid = r.str("ramsey.method");
    if (mid != "none") rs.method = r.parsed("ramsey.method", sim::parse_method);
    rs.readout_method = r.parsed("ramsey.readout_method", sim::parse_method);
    rs.ideal_readout = r.boolean("ramsey.ideal_readout");
    rs.distance = um(r.num("ramsey.distance_um"));
    rs.n_phases = static_cast<int>(std::clamp<long>(r.integer("ramsey.n_phases"), -1, 1 << 20));
    rs.n_shots = static_cast<int>(std::clamp<long>(r.integer("ramsey.n_shots"), -1, 1 << 30));
    rs.transport_time = us(r.num("ramsey.transport_time_us"));
    if (auto t = r.opt_num("ramsey.t2_star_us")) rs.t2_star = us(*t);
    rs.phase_kick = r.num("ramsey.phase_kick_rad");
    rs.contrast_factor = r.num("ramsey.contrast_factor");
    rs.n_scatter_fluorescence = r.num("ramsey.n_scatter_fluorescence");
    rs.n_scatter_transmission = r.num("ramsey.n_scatter_transmission");
    if (auto w = r.opt_num("ramsey.backaction_waist_fluorescence_um")) rs.waist_fluorescence = um(*w);
    if (auto w = r.opt_num("ramsey.backaction_waist_transmission_um")) rs.waist_transmission = um(*w);

    if (r.has("sweep.parameter") && !r.at("sweep.parameter").is_null()) {
        SweepSpec sw;
        sw.parameter = r.str("sweep.parameter");
        const json& values = r.at("sweep.values");
        if (!values.is_array()) throw ConfigError("sweep.values", "expected an array of numbers");
        for (const auto& v : values) {
            if (!v.is_number()) throw ConfigError("sweep.values", "expected an array of numbers");
            sw.values.push_back(v.get<double>());
        }
        c.sweep = std::move(sw);
    }

    c.method = r.parsed("run.method", sim::parse_method);
    c.objective = r.parsed("run.objective", readout::parse_objective);
    c.seed = r.u64("run.seed");
    c.trials = r.integer("run.trials");
    c.out = r.str("run.out");
    c.validate();
    return c;
}

void merge_config(json& base, const json& patch, const std::string& path) {
    if (!patch.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
    for (auto it = patch.begin(); it != patch.end(); ++it) {
        const std::string key = path.empty() ? it.key() : path + "." + it.key();
        if (!base.contains(it.key())) throw ConfigError(key, "unknown key");
        json& target = base[it.key()];
        if (target.is_object() && it.value().is_object()) {
            merge_config(target, it.value(), key);
        } else if (target.is_object()) {
            throw ConfigError(key, "expected an object");
        } else {
            target = it.value();
        }
    }
}

void apply_override(json& tree, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError(std::string(assignment), "override must look like key=value");
    }
    const std::string key(assignment.substr(0, eq));
    const std::string text(assignment.substr(eq + 1));
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    // Build the nested patch {a: {b: value}} and merge it.
    json patch = value;
    std::size_t end = key.size();
    while (true) {
        const std::size_t dot = key.rfind('.', end - 1);
        const std::size_t start = dot == std::string::npos ? 0 : dot + 1;
        const std::string part = key.substr(start, end - start);
        if (part.empty()) throw ConfigError(key, "malformed key");
        patch = json{{part, patch}};
        if (dot == std::string::npos) break;
        end = dot;
    }
    merge_config(tree, patch);
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError(path, "not valid JSON");
    return j;
}

RunConfig resolve_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides) {
    json tree = default_config_json();
    if (path) merge_config(tree, load_json_file(*path));
    for (const auto& o : overrides) apply_override(tree, o);
    return from_json(tree);
}

}  // namespace cavmeas::harness
