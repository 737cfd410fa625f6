#include "cavmeas/harness/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "cavmeas/cqed/bloch.hpp"
#include "cavmeas/cqed/rates.hpp"
#include "cavmeas/cqed/transmission.hpp"
#include "cavmeas/cqed/units.hpp"
#include "cavmeas/errors.hpp"
#include "cavmeas/harness/csv.hpp"
#include "cavmeas/readout/classifier.hpp"
#include "cavmeas/readout/error_model.hpp"
#include "cavmeas/readout/statistics.hpp"
#include "cavmeas/readout/threshold.hpp"
#include "cavmeas/sim/batch.hpp"

#ifndef CAVMEAS_VERSION
#define CAVMEAS_VERSION "dev"
#endif

namespace cavmeas::harness {

using namespace units;
using sim::Method;
using sim::TweezerState;
using Clock = std::chrono::steady_clock;

std::string tool_version() { return CAVMEAS_VERSION; }

double RatesReport::at(const std::string& key) const {
    for (const auto& e : entries) {
        if (e.key == key) return e.value;
    }
    throw std::out_of_range("no rate entry '" + key + "'");
}

std::vector<double> NumericTable::column(const std::string& name) const {
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] != name) continue;
        std::vector<double> out;
        for (const auto& r : rows) out.push_back(r[c]);
        return out;
    }
    throw std::out_of_range("no column '" + name + "'");
}

std::array<std::string, 3> outcome_labels(Method m) {
    if (m == Method::Fluorescence) return {"low-low", "low-high", "high-X"};
    return {"high-high", "high-low", "low-X"};
}

namespace {

class Run {
public:
    Run(const RunConfig& config, const CommandOptions& options, std::string command)
        : config_(config), options_(options), command_(std::move(command)), start_(Clock::now()),
          dir_(config.out) {}

    OutputDir& dir() { return dir_; }
    std::ostream* log() const { return options_.log; }

    void finish() {
        RunManifest m;
        m.version = tool_version();
        m.command = command_;
        m.config = to_json(config_);
        m.seed = config_.seed;
        m.workers = options_.workers;
        m.duration_s = std::chrono::duration<double>(Clock::now() - start_).count();
        m.files = dir_.files();
        write_manifest(dir_.path(), m);
        validate_manifest(dir_.path());
    }

private:
    const RunConfig& config_;
    const CommandOptions& options_;
    std::string command_;
    Clock::time_point start_;
    OutputDir dir_;
};

std::vector<sim::TrajectoryOutcome> simulate_all(const MethodSettings& s, long trials, std::uint64_t seed,
                                                 std::uint64_t stream, unsigned workers) {
    if (trials < 1) throw ConfigError("run.trials", "must be >= 1 for simulated runs");
    std::vector<sim::TrajectoryOutcome> all;
    for (TweezerState p : sim::kPreparedStates) {
        auto b = sim::run_batch(static_cast<std::size_t>(trials), p, s.config, s.model, seed, {stream, workers});
        all.insert(all.end(), b.begin(), b.end());
    }
    return all;
}

std::string pct(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << 100.0 * v << '%';
    return os.str();
}

NumericTable to_table(const std::vector<std::string>& header) { return {header, {}}; }

std::string table_csv(const NumericTable& t) {
    CsvTable csv(t.header);
    for (const auto& r : t.rows) {
        std::vector<std::string> f;
        for (double v : r) f.push_back(fmt(v));
        csv.row(std::move(f));
    }
    return csv.str();
}

int integer_value(double v, const char* key) {
    if (std::floor(v) != v || v < 0 || v > 1e9) throw ConfigError(key, "expected non-negative integers");
    return static_cast<int>(v);
}

NumericTable sweep_tau(const RunConfig& c, const CommandOptions& o) {
    const MethodSettings& base = c.active();
    std::vector<std::string> h = {"tau_us", "tau_tot_us", "threshold", "model_inf_empty", "model_inf_f1",
                                  "model_inf_f2", "model_objective"};
    const bool mc = c.trials > 0;
    if (mc) {
        for (const char* k : {"mc_inf_empty", "mc_inf_f1", "mc_inf_f2", "mc_loss_f1", "mc_loss_f2"}) h.push_back(k);
    }
    NumericTable t = to_table(h);
    for (std::size_t i = 0; i < c.sweep->values.size(); ++i) {
        MethodSettings s = base;
        s.config.tau = us(c.sweep->values[i]);
        s.config.validate();
        const auto choice = readout::optimize_threshold(s.config.tau, s.model, c.method, c.objective);
        s.config.threshold = choice.threshold;
        const double tau_tot_us = 2.0 * c.sweep->values[i] + (c.method == Method::Transmission ? to_us(s.config.tau_rp) : 0.0);
        std::vector<double> row = {c.sweep->values[i], tau_tot_us, double(choice.threshold),
                                   choice.infidelity.empty, choice.infidelity.f1, choice.infidelity.f2,
                                   choice.objective};
        if (mc) {
            const auto r = readout::build_spam_report(simulate_all(s, c.trials, c.seed, i, o.workers), s.config);
            for (int k = 0; k < 3; ++k) row.push_back(r.infidelity[k].value);
            row.push_back(r.loss[1].value);
            row.push_back(r.loss[2].value);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

NumericTable sweep_threshold(const RunConfig& c, const CommandOptions& o) {
    const MethodSettings& s = c.active();
    std::vector<int> ths;
    for (double v : c.sweep->values) ths.push_back(integer_value(v, "sweep.values"));
    const int max_th = *std::max_element(ths.begin(), ths.end());
    const readout::ReadoutErrorModel em(s.config.tau, s.model, c.method, max_th);
    std::vector<std::string> h = {"threshold", "model_inf_empty", "model_inf_f1", "model_inf_f2"};
    const bool mc = c.trials > 0;
    std::vector<sim::TrajectoryOutcome> outcomes;
    if (mc) {
        for (const char* k : {"mc_inf_empty", "mc_inf_f1", "mc_inf_f2"}) h.push_back(k);
        outcomes = simulate_all(s, c.trials, c.seed, 0, o.workers);
    }
    NumericTable t = to_table(h);
    for (int th : ths) {
        const auto inf = em.infidelity(th);
        std::vector<double> row = {double(th), inf.empty, inf.f1, inf.f2};
        if (mc) {
            const auto r = readout::make_spam_report(readout::tally(outcomes, th, c.method), th, s.config.tau,
                                                     c.method);
            for (int k = 0; k < 3; ++k) row.push_back(r.infidelity[k].value);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

NumericTable sweep_intensity(const RunConfig& c) {
    const double tau = c.active().config.tau;
    if (c.method == Method::Fluorescence) {
        // Values are Rabi frequencies in units of gamma.
        const cqed::CavityFilteredRate rate(c.system);
        NumericTable t = to_table({"rabi_over_gamma", "rate_per_us", "mean_counts", "relative_rate"});
        for (double v : c.sweep->values) {
            if (!(v >= 0.0)) throw ConfigError("sweep.values", "Rabi frequencies must be >= 0");
            const double r = rate(v * c.system.gamma);
            t.rows.push_back({v, to_per_us(r), r * tau, rate.max_rate() > 0 ? r / rate.max_rate() : 0.0});
        }
        return t;
    }
    // Values are normalised input intensities Y of the state equation.
    const double coop = cqed::cooperativity(c.system);
    if (!(coop > 0.0)) throw ConfigError("system.g0_mhz", "intensity sweep in transmission needs C > 0");
    const double alpha = c.probe.saturated_difference / (4.0 * coop);
    NumericTable t = to_table({"drive", "intracavity", "transmission", "r_high_per_us", "r_low_per_us",
                               "mean_high", "mean_low", "ashman_d"});
    for (double y : c.sweep->values) {
        if (!(y > 0.0)) throw ConfigError("sweep.values", "drive intensities must be positive");
        const auto p = cqed::bistability_transmission(y, coop);
        const double hi = alpha * y * tau, lo = alpha * p.intracavity * tau;
        t.rows.push_back({y, p.intracavity, p.transmission, to_per_us(alpha * y), to_per_us(alpha * p.intracavity),
                          hi, lo, readout::ashman_d(hi, hi, lo, lo)});
    }
    return t;
}

NumericTable sweep_distance(const RunConfig& c, const CommandOptions& o) {
    std::vector<double> d;
    for (double v : c.sweep->values) {
        if (!(v >= 0.0)) throw ConfigError("sweep.values", "distances must be >= 0");
        d.push_back(um(v));
    }
    NumericTable t = to_table({"distance_um", "fl_contrast", "fl_reference", "fl_normalized", "fl_model",
                               "tr_contrast", "tr_reference", "tr_normalized", "tr_model"});
    std::array<std::vector<ramsey::DistancePoint>, 2> curves;
    std::array<ramsey::RamseyConfig, 2> rc;
    for (Method m : {Method::Fluorescence, Method::Transmission}) {
        const int k = m == Method::Fluorescence ? 0 : 1;
        rc[k] = ramsey_config(c, m);
        curves[k] = ramsey::contrast_vs_distance(d, rc[k], c.system, c.seed, {std::uint64_t(k), o.workers});
    }
    for (std::size_t i = 0; i < d.size(); ++i) {
        std::vector<double> row = {c.sweep->values[i]};
        for (int k = 0; k < 2; ++k) {
            const auto& p = curves[k][i];
            const double waist = *rc[k].backaction_waist;
            row.insert(row.end(), {p.contrast, p.reference_contrast, p.normalized_contrast,
                                   ramsey::backaction_factor(rc[k].n_scatter_at_center, d[i], waist)});
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace

RatesReport compute_rates(const RunConfig& c) {
    const auto& s = c.system;
    const double coop = cqed::cooperativity(s);
    const cqed::CavityFilteredRate filtered(s);
    RatesReport r;
    auto add = [&r](std::string k, double v, std::string unit) { r.entries.push_back({std::move(k), v, std::move(unit)}); };
    add("cooperativity", coop, "");
    add("r0", to_per_us(cqed::max_detection_rate(s)), "1/us");
    add("axial_factor", cqed::axial_factor(s, c.axial()), "");
    add("internal_factor", s.internal_factor, "");
    add("r_max_chain", to_per_us(cqed::expected_max_rate(s, c.axial())), "1/us");
    add("delta_pa", to_mhz(s.delta_pa()), "MHz");
    add("optimal_rabi_over_gamma", filtered.optimal_rabi() / s.gamma, "");
    add("filtered_rate_max", to_per_us(filtered.max_rate()), "1/us");
    add("ratio_fixed", cqed::transmission_ratio_fixed(coop), "");
    add("ratio_axial_avg", cqed::transmission_ratio_axial_avg(coop), "");
    add("ratio_axial_avg_quadrature", cqed::transmission_ratio_axial_avg_quadrature(coop), "");
    add("detuning_spread", to_mhz(c.probe.detuning_spread), "MHz");
    add("ratio_broadened",
        cqed::transmission_ratio_broadened(coop, c.probe.detuning_spread, c.probe.spread_shape, s.gamma), "");
    return r;
}

RatesReport cmd_rates(const RunConfig& config, const CommandOptions& options) {
    const RatesReport r = compute_rates(config);
    Run run(config, options, "rates");
    CsvTable csv({"key", "value", "unit"});
    for (const auto& e : r.entries) csv.row({e.key, fmt(e.value), e.unit});
    run.dir().write("rates.csv", csv.str());
    if (auto* log = run.log()) {
        for (const auto& e : r.entries) {
            *log << std::left << std::setw(28) << e.key << std::setprecision(6) << e.value
                 << (e.unit.empty() ? "" : " " + e.unit) << '\n';
        }
    }
    run.finish();
    return r;
}

HistogramSummary cmd_histogram(const RunConfig& config, const CommandOptions& options) {
    const MethodSettings& s = config.active();
    const auto outcomes = simulate_all(s, config.trials, config.seed, 0, options.workers);
    Run run(config, options, "histogram");

    HistogramSummary sum;
    std::array<std::array<std::map<int, long>, 2>, 3> bins;
    CsvTable trials({"prepared", "counts1", "counts2", "actual_initial", "final"});
    for (const auto& o : outcomes) {
        trials.row({sim::to_string(o.prepared), fmt(o.counts1), fmt(o.counts2), sim::to_string(o.actual_initial),
                    sim::to_string(o.final)});
        const int p = sim::state_index(o.prepared);
        ++bins[p][0][o.counts1];
        ++bins[p][1][o.counts2];
        sum.mean[p][0] += o.counts1;
        sum.mean[p][1] += o.counts2;
        sum.max[p][0] = std::max(sum.max[p][0], o.counts1);
        sum.max[p][1] = std::max(sum.max[p][1], o.counts2);
    }
    for (auto& m : sum.mean) {
        for (double& v : m) v /= static_cast<double>(config.trials);
    }
    run.dir().write("histogram_trials.csv", trials.str());

    CsvTable binned({"interval", "counts", "empty", "f1", "f2"});
    for (int k = 0; k < 2; ++k) {
        const int top = std::max({sum.max[0][k], sum.max[1][k], sum.max[2][k]});
        for (int n = 0; n <= top; ++n) {
            std::vector<std::string> row = {fmt(k + 1), fmt(n)};
            for (int p = 0; p < 3; ++p) {
                const auto it = bins[p][k].find(n);
                row.push_back(fmt(it == bins[p][k].end() ? 0L : it->second));
            }
            binned.row(std::move(row));
        }
    }
    run.dir().write("histogram_binned.csv", binned.str());
    if (auto* log = run.log()) {
        for (int p = 0; p < 3; ++p) {
            *log << std::left << std::setw(6) << sim::to_string(sim::kPreparedStates[p]) << " mean counts "
                 << sum.mean[p][0] << " / " << sum.mean[p][1] << '\n';
        }
    }
    run.finish();
    return sum;
}

std::vector<sim::TrajectoryOutcome> read_count_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    const auto rows = read_csv(in);
    if (rows.empty()) throw IoError("'" + path + "' is empty");
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < rows[0].size(); ++i) col[rows[0][i]] = i;
    for (const char* need : {"prepared", "counts1", "counts2"}) {
        if (!col.count(need)) throw IoError("'" + path + "' has no column '" + need + "'");
    }
    const bool has_final = col.count("final") > 0;
    std::vector<sim::TrajectoryOutcome> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() == 1 && r[0].empty()) continue;
        if (r.size() != rows[0].size()) throw IoError("row " + std::to_string(i + 1) + " has the wrong width");
        sim::TrajectoryOutcome o;
        try {
            o.prepared = sim::parse_state(r[col["prepared"]]);
            const long c1 = std::stol(r[col["counts1"]]), c2 = std::stol(r[col["counts2"]]);
            if (c1 < 0 || c2 < 0) throw std::invalid_argument("negative count");
            o.counts1 = static_cast<int>(c1);
            o.counts2 = static_cast<int>(c2);
            o.final = has_final ? sim::parse_state(r[col["final"]]) : o.prepared;
        } catch (const std::exception& e) {
            throw IoError("row " + std::to_string(i + 1) + ": " + e.what());
        }
        if (o.prepared == TweezerState::Lost) throw IoError("row " + std::to_string(i + 1) + ": prepared Lost");
        o.actual_initial = o.prepared;
        o.seed_index = i - 1;
        out.push_back(o);
    }
    return out;
}

SpamResult cmd_spam(const RunConfig& config, const CommandOptions& options) {
    const MethodSettings& s = config.active();
    SpamResult res;
    if (options.input) {
        res.report = readout::build_spam_report(read_count_csv(*options.input), s.config);
    } else {
        res.report = readout::build_spam_report(simulate_all(s, config.trials, config.seed, 0, options.workers),
                                                s.config);
        res.model = readout::infidelity_model(s.config.tau, s.config.threshold, s.model, config.method);
    }
    Run run(config, options, "spam");
    const auto labels = outcome_labels(config.method);
    const auto& r = res.report;

    CsvTable spam({"state", "outcome", "trials", "infidelity", "infidelity_lo", "infidelity_hi", "loss", "loss_lo",
                   "loss_hi", "model_infidelity"});
    for (int i = 0; i < 3; ++i) {
        const double model = res.model ? (*res.model)[sim::kPreparedStates[i]] : std::nan("");
        spam.row({sim::to_string(sim::kPreparedStates[i]), labels[i], fmt(r.matrix.row_sum(i)),
                  fmt(r.infidelity[i].value), fmt(r.infidelity[i].lo), fmt(r.infidelity[i].hi),
                  fmt(r.loss[i].value), fmt(r.loss[i].lo), fmt(r.loss[i].hi), fmt(model)});
    }
    run.dir().write("spam.csv", spam.str());

    CsvTable conf({"prepared", "measured_empty", "measured_f1", "measured_f2", "lost"});
    for (int i = 0; i < 3; ++i) {
        conf.row({sim::to_string(sim::kPreparedStates[i]), fmt(r.matrix.counts[i][0]), fmt(r.matrix.counts[i][1]),
                  fmt(r.matrix.counts[i][2]), fmt(r.matrix.lost[i])});
    }
    run.dir().write("confusion.csv", conf.str());

    if (auto* log = run.log()) {
        *log << sim::to_string(config.method) << ", tau = " << to_us(r.tau) << " us, threshold = " << r.threshold
             << '\n';
        for (int i = 0; i < 3; ++i) {
            *log << std::left << std::setw(6) << sim::to_string(sim::kPreparedStates[i]) << std::setw(10) << labels[i]
                 << " infidelity " << pct(r.infidelity[i].value) << " [" << pct(r.infidelity[i].lo) << ", "
                 << pct(r.infidelity[i].hi) << "]";
            if (i > 0) *log << "  loss " << pct(r.loss[i].value);
            if (res.model) *log << "  model " << pct((*res.model)[sim::kPreparedStates[i]]);
            *log << '\n';
        }
    }
    run.finish();
    return res;
}

NumericTable cmd_sweep(const RunConfig& config, const CommandOptions& options) {
    if (!config.sweep) throw ConfigError("sweep.parameter", "no sweep configured");
    const std::string& p = config.sweep->parameter;
    NumericTable t;
    if (p == "tau") {
        t = sweep_tau(config, options);
    } else if (p == "threshold") {
        t = sweep_threshold(config, options);
    } else if (p == "intensity") {
        t = sweep_intensity(config);
    } else if (p == "distance") {
        t = sweep_distance(config, options);
    } else {
        throw ConfigError("sweep.parameter", "unknown sweep parameter '" + p + "'");
    }
    Run run(config, options, "sweep");
    run.dir().write("sweep_" + p + ".csv", table_csv(t));
    if (auto* log = run.log()) *log << "sweep over " << p << ": " << t.rows.size() << " points\n";
    run.finish();
    return t;
}

ramsey::RamseyConfig ramsey_config(const RunConfig& config, std::optional<Method> method) {
    const auto& rs = config.ramsey;
    ramsey::RamseyConfig rc;
    rc.phases = ramsey::uniform_phases(rs.n_phases);
    rc.distance = rs.distance;
    rc.method = method;
    rc.ideal_readout = rs.ideal_readout;
    rc.readout_config = config.settings(rs.readout_method).config;
    rc.readout_model = config.settings(rs.readout_method).model;
    rc.transport_time = rs.transport_time;
    if (rs.t2_star) rc.t2_star = *rs.t2_star;
    rc.n_shots = rs.n_shots;
    rc.phase_kick = rs.phase_kick;
    rc.contrast_factor = rs.contrast_factor;
    const Method m = method.value_or(Method::Fluorescence);
    rc.n_scatter_at_center = m == Method::Fluorescence ? rs.n_scatter_fluorescence : rs.n_scatter_transmission;
    const auto& waist = m == Method::Fluorescence ? rs.waist_fluorescence : rs.waist_transmission;
    rc.backaction_waist = waist.value_or(ramsey::default_backaction_waist(m, config.system));
    return rc;
}

ramsey::RamseyResult cmd_ramsey(const RunConfig& config, const CommandOptions& options) {
    const auto rc = ramsey_config(config, config.ramsey.method);
    const auto res = ramsey::run_ramsey(rc, config.system, config.seed, {0, options.workers});
    Run run(config, options, "ramsey");

    CsvTable fringe({"phase_rad", "p_f1", "p_f1_lo", "p_f1_hi", "f1_counts", "reference_p_f1", "reference_lo",
                     "reference_hi", "reference_f1_counts", "shots"});
    for (std::size_t i = 0; i < res.phases.size(); ++i) {
        const auto& m = res.measured.p_f1[i];
        const auto& r = res.reference.p_f1[i];
        fringe.row({fmt(res.phases[i]), fmt(m.value), fmt(m.lo), fmt(m.hi), fmt(res.measured.f1_counts[i]),
                    fmt(r.value), fmt(r.lo), fmt(r.hi), fmt(res.reference.f1_counts[i]), fmt(res.n_shots)});
    }
    run.dir().write("ramsey.csv", fringe.str());

    const double model = rc.method ? ramsey::backaction_factor(rc.n_scatter_at_center, rc.distance,
                                                               *rc.backaction_waist)
                                   : 1.0;
    CsvTable fit({"key", "value"});
    fit.row({"mid_circuit_method", rc.method ? sim::to_string(*rc.method) : "none"});
    fit.row({"distance_um", fmt(to_um(rc.distance))});
    fit.row({"contrast", fmt(res.measured.fit.contrast)});
    fit.row({"phase_offset_rad", fmt(res.measured.fit.phase_offset)});
    fit.row({"baseline", fmt(res.measured.fit.baseline)});
    fit.row({"reference_contrast", fmt(res.reference.fit.contrast)});
    fit.row({"reference_phase_offset_rad", fmt(res.reference.fit.phase_offset)});
    fit.row({"normalized_contrast", fmt(res.normalized_contrast)});
    fit.row({"model_coherence_factor", fmt(model)});
    run.dir().write("ramsey_fit.csv", fit.str());
    if (auto* log = run.log()) {
        *log << "contrast " << res.measured.fit.contrast << ", reference " << res.reference.fit.contrast
             << ", normalized " << res.normalized_contrast << " (model " << model << ")\n";
    }
    run.finish();
    return res;
}

}  // namespace cavmeas::harness
