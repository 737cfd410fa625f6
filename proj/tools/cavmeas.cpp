#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cavmeas/errors.hpp"
#include "cavmeas/harness/commands.hpp"
#include "cavmeas/harness/config.hpp"
#include "cavmeas/harness/csv.hpp"
#include "cavmeas/harness/manifest.hpp"

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kConvergence = 3, kIo = 4 };

std::string join_values(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + cavmeas::harness::fmt(v[i]);
    return s + "]";
}

}  // namespace

int main(int argc, char** argv) {
    using namespace cavmeas;
    CLI::App app("Cavity mid-circuit readout simulator");
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", harness::tool_version());

    std::optional<std::string> config_path, out, method, input, sweep_param;
    std::optional<std::uint64_t> seed;
    std::optional<long> trials;
    std::vector<std::string> overrides;
    std::vector<double> sweep_values;
    unsigned workers = 1;

    app.add_option("--config", config_path, "JSON config (defaults to the built-in parameters)");
    app.add_option("--seed", seed, "64-bit run seed");
    app.add_option("--trials", trials, "trials per prepared state");
    app.add_option("--out", out, "output directory");
    app.add_option("--method", method, "fluorescence or transmission");
    app.add_option("--set", overrides, "override a config key, key=value (repeatable)");
    app.add_option("--workers", workers, "worker threads, 0 = all cores; results do not depend on it");

    auto* rates = app.add_subcommand("rates", "cooperativity, rate chain and transmission ratios");
    auto* histogram = app.add_subcommand("histogram", "per-trial counts and binned histograms");
    auto* spam = app.add_subcommand("spam", "SPAM infidelity and loss table");
    spam->add_option("--input", input, "classify counts from a CSV instead of simulating");
    auto* sweep = app.add_subcommand("sweep", "parameter sweeps: tau, intensity, threshold, distance");
    sweep->add_option("--param", sweep_param, "sweep parameter");
    sweep->add_option("--values", sweep_values, "sweep values (tau us, intensity, threshold, distance um)")
        ->delimiter(',');
    auto* ramsey = app.add_subcommand("ramsey", "mid-circuit Ramsey benchmark");
    auto* dump = app.add_subcommand("config", "print the resolved config");
    std::string verify_dir;
    auto* verify = app.add_subcommand("verify", "check a manifest and the digests of its files");
    verify->add_option("dir", verify_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    try {
        if (verify->parsed()) {
            const auto m = harness::validate_manifest(verify_dir);
            std::cout << m.files.size() << " files verified\n";
            return kOk;
        }

        std::vector<std::string> all = overrides;
        if (seed) all.push_back("run.seed=" + std::to_string(*seed));
        if (trials) all.push_back("run.trials=" + std::to_string(*trials));
        if (out) all.push_back("run.out=\"" + *out + "\"");
        if (method) all.push_back("run.method=\"" + *method + "\"");
        if (sweep_param) all.push_back("sweep.parameter=\"" + *sweep_param + "\"");
        if (!sweep_values.empty()) all.push_back("sweep.values=" + join_values(sweep_values));
        const harness::RunConfig config = harness::resolve_config(config_path, all);

        harness::CommandOptions options;
        options.workers = workers;
        options.log = &std::cout;
        options.input = input;

        if (dump->parsed()) {
            std::cout << harness::to_json(config).dump(2) << '\n';
        } else if (rates->parsed()) {
            harness::cmd_rates(config, options);
        } else if (histogram->parsed()) {
            harness::cmd_histogram(config, options);
        } else if (spam->parsed()) {
            harness::cmd_spam(config, options);
        } else if (sweep->parsed()) {
            harness::cmd_sweep(config, options);
        } else if (ramsey->parsed()) {
            harness::cmd_ramsey(config, options);
        }
        return kOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const ConvergenceError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kConvergence;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
}
