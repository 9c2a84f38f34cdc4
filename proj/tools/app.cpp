#include "app.hpp"

#include "squidqed/config.hpp"
#include "squidqed/errors.hpp"
#include "squidqed/experiments.hpp"
#include "squidqed/output.hpp"
#include "squidqed/validation.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace squidqed::app {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string command;
    std::string config_path;
    std::string out_dir;
    std::string format;
    std::vector<std::string> overrides;
};

void write_records(const fs::path& dir, const std::string& name, const config::RunConfig& cfg,
                   const experiments::RampResult& result)
{
    std::ostringstream data;
    output::write_ramp_records(data, result.records, cfg.output.format);
    output::write_text(dir, name + output::extension(cfg.output.format), data.str());
}

int run_experiment(const Options& opts, const config::RunConfig& cfg, std::ostream& out)
{
    const fs::path dir = cfg.output.directory;
    output::write_text(dir, "resolved_config.json", config::to_json(cfg).dump(2) + "\n");

    if (opts.command == "validate") {
        const auto checks = validation::run_property_suite(cfg.model, cfg.ramp);
        const std::string text = output::validation_summary(checks);
        output::write_text(dir, "validation.txt", text);
        out << text;
        for (const auto& c : checks) {
            if (!c.passed) {
                return exit_numerical_failure;
            }
        }
        return exit_ok;
    }

    switch (cfg.experiment) {
    case config::Experiment::sweep: {
        const auto result = experiments::run_sweep(cfg.sweep, cfg.model);
        std::ostringstream data;
        output::write_sweep_points(data, result.points, cfg.output.format);
        output::write_text(dir, "sweep" + output::extension(cfg.output.format), data.str());
        const std::string summary = output::sweep_summary(result);
        output::write_text(dir, "summary.txt", summary);
        out << summary;
        break;
    }
    case config::Experiment::ramp: {
        const auto model = circuit::truncate_to_eigenbasis(cfg.model.circuit, cfg.ramp.drive, cfg.model.truncation);
        const auto result = experiments::run_ramp(cfg.ramp, model);
        write_records(dir, "ramp", cfg, result);
        const std::string summary = output::ramp_summary(result);
        output::write_text(dir, "summary.txt", summary);
        out << summary;
        break;
    }
    case config::Experiment::dissipative: {
        const auto model = circuit::truncate_to_eigenbasis(cfg.model.circuit, cfg.ramp.drive, cfg.model.truncation);
        const auto results = experiments::run_dissipative(cfg.ramp, model, cfg.bath, cfg.gammas);
        std::string summary;
        for (const auto& r : results) {
            write_records(dir, "dissipative_gamma_" + output::format_number(r.gamma), cfg, r);
            summary += output::ramp_summary(r) + "\n";
        }
        output::write_text(dir, "summary.txt", summary);
        out << summary;
        break;
    }
    }
    return exit_ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Options opts;
    CLI::App cli{"SQUID ring + field mode entanglement simulator"};
    cli.require_subcommand(1, 1);
    for (const char* name : {"sweep", "ramp", "dissipative", "validate"}) {
        auto* sub = cli.add_subcommand(name);
        sub->add_option("--config", opts.config_path, "JSON configuration file");
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_option("--set", opts.overrides, "dotted.key=value override (repeatable)");
        sub->add_option("--format", opts.format, "csv | jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    }
    cli.get_subcommand("sweep")->description("time-averaged energies against static flux");
    cli.get_subcommand("ramp")->description("closed-system flux-ramp protocol");
    cli.get_subcommand("dissipative")->description("flux-ramp protocol with thermal baths");
    cli.get_subcommand("validate")->description("run the invariant suite on the configured model");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        cli.exit(e, out, err);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        cli.exit(e, out, err);
        return exit_config_error;
    }
    opts.command = cli.get_subcommands().front()->get_name();

    config::RunConfig cfg;
    try {
        nlohmann::json doc = opts.config_path.empty() ? nlohmann::json::object() : config::load_document(opts.config_path);
        for (const auto& o : opts.overrides) {
            config::apply_override(doc, o);
        }
        if (opts.command != "validate") {
            doc["experiment"] = opts.command;
        }
        if (!opts.out_dir.empty()) {
            config::apply_override(doc, "output.directory=" + nlohmann::json(opts.out_dir).dump());
        }
        if (!opts.format.empty()) {
            config::apply_override(doc, "output.format=" + opts.format);
        }
        cfg = config::parse_config(doc);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config_error;
    }

    try {
        return run_experiment(opts, cfg, out);
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << "\n";
        try {
            output::write_text(cfg.output.directory, "diagnostic.txt", std::string(e.what()) + "\n");
        } catch (const std::exception& io) {
            err << "could not write diagnostic file: " << io.what() << "\n";
        }
        return exit_numerical_failure;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "i/o failure: " << e.what() << "\n";
        return exit_numerical_failure;
    }
}

}  // namespace squidqed::app
