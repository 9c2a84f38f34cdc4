#pragma once

// Run configuration: a strict JSON schema with every default filled in.
// docs/config-schema.md documents the keys.

#include "squidqed/dynamics.hpp"
#include "squidqed/experiments.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace squidqed::config {

enum class Experiment { sweep, ramp, dissipative };
enum class OutputFormat { csv, jsonl };

struct OutputConfig {
    std::string directory = "out";
    OutputFormat format = OutputFormat::csv;

    bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
    Experiment experiment = Experiment::ramp;
    experiments::ModelSettings model;
    double resonance_flux = circuit::default_resonance_flux;  // used to calibrate ħν when not given
    experiments::SweepConfig sweep;
    experiments::RampConfig ramp;
    dynamics::BathParams bath;
    std::vector<double> gammas{1e-5, 1e-4};
    OutputConfig output;
    std::uint64_t seed = 0;

    bool operator==(const RunConfig&) const = default;
};

std::string_view to_string(Experiment e);
std::string_view to_string(OutputFormat f);

/// Validated config from a JSON document. Throws ConfigError naming the
/// offending key for unknown keys, wrong types or invalid values.
RunConfig parse_config(const nlohmann::json& doc);

/// Parses JSON text; syntax errors report line and column.
nlohmann::json parse_document(std::string_view text);

/// Reads and parses a config file.
nlohmann::json load_document(const std::filesystem::path& path);

/// Applies one "dotted.key=value" override in place. The value is parsed as
/// JSON when possible and taken as a string otherwise.
void apply_override(nlohmann::json& doc, std::string_view assignment);

/// Fully resolved form: parse_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig& config);

}  // namespace squidqed::config
