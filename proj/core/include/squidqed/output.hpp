#pragma once

// Plot-ready record export. CSV follows RFC 4180 with a mandatory header;
// numbers are written with std::to_chars (locale independent, 15
// significant digits).

#include "squidqed/config.hpp"
#include "squidqed/experiments.hpp"
#include "squidqed/validation.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

namespace squidqed::output {

std::string format_number(double value);

/// RFC 4180 field quoting.
std::string csv_field(std::string_view text);

void write_ramp_records(std::ostream& out, std::span<const observables::TimeSeriesRecord> records,
                        config::OutputFormat format);
void write_sweep_points(std::ostream& out, std::span<const experiments::SweepPoint> points,
                        config::OutputFormat format);

std::string ramp_summary(const experiments::RampResult& result);
std::string sweep_summary(const experiments::SweepResult& result);
std::string validation_summary(std::span<const validation::PropertyCheck> checks);

std::string extension(config::OutputFormat format);

/// Writes `text` to dir/name, creating dir as needed.
void write_text(const std::filesystem::path& dir, const std::string& name, const std::string& text);

}  // namespace squidqed::output
