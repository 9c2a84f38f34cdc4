#include "squidqed/output.hpp"

#include "squidqed/errors.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace squidqed::output {

namespace {

constexpr std::array ramp_columns{"t", "P_10", "P_01", "I_e", "I_s", "ent_mag", "E_e", "E_s", "purity", "fidelity"};
constexpr std::array sweep_columns{"phi_x", "avg_E_e", "avg_E_s", "converged"};

std::array<double, 10> ramp_values(const observables::TimeSeriesRecord& r)
{
    return {r.t, r.p_10, r.p_01, r.i_e, r.i_s, r.ent_mag, r.e_e, r.e_s, r.purity, r.fidelity};
}

template <std::size_t N>
void write_header(std::ostream& out, const std::array<const char*, N>& columns)
{
    for (std::size_t i = 0; i < N; ++i) {
        out << (i ? "," : "") << csv_field(columns[i]);
    }
    out << "\r\n";
}

std::string stats_line(std::string_view name, const experiments::SeriesStats& s)
{
    return std::string(name) + ": mean " + format_number(s.mean) + ", drift " + format_number(s.drift) + "\n";
}

}  // namespace

std::string format_number(double value)
{
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 15);
    if (ec != std::errc{}) {
        throw Error("format_number: conversion failed");
    }
    return std::string(buf.data(), end);
}

std::string csv_field(std::string_view text)
{
    if (text.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(text);
    }
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') {
            quoted += '"';
        }
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

void write_ramp_records(std::ostream& out, std::span<const observables::TimeSeriesRecord> records,
                        config::OutputFormat format)
{
    if (format == config::OutputFormat::csv) {
        write_header(out, ramp_columns);
        for (const auto& r : records) {
            const auto v = ramp_values(r);
            for (std::size_t i = 0; i < v.size(); ++i) {
                out << (i ? "," : "") << format_number(v[i]);
            }
            out << "\r\n";
        }
        return;
    }
    // JSON lines: numbers are emitted verbatim so precision matches the CSV.
    for (const auto& r : records) {
        const auto v = ramp_values(r);
        out << '{';
        for (std::size_t i = 0; i < v.size(); ++i) {
            out << (i ? "," : "") << nlohmann::json(ramp_columns[i]).dump() << ':' << format_number(v[i]);
        }
        out << "}\n";
    }
}

void write_sweep_points(std::ostream& out, std::span<const experiments::SweepPoint> points,
                        config::OutputFormat format)
{
    if (format == config::OutputFormat::csv) {
        write_header(out, sweep_columns);
        for (const auto& p : points) {
            out << format_number(p.flux) << ',' << format_number(p.avg_e_e) << ',' << format_number(p.avg_e_s) << ','
                << (p.converged ? "true" : "false") << "\r\n";
        }
        return;
    }
    for (const auto& p : points) {
        out << "{\"phi_x\":" << format_number(p.flux) << ",\"avg_E_e\":" << format_number(p.avg_e_e)
            << ",\"avg_E_s\":" << format_number(p.avg_e_s) << ",\"converged\":" << (p.converged ? "true" : "false")
            << "}\n";
    }
}

std::string ramp_summary(const experiments::RampResult& r)
{
    std::ostringstream s;
    s << "gamma: " << format_number(r.gamma) << "\n";
    s << "drive: A " << format_number(r.drive.flux_a) << ", B " << format_number(r.drive.flux_b) << ", t0 "
      << format_number(r.drive.ramp_start) << ", tr " << format_number(r.drive.ramp_time) << "\n";
    s << "plateau window: [" << format_number(r.plateau.window_start) << ", " << format_number(r.plateau.window_end)
      << "]\n";
    s << stats_line("P_10", r.plateau.p_10);
    s << stats_line("P_01", r.plateau.p_01);
    s << stats_line("ent_mag", r.plateau.ent_mag);
    s << stats_line("fidelity", r.plateau.fidelity);
    s << stats_line("purity", r.plateau.purity);
    if (!r.records.empty()) {
        const auto& last = r.records.back();
        s << "final: t " << format_number(last.t) << ", ent_mag " << format_number(last.ent_mag) << ", purity "
          << format_number(last.purity) << "\n";
    }
    s << "entanglement below 0.5 at: "
      << (r.entanglement_loss_time ? format_number(*r.entanglement_loss_time) : std::string("never")) << "\n";
    return s.str();
}

std::string sweep_summary(const experiments::SweepResult& r)
{
    std::ostringstream s;
    std::size_t unconverged = 0;
    for (const auto& p : r.points) {
        unconverged += p.converged ? 0 : 1;
    }
    s << "points: " << r.points.size() << " (" << unconverged << " with unconverged time average)\n";
    s << "initial field energy: " << format_number(r.initial_field_energy) << "\n";
    s << "exchange regions: " << r.regions.size() << "\n";
    for (const auto& reg : r.regions) {
        s << "  center " << format_number(reg.center) << ", width " << format_number(reg.width) << ", depth "
          << format_number(reg.depth) << "\n";
    }
    for (const auto& [i, j] : r.twins) {
        s << "twins: " << format_number(r.regions[i].center) << " + " << format_number(r.regions[j].center) << " = "
          << format_number(r.regions[i].center + r.regions[j].center) << "\n";
    }
    return s.str();
}

std::string validation_summary(std::span<const validation::PropertyCheck> checks)
{
    std::ostringstream s;
    for (const auto& c : checks) {
        s << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << format_number(c.value) << " < "
          << format_number(c.threshold) << "\n";
    }
    return s.str();
}

std::string extension(config::OutputFormat format)
{
    return format == config::OutputFormat::csv ? ".csv" : ".jsonl";
}

void write_text(const std::filesystem::path& dir, const std::string& name, const std::string& text)
{
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + (dir / name).string());
    }
    out << text;
}

}  // namespace squidqed::output
