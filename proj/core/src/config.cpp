#include "squidqed/config.hpp"

#include "squidqed/errors.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace squidqed::config {

using nlohmann::json;

namespace {

// Reads keys from one JSON object and rejects whatever it did not read.
class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path))
    {
        if (!node_.is_object()) {
            throw ConfigError(where() + " must be a JSON object");
        }
    }

    std::string key_path(std::string_view key) const
    {
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

    const json* find(std::string_view key)
    {
        known_.insert(std::string(key));
        const auto it = node_.find(std::string(key));
        return it == node_.end() ? nullptr : &*it;
    }

    double number(std::string_view key, double fallback)
    {
        const json* v = find(key);
        if (!v) {
            return fallback;
        }
        if (!v->is_number()) {
            throw ConfigError(key_path(key) + " must be a number");
        }
        const double d = v->get<double>();
        if (!std::isfinite(d)) {
            throw ConfigError(key_path(key) + " must be finite");
        }
        return d;
    }

    double positive(std::string_view key, double fallback)
    {
        const double d = number(key, fallback);
        if (!(d > 0.0)) {
            throw ConfigError(key_path(key) + " must be positive, got " + std::to_string(d));
        }
        return d;
    }

    std::optional<double> optional_positive(std::string_view key)
    {
        if (!node_.contains(std::string(key))) {
            known_.insert(std::string(key));
            return std::nullopt;
        }
        return positive(key, 0.0);
    }

    long long integer(std::string_view key, long long fallback)
    {
        const json* v = find(key);
        if (!v) {
            return fallback;
        }
        if (!v->is_number_integer()) {
            throw ConfigError(key_path(key) + " must be an integer");
        }
        return v->get<long long>();
    }

    bool boolean(std::string_view key, bool fallback)
    {
        const json* v = find(key);
        if (!v) {
            return fallback;
        }
        if (!v->is_boolean()) {
            throw ConfigError(key_path(key) + " must be true or false");
        }
        return v->get<bool>();
    }

    std::string string(std::string_view key, std::string fallback)
    {
        const json* v = find(key);
        if (!v) {
            return fallback;
        }
        if (!v->is_string()) {
            throw ConfigError(key_path(key) + " must be a string");
        }
        return v->get<std::string>();
    }

    template <class Enum>
    Enum choice(std::string_view key, Enum fallback, std::initializer_list<std::pair<const char*, Enum>> options)
    {
        const json* v = find(key);
        if (!v) {
            return fallback;
        }
        if (v->is_string()) {
            for (const auto& [name, value] : options) {
                if (v->get<std::string>() == name) {
                    return value;
                }
            }
        }
        std::string names;
        for (const auto& [name, value] : options) {
            names += names.empty() ? name : std::string(" | ") + name;
        }
        throw ConfigError(key_path(key) + " must be one of: " + names);
    }

    Section child(std::string_view key)
    {
        static const json empty = json::object();
        const json* v = find(key);
        return Section(v ? *v : empty, key_path(key));
    }

    void finish() const
    {
        for (const auto& [key, value] : node_.items()) {
            if (!known_.count(key)) {
                throw ConfigError("unknown key '" + key_path(key) + "'");
            }
        }
    }

private:
    std::string where() const { return path_.empty() ? "configuration" : path_; }

    const json& node_;
    std::string path_;
    std::set<std::string> known_;
};

template <class F>
void rethrow_as_config_error(F&& f)
{
    try {
        f();
    } catch (const ContractViolation& e) {
        throw ConfigError(e.what());
    }
}

void parse_circuit(Section s, RunConfig& cfg)
{
    circuit::CircuitParams& p = cfg.model.circuit;
    const circuit::CircuitParams base;
    p.ring_capacitance = s.positive("Cs", base.ring_capacitance);
    p.ring_inductance = s.positive("Ls", base.ring_inductance);
    p.field_capacitance = s.positive("Ce", p.ring_capacitance);
    p.field_inductance = s.positive("Le", p.ring_inductance);
    p.flux_linkage = s.number("mu_es", base.flux_linkage);
    if (!(p.flux_linkage >= 0.0 && p.flux_linkage < 1.0)) {
        throw ConfigError(s.key_path("mu_es") + " must lie in [0, 1)");
    }
    p.flux_quantum = s.positive("phi0", base.flux_quantum);
    p.hbar = s.positive("hbar", base.hbar);
    cfg.resonance_flux = s.number("resonance_flux", circuit::default_resonance_flux);
    if (!(cfg.resonance_flux > 0.0 && cfg.resonance_flux < 1.0)) {
        throw ConfigError(s.key_path("resonance_flux") + " must lie in (0, 1)");
    }
    if (const json* v = s.find("hbar_nu")) {
        if (!v->is_number() || !(v->get<double>() >= 0.0)) {
            throw ConfigError(s.key_path("hbar_nu") + " must be a non-negative number");
        }
        p.josephson_energy = v->get<double>();
    } else {
        p.josephson_energy = -1.0;  // calibrated once truncation is known
    }
    s.finish();
}

}  // namespace

std::string_view to_string(Experiment e)
{
    switch (e) {
    case Experiment::sweep:
        return "sweep";
    case Experiment::ramp:
        return "ramp";
    case Experiment::dissipative:
        return "dissipative";
    }
    return "ramp";
}

std::string_view to_string(OutputFormat f)
{
    return f == OutputFormat::csv ? "csv" : "jsonl";
}

RunConfig parse_config(const json& doc)
{
    RunConfig cfg;
    Section root(doc, "");
    cfg.experiment = root.choice("experiment", Experiment::ramp,
                                 {{"sweep", Experiment::sweep},
                                  {"ramp", Experiment::ramp},
                                  {"dissipative", Experiment::dissipative}});

    parse_circuit(root.child("circuit"), cfg);

    {
        Section s = root.child("truncation");
        auto& t = cfg.model.truncation;
        t.field_dim = s.integer("de", t.field_dim);
        t.ring_dim = s.integer("ds", t.ring_dim);
        t.pre_dim = s.integer("pre_dim", t.pre_dim);
        t.check_convergence = s.boolean("check_convergence", t.check_convergence);
        if (t.field_dim < 2) {
            throw ConfigError("truncation.de must be at least 2");
        }
        if (t.ring_dim < 2) {
            throw ConfigError("truncation.ds must be at least 2");
        }
        if (t.pre_dim <= t.ring_dim) {
            throw ConfigError("truncation.pre_dim must exceed truncation.ds");
        }
        s.finish();
    }

    if (cfg.model.circuit.josephson_energy < 0.0) {
        const circuit::CircuitParams defaults = circuit::CircuitParams::defaults();
        auto probe = cfg.model.circuit;
        probe.josephson_energy = defaults.josephson_energy;
        if (probe == defaults && cfg.resonance_flux == circuit::default_resonance_flux &&
            cfg.model.truncation.pre_dim == circuit::TruncationSettings{}.pre_dim) {
            cfg.model.circuit = defaults;
        } else {
            rethrow_as_config_error([&] {
                cfg.model.circuit.josephson_energy = circuit::calibrate_josephson_energy(
                    cfg.model.circuit, cfg.resonance_flux, cfg.model.truncation.pre_dim);
            });
        }
    }

    {
        Section s = root.child("drive");
        auto& d = cfg.ramp.drive;
        d.flux_a = s.number("A", d.flux_a);
        d.flux_b = s.number("B", d.flux_b);
        d.ramp_start = s.number("t0", d.ramp_start);
        d.ramp_time = s.positive("tr", d.ramp_time);
        if (d.ramp_start < 0.0) {
            throw ConfigError("drive.t0 must be non-negative");
        }
        cfg.ramp.auto_t0 = s.boolean("auto_t0", cfg.ramp.auto_t0);
        s.finish();
    }

    {
        Section s = root.child("ramp");
        cfg.ramp.t_end = s.positive("t_end", 3.0 * cfg.ramp.drive.ramp_start);
        cfg.ramp.labeling = s.choice("labeling", cfg.ramp.labeling,
                                     {{"instantaneous", observables::Labeling::instantaneous},
                                      {"frozen", observables::Labeling::frozen}});
        s.finish();
    }

    {
        Section s = root.child("sweep");
        auto& w = cfg.sweep;
        w.flux_min = s.number("phi_min", w.flux_min);
        w.flux_max = s.number("phi_max", w.flux_max);
        w.points = static_cast<int>(s.integer("points", w.points));
        w.tau = s.positive("tau", w.tau);
        w.sample_spacing = s.positive("sample_spacing", w.sample_spacing);
        w.dip_threshold = s.positive("dip_threshold", w.dip_threshold);
        w.refine_points = static_cast<int>(s.integer("refine_points", w.refine_points));
        if (const json* v = s.find("initial")) {
            if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number_integer() || !(*v)[1].is_number_integer()) {
                throw ConfigError("sweep.initial must be [field_level, ring_level]");
            }
            w.initial_field = (*v)[0].get<long long>();
            w.initial_ring = (*v)[1].get<long long>();
        }
        if (w.initial_field < 0 || w.initial_field >= cfg.model.truncation.field_dim || w.initial_ring < 0 ||
            w.initial_ring >= cfg.model.truncation.ring_dim) {
            throw ConfigError("sweep.initial lies outside the truncated basis");
        }
        if (w.refine_points < 5) {
            throw ConfigError("sweep.refine_points must be at least 5");
        }
        rethrow_as_config_error([&] { w.validate(); });
        s.finish();
    }

    {
        Section s = root.child("bath");
        cfg.bath = dynamics::BathParams::defaults(cfg.model.circuit);
        if (const json* v = s.find("gamma")) {
            cfg.gammas.clear();
            const json list = v->is_array() ? *v : json::array({*v});
            for (const auto& g : list) {
                if (!g.is_number() || !(g.get<double>() >= 0.0)) {
                    throw ConfigError("bath.gamma must be a non-negative number or a list of them");
                }
                cfg.gammas.push_back(g.get<double>());
            }
            if (cfg.gammas.empty()) {
                throw ConfigError("bath.gamma must not be empty");
            }
        }
        cfg.bath.temperature = s.positive("Tb", cfg.bath.temperature);
        cfg.bath.frequency = s.positive("omega_b", cfg.bath.frequency);
        s.finish();
    }

    {
        Section s = root.child("integrator");
        auto& in = cfg.ramp.integrator;
        in.method = s.choice("method", in.method,
                             {{"adaptive", dynamics::Method::adaptive}, {"rk4", dynamics::Method::rk4}});
        in.rtol = s.positive("rtol", in.rtol);
        in.atol = s.positive("atol", in.atol);
        in.dt = s.positive("dt", in.dt);
        in.initial_step = s.positive("initial_step", in.initial_step);
        s.finish();
    }

    {
        Section s = root.child("output");
        cfg.output.directory = s.string("directory", cfg.output.directory);
        cfg.output.format =
            s.choice("format", cfg.output.format, {{"csv", OutputFormat::csv}, {"jsonl", OutputFormat::jsonl}});
        cfg.ramp.output_spacing = s.positive("spacing", cfg.ramp.output_spacing);
        s.finish();
    }

    const long long seed = root.integer("seed", 0);
    if (seed < 0) {
        throw ConfigError("seed must be non-negative");
    }
    cfg.seed = static_cast<std::uint64_t>(seed);
    root.finish();

    rethrow_as_config_error([&] {
        cfg.model.circuit.validate();
        cfg.ramp.validate();
    });
    return cfg;
}

json parse_document(std::string_view text)
{
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t column = 1;
        const std::size_t end = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ConfigError("JSON parse error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                          ": " + e.what());
    }
}

json load_document(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_document(buffer.str());
}

void apply_override(json& doc, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError("override '" + std::string(assignment) + "' must look like key.path=value");
    }
    const std::string key(assignment.substr(0, eq));
    const std::string raw(assignment.substr(eq + 1));
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) {
        value = raw;
    }
    if (!doc.is_object()) {
        throw ConfigError("configuration must be a JSON object");
    }
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) {
            throw ConfigError("override key '" + key + "' has an empty component");
        }
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        json& next = (*node)[part];
        if (next.is_null()) {
            next = json::object();
        }
        if (!next.is_object()) {
            throw ConfigError("override key '" + key + "' descends into a non-object");
        }
        node = &next;
        start = dot + 1;
    }
}

json to_json(const RunConfig& c)
{
    const auto& p = c.model.circuit;
    const auto& t = c.model.truncation;
    const auto& d = c.ramp.drive;
    const auto& in = c.ramp.integrator;
    return json{
        {"experiment", to_string(c.experiment)},
        {"circuit",
         {{"Cs", p.ring_capacitance},
          {"Ls", p.ring_inductance},
          {"Ce", p.field_capacitance},
          {"Le", p.field_inductance},
          {"hbar_nu", p.josephson_energy},
          {"mu_es", p.flux_linkage},
          {"phi0", p.flux_quantum},
          {"hbar", p.hbar},
          {"resonance_flux", c.resonance_flux}}},
        {"truncation",
         {{"de", t.field_dim}, {"ds", t.ring_dim}, {"pre_dim", t.pre_dim}, {"check_convergence", t.check_convergence}}},
        {"drive", {{"A", d.flux_a}, {"B", d.flux_b}, {"t0", d.ramp_start}, {"tr", d.ramp_time}, {"auto_t0", c.ramp.auto_t0}}},
        {"ramp",
         {{"t_end", c.ramp.t_end},
          {"labeling", c.ramp.labeling == observables::Labeling::instantaneous ? "instantaneous" : "frozen"}}},
        {"sweep",
         {{"phi_min", c.sweep.flux_min},
          {"phi_max", c.sweep.flux_max},
          {"points", c.sweep.points},
          {"tau", c.sweep.tau},
          {"sample_spacing", c.sweep.sample_spacing},
          {"initial", {c.sweep.initial_field, c.sweep.initial_ring}},
          {"dip_threshold", c.sweep.dip_threshold},
          {"refine_points", c.sweep.refine_points}}},
        {"bath", {{"gamma", c.gammas}, {"Tb", c.bath.temperature}, {"omega_b", c.bath.frequency}}},
        {"integrator",
         {{"method", in.method == dynamics::Method::adaptive ? "adaptive" : "rk4"},
          {"rtol", in.rtol},
          {"atol", in.atol},
          {"dt", in.dt},
          {"initial_step", in.initial_step}}},
        {"output", {{"directory", c.output.directory}, {"format", to_string(c.output.format)}, {"spacing", c.ramp.output_spacing}}},
        {"seed", c.seed},
    };
}

}  // namespace squidqed::config
