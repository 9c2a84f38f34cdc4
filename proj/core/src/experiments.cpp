#include "squidqed/experiments.hpp"

#include "parallel.hpp"
#include "squidqed/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace squidqed::experiments {

using circuit::FluxDrive;
using circuit::TruncatedModel;
using dynamics::QuantumState;
using numerics::Component;
using numerics::StateVector;

namespace {

unsigned resolve_threads(unsigned threads)
{
    return threads == 0 ? default_thread_count() : threads;
}

SeriesStats series_stats(std::span<const TimeSeriesRecord> records, double TimeSeriesRecord::*field)
{
    SeriesStats s;
    if (records.empty()) {
        return s;
    }
    s.min = s.max = records.front().*field;
    double sum = 0.0;
    for (const auto& r : records) {
        const double v = r.*field;
        sum += v;
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    s.mean = sum / static_cast<double>(records.size());
    s.drift = std::max(s.max - s.mean, s.mean - s.min);
    return s;
}

// Dip of the averaged field energy below its starting value.
double dip(const SweepPoint& p, double reference)
{
    return reference - p.avg_e_e;
}

std::optional<ExchangeRegion> refine_region(const SweepConfig& cfg, const ModelSettings& settings, double lo,
                                            double hi, double reference, unsigned threads)
{
    const int n = std::max(cfg.refine_points, 5);
    std::vector<SweepPoint> fine(static_cast<std::size_t>(n));
    detail::parallel_for(fine.size(), threads, [&](std::size_t i) {
        const double flux = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        fine[i] = sweep_point(cfg, settings, flux);
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < fine.size(); ++i) {
        if (fine[i].avg_e_e < fine[best].avg_e_e) {
            best = i;
        }
    }
    const double depth = dip(fine[best], reference);
    if (depth <= cfg.dip_threshold) {
        return std::nullopt;
    }

    // Half-depth crossings on either side of the deepest point.
    const double half = 0.5 * depth;
    auto crossing = [&](std::size_t inner, std::size_t outer) {
        const double d_in = dip(fine[inner], reference);
        const double d_out = dip(fine[outer], reference);
        const double w = (d_in - half) / (d_in - d_out);
        return fine[inner].flux + w * (fine[outer].flux - fine[inner].flux);
    };
    double left = fine.front().flux;
    for (std::size_t i = best; i > 0; --i) {
        if (dip(fine[i - 1], reference) < half) {
            left = crossing(i, i - 1);
            break;
        }
    }
    double right = fine.back().flux;
    for (std::size_t i = best; i + 1 < fine.size(); ++i) {
        if (dip(fine[i + 1], reference) < half) {
            right = crossing(i, i + 1);
            break;
        }
    }
    return ExchangeRegion{0.5 * (left + right), right - left, depth};
}

RampResult finish(std::vector<TimeSeriesRecord> records, const FluxDrive& drive, double gamma)
{
    RampResult out;
    out.gamma = gamma;
    out.drive = drive;
    out.records = std::move(records);
    out.plateau = plateau_stats(out.records);
    for (const auto& r : out.records) {
        if (r.t > drive.ramp_end() && r.ent_mag < 0.5) {
            out.entanglement_loss_time = r.t;
            break;
        }
    }
    return out;
}

FluxDrive resolve_drive(const RampConfig& cfg, const TruncatedModel& model)
{
    FluxDrive drive = cfg.drive;
    if (cfg.auto_t0) {
        const auto crossing = find_equal_probability_time(model, drive.flux_a, cfg.t_end);
        if (!crossing) {
            throw ConvergenceError("auto t0: probabilities never cross before t_end");
        }
        drive.ramp_start = *crossing;
    }
    if (!(cfg.t_end > drive.ramp_end())) {
        throw ContractViolation("ramp t_end must exceed t0 + tr");
    }
    return drive;
}

dynamics::IntegratorConfig with_breakpoints(dynamics::IntegratorConfig integrator, const FluxDrive& drive)
{
    const auto bp = drive.breakpoints();
    integrator.breakpoints.insert(integrator.breakpoints.end(), bp.begin(), bp.end());
    return integrator;
}

}  // namespace

unsigned default_thread_count()
{
    if (const char* env = std::getenv("SQUIDQED_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) {
            return static_cast<unsigned>(n);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

QuantumState labeled_state(const TruncatedModel& model, double flux, Index field_level, Index ring_level, double t)
{
    const auto basis = observables::labeled_basis(model, flux);
    return QuantumState::pure(basis.state(field_level, ring_level), model.dims, t);
}

void SweepConfig::validate() const
{
    if (!(flux_min > 0.0 && flux_max < 1.0 && flux_min < flux_max)) {
        throw ContractViolation("sweep flux range must lie inside (0, 1)");
    }
    if (points < 2) {
        throw ContractViolation("sweep needs at least 2 points");
    }
    if (!(tau > 0.0) || !(sample_spacing > 0.0) || sample_spacing * 2.0 > tau) {
        throw ContractViolation("sweep tau and sample spacing must be positive with tau >= 2 samples");
    }
    if (!(dip_threshold > 0.0)) {
        throw ContractViolation("sweep dip threshold must be positive");
    }
}

SweepPoint sweep_point(const SweepConfig& cfg, const ModelSettings& settings, double flux)
{
    auto truncation = settings.truncation;
    truncation.check_convergence = false;
    const TruncatedModel model = circuit::truncate_to_eigenbasis(settings.circuit, flux, truncation);
    const circuit::ProtocolHamiltonian h(model, FluxDrive{flux, flux, 0.0, 1.0});
    const QuantumState initial = labeled_state(model, flux, cfg.initial_field, cfg.initial_ring);
    const auto times = dynamics::output_grid(0.0, cfg.tau, cfg.sample_spacing);
    const auto trajectory = dynamics::evolve_static(initial, h.at(flux, 0.0), times);

    const auto field = observables::time_averaged_energy(trajectory, Component::field, model, flux);
    const auto ring = observables::time_averaged_energy(trajectory, Component::ring, model, flux);
    return {flux, field.value, ring.value, field.converged && ring.converged};
}

SweepResult run_sweep(const SweepConfig& cfg, const ModelSettings& settings, unsigned threads)
{
    cfg.validate();
    threads = resolve_threads(threads);
    // Fail early on an unconverged pre-truncation basis.
    circuit::truncate_to_eigenbasis(settings.circuit, cfg.flux_min, settings.truncation);

    SweepResult out;
    out.initial_field_energy = settings.circuit.field_frequency() / settings.circuit.ring_frequency() *
                               (static_cast<double>(cfg.initial_field) + 0.5);
    out.points.resize(static_cast<std::size_t>(cfg.points));
    const double step = (cfg.flux_max - cfg.flux_min) / static_cast<double>(cfg.points - 1);
    detail::parallel_for(out.points.size(), threads, [&](std::size_t i) {
        out.points[i] = sweep_point(cfg, settings, cfg.flux_min + step * static_cast<double>(i));
    });

    const double reference = out.initial_field_energy;
    for (std::size_t i = 1; i + 1 < out.points.size(); ++i) {
        const auto& p = out.points;
        const bool local_min = p[i].avg_e_e < p[i - 1].avg_e_e && p[i].avg_e_e <= p[i + 1].avg_e_e;
        if (!local_min || dip(p[i], reference) < 0.2 * cfg.dip_threshold) {
            continue;
        }
        auto region = refine_region(cfg, settings, p[i - 1].flux, p[i + 1].flux, reference, threads);
        if (!region) {
            continue;
        }
        const bool duplicate = std::any_of(out.regions.begin(), out.regions.end(), [&](const ExchangeRegion& r) {
            return std::abs(r.center - region->center) < step;
        });
        if (!duplicate) {
            out.regions.push_back(*region);
        }
    }

    for (std::size_t i = 0; i < out.regions.size(); ++i) {
        for (std::size_t j = i + 1; j < out.regions.size(); ++j) {
            if (std::abs(out.regions[i].center + out.regions[j].center - 1.0) < 0.01) {
                out.twins.emplace_back(i, j);
            }
        }
    }
    return out;
}

void RampConfig::validate() const
{
    drive.validate();
    if (!(output_spacing > 0.0)) {
        throw ContractViolation("ramp output spacing must be positive");
    }
    if (!auto_t0 && !(t_end > drive.ramp_end())) {
        throw ContractViolation("ramp t_end must exceed t0 + tr");
    }
}

PlateauStats plateau_stats(std::span<const TimeSeriesRecord> records)
{
    PlateauStats s;
    if (records.empty()) {
        return s;
    }
    const double t_first = records.front().t;
    const double t_last = records.back().t;
    s.window_start = t_last - (t_last - t_first) / 3.0;
    s.window_end = t_last;
    const auto begin = std::find_if(records.begin(), records.end(),
                                    [&](const TimeSeriesRecord& r) { return r.t >= s.window_start - 1e-9; });
    const std::span<const TimeSeriesRecord> window(begin, records.end());
    s.p_10 = series_stats(window, &TimeSeriesRecord::p_10);
    s.p_01 = series_stats(window, &TimeSeriesRecord::p_01);
    s.ent_mag = series_stats(window, &TimeSeriesRecord::ent_mag);
    s.fidelity = series_stats(window, &TimeSeriesRecord::fidelity);
    s.purity = series_stats(window, &TimeSeriesRecord::purity);
    return s;
}

std::optional<double> find_equal_probability_time(const TruncatedModel& model, double flux, double horizon,
                                                  double resolution)
{
    const circuit::ProtocolHamiltonian h(model, FluxDrive{flux, flux, 0.0, 1.0});
    const auto basis = observables::labeled_basis(model, flux);
    const QuantumState initial = QuantumState::pure(basis.state(1, 0), model.dims);
    const auto times = dynamics::output_grid(0.0, horizon, resolution);
    const auto trajectory = dynamics::evolve_static(initial, h.at(flux, 0.0), times);

    const auto i10 = static_cast<std::size_t>(basis.index_of(1, 0));
    const auto i01 = static_cast<std::size_t>(basis.index_of(0, 1));
    double prev_gap = 1.0;
    double prev_t = 0.0;
    for (const auto& s : trajectory) {
        const auto p = observables::basis_probabilities(s, basis);
        const double gap = p[i10] - p[i01];
        if (gap <= 0.0) {
            return prev_t + (s.time() - prev_t) * prev_gap / (prev_gap - gap);
        }
        prev_gap = gap;
        prev_t = s.time();
    }
    return std::nullopt;
}

RampResult run_ramp(const RampConfig& cfg, const TruncatedModel& model)
{
    cfg.validate();
    const FluxDrive drive = resolve_drive(cfg, model);
    const circuit::ProtocolHamiltonian h(model, drive);
    const QuantumState initial = labeled_state(model, drive.flux_a, 1, 0);
    const auto trajectory =
        dynamics::evolve_tdse(initial, std::cref(h), cfg.t_end, with_breakpoints(cfg.integrator, drive), cfg.output_spacing);

    std::vector<TimeSeriesRecord> records;
    records.reserve(trajectory.size());
    for (const auto& s : trajectory) {
        records.push_back(observables::observe(s, model, drive, cfg.labeling));
    }
    return finish(std::move(records), drive, 0.0);
}

RampResult run_lindblad_ramp(const RampConfig& cfg, const TruncatedModel& model, const dynamics::BathParams& baths)
{
    cfg.validate();
    const FluxDrive drive = resolve_drive(cfg, model);
    const circuit::ProtocolHamiltonian h(model, drive);
    const QuantumState pure = labeled_state(model, drive.flux_a, 1, 0);
    const QuantumState initial = QuantumState::mixed(pure.density(), model.dims);
    const auto channels = dynamics::bath_channels(model, baths);
    const auto trajectory = dynamics::evolve_lindblad(initial, std::cref(h), channels, cfg.t_end,
                                                      with_breakpoints(cfg.integrator, drive), cfg.output_spacing);

    std::vector<TimeSeriesRecord> records;
    records.reserve(trajectory.size());
    for (const auto& s : trajectory) {
        records.push_back(observables::observe(s, model, drive, cfg.labeling));
    }
    return finish(std::move(records), drive, std::max(baths.gamma_field, baths.gamma_ring));
}

std::vector<RampResult> run_dissipative(const RampConfig& cfg, const TruncatedModel& model,
                                        const dynamics::BathParams& baths, std::span<const double> gammas,
                                        unsigned threads)
{
    std::vector<RampResult> out(gammas.size());
    detail::parallel_for(gammas.size(), resolve_threads(threads), [&](std::size_t i) {
        dynamics::BathParams b = baths;
        b.gamma_field = gammas[i];
        b.gamma_ring = gammas[i];
        out[i] = run_lindblad_ramp(cfg, model, b);
    });
    return out;
}

}  // namespace squidqed::experiments
