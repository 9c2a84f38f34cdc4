#pragma once

// End-to-end scenarios: static flux sweep of time-averaged energies, the
// closed-system flux-ramp protocol, and the same protocol with thermal baths.

#include "squidqed/circuit.hpp"
#include "squidqed/dynamics.hpp"
#include "squidqed/observables.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace squidqed::experiments {

using numerics::Index;
using observables::TimeSeriesRecord;

struct ModelSettings {
    circuit::CircuitParams circuit = circuit::CircuitParams::defaults();
    circuit::TruncationSettings truncation;

    bool operator==(const ModelSettings&) const = default;
};

/// Worker count from SQUIDQED_THREADS, else the hardware concurrency.
unsigned default_thread_count();

/// |n_e, m_s⟩ labelled at `flux` as a pure state at time t.
dynamics::QuantumState labeled_state(const circuit::TruncatedModel& model, double flux, Index field_level,
                                     Index ring_level, double t = 0.0);

// ---------------------------------------------------------------- sweep

struct SweepConfig {
    double flux_min = 0.30;
    double flux_max = 0.70;
    int points = 201;
    double tau = 2000.0;           // averaging horizon, 1/ωs
    double sample_spacing = 0.5;   // 1/ωs
    Index initial_field = 1;
    Index initial_ring = 0;
    double dip_threshold = 0.1;    // ħωs
    int refine_points = 41;

    void validate() const;
    bool operator==(const SweepConfig&) const = default;
};

struct SweepPoint {
    double flux = 0.0;
    double avg_e_e = 0.0;
    double avg_e_s = 0.0;
    bool converged = false;
};

struct ExchangeRegion {
    double center = 0.0;  // Φ0
    double width = 0.0;   // Φ0, full width at half depth
    double depth = 0.0;   // ħωs taken out of the field
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::vector<ExchangeRegion> regions;
    std::vector<std::pair<std::size_t, std::size_t>> twins;  // indices into regions, centres summing to ~1 Φ0
    double initial_field_energy = 0.0;
};

/// Static-flux evolution at one Φx with the ring re-diagonalised there.
SweepPoint sweep_point(const SweepConfig& cfg, const ModelSettings& settings, double flux);

SweepResult run_sweep(const SweepConfig& cfg, const ModelSettings& settings, unsigned threads = 0);

// ----------------------------------------------------------------- ramp

struct RampConfig {
    circuit::FluxDrive drive;
    double t_end = 3.0 * 326.0;
    double output_spacing = 0.5;
    /// Replace drive.ramp_start by the first P_10 = P_01 crossing at flux A.
    bool auto_t0 = false;
    observables::Labeling labeling = observables::Labeling::instantaneous;
    dynamics::IntegratorConfig integrator;

    void validate() const;
    bool operator==(const RampConfig&) const = default;
};

struct SeriesStats {
    double mean = 0.0;
    double drift = 0.0;  // max |x − mean|
    double min = 0.0;
    double max = 0.0;
};

struct PlateauStats {
    double window_start = 0.0;
    double window_end = 0.0;
    SeriesStats p_10;
    SeriesStats p_01;
    SeriesStats ent_mag;
    SeriesStats fidelity;
    SeriesStats purity;
};

struct RampResult {
    double gamma = 0.0;
    circuit::FluxDrive drive;  // as actually applied (auto_t0 resolved)
    std::vector<TimeSeriesRecord> records;
    PlateauStats plateau;
    /// First sample after the ramp with entanglement magnitude below 0.5.
    std::optional<double> entanglement_loss_time;
};

/// Statistics over the final third of the records.
PlateauStats plateau_stats(std::span<const TimeSeriesRecord> records);

/// First time the |0e1s⟩ probability reaches the |1e0s⟩ probability under
/// static flux A, starting from |1e0s⟩; nullopt if it never happens before
/// `horizon`.
std::optional<double> find_equal_probability_time(const circuit::TruncatedModel& model, double flux,
                                                  double horizon, double resolution = 0.05);

/// Closed-system protocol on a model truncated at drive.flux_a.
RampResult run_ramp(const RampConfig& cfg, const circuit::TruncatedModel& model);

/// Lindblad protocol with the given baths.
RampResult run_lindblad_ramp(const RampConfig& cfg, const circuit::TruncatedModel& model,
                             const dynamics::BathParams& baths);

/// One Lindblad run per γ, applied equally to both components.
std::vector<RampResult> run_dissipative(const RampConfig& cfg, const circuit::TruncatedModel& model,
                                        const dynamics::BathParams& baths, std::span<const double> gammas,
                                        unsigned threads = 0);

}  // namespace squidqed::experiments
