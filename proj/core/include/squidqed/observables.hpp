#pragma once

// Quantities measured along a trajectory: labelled-state probabilities,
// component energies, entropic entanglement indices, purity and fidelity to
// the maximally entangled |1e0s⟩/|0e1s⟩ target.

#include "squidqed/circuit.hpp"
#include "squidqed/dynamics.hpp"

#include <span>
#include <vector>

namespace squidqed::observables {

using dynamics::QuantumState;
using numerics::Component;
using numerics::Dims;
using numerics::Index;
using numerics::StateVector;

/// Product states |n_e, m_s⟩: field Fock state n_e ⊗ ring eigenstate m_s of
/// Hs(flux, rate = 0) in the truncated ring space.
struct LabeledBasis {
    Dims dims;
    double flux_at_labeling = 0.0;
    std::vector<StateVector> states;  // index n_e * ring + m_s

    const StateVector& state(Index field_level, Index ring_level) const;
    Index index_of(Index field_level, Index ring_level) const { return field_level * dims.ring + ring_level; }
};

LabeledBasis labeled_basis(const circuit::TruncatedModel& model, double flux);

/// |⟨b_k|ψ⟩|² or ⟨b_k|ρ|b_k⟩ for every basis state.
std::vector<double> basis_probabilities(const QuantumState& state, const LabeledBasis& basis);

/// ⟨He⟩ or ⟨Hs(flux, rate = 0)⟩ in ħωs.
double component_energy(const QuantumState& state, Component which, const circuit::TruncatedModel& model,
                        double flux);

struct TimeAverage {
    double value = 0.0;       // average over [0, τ]
    double half_value = 0.0;  // average over [0, τ/2]
    bool converged = false;   // the two differ by less than 1 %
};

/// Trapezoidal average of samples on a uniform grid.
TimeAverage time_average(std::span<const double> times, std::span<const double> values);

/// Time average of one component energy over a trajectory at fixed flux.
TimeAverage time_averaged_energy(std::span<const QuantumState> trajectory, Component which,
                                 const circuit::TruncatedModel& model, double flux);

/// Adami-Cerf indices I_i = S(ρ) − S(ρ_i), nats. Negative means component i
/// is entangled with the other.
struct EntanglementIndices {
    double field = 0.0;
    double ring = 0.0;

    /// Smaller of −I_e and −I_s; equals both for a pure global state.
    double magnitude() const;
};

EntanglementIndices entanglement_indices(const QuantumState& state);

/// Tr ρ².
double purity(const QuantumState& state);

/// max over phases of ⟨Ψ|ρ|Ψ⟩, Ψ = (e^{iφ1}|1e0s⟩ + e^{iφ2}|0e1s⟩)/√2.
double bell_fidelity(const QuantumState& state, const LabeledBasis& basis);

enum class Labeling {
    instantaneous,  // ring eigenstates at the current Φx(t)
    frozen,         // ring eigenstates at the model's reference flux
};

struct TimeSeriesRecord {
    double t = 0.0;
    double p_10 = 0.0;
    double p_01 = 0.0;
    double i_e = 0.0;
    double i_s = 0.0;
    double ent_mag = 0.0;
    double e_e = 0.0;
    double e_s = 0.0;
    double purity = 0.0;
    double fidelity = 0.0;
};

/// All record fields for one sample of a driven trajectory.
TimeSeriesRecord observe(const QuantumState& state, const circuit::TruncatedModel& model,
                         const circuit::FluxDrive& drive, Labeling labeling = Labeling::instantaneous);

}  // namespace squidqed::observables
