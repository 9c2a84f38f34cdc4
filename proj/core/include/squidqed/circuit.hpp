#pragma once

// Physical operators of a SQUID ring inductively coupled to one field mode.
//
// Internal units: ħ = 1, time in 1/ωs, energy in ħωs, external flux in Φ0.
// Flux quadratures are stored dimensionless, Φ = Φ_zp (a + a†), so the
// operators kept in TruncatedModel are `x = a + a†` and `p = i(a† - a)`.

#include "squidqed/numerics.hpp"

#include <array>

namespace squidqed::circuit {

using numerics::Dims;
using numerics::Index;
using numerics::Operator;
using numerics::RealVector;

namespace constants {
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double planck = 6.62607015e-34;         // J s
inline constexpr double hbar = planck / (2.0 * pi);      // J s
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double boltzmann = 1.380649e-23;        // J/K
inline constexpr double flux_quantum = planck / (2.0 * elementary_charge);  // Wb
}  // namespace constants

/// Josephson coupling energy ħν from the ratio ħν/2 = ratio · Φ0²/Λs.
double josephson_energy_from_ratio(double ring_inductance, double flux_quantum, double ratio = 0.0215);

struct CircuitParams {
    double ring_capacitance = 1e-16;   // Cs, F
    double ring_inductance = 3e-10;    // Λs, H
    double field_capacitance = 1e-16;  // Ce, F
    double field_inductance = 3e-10;   // Λe, H
    double josephson_energy = 0.0;     // ħν, J
    double flux_linkage = 0.01;        // μes
    double flux_quantum = constants::flux_quantum;
    double hbar = constants::hbar;

    double ring_frequency() const;   // ωs, rad/s
    double field_frequency() const;  // ωe, rad/s

    /// Throws ContractViolation naming the first offending field.
    void validate() const;

    bool operator==(const CircuitParams&) const = default;

    /// Default circuit with ħν calibrated by calibrate_josephson_energy at
    /// the default operating point.
    static CircuitParams defaults();
};

/// Flux of the default operating point A, in Φ0.
inline constexpr double default_resonance_flux = 0.42864;

/// ħν (J) such that the ring's 0→1 transition at `resonance_flux` equals ħωe.
/// Searches upward from ν = 0, skipping the trivial harmonic root.
double calibrate_josephson_energy(CircuitParams params, double resonance_flux = default_resonance_flux,
                                  Index pre_dim = 40);

struct DimensionlessGroups {
    double lambda_s = 0.0;     // (2π/Φ0) √(ħ/2ωsCs)
    double lambda_e = 0.0;     // (2π/Φ0) √(ħ/2ωeCe)
    double nu = 0.0;           // ν/ωs
    double coupling = 0.0;     // (μes/Λs) Φzp_s Φzp_e / ħωs; μes/2 for identical modes
    double eta_s = 0.0;        // √(ħωsCs/2), C
    double omega_ratio = 0.0;  // ωe/ωs
    double drive_scale = 0.0;  // ηs Φ0/ħ: Qs Φ̇x/ħωs = drive_scale · rate · p

    static DimensionlessGroups from(const CircuitParams& params);
};

/// Piecewise-linear external flux schedule: A until t0, linear ramp over
/// tr, then B. Times in 1/ωs, flux in Φ0.
struct FluxDrive {
    double flux_a = default_resonance_flux;
    double flux_b = 0.38;
    double ramp_start = 326.0;
    double ramp_time = 16.6;

    double value(double t) const;
    /// dΦx/dt in Φ0·ωs; nonzero only on (t0, t0 + tr].
    double rate(double t) const;
    double ramp_end() const { return ramp_start + ramp_time; }
    std::array<double, 2> breakpoints() const { return {ramp_start, ramp_end()}; }
    void validate() const;

    bool operator==(const FluxDrive&) const = default;
};

/// Truncated Fock-basis annihilation operator.
Operator ladder(Index n);

struct Quadratures {
    Operator flux;    // Wb
    Operator charge;  // C
};

/// Φ = √(ħ/2ωC)(a + a†), Q = i√(ħωC/2)(a† − a) in SI units.
Quadratures quadratures(Index n, double omega, double capacitance, double hbar);

struct FieldOperators {
    Operator harmonic;  // He / ħωs
    Operator x;
    Operator p;
    Operator a;
};

struct RingOperators {
    Operator harmonic;  // (Qs²/2Cs + Φs²/2Λs) / ħωs
    Operator x;
    Operator p;
    Operator cos_phi;   // cos(2πΦs/Φ0)
    Operator sin_phi;   // sin(2πΦs/Φ0)
    Operator a;         // bare LC annihilation operator
};

FieldOperators field_operators_fock(const DimensionlessGroups& g, Index n);
RingOperators ring_operators_fock(const DimensionlessGroups& g, Index n);

/// Hs/ħωs = harmonic − ν cos(φ + 2πΦx) − drive_scale · rate · p, with the
/// cosine expanded so only precomputed cos φ / sin φ are needed.
Operator ring_hamiltonian(const RingOperators& ops, const DimensionlessGroups& g, double flux, double rate);

struct TruncationSettings {
    Index field_dim = 4;
    Index ring_dim = 4;
    Index pre_dim = 40;
    bool check_convergence = true;

    bool operator==(const TruncationSettings&) const = default;
};

struct TruncatedModel {
    CircuitParams params;
    DimensionlessGroups groups;
    Dims dims;
    Index pre_dim = 0;
    double ring_ref_flux = 0.0;
    FieldOperators field;  // in the lowest Fock states
    RingOperators ring;    // in the lowest eigenstates of Hs(ring_ref_flux)
    Operator ring_basis;   // pre_dim × ring_dim, columns = retained eigenvectors
    RealVector ring_ref_energies;
};

/// Projects onto the lowest field Fock states and the lowest ring
/// eigenstates at `ref_flux`. With check_convergence, throws
/// ConvergenceError if doubling pre_dim moves a retained ring level by more
/// than 1e-6 ħωs.
TruncatedModel truncate_to_eigenbasis(const CircuitParams& params, double ref_flux,
                                      const TruncationSettings& settings = {});
TruncatedModel truncate_to_eigenbasis(const CircuitParams& params, const FluxDrive& drive,
                                      const TruncationSettings& settings = {});

Operator build_hs(const TruncatedModel& model, double flux, double rate);
Operator build_he(const TruncatedModel& model);
/// −Hes = −coupling · (x_e ⊗ x_s).
Operator coupling_term(const TruncatedModel& model);
/// H = He + Hs − Hes on field ⊗ ring at time t.
Operator build_total(const TruncatedModel& model, const FluxDrive& drive, double t);

/// H(t) with the time-independent pieces assembled once; equal to
/// build_total() but cheap to evaluate inside an integrator.
class ProtocolHamiltonian {
public:
    ProtocolHamiltonian(const TruncatedModel& model, const FluxDrive& drive);

    Operator operator()(double t) const { return at(drive_.value(t), drive_.rate(t)); }
    Operator at(double flux, double rate) const;
    const FluxDrive& drive() const { return drive_; }

private:
    FluxDrive drive_;
    double nu_;
    double drive_scale_;
    Operator static_part_;
    Operator cos_part_;
    Operator sin_part_;
    Operator charge_part_;
};

}  // namespace squidqed::circuit
