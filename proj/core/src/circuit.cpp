#include "squidqed/circuit.hpp"

#include "squidqed/errors.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <string>

namespace squidqed::circuit {

using numerics::Complex;

namespace {

void require_positive(double value, const char* name)
{
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ContractViolation(std::string(name) + " must be positive and finite, got " + std::to_string(value));
    }
}

Operator project(const Operator& basis, const Operator& op)
{
    return basis.adjoint() * op * basis;
}

// Fix the arbitrary eigenvector phases: largest-magnitude entry real positive.
void normalize_phases(Operator& vectors)
{
    for (Index c = 0; c < vectors.cols(); ++c) {
        Index r = 0;
        vectors.col(c).cwiseAbs().maxCoeff(&r);
        const Complex z = vectors(r, c);
        vectors.col(c) *= std::conj(z) / std::abs(z);
    }
}

RealVector ring_levels(const CircuitParams& params, double flux, Index pre_dim)
{
    const auto g = DimensionlessGroups::from(params);
    const auto ops = ring_operators_fock(g, pre_dim);
    return numerics::eigh(ring_hamiltonian(ops, g, flux, 0.0)).eigenvalues;
}

}  // namespace

double josephson_energy_from_ratio(double ring_inductance, double flux_quantum, double ratio)
{
    return 2.0 * ratio * flux_quantum * flux_quantum / ring_inductance;
}

double CircuitParams::ring_frequency() const
{
    return 1.0 / std::sqrt(ring_inductance * ring_capacitance);
}

double CircuitParams::field_frequency() const
{
    return 1.0 / std::sqrt(field_inductance * field_capacitance);
}

void CircuitParams::validate() const
{
    require_positive(ring_capacitance, "Cs");
    require_positive(ring_inductance, "Ls");
    require_positive(field_capacitance, "Ce");
    require_positive(field_inductance, "Le");
    require_positive(flux_quantum, "phi0");
    require_positive(hbar, "hbar");
    if (!(josephson_energy >= 0.0) || !std::isfinite(josephson_energy)) {
        throw ContractViolation("hbar_nu must be non-negative and finite");
    }
    if (!(flux_linkage >= 0.0 && flux_linkage < 1.0)) {
        throw ContractViolation("mu_es must lie in [0, 1), got " + std::to_string(flux_linkage));
    }
}

CircuitParams CircuitParams::defaults()
{
    static const CircuitParams cached = [] {
        CircuitParams p;
        p.josephson_energy = calibrate_josephson_energy(p);
        return p;
    }();
    return cached;
}

double calibrate_josephson_energy(CircuitParams params, double resonance_flux, Index pre_dim)
{
    params.josephson_energy = 0.0;
    params.validate();
    const double unit = params.hbar * params.ring_frequency();
    const double target = params.field_frequency() / params.ring_frequency();

    auto mismatch = [&](double nu) {
        params.josephson_energy = nu * unit;
        const RealVector e = ring_levels(params, resonance_flux, pre_dim);
        return (e(1) - e(0)) - target;
    };

    // The gap equals the harmonic value at ν = 0; the physical root is the
    // first upward crossing after the gap has dipped below target.
    constexpr double step = 0.05;
    constexpr double nu_max = 50.0;
    double lo = step;
    double f_lo = mismatch(lo);
    for (double hi = lo + step; hi <= nu_max; hi += step) {
        const double f_hi = mismatch(hi);
        if (f_lo < 0.0 && f_hi >= 0.0) {
            std::uintmax_t iterations = 100;
            const auto [a, b] = boost::math::tools::toms748_solve(
                mismatch, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(50), iterations);
            return 0.5 * (a + b) * unit;
        }
        lo = hi;
        f_lo = f_hi;
    }
    throw ConvergenceError("calibrate_josephson_energy: no resonance found at flux " +
                           std::to_string(resonance_flux));
}

DimensionlessGroups DimensionlessGroups::from(const CircuitParams& params)
{
    params.validate();
    const double ws = params.ring_frequency();
    const double we = params.field_frequency();
    const double phi_zp_s = std::sqrt(params.hbar / (2.0 * ws * params.ring_capacitance));
    const double phi_zp_e = std::sqrt(params.hbar / (2.0 * we * params.field_capacitance));
    const double unit = params.hbar * ws;

    DimensionlessGroups g;
    g.lambda_s = 2.0 * constants::pi / params.flux_quantum * phi_zp_s;
    g.lambda_e = 2.0 * constants::pi / params.flux_quantum * phi_zp_e;
    g.nu = params.josephson_energy / unit;
    g.coupling = params.flux_linkage / params.ring_inductance * phi_zp_s * phi_zp_e / unit;
    g.eta_s = std::sqrt(params.hbar * ws * params.ring_capacitance / 2.0);
    g.omega_ratio = we / ws;
    g.drive_scale = g.eta_s * params.flux_quantum / params.hbar;
    return g;
}

double FluxDrive::value(double t) const
{
    if (t <= ramp_start) {
        return flux_a;
    }
    if (t <= ramp_end()) {
        return flux_a + (flux_b - flux_a) * (t - ramp_start) / ramp_time;
    }
    return flux_b;
}

double FluxDrive::rate(double t) const
{
    if (t > ramp_start && t <= ramp_end()) {
        return (flux_b - flux_a) / ramp_time;
    }
    return 0.0;
}

void FluxDrive::validate() const
{
    require_positive(ramp_time, "tr");
    if (!(ramp_start >= 0.0) || !std::isfinite(ramp_start)) {
        throw ContractViolation("t0 must be non-negative");
    }
    if (!std::isfinite(flux_a) || !std::isfinite(flux_b)) {
        throw ContractViolation("drive fluxes must be finite");
    }
}

Operator ladder(Index n)
{
    if (n < 2) {
        throw ContractViolation("ladder: dimension must be at least 2, got " + std::to_string(n));
    }
    Operator a = Operator::Zero(n, n);
    for (Index k = 1; k < n; ++k) {
        a(k - 1, k) = std::sqrt(static_cast<double>(k));
    }
    return a;
}

Quadratures quadratures(Index n, double omega, double capacitance, double hbar)
{
    require_positive(omega, "omega");
    require_positive(capacitance, "capacitance");
    require_positive(hbar, "hbar");
    const Operator a = ladder(n);
    const Operator ad = a.adjoint();
    const double flux_zp = std::sqrt(hbar / (2.0 * omega * capacitance));
    const double charge_zp = std::sqrt(hbar * omega * capacitance / 2.0);
    return {flux_zp * (a + ad), Complex(0.0, charge_zp) * (ad - a)};
}

FieldOperators field_operators_fock(const DimensionlessGroups& g, Index n)
{
    FieldOperators ops;
    ops.a = ladder(n);
    const Operator ad = ops.a.adjoint();
    ops.x = ops.a + ad;
    ops.p = Complex(0.0, 1.0) * (ad - ops.a);
    ops.harmonic = g.omega_ratio * (ad * ops.a + 0.5 * Operator::Identity(n, n));
    return ops;
}

RingOperators ring_operators_fock(const DimensionlessGroups& g, Index n)
{
    RingOperators ops;
    ops.a = ladder(n);
    const Operator ad = ops.a.adjoint();
    ops.x = ops.a + ad;
    ops.p = Complex(0.0, 1.0) * (ad - ops.a);
    ops.harmonic = ad * ops.a + 0.5 * Operator::Identity(n, n);
    const auto sd = numerics::eigh(ops.x);
    RealVector c(n);
    RealVector s(n);
    for (Index k = 0; k < n; ++k) {
        c(k) = std::cos(g.lambda_s * sd.eigenvalues(k));
        s(k) = std::sin(g.lambda_s * sd.eigenvalues(k));
    }
    ops.cos_phi = sd.eigenvectors * c.cast<Complex>().asDiagonal() * sd.eigenvectors.adjoint();
    ops.sin_phi = sd.eigenvectors * s.cast<Complex>().asDiagonal() * sd.eigenvectors.adjoint();
    ops.cos_phi = (ops.cos_phi + ops.cos_phi.adjoint()).eval() * 0.5;
    ops.sin_phi = (ops.sin_phi + ops.sin_phi.adjoint()).eval() * 0.5;
    return ops;
}

Operator ring_hamiltonian(const RingOperators& ops, const DimensionlessGroups& g, double flux, double rate)
{
    const double angle = 2.0 * constants::pi * flux;
    return ops.harmonic - g.nu * (std::cos(angle) * ops.cos_phi - std::sin(angle) * ops.sin_phi) -
           (g.drive_scale * rate) * ops.p;
}

TruncatedModel truncate_to_eigenbasis(const CircuitParams& params, double ref_flux, const TruncationSettings& settings)
{
    const Index de = settings.field_dim;
    const Index ds = settings.ring_dim;
    if (de < 2 || ds < 2) {
        throw ContractViolation("truncate_to_eigenbasis: retained dimensions must be at least 2");
    }
    if (settings.pre_dim < ds + 1) {
        throw ContractViolation("truncate_to_eigenbasis: pre_dim must exceed the ring dimension");
    }

    TruncatedModel model;
    model.params = params;
    model.groups = DimensionlessGroups::from(params);
    model.dims = {de, ds};
    model.pre_dim = settings.pre_dim;
    model.ring_ref_flux = ref_flux;
    model.field = field_operators_fock(model.groups, de);

    const RingOperators pre = ring_operators_fock(model.groups, settings.pre_dim);
    auto sd = numerics::eigh(ring_hamiltonian(pre, model.groups, ref_flux, 0.0));
    Operator basis = sd.eigenvectors.leftCols(ds);
    normalize_phases(basis);
    model.ring_basis = basis;
    model.ring_ref_energies = sd.eigenvalues.head(ds);

    if (settings.check_convergence) {
        const RealVector wide = ring_levels(params, ref_flux, 2 * settings.pre_dim);
        const double shift = (wide.head(ds) - model.ring_ref_energies).cwiseAbs().maxCoeff();
        if (shift > 1e-6) {
            throw ConvergenceError("truncate_to_eigenbasis: ring levels shift by " + std::to_string(shift) +
                                   " when pre_dim is doubled from " + std::to_string(settings.pre_dim));
        }
    }

    model.ring.harmonic = project(basis, pre.harmonic);
    model.ring.x = project(basis, pre.x);
    model.ring.p = project(basis, pre.p);
    model.ring.cos_phi = project(basis, pre.cos_phi);
    model.ring.sin_phi = project(basis, pre.sin_phi);
    model.ring.a = project(basis, pre.a);
    return model;
}

TruncatedModel truncate_to_eigenbasis(const CircuitParams& params, const FluxDrive& drive,
                                      const TruncationSettings& settings)
{
    return truncate_to_eigenbasis(params, drive.flux_a, settings);
}

Operator build_hs(const TruncatedModel& model, double flux, double rate)
{
    return ring_hamiltonian(model.ring, model.groups, flux, rate);
}

Operator build_he(const TruncatedModel& model)
{
    return model.field.harmonic;
}

Operator coupling_term(const TruncatedModel& model)
{
    return -model.groups.coupling * numerics::kron(model.field.x, model.ring.x);
}

Operator build_total(const TruncatedModel& model, const FluxDrive& drive, double t)
{
    const Index de = model.dims.field;
    const Index ds = model.dims.ring;
    return numerics::kron(build_he(model), Operator::Identity(ds, ds)) +
           numerics::kron(Operator::Identity(de, de), build_hs(model, drive.value(t), drive.rate(t))) +
           coupling_term(model);
}

ProtocolHamiltonian::ProtocolHamiltonian(const TruncatedModel& model, const FluxDrive& drive)
    : drive_(drive), nu_(model.groups.nu), drive_scale_(model.groups.drive_scale)
{
    const Operator id_e = Operator::Identity(model.dims.field, model.dims.field);
    const Operator id_s = Operator::Identity(model.dims.ring, model.dims.ring);
    static_part_ = numerics::kron(build_he(model), id_s) + numerics::kron(id_e, model.ring.harmonic) +
                   coupling_term(model);
    cos_part_ = numerics::kron(id_e, model.ring.cos_phi);
    sin_part_ = numerics::kron(id_e, model.ring.sin_phi);
    charge_part_ = numerics::kron(id_e, model.ring.p);
}

Operator ProtocolHamiltonian::at(double flux, double rate) const
{
    const double angle = 2.0 * constants::pi * flux;
    return static_part_ - nu_ * (std::cos(angle) * cos_part_ - std::sin(angle) * sin_part_) -
           (drive_scale_ * rate) * charge_part_;
}

}  // namespace squidqed::circuit
