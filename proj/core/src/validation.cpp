#include "squidqed/validation.hpp"

#include <algorithm>
#include <cmath>

namespace squidqed::validation {

using circuit::FluxDrive;
using circuit::TruncatedModel;
using dynamics::QuantumState;
using numerics::Component;
using numerics::Operator;
using numerics::StateVector;

namespace {

PropertyCheck below(std::string name, double value, double threshold)
{
    return {std::move(name), value, threshold, value < threshold};
}

double max_spectrum_twin_gap(const experiments::ModelSettings& settings, double flux)
{
    const auto g = circuit::DimensionlessGroups::from(settings.circuit);
    const auto ops = circuit::ring_operators_fock(g, settings.truncation.pre_dim);
    const auto e1 = numerics::eigh(circuit::ring_hamiltonian(ops, g, flux, 0.0)).eigenvalues;
    const auto e2 = numerics::eigh(circuit::ring_hamiltonian(ops, g, 1.0 - flux, 0.0)).eigenvalues;
    return (e1 - e2).cwiseAbs().maxCoeff();
}

double state_distance(const QuantumState& a, const QuantumState& b)
{
    return (a.density() - b.density()).cwiseAbs().maxCoeff();
}

}  // namespace

std::vector<PropertyCheck> run_property_suite(const experiments::ModelSettings& settings,
                                              const experiments::RampConfig& ramp, double span)
{
    std::vector<PropertyCheck> out;
    const FluxDrive& drive = ramp.drive;
    const TruncatedModel model = circuit::truncate_to_eigenbasis(settings.circuit, drive, settings.truncation);
    const circuit::ProtocolHamiltonian h(model, drive);
    auto integrator = ramp.integrator;
    integrator.breakpoints = {drive.ramp_start, drive.ramp_end()};

    // Hamiltonian Hermiticity along the protocol, including the ramp.
    double herm = 0.0;
    for (double t = 0.0; t <= ramp.t_end; t += 0.37) {
        herm = std::max(herm, numerics::hermiticity_error(circuit::build_total(model, drive, t)));
    }
    out.push_back(below("hamiltonian_hermiticity", herm, 1e-12));

    double twin = 0.0;
    for (double flux : {drive.flux_a, drive.flux_b, 0.31, 0.45, 0.49}) {
        twin = std::max(twin, max_spectrum_twin_gap(settings, flux));
    }
    out.push_back(below("ring_spectrum_twin_symmetry", twin, 1e-9));

    {
        const auto g = circuit::DimensionlessGroups::from(settings.circuit);
        const auto pre = circuit::ring_operators_fock(g, settings.truncation.pre_dim);
        const Operator id = Operator::Identity(pre.x.rows(), pre.x.cols());
        const double exact = (pre.cos_phi * pre.cos_phi + pre.sin_phi * pre.sin_phi - id).cwiseAbs().maxCoeff();
        out.push_back(below("trig_identity_pre_truncation", exact, 1e-9));
        const Operator ids = Operator::Identity(model.dims.ring, model.dims.ring);
        const Operator& b = model.ring_basis;
        const double projected =
            (b.adjoint() * (pre.cos_phi * pre.cos_phi + pre.sin_phi * pre.sin_phi) * b - ids).cwiseAbs().maxCoeff();
        out.push_back(below("trig_identity_retained_subspace", projected, 1e-9));
    }

    {
        auto wide = settings.truncation;
        wide.pre_dim *= 2;
        wide.check_convergence = false;
        const auto big = circuit::truncate_to_eigenbasis(settings.circuit, drive, wide);
        const double shift = (big.ring_ref_energies - model.ring_ref_energies).cwiseAbs().maxCoeff();
        out.push_back(below("truncation_pre_dim_convergence", shift, 1e-6));
    }

    const QuantumState initial = experiments::labeled_state(model, drive.flux_a, 1, 0);

    // Decoupled conservation under the integrator.
    {
        auto params = settings.circuit;
        params.flux_linkage = 0.0;
        const auto decoupled = circuit::truncate_to_eigenbasis(params, drive, settings.truncation);
        const circuit::ProtocolHamiltonian hd(decoupled, FluxDrive{drive.flux_a, drive.flux_a, 0.0, 1.0});
        const QuantumState start = experiments::labeled_state(decoupled, drive.flux_a, 1, 0);
        const auto traj = dynamics::evolve_tdse(start, std::cref(hd), span, ramp.integrator, 10.0);
        const double ee0 = observables::component_energy(start, Component::field, decoupled, drive.flux_a);
        const double es0 = observables::component_energy(start, Component::ring, decoupled, drive.flux_a);
        double dev = 0.0;
        for (const auto& s : traj) {
            dev = std::max(dev, std::abs(observables::component_energy(s, Component::field, decoupled, drive.flux_a) - ee0));
            dev = std::max(dev, std::abs(observables::component_energy(s, Component::ring, decoupled, drive.flux_a) - es0));
        }
        out.push_back(below("decoupled_energy_conservation", dev, 1e-8));
    }

    // Norm drift over the ramp protocol.
    const auto tdse = dynamics::evolve_tdse(initial, std::cref(h), span, integrator, 0.5);
    {
        double drift = 0.0;
        for (const auto& s : tdse) {
            drift = std::max(drift, std::abs(s.vector().norm() - 1.0));
        }
        out.push_back(below("tdse_norm_drift", drift, 1e-8));
    }

    {
        const QuantumState rho0 = QuantumState::mixed(initial.density(), model.dims);
        auto baths = dynamics::BathParams::defaults(settings.circuit);
        baths.gamma_field = baths.gamma_ring = 1e-4;
        const auto channels = dynamics::bath_channels(model, baths);
        const auto open = dynamics::evolve_lindblad(rho0, std::cref(h), channels, span, integrator, 0.5);
        double drift = 0.0;
        double min_eig = 0.0;
        for (const auto& s : open) {
            drift = std::max(drift, std::abs(s.matrix().trace().real() - 1.0));
            min_eig = std::min(min_eig, numerics::eigh(s.matrix()).eigenvalues.minCoeff());
        }
        out.push_back(below("lindblad_trace_drift", drift, 1e-8));
        out.push_back(below("lindblad_negative_eigenvalue", -min_eig, 1e-8));

        const auto closed = dynamics::evolve_lindblad(rho0, std::cref(h), {}, span, integrator, 0.5);
        double diff = 0.0;
        for (std::size_t i = 0; i < closed.size() && i < tdse.size(); ++i) {
            diff = std::max(diff, state_distance(closed[i], tdse[i]));
        }
        out.push_back(below("closed_lindblad_matches_tdse", diff, 1e-6));
    }

    // Constant Hamiltonian: integrator against the spectral propagator.
    {
        const Operator h_static = h.at(drive.flux_a, 0.0);
        auto constant = [&h_static](double) { return h_static; };
        const double horizon = std::min(span, 200.0);
        const auto traj = dynamics::evolve_tdse(initial, constant, horizon, ramp.integrator, 1.0);
        const Operator u = numerics::propagator(h_static, horizon);
        const StateVector exact = u * initial.vector();
        out.push_back(below("tdse_matches_propagator", (traj.back().vector() - exact).cwiseAbs().maxCoeff(), 1e-6));
    }

    // Single damped oscillator against <n>(t) = M + (n0 - M) e^{-γt}.
    {
        const numerics::Index n = 8;
        const Operator a = circuit::ladder(n);
        const Operator num = a.adjoint() * a;
        const double gamma = 0.02;
        const double m = 0.05;
        const auto channels = dynamics::thermal_channels(a, gamma, m);
        StateVector one = StateVector::Zero(n);
        one(1) = 1.0;
        const QuantumState rho0 = QuantumState::mixed(one * one.adjoint(), {n, 1});
        auto ho = [&num](double) { return num; };
        const auto traj = dynamics::evolve_lindblad(rho0, ho, channels, 300.0, ramp.integrator, 10.0);
        double rel = 0.0;
        for (const auto& s : traj) {
            const double expected = m + (1.0 - m) * std::exp(-gamma * s.time());
            rel = std::max(rel, std::abs((num * s.matrix()).trace().real() - expected) / expected);
        }
        out.push_back(below("thermal_relaxation_relative_error", rel, 0.01));
    }

    {
        double gap = 0.0;
        for (const auto& s : tdse) {
            const auto idx = observables::entanglement_indices(s);
            gap = std::max(gap, std::abs(idx.field - idx.ring));
        }
        out.push_back(below("pure_state_index_symmetry", gap, 1e-8));
    }

    {
        const auto base = experiments::run_ramp(ramp, model);
        auto larger = settings.truncation;
        larger.field_dim = std::max<numerics::Index>(larger.field_dim, 6);
        larger.ring_dim = std::max<numerics::Index>(larger.ring_dim, 6);
        const auto big_model = circuit::truncate_to_eigenbasis(settings.circuit, drive, larger);
        const auto big = experiments::run_ramp(ramp, big_model);
        out.push_back(below("truncation_plateau_entanglement_shift",
                            std::abs(base.plateau.ent_mag.mean - big.plateau.ent_mag.mean), 0.02));
    }
    return out;
}

}  // namespace squidqed::validation
