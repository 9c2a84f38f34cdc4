#include "squidqed/observables.hpp"

#include "squidqed/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace squidqed::observables {

using numerics::Complex;
using numerics::Operator;

namespace {

void check_dims(const QuantumState& state, const LabeledBasis& basis)
{
    if (state.dims() != basis.dims) {
        throw ContractViolation("state and basis dimensions differ");
    }
}

Complex amplitude(const StateVector& bra, const StateVector& psi)
{
    return bra.dot(psi);
}

Complex matrix_element(const StateVector& bra, const Operator& rho, const StateVector& ket)
{
    return bra.dot(rho * ket);
}

double expectation(const QuantumState& state, const Operator& op)
{
    if (state.is_pure()) {
        const auto& psi = state.vector();
        return psi.dot(op * psi).real();
    }
    return (op * state.matrix()).trace().real();
}

}  // namespace

const StateVector& LabeledBasis::state(Index field_level, Index ring_level) const
{
    if (field_level < 0 || field_level >= dims.field || ring_level < 0 || ring_level >= dims.ring) {
        throw ContractViolation("label |" + std::to_string(field_level) + "e " + std::to_string(ring_level) +
                                "s> outside the truncated basis");
    }
    return states[static_cast<std::size_t>(index_of(field_level, ring_level))];
}

LabeledBasis labeled_basis(const circuit::TruncatedModel& model, double flux)
{
    const Index de = model.dims.field;
    const Index ds = model.dims.ring;
    const auto ring = numerics::eigh(circuit::build_hs(model, flux, 0.0)).eigenvectors;

    LabeledBasis basis;
    basis.dims = model.dims;
    basis.flux_at_labeling = flux;
    basis.states.reserve(static_cast<std::size_t>(de * ds));
    for (Index n = 0; n < de; ++n) {
        StateVector fock = StateVector::Zero(de);
        fock(n) = 1.0;
        for (Index m = 0; m < ds; ++m) {
            basis.states.push_back(numerics::kron(fock, ring.col(m)));
        }
    }
    return basis;
}

std::vector<double> basis_probabilities(const QuantumState& state, const LabeledBasis& basis)
{
    check_dims(state, basis);
    std::vector<double> p;
    p.reserve(basis.states.size());
    if (state.is_pure()) {
        for (const auto& b : basis.states) {
            p.push_back(std::norm(amplitude(b, state.vector())));
        }
    } else {
        for (const auto& b : basis.states) {
            p.push_back(matrix_element(b, state.matrix(), b).real());
        }
    }
    return p;
}

double component_energy(const QuantumState& state, Component which, const circuit::TruncatedModel& model,
                        double flux)
{
    const Index de = model.dims.field;
    const Index ds = model.dims.ring;
    if (state.dims() != model.dims) {
        throw ContractViolation("state and model dimensions differ");
    }
    const Operator op = which == Component::field
                            ? numerics::kron(circuit::build_he(model), Operator::Identity(ds, ds))
                            : numerics::kron(Operator::Identity(de, de), circuit::build_hs(model, flux, 0.0));
    return expectation(state, op);
}

TimeAverage time_average(std::span<const double> times, std::span<const double> values)
{
    if (times.size() != values.size() || times.size() < 3) {
        throw ContractViolation("time_average: need at least three matching samples");
    }
    auto trapezoid = [&](std::size_t last) {
        double sum = 0.0;
        for (std::size_t k = 1; k <= last; ++k) {
            sum += 0.5 * (values[k] + values[k - 1]) * (times[k] - times[k - 1]);
        }
        return sum / (times[last] - times[0]);
    };
    TimeAverage out;
    out.value = trapezoid(times.size() - 1);
    out.half_value = trapezoid((times.size() - 1) / 2);
    const double scale = std::max(std::abs(out.value), 1e-300);
    out.converged = std::abs(out.value - out.half_value) < 0.01 * scale;
    return out;
}

TimeAverage time_averaged_energy(std::span<const QuantumState> trajectory, Component which,
                                 const circuit::TruncatedModel& model, double flux)
{
    const Index de = model.dims.field;
    const Index ds = model.dims.ring;
    const Operator op = which == Component::field
                            ? numerics::kron(circuit::build_he(model), Operator::Identity(ds, ds))
                            : numerics::kron(Operator::Identity(de, de), circuit::build_hs(model, flux, 0.0));
    std::vector<double> times;
    std::vector<double> values;
    times.reserve(trajectory.size());
    values.reserve(trajectory.size());
    for (const auto& s : trajectory) {
        times.push_back(s.time());
        values.push_back(expectation(s, op));
    }
    return time_average(times, values);
}

double EntanglementIndices::magnitude() const
{
    return std::min(-field, -ring);
}

EntanglementIndices entanglement_indices(const QuantumState& state)
{
    const Operator rho = state.density();
    const double s_total = state.is_pure() ? 0.0 : numerics::vn_entropy(rho);
    EntanglementIndices out;
    out.field = s_total - numerics::vn_entropy(numerics::partial_trace(rho, state.dims(), Component::field));
    out.ring = s_total - numerics::vn_entropy(numerics::partial_trace(rho, state.dims(), Component::ring));
    return out;
}

double purity(const QuantumState& state)
{
    if (state.is_pure()) {
        return std::pow(state.vector().squaredNorm(), 2);
    }
    const auto& rho = state.matrix();
    return (rho * rho).trace().real();
}

double bell_fidelity(const QuantumState& state, const LabeledBasis& basis)
{
    check_dims(state, basis);
    const StateVector& b10 = basis.state(1, 0);
    const StateVector& b01 = basis.state(0, 1);
    if (state.is_pure()) {
        const double c10 = std::abs(amplitude(b10, state.vector()));
        const double c01 = std::abs(amplitude(b01, state.vector()));
        return 0.5 * (c10 + c01) * (c10 + c01);
    }
    const auto& rho = state.matrix();
    const double r11 = matrix_element(b10, rho, b10).real();
    const double r22 = matrix_element(b01, rho, b01).real();
    const double r12 = std::abs(matrix_element(b10, rho, b01));
    return std::clamp(0.5 * (r11 + r22) + r12, 0.0, 1.0);
}

TimeSeriesRecord observe(const QuantumState& state, const circuit::TruncatedModel& model,
                         const circuit::FluxDrive& drive, Labeling labeling)
{
    const double t = state.time();
    const double flux = drive.value(t);
    const LabeledBasis basis =
        labeled_basis(model, labeling == Labeling::instantaneous ? flux : model.ring_ref_flux);
    const auto p = basis_probabilities(state, basis);
    const auto ent = entanglement_indices(state);

    TimeSeriesRecord r;
    r.t = t;
    r.p_10 = p[static_cast<std::size_t>(basis.index_of(1, 0))];
    r.p_01 = p[static_cast<std::size_t>(basis.index_of(0, 1))];
    r.i_e = ent.field;
    r.i_s = ent.ring;
    r.ent_mag = ent.magnitude();
    r.e_e = component_energy(state, Component::field, model, flux);
    r.e_s = component_energy(state, Component::ring, model, flux);
    r.purity = purity(state);
    r.fidelity = bell_fidelity(state, basis);
    return r;
}

}  // namespace squidqed::observables
