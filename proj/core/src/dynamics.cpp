#include "squidqed/dynamics.hpp"

#include "integrators.hpp"
#include "squidqed/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace squidqed::dynamics {

using numerics::Complex;
using numerics::Index;

namespace {

void check_dims(Index n, Dims dims)
{
    if (n != dims.total()) {
        throw ContractViolation("state dimension " + std::to_string(n) + " does not match " +
                                std::to_string(dims.field) + "x" + std::to_string(dims.ring));
    }
}

// Merge output times and breakpoints into the ordered list of places where
// an integration segment must end.
std::vector<double> segment_stops(const std::vector<double>& outputs, const std::vector<double>& breakpoints)
{
    std::vector<double> stops(outputs.begin() + 1, outputs.end());
    const double t_start = outputs.front();
    const double t_end = outputs.back();
    for (double b : breakpoints) {
        if (b > t_start && b < t_end) {
            stops.push_back(b);
        }
    }
    std::sort(stops.begin(), stops.end());
    const double tol = 1e-12 * std::max(1.0, std::abs(t_end));
    stops.erase(std::unique(stops.begin(), stops.end(), [tol](double a, double b) { return std::abs(a - b) <= tol; }),
                stops.end());
    return stops;
}

template <class State, class Rhs, class AfterStep, class Record>
void integrate(State& y, const std::vector<double>& outputs, const IntegratorConfig& config, Rhs&& rhs,
               AfterStep&& after_step, Record&& record)
{
    const std::vector<double> stops = segment_stops(outputs, config.breakpoints);
    detail::DormandPrince dopri(config.rtol, config.atol, config.initial_step);
    std::size_t next_output = 1;
    double t = outputs.front();
    record(t, y);
    for (double stop : stops) {
        // Stages at the segment start see the right-hand limit of H(t), so a
        // jump in the drive rate at a breakpoint is taken on the correct side.
        const double inner = t + 1e-12 * std::max(1.0, std::abs(t));
        auto segment_rhs = [&](double s, const State& state, State& deriv) { rhs(std::max(s, inner), state, deriv); };
        if (config.method == Method::rk4) {
            detail::rk4_advance(y, t, stop, config.dt, segment_rhs, after_step);
        } else {
            dopri.advance(y, t, stop, segment_rhs, after_step);
        }
        t = stop;
        const double tol = 1e-12 * std::max(1.0, std::abs(t));
        if (next_output < outputs.size() && std::abs(outputs[next_output] - t) <= tol) {
            record(outputs[next_output], y);
            ++next_output;
        }
    }
}

void validate_config(const IntegratorConfig& config)
{
    if (config.method == Method::rk4 && !(config.dt > 0.0)) {
        throw ContractViolation("integrator dt must be positive");
    }
    if (config.method == Method::adaptive && !(config.rtol > 0.0 && config.atol >= 0.0 && config.initial_step > 0.0)) {
        throw ContractViolation("integrator tolerances must be positive");
    }
}

}  // namespace

QuantumState QuantumState::pure(StateVector psi, Dims dims, double t, double norm_tol)
{
    check_dims(psi.size(), dims);
    const double drift = std::abs(psi.norm() - 1.0);
    if (drift > norm_tol) {
        throw ContractViolation("pure state norm differs from 1 by " + std::to_string(drift));
    }
    return QuantumState(std::move(psi), dims, t);
}

QuantumState QuantumState::mixed(Operator rho, Dims dims, double t, double trace_tol, double positivity_tol)
{
    if (rho.rows() != rho.cols()) {
        throw ContractViolation("density operator is not square");
    }
    check_dims(rho.rows(), dims);
    const double drift = std::abs(rho.trace().real() - 1.0);
    if (drift > trace_tol) {
        throw ContractViolation("density operator trace differs from 1 by " + std::to_string(drift));
    }
    if (numerics::hermiticity_error(rho) > 1e-10) {
        throw ContractViolation("density operator is not Hermitian");
    }
    const double min_eig = numerics::eigh(rho).eigenvalues.minCoeff();
    if (min_eig < -positivity_tol) {
        throw PositivityViolation("density operator eigenvalue " + std::to_string(min_eig));
    }
    return QuantumState(std::move(rho), dims, t);
}

const StateVector& QuantumState::vector() const
{
    if (!is_pure()) {
        throw ContractViolation("state vector requested from a mixed state");
    }
    return std::get<StateVector>(data_);
}

const Operator& QuantumState::matrix() const
{
    if (is_pure()) {
        throw ContractViolation("density matrix requested from a pure state; use density()");
    }
    return std::get<Operator>(data_);
}

Operator QuantumState::density() const
{
    if (is_pure()) {
        const auto& psi = std::get<StateVector>(data_);
        return psi * psi.adjoint();
    }
    return std::get<Operator>(data_);
}

double thermal_occupation(double temperature, double frequency)
{
    if (!(temperature > 0.0) || !(frequency > 0.0)) {
        throw ContractViolation("thermal_occupation: temperature and frequency must be positive");
    }
    const double x = circuit::constants::hbar * frequency / (circuit::constants::boltzmann * temperature);
    return 1.0 / std::expm1(x);
}

void BathParams::validate() const
{
    if (!(gamma_field >= 0.0) || !(gamma_ring >= 0.0)) {
        throw ContractViolation("bath damping rates must be non-negative");
    }
    if (!(temperature > 0.0) || !(frequency > 0.0)) {
        throw ContractViolation("bath temperature and frequency must be positive");
    }
}

BathParams BathParams::defaults(const circuit::CircuitParams& circuit)
{
    BathParams b;
    b.frequency = circuit.ring_frequency();
    return b;
}

std::vector<CollapseChannel> thermal_channels(const Operator& a, double gamma, double mean_photons)
{
    std::vector<CollapseChannel> out;
    if (gamma > 0.0) {
        out.push_back({a, gamma * (mean_photons + 1.0)});
        if (mean_photons > 0.0) {
            out.push_back({a.adjoint(), gamma * mean_photons});
        }
    }
    return out;
}

std::vector<CollapseChannel> bath_channels(const circuit::TruncatedModel& model, const BathParams& baths)
{
    baths.validate();
    const double m = baths.mean_photon_number();
    const Index de = model.dims.field;
    const Index ds = model.dims.ring;
    const Operator a_field = numerics::kron(model.field.a, Operator::Identity(ds, ds));
    const Operator a_ring = numerics::kron(Operator::Identity(de, de), model.ring.a);
    auto out = thermal_channels(a_field, baths.gamma_field, m);
    auto ring = thermal_channels(a_ring, baths.gamma_ring, m);
    out.insert(out.end(), ring.begin(), ring.end());
    return out;
}

std::vector<double> output_grid(double t_start, double t_end, double spacing)
{
    if (!(t_end >= t_start)) {
        throw ContractViolation("output_grid: t_end precedes t_start");
    }
    if (!(spacing > 0.0)) {
        throw ContractViolation("output_grid: spacing must be positive");
    }
    std::vector<double> grid{t_start};
    const double tol = 1e-9 * spacing;
    for (long k = 1;; ++k) {
        const double t = t_start + static_cast<double>(k) * spacing;
        if (t >= t_end - tol) {
            break;
        }
        grid.push_back(t);
    }
    if (t_end > t_start) {
        grid.push_back(t_end);
    }
    return grid;
}

std::vector<QuantumState> evolve_tdse(const QuantumState& initial, const HamiltonianFn& hamiltonian, double t_end,
                                      const IntegratorConfig& config, double output_spacing)
{
    validate_config(config);
    const Dims dims = initial.dims();
    const double t_start = initial.time();
    StateVector y = initial.vector();
    const Index n = y.size();

    // Rotating frame at the initial energy; the global phase is put back on output.
    const double shift = y.dot(hamiltonian(t_start) * y).real();
    const Operator identity = Operator::Identity(n, n);

    auto rhs = [&](double t, const StateVector& psi, StateVector& dpsi) {
        dpsi.noalias() = Complex(0.0, -1.0) * ((hamiltonian(t) - shift * identity) * psi);
    };
    auto after_step = [](StateVector&) {};

    std::vector<QuantumState> out;
    const auto outputs = output_grid(t_start, t_end, output_spacing);
    out.reserve(outputs.size());
    integrate(y, outputs, config, rhs, after_step, [&](double t, const StateVector& psi) {
        const double drift = std::abs(psi.norm() - 1.0);
        if (drift > 1e-6) {
            throw IntegratorError("state norm drifted by " + std::to_string(drift), t);
        }
        out.push_back(QuantumState::pure(std::polar(1.0, -shift * (t - t_start)) * psi, dims, t, 1e-6));
    });
    return out;
}

std::vector<QuantumState> evolve_lindblad(const QuantumState& initial, const HamiltonianFn& hamiltonian,
                                          std::span<const CollapseChannel> channels, double t_end,
                                          const IntegratorConfig& config, double output_spacing)
{
    validate_config(config);
    const Dims dims = initial.dims();
    const Index n = dims.total();
    Operator y = initial.density();

    Operator damping = Operator::Zero(n, n);
    std::vector<std::pair<Operator, double>> jumps;
    for (const auto& ch : channels) {
        if (ch.op.rows() != n || ch.op.cols() != n) {
            throw ContractViolation("collapse operator dimension mismatch");
        }
        if (ch.rate < 0.0) {
            throw ContractViolation("collapse rate must be non-negative");
        }
        if (ch.rate == 0.0) {
            continue;
        }
        damping += 0.5 * ch.rate * (ch.op.adjoint() * ch.op);
        jumps.emplace_back(ch.op, ch.rate);
    }

    Operator generator(n, n);
    Operator scratch(n, n);
    auto rhs = [&](double t, const Operator& rho, Operator& drho) {
        generator = Complex(0.0, -1.0) * hamiltonian(t) - damping;
        scratch.noalias() = generator * rho;
        drho = scratch + scratch.adjoint();
        for (const auto& [op, rate] : jumps) {
            scratch.noalias() = rho * op.adjoint();
            drho.noalias() += rate * (op * scratch);
        }
    };
    auto after_step = [](Operator& rho) { rho = (0.5 * (rho + rho.adjoint())).eval(); };

    std::vector<QuantumState> out;
    const auto outputs = output_grid(initial.time(), t_end, output_spacing);
    out.reserve(outputs.size());
    integrate(y, outputs, config, rhs, after_step, [&](double t, const Operator& rho) {
        const double min_eig = numerics::eigh(rho).eigenvalues.minCoeff();
        if (min_eig < -1e-6) {
            throw IntegratorError("density operator lost positivity (eigenvalue " + std::to_string(min_eig) + ")", t);
        }
        const double drift = std::abs(rho.trace().real() - 1.0);
        if (drift > 1e-6) {
            throw IntegratorError("density operator trace drifted by " + std::to_string(drift), t);
        }
        out.push_back(QuantumState::mixed(rho, dims, t, 1e-6, 1e-6));
    });
    return out;
}

std::vector<QuantumState> evolve_static(const QuantumState& initial, const Operator& hamiltonian,
                                        std::span<const double> times)
{
    const Dims dims = initial.dims();
    const auto sd = numerics::eigh(hamiltonian);
    std::vector<QuantumState> out;
    out.reserve(times.size());
    if (initial.is_pure()) {
        const StateVector coeffs = sd.eigenvectors.adjoint() * initial.vector();
        for (double t : times) {
            StateVector phased(coeffs.size());
            for (Index k = 0; k < coeffs.size(); ++k) {
                phased(k) = coeffs(k) * std::polar(1.0, -sd.eigenvalues(k) * (t - initial.time()));
            }
            out.push_back(QuantumState::pure(sd.eigenvectors * phased, dims, t, 1e-6));
        }
        return out;
    }
    for (double t : times) {
        const Operator u = numerics::propagator(sd, t - initial.time());
        Operator rho = u * initial.matrix() * u.adjoint();
        out.push_back(QuantumState::mixed((0.5 * (rho + rho.adjoint())).eval(), dims, t, 1e-6, 1e-6));
    }
    return out;
}

}  // namespace squidqed::dynamics
