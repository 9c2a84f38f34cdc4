#pragma once

// Time evolution of the coupled system: Schrödinger equation for pure
// states and the thermal Lindblad master equation for density operators.

#include "squidqed/circuit.hpp"
#include "squidqed/numerics.hpp"

#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace squidqed::dynamics {

using numerics::Dims;
using numerics::Operator;
using numerics::StateVector;

/// Pure state vector or density operator on field ⊗ ring, stamped with time.
class QuantumState {
public:
    enum class Kind { pure, mixed };

    /// Throws ContractViolation unless | ‖ψ‖ − 1 | ≤ norm_tol.
    static QuantumState pure(StateVector psi, Dims dims, double t = 0.0, double norm_tol = 1e-8);
    /// Throws unless |Tr ρ − 1| ≤ trace_tol, ρ is Hermitian and its smallest
    /// eigenvalue is above −positivity_tol.
    static QuantumState mixed(Operator rho, Dims dims, double t = 0.0, double trace_tol = 1e-8,
                              double positivity_tol = 1e-8);

    Kind kind() const { return std::holds_alternative<StateVector>(data_) ? Kind::pure : Kind::mixed; }
    bool is_pure() const { return kind() == Kind::pure; }
    const StateVector& vector() const;
    const Operator& matrix() const;
    /// ρ for either kind.
    Operator density() const;
    Dims dims() const { return dims_; }
    double time() const { return t_; }

private:
    QuantumState(std::variant<StateVector, Operator> data, Dims dims, double t)
        : data_(std::move(data)), dims_(dims), t_(t) {}

    std::variant<StateVector, Operator> data_;
    Dims dims_;
    double t_;
};

/// M = 1 / (exp(ħω / kB T) − 1).
double thermal_occupation(double temperature, double frequency);

struct BathParams {
    double gamma_field = 0.0;   // γe, units of ωs
    double gamma_ring = 0.0;    // γs, units of ωs
    double temperature = 4.2;   // K
    double frequency = 0.0;     // ωb, rad/s

    double mean_photon_number() const { return thermal_occupation(temperature, frequency); }
    void validate() const;

    /// Zero damping, Tb = 4.2 K and ωb = ωs of `circuit`.
    static BathParams defaults(const circuit::CircuitParams& circuit);

    bool operator==(const BathParams&) const = default;
};

enum class Method { rk4, adaptive };

struct IntegratorConfig {
    Method method = Method::adaptive;
    double dt = 0.005;             // rk4 step, 1/ωs
    double rtol = 1e-9;            // adaptive relative tolerance
    double atol = 1e-12;           // adaptive absolute tolerance
    double initial_step = 0.01;    // adaptive first trial step
    std::vector<double> breakpoints;  // steps never straddle these times

    bool operator==(const IntegratorConfig&) const = default;
};

using HamiltonianFn = std::function<Operator(double)>;

/// L ρ L† − ½{L†L, ρ} weighted by rate.
struct CollapseChannel {
    Operator op;
    double rate = 0.0;
};

/// Emission channel a at γ(M+1) and absorption channel a† at γM.
std::vector<CollapseChannel> thermal_channels(const Operator& a, double gamma, double mean_photons);

/// Thermal channels for a_e ⊗ I and I ⊗ a_s, using the bare LC ladder
/// operators carried by the truncated model.
std::vector<CollapseChannel> bath_channels(const circuit::TruncatedModel& model, const BathParams& baths);

/// Output grid t_start, t_start + spacing, … , always ending on t_end.
std::vector<double> output_grid(double t_start, double t_end, double spacing);

/// i dψ/dt = H(t) ψ from initial.time() to t_end, sampled on output_grid().
/// Throws IntegratorError on step underflow or norm drift above 1e-6.
std::vector<QuantumState> evolve_tdse(const QuantumState& initial, const HamiltonianFn& hamiltonian, double t_end,
                                      const IntegratorConfig& config, double output_spacing);

/// dρ/dt = −i[H, ρ] + Σ_k rate_k (L_k ρ L_k† − ½{L_k†L_k, ρ}). Hermiticity is
/// re-imposed after every step. Throws IntegratorError when an output sample
/// has an eigenvalue below −1e-6.
std::vector<QuantumState> evolve_lindblad(const QuantumState& initial, const HamiltonianFn& hamiltonian,
                                          std::span<const CollapseChannel> channels, double t_end,
                                          const IntegratorConfig& config, double output_spacing);

/// Exact evolution under a time-independent H, evaluated at `times`
/// (absolute, ≥ initial.time()).
std::vector<QuantumState> evolve_static(const QuantumState& initial, const Operator& hamiltonian,
                                        std::span<const double> times);

}  // namespace squidqed::dynamics
