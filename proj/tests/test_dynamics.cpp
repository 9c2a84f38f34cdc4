#include "oracles.hpp"
#include "squidqed/circuit.hpp"
#include "squidqed/dynamics.hpp"
#include "squidqed/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace squidqed;
using namespace squidqed::dynamics;
using numerics::Complex;
using numerics::Index;
using numerics::Operator;

namespace {

const Dims qubit{1, 2};

Operator sigma_x()
{
    Operator s(2, 2);
    s << 0, 1, 1, 0;
    return s;
}

Operator sigma_z()
{
    Operator s(2, 2);
    s << 1, 0, 0, -1;
    return s;
}

StateVector basis(Index n, Index k)
{
    StateVector v = StateVector::Zero(n);
    v(k) = 1.0;
    return v;
}

IntegratorConfig rk4(double dt = 0.005)
{
    IntegratorConfig c;
    c.method = Method::rk4;
    c.dt = dt;
    return c;
}

}  // namespace

TEST_CASE("output grid")
{
    const auto g = output_grid(0.0, 2.0, 0.5);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 2.0);
    const auto uneven = output_grid(1.0, 2.2, 0.5);
    REQUIRE(uneven.size() == 4);
    CHECK(uneven.back() == 2.2);
    CHECK(output_grid(3.0, 3.0, 0.5).size() == 1);
    CHECK_THROWS_AS(output_grid(2.0, 1.0, 0.5), ContractViolation);
    CHECK_THROWS_AS(output_grid(0.0, 1.0, 0.0), ContractViolation);
}

TEST_CASE("quantum state contracts")
{
    CHECK_THROWS_AS(QuantumState::pure(2.0 * basis(2, 0), qubit), ContractViolation);
    CHECK_THROWS_AS(QuantumState::pure(basis(3, 0), qubit), ContractViolation);
    Operator rho = Operator::Zero(2, 2);
    rho(0, 0) = 1.2;
    rho(1, 1) = -0.2;
    CHECK_THROWS_AS(QuantumState::mixed(rho, qubit), PositivityViolation);
    rho(0, 0) = 0.7;
    rho(1, 1) = 0.7;
    CHECK_THROWS_AS(QuantumState::mixed(rho, qubit), ContractViolation);
    rho(1, 1) = 0.3;
    rho(0, 1) = 0.1;
    CHECK_THROWS_AS(QuantumState::mixed(rho, qubit), ContractViolation);

    const auto pure = QuantumState::pure(basis(2, 1), qubit, 4.0);
    CHECK(pure.is_pure());
    CHECK(pure.time() == 4.0);
    CHECK(pure.density()(1, 1).real() == 1.0);
    CHECK_THROWS_AS(pure.matrix(), ContractViolation);
    CHECK_THROWS_AS(QuantumState::mixed(pure.density(), qubit).vector(), ContractViolation);
}

TEST_CASE("thermal occupation")
{
    const double ws = 1.0 / std::sqrt(3e-26);
    CHECK(thermal_occupation(4.2, ws) == doctest::Approx(2.7541427979447616e-05).epsilon(1e-9));
    // High-temperature limit kT/ħω − 1/2.
    const double x = circuit::constants::hbar * ws / circuit::constants::boltzmann;
    CHECK(thermal_occupation(1000.0 * x, ws) == doctest::Approx(1000.0 - 0.5).epsilon(1e-6));
    CHECK_THROWS_AS(thermal_occupation(0.0, ws), ContractViolation);

    const auto b = BathParams::defaults(circuit::CircuitParams::defaults());
    CHECK(b.temperature == 4.2);
    CHECK(b.frequency == doctest::Approx(ws));
    CHECK(b.mean_photon_number() == doctest::Approx(2.7541427979447616e-05).epsilon(1e-9));
}

TEST_CASE("thermal channels")
{
    const Operator a = circuit::ladder(3);
    const auto ch = thermal_channels(a, 0.1, 0.5);
    REQUIRE(ch.size() == 2);
    CHECK(ch[0].rate == doctest::Approx(0.15));
    CHECK(ch[1].rate == doctest::Approx(0.05));
    CHECK(ch[1].op.isApprox(a.adjoint()));
    CHECK(thermal_channels(a, 0.0, 0.5).empty());
    CHECK(thermal_channels(a, 0.1, 0.0).size() == 1);
}

TEST_CASE("TDSE: Rabi oscillation against sin²(Ωt/2)")
{
    const double omega = 0.8;
    const HamiltonianFn h = [&](double) -> Operator { return 0.5 * omega * sigma_x(); };
    const auto initial = QuantumState::pure(basis(2, 0), qubit);
    for (const auto& cfg : {rk4(), IntegratorConfig{}}) {
        const auto traj = evolve_tdse(initial, h, 20.0, cfg, 0.5);
        REQUIRE(traj.size() == 41);
        double worst = 0.0;
        for (const auto& s : traj) {
            const double p1 = std::norm(s.vector()(1));
            worst = std::max(worst, std::abs(p1 - std::pow(std::sin(0.5 * omega * s.time()), 2)));
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("TDSE: linearly chirped σz phase e^{∓iαt²/4}")
{
    const double alpha = 0.3;
    const HamiltonianFn h = [&](double t) -> Operator { return 0.5 * alpha * t * sigma_z(); };
    StateVector psi(2);
    psi << 1.0, 1.0;
    psi /= std::sqrt(2.0);
    const auto traj = evolve_tdse(QuantumState::pure(psi, qubit), h, 10.0, IntegratorConfig{}, 1.0);
    for (const auto& s : traj) {
        const double phase = alpha * s.time() * s.time() / 4.0;
        CHECK(std::abs(s.vector()(0) - std::polar(1.0 / std::sqrt(2.0), -phase)) < 1e-8);
        CHECK(std::abs(s.vector()(1) - std::polar(1.0 / std::sqrt(2.0), phase)) < 1e-8);
    }
}

TEST_CASE("TDSE: piecewise Hamiltonian with a breakpoint matches stepwise matrix exponentials")
{
    std::mt19937 rng(12);
    const Operator h1 = oracles::random_hermitian(5, rng);
    const Operator h2 = oracles::random_hermitian(5, rng);
    const double tb = 1.3;
    const HamiltonianFn h = [&](double t) -> Operator { return t <= tb ? h1 : h2; };
    const StateVector psi0 = oracles::random_state(5, rng);
    for (auto cfg : {rk4(0.001), IntegratorConfig{}}) {
        cfg.breakpoints = {tb};
        const auto traj = evolve_tdse(QuantumState::pure(psi0, {1, 5}), h, 3.0, cfg, 3.0);
        const StateVector expected = oracles::expm_propagator(h2, 3.0 - tb) * oracles::expm_propagator(h1, tb) * psi0;
        CHECK((traj.back().vector() - expected).norm() < 1e-8);
    }
}

TEST_CASE("TDSE: non-Hermitian generator trips the norm monitor")
{
    const HamiltonianFn h = [](double) -> Operator { return Complex(0.0, -0.1) * Operator::Identity(2, 2); };
    try {
        evolve_tdse(QuantumState::pure(basis(2, 0), qubit), h, 10.0, rk4(), 0.5);
        FAIL("expected IntegratorError");
    } catch (const IntegratorError& e) {
        CHECK(e.time() > 0.0);
        CHECK(e.time() <= 10.0);
    }
}

TEST_CASE("TDSE starting at a nonzero time")
{
    const HamiltonianFn h = [](double) -> Operator { return sigma_x(); };
    const auto traj = evolve_tdse(QuantumState::pure(basis(2, 0), qubit, 5.0), h, 6.0, IntegratorConfig{}, 0.25);
    CHECK(traj.front().time() == 5.0);
    CHECK(traj.back().time() == 6.0);
    CHECK(std::norm(traj.back().vector()(1)) == doctest::Approx(std::pow(std::sin(1.0), 2)).epsilon(1e-9));
}

TEST_CASE("Lindblad: two-level amplitude damping")
{
    const double gamma = 0.2;
    Operator lower = Operator::Zero(2, 2);
    lower(0, 1) = 1.0;  // |0⟩⟨1|
    const std::vector<CollapseChannel> ch{{lower, gamma}};
    Operator rho(2, 2);
    rho << 0.25, 0.25, 0.25, 0.75;
    const HamiltonianFn h = [](double) -> Operator { return Operator::Zero(2, 2); };
    for (const auto& cfg : {rk4(), IntegratorConfig{}}) {
        const auto traj = evolve_lindblad(QuantumState::mixed(rho, qubit), h, ch, 10.0, cfg, 1.0);
        for (const auto& s : traj) {
            const double t = s.time();
            CHECK(std::abs(s.matrix()(1, 1).real() - 0.75 * std::exp(-gamma * t)) < 1e-9);
            CHECK(std::abs(s.matrix()(0, 1) - Complex(0.25 * std::exp(-0.5 * gamma * t), 0.0)) < 1e-9);
        }
    }
}

TEST_CASE("Lindblad: thermal oscillator relaxes as M + (n0 − M) e^{−γt}")
{
    const Index n = 10;
    const double gamma = 0.1;
    const double m = 0.2;
    const Operator a = circuit::ladder(n);
    const Operator number = a.adjoint() * a;
    Operator h = Operator::Zero(n, n);
    for (Index k = 0; k < n; ++k) {
        h(k, k) = static_cast<double>(k) + 0.5;
    }
    const HamiltonianFn hf = [&](double) -> Operator { return h; };
    const auto ch = thermal_channels(a, gamma, m);
    const auto traj =
        evolve_lindblad(QuantumState::pure(basis(n, 1), {1, n}), hf, ch, 40.0, IntegratorConfig{}, 5.0);
    for (const auto& s : traj) {
        const double expected = m + (1.0 - m) * std::exp(-gamma * s.time());
        CHECK(std::abs((number * s.matrix()).trace().real() - expected) < 1e-4);
    }
}

TEST_CASE("property: closed-system Lindblad reproduces |ψ⟩⟨ψ| from the TDSE")
{
    std::mt19937 rng(77);
    const Operator h0 = oracles::random_hermitian(6, rng);
    const Operator h1 = oracles::random_hermitian(6, rng);
    const HamiltonianFn h = [&](double t) -> Operator { return h0 + std::sin(0.7 * t) * h1; };
    const StateVector psi0 = oracles::random_state(6, rng);
    const auto pure = evolve_tdse(QuantumState::pure(psi0, {2, 3}), h, 8.0, IntegratorConfig{}, 1.0);
    const auto mixed = evolve_lindblad(QuantumState::pure(psi0, {2, 3}), h, {}, 8.0, IntegratorConfig{}, 1.0);
    REQUIRE(pure.size() == mixed.size());
    for (std::size_t k = 0; k < pure.size(); ++k) {
        CHECK((pure[k].density() - mixed[k].matrix()).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("property: Lindblad with random channels keeps trace, Hermiticity and positivity")
{
    std::mt19937 rng(4);
    for (int trial = 0; trial < 4; ++trial) {
        const Operator h0 = oracles::random_hermitian(4, rng);
        std::vector<CollapseChannel> ch;
        for (int k = 0; k < 3; ++k) {
            ch.push_back({oracles::random_hermitian(4, rng) + Complex(0, 1) * oracles::random_hermitian(4, rng), 0.05});
        }
        const HamiltonianFn h = [&](double) -> Operator { return h0; };
        const auto traj =
            evolve_lindblad(QuantumState::mixed(oracles::random_density(4, rng), {2, 2}), h, ch, 20.0, IntegratorConfig{}, 2.0);
        for (const auto& s : traj) {
            CHECK(std::abs(s.matrix().trace().real() - 1.0) < 1e-9);
            CHECK(numerics::hermiticity_error(s.matrix()) < 1e-14);
            CHECK(numerics::eigh(s.matrix()).eigenvalues.minCoeff() > -1e-9);
        }
    }
}

TEST_CASE("Lindblad rejects malformed channels")
{
    const HamiltonianFn h = [](double) -> Operator { return Operator::Zero(2, 2); };
    const auto rho = QuantumState::pure(basis(2, 0), qubit);
    const std::vector<CollapseChannel> wrong_dim{{Operator::Identity(3, 3), 0.1}};
    CHECK_THROWS_AS(evolve_lindblad(rho, h, wrong_dim, 1.0, IntegratorConfig{}, 0.5), ContractViolation);
    const std::vector<CollapseChannel> negative{{sigma_x(), -0.1}};
    CHECK_THROWS_AS(evolve_lindblad(rho, h, negative, 1.0, IntegratorConfig{}, 0.5), ContractViolation);
    IntegratorConfig bad;
    bad.rtol = 0.0;
    CHECK_THROWS_AS(evolve_lindblad(rho, h, {}, 1.0, bad, 0.5), ContractViolation);
}

TEST_CASE("static evolution agrees with the integrator and the Padé oracle")
{
    std::mt19937 rng(21);
    const Operator h = oracles::random_hermitian(6, rng);
    const StateVector psi0 = oracles::random_state(6, rng);
    const std::vector<double> times{0.0, 0.5, 3.0, 7.25};
    const auto exact = evolve_static(QuantumState::pure(psi0, {2, 3}), h, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK((exact[k].vector() - oracles::expm_propagator(h, times[k]) * psi0).norm() < 1e-10);
    }
    const HamiltonianFn hf = [&](double) -> Operator { return h; };
    const auto integrated = evolve_tdse(QuantumState::pure(psi0, {2, 3}), hf, 7.25, IntegratorConfig{}, 7.25);
    CHECK((integrated.back().vector() - exact.back().vector()).norm() < 1e-8);

    const Operator rho0 = oracles::random_density(6, rng);
    const auto mixed = evolve_static(QuantumState::mixed(rho0, {2, 3}), h, times);
    const Operator u = oracles::expm_propagator(h, 3.0);
    CHECK((mixed[2].matrix() - u * rho0 * u.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
}
