#include "oracles.hpp"
#include "squidqed/circuit.hpp"
#include "squidqed/errors.hpp"
#include "squidqed/observables.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace squidqed;
using namespace squidqed::observables;
using circuit::TruncatedModel;
using dynamics::QuantumState;
using numerics::Complex;
using numerics::Operator;

namespace {

const TruncatedModel& model()
{
    static const TruncatedModel m =
        circuit::truncate_to_eigenbasis(circuit::CircuitParams::defaults(), circuit::default_resonance_flux);
    return m;
}

const LabeledBasis& basis_at_a()
{
    static const LabeledBasis b = labeled_basis(model(), circuit::default_resonance_flux);
    return b;
}

StateVector bell(double phase = 0.0)
{
    const auto& b = basis_at_a();
    return (b.state(1, 0) + std::polar(1.0, phase) * b.state(0, 1)) / std::sqrt(2.0);
}

// max over φ of ⟨Ψφ|ρ|Ψφ⟩ by dense phase scan.
double fidelity_scan(const Operator& rho)
{
    double best = 0.0;
    for (int k = 0; k < 3600; ++k) {
        const StateVector psi = bell(2.0 * std::numbers::pi * k / 3600.0);
        best = std::max(best, psi.dot(rho * psi).real());
    }
    return best;
}

}  // namespace

TEST_CASE("labelled basis is orthonormal and diagonalises Hs at the labelling flux")
{
    const auto& b = basis_at_a();
    REQUIRE(b.states.size() == 16);
    for (std::size_t i = 0; i < b.states.size(); ++i) {
        for (std::size_t j = 0; j < b.states.size(); ++j) {
            CHECK(std::abs(b.states[i].dot(b.states[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
        }
    }
    CHECK(b.index_of(1, 0) == 4);
    CHECK_THROWS_AS(b.state(4, 0), ContractViolation);
    CHECK_THROWS_AS(b.state(0, -1), ContractViolation);

    const auto s = QuantumState::pure(b.state(1, 0), model().dims);
    CHECK(component_energy(s, numerics::Component::field, model(), circuit::default_resonance_flux) ==
          doctest::Approx(1.5).epsilon(1e-12));
    CHECK(component_energy(s, numerics::Component::ring, model(), circuit::default_resonance_flux) ==
          doctest::Approx(0.66764732).epsilon(1e-7));
}

TEST_CASE("maximally entangled single-excitation state")
{
    const auto s = QuantumState::pure(bell(0.4), model().dims);
    const auto p = basis_probabilities(s, basis_at_a());
    CHECK(p[4] == doctest::Approx(0.5));
    CHECK(p[1] == doctest::Approx(0.5));
    const auto ent = entanglement_indices(s);
    CHECK(ent.field == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
    CHECK(ent.ring == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
    CHECK(ent.magnitude() == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(bell_fidelity(s, basis_at_a()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(purity(s) == doctest::Approx(1.0));
}

TEST_CASE("product and classically correlated states")
{
    const auto& b = basis_at_a();
    const auto product = QuantumState::pure(b.state(1, 0), model().dims);
    CHECK(std::abs(entanglement_indices(product).field) < 1e-12);
    CHECK(bell_fidelity(product, b) == doctest::Approx(0.5));

    // Equal mixture of |1e0s⟩ and |0e1s⟩: S(ρ) = S(ρe) = S(ρs) = ln 2.
    const Operator rho = 0.5 * (b.state(1, 0) * b.state(1, 0).adjoint() + b.state(0, 1) * b.state(0, 1).adjoint());
    const auto mixed = QuantumState::mixed(rho, model().dims);
    CHECK(std::abs(entanglement_indices(mixed).field) < 1e-10);
    CHECK(std::abs(entanglement_indices(mixed).ring) < 1e-10);
    CHECK(bell_fidelity(mixed, b) == doctest::Approx(0.5));
    CHECK(purity(mixed) == doctest::Approx(0.5));
}

TEST_CASE("property: Bell fidelity equals a brute-force phase maximum")
{
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> weight(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const StateVector psi = bell(weight(rng) * 6.0);
        const double p = weight(rng);
        const Operator rho = p * psi * psi.adjoint() + (1.0 - p) * oracles::random_density(16, rng);
        const auto s = QuantumState::mixed(rho, model().dims);
        CHECK(std::abs(bell_fidelity(s, basis_at_a()) - fidelity_scan(rho)) < 1e-5);
    }
}

TEST_CASE("property: pure global states have equal indices")
{
    std::mt19937 rng(15);
    for (int trial = 0; trial < 25; ++trial) {
        const auto s = QuantumState::pure(oracles::random_state(16, rng), model().dims);
        const auto ent = entanglement_indices(s);
        CHECK(std::abs(ent.field - ent.ring) < 1e-9);
        CHECK(ent.field <= 1e-12);
        CHECK(ent.magnitude() <= std::log(4.0) + 1e-12);
    }
}

TEST_CASE("property: mixed product states give I_e = S(ρs) and I_s = S(ρe)")
{
    std::mt19937 rng(16);
    for (int trial = 0; trial < 10; ++trial) {
        const Operator re = oracles::random_density(4, rng);
        const Operator rs = oracles::random_density(4, rng);
        const auto s = QuantumState::mixed(numerics::kron(re, rs), model().dims);
        const auto ent = entanglement_indices(s);
        CHECK(ent.field == doctest::Approx(numerics::vn_entropy(rs)).epsilon(1e-9));
        CHECK(ent.ring == doctest::Approx(numerics::vn_entropy(re)).epsilon(1e-9));
    }
}

TEST_CASE("time average")
{
    std::vector<double> t;
    std::vector<double> sin2;
    std::vector<double> ramp;
    for (int k = 0; k <= 4000; ++k) {
        t.push_back(0.01 * k);
        sin2.push_back(std::pow(std::sin(std::numbers::pi * t.back()), 2));
        ramp.push_back(t.back());
    }
    const auto a = time_average(t, sin2);
    CHECK(a.value == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(a.half_value == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(a.converged);
    const auto r = time_average(t, ramp);
    CHECK(r.value == doctest::Approx(20.0));
    CHECK(r.half_value == doctest::Approx(10.0));
    CHECK_FALSE(r.converged);
    const std::vector<double> two{0.0, 1.0};
    CHECK_THROWS_AS(time_average(two, two), ContractViolation);
}

TEST_CASE("observe assembles a consistent record")
{
    const auto s = QuantumState::pure(bell(), model().dims, 100.0);
    const circuit::FluxDrive drive;
    const auto r = observe(s, model(), drive);
    CHECK(r.t == 100.0);
    CHECK(r.p_10 == doctest::Approx(0.5));
    CHECK(r.p_01 == doctest::Approx(0.5));
    CHECK(r.ent_mag == doctest::Approx(std::log(2.0)));
    CHECK(r.fidelity == doctest::Approx(1.0));
    CHECK(r.purity == doctest::Approx(1.0));
    CHECK(r.e_e == doctest::Approx(1.0).epsilon(1e-12));

    SUBCASE("frozen and instantaneous labelling differ only after the ramp")
    {
        const auto late = QuantumState::pure(bell(), model().dims, 500.0);
        const auto inst = observe(late, model(), drive, Labeling::instantaneous);
        const auto frozen = observe(late, model(), drive, Labeling::frozen);
        CHECK(frozen.p_10 == doctest::Approx(0.5));
        CHECK(std::abs(inst.p_01 - frozen.p_01) > 1e-3);
        CHECK(inst.ent_mag == doctest::Approx(frozen.ent_mag));
        CHECK(observe(s, model(), drive, Labeling::frozen).p_01 == doctest::Approx(r.p_01).epsilon(1e-12));
    }
}

TEST_CASE("dimension mismatches are contract violations")
{
    const auto other = QuantumState::pure(StateVector::Unit(9, 0), {3, 3});
    CHECK_THROWS_AS(basis_probabilities(other, basis_at_a()), ContractViolation);
    CHECK_THROWS_AS(component_energy(other, numerics::Component::field, model(), 0.4), ContractViolation);
    CHECK_THROWS_AS(bell_fidelity(other, basis_at_a()), ContractViolation);
}
