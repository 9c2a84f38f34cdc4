#include "oracles.hpp"
#include "squidqed/circuit.hpp"
#include "squidqed/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace squidqed;
using namespace squidqed::circuit;
using numerics::Complex;
using numerics::Operator;
using numerics::RealVector;

namespace {

CircuitParams uncalibrated()
{
    CircuitParams p;
    p.josephson_energy = josephson_energy_from_ratio(p.ring_inductance, p.flux_quantum);
    return p;
}

RealVector ring_spectrum(const CircuitParams& p, double flux, Index n = 40)
{
    const auto g = DimensionlessGroups::from(p);
    return numerics::eigh(ring_hamiltonian(ring_operators_fock(g, n), g, flux, 0.0)).eigenvalues;
}

}  // namespace

TEST_CASE("default circuit frequencies and dimensionless groups")
{
    const CircuitParams p = uncalibrated();
    CHECK(p.ring_frequency() == doctest::Approx(5.773502691896258e12).epsilon(1e-12));
    CHECK(p.field_frequency() == doctest::Approx(p.ring_frequency()).epsilon(1e-15));

    const auto g = DimensionlessGroups::from(p);
    CHECK(g.lambda_s == doctest::Approx(0.9182641402229019).epsilon(1e-12));
    CHECK(g.lambda_e == doctest::Approx(g.lambda_s).epsilon(1e-15));
    CHECK(g.nu == doctest::Approx(1.006613955813916).epsilon(1e-12));
    CHECK(g.coupling == doctest::Approx(0.005).epsilon(1e-12));
    CHECK(g.omega_ratio == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.drive_scale == doctest::Approx(3.421229813926083).epsilon(1e-12));
    // ηsΦ0/ħ = π/λs for this parametrisation.
    CHECK(g.drive_scale * g.lambda_s == doctest::Approx(constants::pi).epsilon(1e-12));
}

TEST_CASE("calibrated Josephson energy puts the ring 0→1 gap on the field frequency")
{
    const CircuitParams p = CircuitParams::defaults();
    const auto g = DimensionlessGroups::from(p);
    CHECK(g.nu == doctest::Approx(1.7391401984968).epsilon(1e-8));
    const RealVector e = ring_spectrum(p, default_resonance_flux);
    CHECK(std::abs(e(1) - e(0) - 1.0) < 1e-10);
    // Frozen levels from an independent dense diagonalisation.
    CHECK(e(0) == doctest::Approx(0.66764732).epsilon(1e-7));
    CHECK(e(1) == doctest::Approx(1.66764732).epsilon(1e-7));
    CHECK(e(2) == doctest::Approx(2.15022006).epsilon(1e-7));
    CHECK(e(3) == doctest::Approx(3.03459631).epsilon(1e-7));
}

TEST_CASE("uncalibrated Josephson energy leaves the ring off resonance at A")
{
    const RealVector e = ring_spectrum(uncalibrated(), default_resonance_flux);
    CHECK(std::abs(e(1) - e(0) - 1.0) > 0.1);
}

TEST_CASE("calibration rejects an impossible target")
{
    CircuitParams p;
    p.field_inductance = 3e-12;  // ωe = 10 ωs, out of reach
    CHECK_THROWS_AS(calibrate_josephson_energy(p), ConvergenceError);
}

TEST_CASE("parameter validation names the offending field")
{
    CircuitParams p = uncalibrated();
    p.ring_capacitance = -1.0;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("Cs"), ContractViolation);
    p = uncalibrated();
    p.ring_inductance = 0.0;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("Ls"), ContractViolation);
    p = uncalibrated();
    p.flux_linkage = 1.5;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("mu_es"), ContractViolation);
    p = uncalibrated();
    p.josephson_energy = -1.0;
    CHECK_THROWS_AS(p.validate(), ContractViolation);
}

TEST_CASE("flux drive schedule")
{
    const FluxDrive d;
    CHECK(d.value(0.0) == 0.42864);
    CHECK(d.value(326.0) == 0.42864);
    CHECK(d.value(326.0 + 8.3) == doctest::Approx(0.5 * (0.42864 + 0.38)).epsilon(1e-14));
    CHECK(d.value(342.6) == doctest::Approx(0.38).epsilon(1e-14));
    CHECK(d.value(1000.0) == 0.38);
    CHECK(d.rate(100.0) == 0.0);
    CHECK(d.rate(330.0) == doctest::Approx((0.38 - 0.42864) / 16.6).epsilon(1e-14));
    CHECK(d.rate(400.0) == 0.0);
    CHECK(d.breakpoints()[0] == 326.0);
    CHECK(d.breakpoints()[1] == doctest::Approx(342.6));

    FluxDrive bad;
    bad.ramp_time = 0.0;
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("tr"), ContractViolation);
    bad = FluxDrive{};
    bad.ramp_start = -1.0;
    CHECK_THROWS_AS(bad.validate(), ContractViolation);
}

TEST_CASE("ladder operator and quadratures")
{
    const Operator a = ladder(5);
    for (Index n = 1; n < 5; ++n) {
        CHECK(a(n - 1, n).real() == doctest::Approx(std::sqrt(static_cast<double>(n))));
    }
    const Operator number = a.adjoint() * a;
    for (Index n = 0; n < 5; ++n) {
        CHECK(number(n, n).real() == doctest::Approx(static_cast<double>(n)));
    }
    // [Φ, Q] = iħ away from the truncation edge.
    const double hbar = 1.0;
    const auto q = quadratures(8, 2.0, 0.5, hbar);
    const Operator commutator = q.flux * q.charge - q.charge * q.flux;
    for (Index n = 0; n < 7; ++n) {
        CHECK(commutator(n, n).imag() == doctest::Approx(hbar).epsilon(1e-12));
        CHECK(std::abs(commutator(n, n).real()) < 1e-12);
    }
}

TEST_CASE("ring Hamiltonian without Josephson term is the harmonic ladder")
{
    CircuitParams p = uncalibrated();
    p.josephson_energy = 0.0;
    const RealVector e = ring_spectrum(p, 0.3, 20);
    for (Index n = 0; n < 5; ++n) {
        CHECK(e(n) == doctest::Approx(static_cast<double>(n) + 0.5).epsilon(1e-12));
    }
}

TEST_CASE("property: ring spectrum is symmetric under Φx → 1 − Φx and periodic in Φx")
{
    const CircuitParams p = CircuitParams::defaults();
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> flux(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const double f = flux(rng);
        const RealVector e = ring_spectrum(p, f).head(6);
        CHECK((e - ring_spectrum(p, 1.0 - f).head(6)).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((e - ring_spectrum(p, f + 1.0).head(6)).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("property: truncated operators are Hermitian and Hs is Hermitian for any drive")
{
    const TruncatedModel m = truncate_to_eigenbasis(CircuitParams::defaults(), default_resonance_flux);
    CHECK(numerics::is_hermitian(m.field.harmonic));
    CHECK(numerics::is_hermitian(m.ring.cos_phi));
    CHECK(numerics::is_hermitian(m.ring.sin_phi));
    CHECK(numerics::is_hermitian(coupling_term(m)));
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> flux(-1.0, 2.0);
    std::uniform_real_distribution<double> rate(-0.1, 0.1);
    for (int trial = 0; trial < 20; ++trial) {
        const Operator h = build_hs(m, flux(rng), rate(rng));
        CHECK(numerics::hermiticity_error(h) < 1e-12);
    }
}

TEST_CASE("truncated model")
{
    const TruncatedModel m = truncate_to_eigenbasis(CircuitParams::defaults(), default_resonance_flux);
    CHECK(m.dims.field == 4);
    CHECK(m.dims.ring == 4);
    CHECK(m.ring_basis.rows() == 40);
    CHECK(m.ring_basis.cols() == 4);

    SUBCASE("ring Hamiltonian is diagonal in its own eigenbasis")
    {
        const Operator hs = build_hs(m, default_resonance_flux, 0.0);
        const Operator expected = m.ring_ref_energies.cast<Complex>().asDiagonal();
        CHECK((hs - expected).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("field Hamiltonian is (n + 1/2) ωe/ωs")
    {
        const Operator he = m.field.harmonic;
        for (Index n = 0; n < 4; ++n) {
            CHECK(he(n, n).real() == doctest::Approx(static_cast<double>(n) + 0.5));
        }
    }
    SUBCASE("total Hamiltonian = He ⊗ I + I ⊗ Hs − coupling xe ⊗ xs")
    {
        const Operator expected = numerics::kron(m.field.harmonic, Operator::Identity(4, 4)) +
                                  numerics::kron(Operator::Identity(4, 4), build_hs(m, 0.4, 0.0)) -
                                  0.005 * numerics::kron(m.field.x, m.ring.x);
        FluxDrive d;
        d.flux_a = 0.4;
        CHECK((build_total(m, d, 10.0) - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("trig identity holds before projection, not between projected factors")
    {
        const auto pre = ring_operators_fock(m.groups, m.pre_dim);
        const Operator& b = m.ring_basis;
        const Operator sum = b.adjoint() * (pre.cos_phi * pre.cos_phi + pre.sin_phi * pre.sin_phi) * b;
        CHECK((sum - Operator::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((b.adjoint() * pre.cos_phi * b - m.ring.cos_phi).cwiseAbs().maxCoeff() < 1e-12);
        const Operator c = m.ring.cos_phi;
        const Operator s = m.ring.sin_phi;
        CHECK((c * c + s * s - Operator::Identity(4, 4)).cwiseAbs().maxCoeff() > 1e-3);
    }
    SUBCASE("protocol Hamiltonian matches direct assembly")
    {
        FluxDrive d;
        const ProtocolHamiltonian h(m, d);
        for (double t : {0.0, 100.0, 326.0, 330.0, 342.6, 500.0}) {
            CHECK((h(t) - build_total(m, d, t)).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("pre-truncation convergence")
{
    TruncationSettings s;
    s.pre_dim = 40;
    CHECK_NOTHROW(truncate_to_eigenbasis(CircuitParams::defaults(), default_resonance_flux, s));
    s.pre_dim = 6;
    CHECK_THROWS_AS(truncate_to_eigenbasis(CircuitParams::defaults(), default_resonance_flux, s), ConvergenceError);
    s.ring_dim = 8;
    s.pre_dim = 6;
    s.check_convergence = false;
    CHECK_THROWS_AS(truncate_to_eigenbasis(CircuitParams::defaults(), default_resonance_flux, s), ContractViolation);
}
