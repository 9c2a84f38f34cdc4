#pragma once

// Dense complex linear algebra used throughout the simulator. All operators on
// the coupled system are ordered field ⊗ ring.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <utility>

namespace squidqed::numerics {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Component of the bipartite field ⊗ ring space.
enum class Component { field, ring };

/// Dimensions of the two tensor factors.
struct Dims {
    Index field = 0;
    Index ring = 0;

    Index total() const { return field * ring; }
    Index of(Component c) const { return c == Component::field ? field : ring; }
    bool operator==(const Dims&) const = default;
};

/// Eigenvalues ascending, eigenvectors as orthonormal columns.
struct SpectralDecomposition {
    RealVector eigenvalues;
    Operator eigenvectors;

    Operator reconstruct() const;
};

SpectralDecomposition eigh(const Operator& a);

/// max |A - A†| entrywise.
double hermiticity_error(const Operator& a);
/// max |U†U - I| entrywise.
double unitarity_error(const Operator& u);

inline bool is_hermitian(const Operator& a, double tol = 1e-12) { return hermiticity_error(a) < tol; }
inline bool is_unitary(const Operator& u, double tol = 1e-10) { return unitarity_error(u) < tol; }

Operator kron(const Operator& a, const Operator& b);

/// Reduced density operator of `keep`; throws ContractViolation when
/// rho is not (dims.field·dims.ring) square.
Operator partial_trace(const Operator& rho, Dims dims, Component keep);

/// S(ρ) = -Tr ρ ln ρ in nats. Eigenvalues in [-1e-8, 1e-14) count as zero;
/// anything more negative throws PositivityViolation.
double vn_entropy(const Operator& rho);

/// V f(Λ) V† for Hermitian `a`.
template <class F>
Operator herm_func(const Operator& a, F&& f)
{
    const SpectralDecomposition sd = eigh(a);
    RealVector fl(sd.eigenvalues.size());
    for (Index k = 0; k < fl.size(); ++k) {
        fl(k) = f(sd.eigenvalues(k));
    }
    Operator out = sd.eigenvectors * fl.asDiagonal() * sd.eigenvectors.adjoint();
    return (out + out.adjoint()) * 0.5;
}

/// exp(-i h dt) with ħ = 1.
Operator propagator(const Operator& h, double dt);

/// Same as propagator() but reusing an existing decomposition of h.
Operator propagator(const SpectralDecomposition& h, double dt);

}  // namespace squidqed::numerics
