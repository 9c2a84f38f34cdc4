#include "squidqed/numerics.hpp"

#include "squidqed/errors.hpp"

#include <Eigen/Eigenvalues>

#include <string>

namespace squidqed::numerics {

Operator SpectralDecomposition::reconstruct() const
{
    return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition eigh(const Operator& a)
{
    if (a.rows() != a.cols()) {
        throw ContractViolation("eigh: operator is not square");
    }
    Eigen::SelfAdjointEigenSolver<Operator> solver(a);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("eigh: eigendecomposition did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double hermiticity_error(const Operator& a)
{
    if (a.size() == 0) {
        return 0.0;
    }
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_error(const Operator& u)
{
    if (u.size() == 0) {
        return 0.0;
    }
    return (u.adjoint() * u - Operator::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

Operator kron(const Operator& a, const Operator& b)
{
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Operator partial_trace(const Operator& rho, Dims dims, Component keep)
{
    const Index n = dims.total();
    if (rho.rows() != n || rho.cols() != n || dims.field < 1 || dims.ring < 1) {
        throw ContractViolation("partial_trace: operator dimension " + std::to_string(rho.rows()) + "x" +
                                std::to_string(rho.cols()) + " does not match " + std::to_string(dims.field) +
                                "x" + std::to_string(dims.ring));
    }
    const Index df = dims.field;
    const Index dr = dims.ring;
    if (keep == Component::field) {
        Operator out = Operator::Zero(df, df);
        for (Index a = 0; a < df; ++a) {
            for (Index b = 0; b < df; ++b) {
                out(a, b) = rho.block(a * dr, b * dr, dr, dr).trace();
            }
        }
        return out;
    }
    Operator out = Operator::Zero(dr, dr);
    for (Index f = 0; f < df; ++f) {
        out += rho.block(f * dr, f * dr, dr, dr);
    }
    return out;
}

double vn_entropy(const Operator& rho)
{
    constexpr double negative_floor = -1e-8;
    constexpr double zero_floor = 1e-14;
    const Operator sym = (rho + rho.adjoint()) * 0.5;
    const RealVector p = eigh(sym).eigenvalues;
    double s = 0.0;
    for (Index k = 0; k < p.size(); ++k) {
        if (p(k) < negative_floor) {
            throw PositivityViolation("vn_entropy: eigenvalue " + std::to_string(p(k)) + " below -1e-8");
        }
        if (p(k) >= zero_floor) {
            s -= p(k) * std::log(p(k));
        }
    }
    return s < 0.0 ? 0.0 : s;
}

Operator propagator(const SpectralDecomposition& h, double dt)
{
    Eigen::VectorXcd phases(h.eigenvalues.size());
    for (Index k = 0; k < phases.size(); ++k) {
        phases(k) = std::polar(1.0, -h.eigenvalues(k) * dt);
    }
    return h.eigenvectors * phases.asDiagonal() * h.eigenvectors.adjoint();
}

Operator propagator(const Operator& h, double dt)
{
    return propagator(eigh(h), dt);
}

}  // namespace squidqed::numerics
