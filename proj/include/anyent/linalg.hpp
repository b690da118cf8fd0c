#pragma once

#include <Eigen/Dense>
#include <complex>

namespace anyent {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace linalg {

/// Eigenvalues below this are treated as zero in logarithms.
inline constexpr double kLogFloor = 1e-12;

struct Eigh {
    RealVector values; // ascending
    Matrix vectors;
};

/// Symmetrizes before decomposing.
Eigh eigh(const Matrix &m);

double hermiticity_residual(const Matrix &m);

/// -Tr m log m with 0 log 0 = 0; eigenvalues below kLogFloor dropped.
double von_neumann(const Matrix &m);

/// Tr rho log sigma, or -inf when rho has weight outside supp(sigma).
double trace_rho_log_sigma(const Matrix &rho, const Matrix &sigma);

/// f(m) through the eigendecomposition.
template<typename F> Matrix apply_fn(const Matrix &m, F &&f) {
    const auto e = eigh(m);
    RealVector fv(e.values.size());
    for(Eigen::Index k = 0; k < e.values.size(); ++k) fv[k] = f(e.values[k]);
    return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

Matrix inverse_sqrt_psd(const Matrix &m);

/// Kronecker product of two dense complex matrices.
Matrix kron(const Matrix &x, const Matrix &y);

} // namespace linalg
} // namespace anyent
