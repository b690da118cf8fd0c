#include "anyent/linalg.hpp"

#include <cmath>
#include <limits>

namespace anyent::linalg {

Eigh eigh(const Matrix &m) {
    if(m.size() == 0) return {};
    const Matrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double hermiticity_residual(const Matrix &m) {
    if(m.size() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double von_neumann(const Matrix &m) {
    if(m.size() == 0) return 0.0;
    double s = 0;
    for(double v : eigh(m).values)
        if(v > kLogFloor) s -= v * std::log(v);
    return s;
}

double trace_rho_log_sigma(const Matrix &rho, const Matrix &sigma) {
    if(rho.size() == 0) return 0.0;
    const auto e = eigh(sigma);
    // Diagonal of rho in sigma's eigenbasis.
    const Matrix rotated = e.vectors.adjoint() * rho * e.vectors;
    double acc = 0;
    for(Eigen::Index k = 0; k < e.values.size(); ++k) {
        const double w = rotated(k, k).real();
        if(e.values[k] > kLogFloor)
            acc += w * std::log(e.values[k]);
        else if(w > kLogFloor)
            return -std::numeric_limits<double>::infinity();
    }
    return acc;
}

Matrix inverse_sqrt_psd(const Matrix &m) {
    return apply_fn(m, [](double v) { return v > kLogFloor ? 1.0 / std::sqrt(v) : 0.0; });
}

Matrix kron(const Matrix &x, const Matrix &y) {
    Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
    for(Eigen::Index i = 0; i < x.rows(); ++i)
        for(Eigen::Index j = 0; j < x.cols(); ++j)
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return out;
}

} // namespace anyent::linalg
