// linalg.hpp — Matrix aliases and small operator helpers shared across modules

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>

namespace causalbench {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double pi = std::numbers::pi;

inline Matrix2 pauli_x() {
    Matrix2 m;
    m << 0.0, 1.0,
         1.0, 0.0;
    return m;
}

inline Matrix2 pauli_y() {
    Matrix2 m;
    m << 0.0, Complex(0.0, -1.0),
         Complex(0.0, 1.0), 0.0;
    return m;
}

inline Matrix2 pauli_z() {
    Matrix2 m;
    m << 1.0, 0.0,
         0.0, -1.0;
    return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Tr[A†B], the Hilbert-Schmidt pairing
inline Complex hs_inner(const Matrix& a, const Matrix& b) {
    return (a.adjoint() * b).trace();
}

inline double hermiticity_defect(const Matrix& m) {
    return max_abs(m - m.adjoint());
}

inline double min_eigenvalue(const Matrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// 1/2 * sum |eig| of the (Hermitian) difference of two density matrices
inline double trace_distance(const Matrix& a, const Matrix& b) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a - b, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace causalbench
