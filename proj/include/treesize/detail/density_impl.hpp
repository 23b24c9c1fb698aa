#pragma once

#include <Eigen/Dense>

namespace treesize {

inline DensityMatrix::DensityMatrix(int n_qubits, std::vector<Complex> mat)
    : n_(n_qubits), mat_(std::move(mat)) {
    if (n_ < 1 || n_ > kMaxQubits) {
        throw InvalidDensity("density matrix qubit count must be 1..4");
    }
    const std::size_t d = dim();
    if (mat_.size() != d * d) {
        throw InvalidDensity("density matrix must be 2^n x 2^n");
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const Complex x = mat_[i * d + j];
            if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
                throw InvalidDensity("non-finite density matrix entry");
            }
            if (std::abs(x - std::conj(mat_[j * d + i])) > kTol) {
                throw InvalidDensity("density matrix is not Hermitian");
            }
        }
    }
    if (std::abs(trace() - 1.0) > kTol) {
        throw InvalidDensity("density matrix trace is not 1");
    }
    const auto ev = eigenvalues();
    if (ev.front() < -kEigTol) {
        throw InvalidDensity("density matrix has a negative eigenvalue");
    }
}

inline std::vector<double> DensityMatrix::eigenvalues() const {
    const auto d = static_cast<Eigen::Index>(dim());
    Eigen::MatrixXcd m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            m(i, j) = mat_[static_cast<std::size_t>(i * d + j)];
        }
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    const auto &vals = es.eigenvalues();
    return {vals.data(), vals.data() + vals.size()};
}

} // namespace treesize
