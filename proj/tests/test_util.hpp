#pragma once

#include <random>

#include "rabi/linalg.hpp"

namespace testutil {

/// Deterministic random anti-Hermitian matrix with entries O(scale).
inline rabi::Matrix random_antihermitian(int dim, unsigned seed, double scale = 1.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    rabi::Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = rabi::Complex(u(rng), u(rng));
    rabi::Matrix a = 0.5 * (m - m.adjoint().eval());
    return rabi::Matrix(scale * a);
}

inline rabi::Matrix random_matrix(int dim, unsigned seed, double scale = 1.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    rabi::Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = rabi::Complex(u(rng), u(rng));
    return rabi::Matrix(scale * m);
}

/// Taylor series of exp(m), summed to machine convergence. Independent of
/// the eigendecomposition path it checks; callers keep ||m|| modest.
inline rabi::Matrix expm_taylor(const rabi::Matrix& m) {
    const int d = static_cast<int>(m.rows());
    rabi::Matrix sum = rabi::Matrix::Identity(d, d);
    rabi::Matrix term = rabi::Matrix::Identity(d, d);
    for (int k = 1; k < 200; ++k) {
        term = rabi::Matrix(term * m / double(k));
        sum += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18) break;
    }
    return sum;
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
    return m.cwiseAbs().maxCoeff();
}

}  // namespace testutil
