#pragma once

#include <complex>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

namespace rabi {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Uniform time grid on [t0, t1] with n_points samples (n_points >= 2).
struct TimeGrid {
    double t0 = 0.0;
    double t1 = 1.0;
    int n_points = 2;

    double spacing() const { return (t1 - t0) / (n_points - 1); }
    double at(int j) const { return t0 + spacing() * j; }

    void validate() const {
        if (!(t1 > t0)) throw std::invalid_argument("TimeGrid: t1 must exceed t0");
        if (n_points < 2) throw std::invalid_argument("TimeGrid: need n_points >= 2");
    }

    /// Grid on [t0, t1] with spacing <= max_spacing and an odd point count.
    static TimeGrid with_spacing(double t0, double t1, double max_spacing) {
        int n = static_cast<int>(std::ceil((t1 - t0) / max_spacing)) + 1;
        if (n < 3) n = 3;
        if (n % 2 == 0) ++n;
        return TimeGrid{t0, t1, n};
    }
};

/// exp(m) for anti-Hermitian m, via eigendecomposition of the Hermitian
/// matrix i*m. The result is unitary up to round-off, which is the point:
/// propagators built from this never drift in norm.
/// Throws std::invalid_argument if m is not anti-Hermitian within 1e-10.
Matrix expm_antihermitian(const Matrix& m);

/// Largest singular value.
double spectral_norm(const Matrix& m);

namespace detail {
template <typename T>
T zero_like(const T& x) {
    if constexpr (std::is_arithmetic_v<T>) {
        (void)x;
        return T(0);
    } else if constexpr (std::is_same_v<T, Complex>) {
        (void)x;
        return T(0.0, 0.0);
    } else {
        T z = x;
        z.setZero();
        return z;
    }
}
}  // namespace detail

/// Cumulative integral of uniformly spaced samples by composite Simpson.
/// out[j] = integral from t0 to t_j. Endpoint accuracy O(h^4) for smooth
/// integrands; interior odd points use the backward 3-point Newton-Cotes
/// rule so the scan never looks ahead (except at j=1).
/// Works for scalar, Vector and Matrix samples.
template <typename T>
std::vector<T> cumulative_integral(const std::vector<T>& f, double h) {
    const int n = static_cast<int>(f.size());
    if (n < 3) throw std::invalid_argument("cumulative_integral: need at least 3 samples");
    std::vector<T> out(n, detail::zero_like(f[0]));
    out[1] = (h / 12.0) * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    for (int j = 2; j < n; ++j) {
        if (j % 2 == 0)
            out[j] = out[j - 2] + (h / 3.0) * (f[j - 2] + 4.0 * f[j - 1] + f[j]);
        else
            out[j] = out[j - 1] + (h / 12.0) * (-f[j - 2] + 8.0 * f[j - 1] + 5.0 * f[j]);
    }
    return out;
}

/// Commutator [a, b] = ab - ba.
inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

/// Max absolute entry of (m + m^dagger); zero for exactly anti-Hermitian m.
double antihermiticity_defect(const Matrix& m);

}  // namespace rabi
