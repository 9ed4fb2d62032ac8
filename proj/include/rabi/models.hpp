#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "rabi/linalg.hpp"

namespace rabi {

/// Rectangular coupling window: f(t) = 1 on [0, tau], 0 otherwise.
struct CouplingWindow {
    double tau = std::numeric_limits<double>::infinity();
    bool contains(double t) const { return t >= 0.0 && t <= tau; }
};

struct ModelFlags {
    bool rwa = false;  // drop the counter-rotating (2*omega) terms
};

/// Semiclassical Rabi model, natural units hbar = 1.
/// H_I(t) = Omega f(t) [(1+e^{-2i w t}) sigma_- + (1+e^{2i w t}) sigma_+]
/// at resonance; qubit_freq != field_freq and phase != 0 are supported
/// but default to the resonant, zero-phase case.
struct SemiclassicalParams {
    double rabi_freq = 0.1;
    double field_freq = 1.0;
    double qubit_freq = 1.0;
    double phase = 0.0;
    CouplingWindow window;
};

/// Quantum Rabi model with a truncated Fock ladder.
struct QuantumParams {
    double coupling = 0.1;  // lambda, real
    double field_freq = 1.0;
    double qubit_freq = 1.0;
    int n_max = 32;
    CouplingWindow window;
};

/// Mathieu equation y'' + [a - 2 q cos(w t)] y = 0 as a first-order system.
struct MathieuParams {
    double a = 0.5;
    double q = 0.1;
    double omega = 40.0;
};

enum class ModelKind { Semiclassical, Quantum, Mathieu };

/// Labeled basis of the state space. Quantum ordering is qubit-major
/// interleaved: |g,0>, |e,0>, |g,1>, |e,1>, ... index = 2n + (l==e).
struct Basis {
    ModelKind kind = ModelKind::Semiclassical;
    int n_max = 0;

    int dim() const {
        switch (kind) {
            case ModelKind::Quantum: return 2 * (n_max + 1);
            default: return 2;
        }
    }
    std::string label(int i) const;
    static int quantum_index(bool excited, int n) { return 2 * n + (excited ? 1 : 0); }
};

/// Time-dependent generator of a first-order linear system
/// d psi / dt = a(t) psi. For the Schrodinger models a(t) = -i H_I(t);
/// for Mathieu a(t) is the (real) companion matrix itself.
struct Generator {
    Basis basis;
    bool schrodinger = true;
    std::function<Matrix(double)> hamiltonian;  // H_I(t), or M(t) for Mathieu

    int dim() const { return basis.dim(); }
    Matrix a(double t) const {
        if (schrodinger) return Complex(0.0, -1.0) * hamiltonian(t);
        return hamiltonian(t);
    }
};

/// Interaction-picture semiclassical Hamiltonian at time t (2x2).
Matrix semiclassical_generator(const SemiclassicalParams& p, const ModelFlags& flags, double t);

/// Interaction-picture quantum Rabi Hamiltonian at time t, dim 2(n_max+1).
Matrix quantum_generator(const QuantumParams& p, const ModelFlags& flags, double t);

/// Truncated ladder operators (a, a^dagger) on an (n_max+1)-dim Fock space.
std::pair<Matrix, Matrix> ladder_operators(int n_max);

/// Companion matrix of the Mathieu system for the state (y, p = y').
Matrix mathieu_generator(const MathieuParams& p, double t);

/// Total-excitation operator N_T = sigma_+ sigma_- + a^dag a.
Matrix total_excitation_operator(int n_max);

Generator make_semiclassical(const SemiclassicalParams& p, const ModelFlags& flags = {});
Generator make_quantum(const QuantumParams& p, const ModelFlags& flags = {});
Generator make_mathieu(const MathieuParams& p);

/// Right-hand side a(t) * psi of the first-order system.
/// Throws std::invalid_argument on dimension mismatch.
Vector schrodinger_rhs(const Generator& g, const Vector& psi, double t);

/// Population in the top three Fock levels: sum over n >= n_max-2 of |C_{l,n}|^2.
/// Must stay below 1e-8 for a trustworthy truncated run.
double truncation_tail(const Vector& psi, int n_max);

inline constexpr double kTruncationTailLimit = 1e-8;

}  // namespace rabi
