#pragma once

#include <string>
#include <vector>

#include "rabi/models.hpp"
#include "rabi/rk4.hpp"

namespace rabi {

/// Per-order Picard corrections |psi^(n)(t)> sampled on a grid.
/// Partial sums of a truncated series are not normalized.
struct PicardExpansion {
    TimeGrid grid;
    Basis basis;
    std::vector<std::vector<Vector>> orders;  // orders[n][j], n = 0..max_order
    bool normalized = false;
    std::vector<std::string> warnings;

    int max_order() const { return static_cast<int>(orders.size()) - 1; }

    /// Sum of orders 0..n_trunc at grid index j.
    Vector partial_sum(int j, int n_trunc) const;
};

/// Numeric Picard recursion: psi^(n)(t) = int_0^t a(t') psi^(n-1)(t') dt',
/// each order one cumulative Simpson pass over the previous one.
/// Emits a coarse-grid warning when omega_scale * h > 0.05.
PicardExpansion picard_numeric(const Generator& g, const Vector& psi0, int max_order,
                               const TimeGrid& grid, double omega_scale = 1.0);

/// Closed-form semiclassical corrections for the initial state |g>,
/// resonant zero-phase case, orders 1..3. The order-3 secular term carries
/// the factor i required by the defining integral (the printed source
/// drops it); see tests for the cross-check against picard_numeric.
Vector picard_semiclassical_analytic(const SemiclassicalParams& p, int order, double t);

/// Closed-form quantum corrections for |g,0>, orders 1..3, on the
/// truncated basis of p. Order 3 is the sum of three diagram terms.
Vector picard_quantum_analytic(const QuantumParams& p, int order, double t);

/// The individually labeled diagram contributions making up an order.
struct LabeledTerm {
    std::string diagram;  // e.g. "g0->e1->g2->e1"
    Vector state;
};
std::vector<LabeledTerm> picard_quantum_analytic_terms(const QuantumParams& p, int order, double t);

/// Interaction vertices of the quantum Rabi Hamiltonian.
enum class Vertex { SigmaPlusA, SigmaMinusADag, SigmaMinusA, SigmaPlusADag };

std::string vertex_name(Vertex v);

struct FockLabel {
    bool excited = false;
    int n = 0;
    std::string str() const { return std::string(excited ? "e" : "g") + std::to_string(n); }
};

/// One non-annihilating vertex chain acting on an initial label.
struct DiagramTerm {
    std::vector<Vertex> vertices;  // in time order
    FockLabel initial;
    FockLabel final_label;
    double amplitude_factor = 1.0;  // product of sqrt(n) ladder factors
    bool rwa_violating = false;     // contains sigma_+ a^dag or sigma_- a
};

/// All vertex chains of the given length that do not annihilate the state.
std::vector<DiagramTerm> enumerate_diagrams(FockLabel initial, int order);

/// First-order DCE law <n>(t) = (lambda/omega)^2 sin^2(omega t).
double mean_photons_first_order(double coupling, double omega, double t);

struct DcePrediction {
    double peak_time;   // tau_p = pi / (2 omega)
    double peak_value;  // (lambda/omega)^2
    double swap_time;   // tau_s = pi / (2 lambda)
};
DcePrediction dce_prediction(double coupling, double omega);

}  // namespace rabi
