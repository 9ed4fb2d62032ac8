#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rabi/models.hpp"
#include "rabi/rk4.hpp"

namespace rabi {

/// One truncated-series term Omega^(n) over [t_a, t_b]; anti-Hermitian for
/// the Schrodinger models.
struct MagnusTerm {
    int order = 1;
    Matrix value;
    double t_a = 0.0, t_b = 0.0;
};

/// Omega^(1..3) by nested cumulative Simpson quadrature of the commutator
/// integrands. The order-3 cross term needs an O(M^2) inner scan, so keep
/// the grid modest; max_spacing bounds the quadrature step.
/// Throws for order > 3.
MagnusTerm magnus_term_numeric(const Generator& g, int order, double t_a, double t_b,
                               double max_spacing = 0.01);

/// Closed-form semiclassical matrix elements of Omega^(1..3) at resonance,
/// phase 0. Odd orders are purely off-diagonal, order 2 purely diagonal
/// and traceless.
MagnusTerm magnus_semiclassical_analytic(const SemiclassicalParams& p, int order, double t);

enum class StepScheme {
    Order1Exact,      // exp of the exact (quadrature) Omega^(1) per step
    Order2Midpoint,   // exp(h A(t+h/2))
    Order4Gauss2,     // two-node Gauss-Legendre with commutator correction
};

std::string scheme_name(StepScheme s);
StepScheme scheme_from_name(const std::string& name);

struct PropagatorStep {
    Matrix u;  // unitary
    double t_a = 0.0, t_b = 0.0;
};

/// Single concatenation step over [t, t+h]. Requires a Schrodinger-type
/// generator (the exponentials are taken as anti-Hermitian).
/// quad_spacing only affects Order1Exact's per-step quadrature.
PropagatorStep magnus_step(const Generator& g, StepScheme scheme, double t, double h,
                           double quad_spacing = 0.02);

struct StepperConfig {
    StepScheme scheme = StepScheme::Order4Gauss2;
    int n_steps = 1;
    double horizon = 1.0;
    double quad_spacing = 0.02;  // Order1Exact substep spacing
};

/// Concatenated truncated-Magnus propagation; states recorded at every
/// step boundary.
Trajectory magnus_propagate(const Generator& g, const StepperConfig& cfg, const Vector& psi0);

/// Streaming scan of the single-interval Magnus terms Omega^(1..max_order)
/// on a grid, via the graded logarithm of the Dyson (time-ordered) series:
/// the iterated integrals P_n follow from one cumulative-Simpson pass each,
/// and Omega_n is the grade-n part of log(1 + P_1 + P_2 + ...). Equivalent
/// to the nested-commutator integrals, but O(M) at every output time and
/// valid through order 4. Memory O(dim^2).
void magnus_single_interval_scan(
    const Generator& g, int max_order, const TimeGrid& grid,
    const std::function<void(int j, double t, const std::vector<Matrix>& omegas)>& emit);

/// Stored per-order term trajectories (use for small dims / short grids).
struct MagnusSeries {
    TimeGrid grid;
    int max_order = 1;
    std::vector<std::vector<Matrix>> terms;  // terms[n-1][j] = Omega^(n)(t_j)
    Matrix omega_sum(int j) const;
};
MagnusSeries magnus_single_interval(const Generator& g, int max_order, const TimeGrid& grid);

/// psi(t_j) = exp(sum_n Omega^(n)(t_j)) psi0 on the grid.
Trajectory magnus_single_interval_trajectory(const Generator& g, int max_order,
                                             const TimeGrid& grid, const Vector& psi0);

/// First time where int_0^t ||A(t')||_2 dt' crosses pi (sufficient
/// convergence bound). t_c_single_amplitude is the crossing under the
/// halved-norm reading (i.e. the 2*pi crossing of the literal integral),
/// which is the convention that reproduces the reported semiclassical
/// horizon Omega*t ~ 5.1; both are returned.
struct ConvergenceHorizon {
    bool crossed = false;
    double t_c = 0.0;
    double bound_value = 0.0;   // running integral at t_c (= pi when crossed)
    bool crossed_single_amplitude = false;
    double t_c_single_amplitude = 0.0;
    std::string caveat;         // set for truncated (quantum) generators
};
ConvergenceHorizon convergence_horizon(const Generator& g, double t_max, const TimeGrid& grid);

}  // namespace rabi
