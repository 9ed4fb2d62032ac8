#pragma once

#include <vector>

#include "rabi/models.hpp"

namespace rabi {

struct Rk4Config {
    int n_points = 2;   // trajectory samples; n_points-1 steps
    double horizon = 1.0;
};

/// A time-sampled state trajectory plus bookkeeping shared by all integrators.
struct Trajectory {
    TimeGrid grid;
    Basis basis;
    std::vector<Vector> states;
    double max_norm_drift = 0.0;        // max | ||psi|| - 1 | (Schrodinger models)
    double max_truncation_tail = 0.0;   // quantum models only
    std::vector<std::string> warnings;
};

/// Classic fixed-step RK4 on d psi/dt = a(t) psi.
/// Norm drift is recorded for Schrodinger models (expected < 1e-8 at
/// paper-scale step counts) and a truncation warning is attached when a
/// quantum run leaks past the Fock cutoff.
Trajectory rk4_integrate(const Generator& g, const Vector& psi0, const Rk4Config& cfg);

}  // namespace rabi
