#include "rabi/rk4.hpp"

#include <cmath>

namespace rabi {

namespace {

void note_state(Trajectory& traj, const Generator& g, const Vector& psi) {
    if (g.schrodinger)
        traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(psi.norm() - 1.0));
    if (g.basis.kind == ModelKind::Quantum)
        traj.max_truncation_tail = std::max(traj.max_truncation_tail, truncation_tail(psi, g.basis.n_max));
}

}  // namespace

Trajectory rk4_integrate(const Generator& g, const Vector& psi0, const Rk4Config& cfg) {
    if (cfg.n_points < 2) throw std::invalid_argument("rk4_integrate: n_points >= 2 required");
    if (psi0.size() != g.dim())
        throw std::invalid_argument("rk4_integrate: initial state dimension mismatch");

    Trajectory traj;
    traj.grid = TimeGrid{0.0, cfg.horizon, cfg.n_points};
    traj.basis = g.basis;
    traj.states.reserve(cfg.n_points);
    traj.states.push_back(psi0);
    note_state(traj, g, psi0);

    const double h = traj.grid.spacing();
    Vector psi = psi0;
    for (int k = 0; k + 1 < cfg.n_points; ++k) {
        const double t = traj.grid.at(k);
        const Matrix a1 = g.a(t);
        const Matrix a2 = g.a(t + 0.5 * h);  // shared by k2 and k3
        const Matrix a3 = g.a(t + h);
        const Vector k1 = a1 * psi;
        const Vector k2 = a2 * (psi + 0.5 * h * k1);
        const Vector k3 = a2 * (psi + 0.5 * h * k2);
        const Vector k4 = a3 * (psi + h * k3);
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        traj.states.push_back(psi);
        note_state(traj, g, psi);
    }

    if (traj.max_truncation_tail > kTruncationTailLimit)
        traj.warnings.push_back("Fock truncation tail exceeded 1e-8; raise n_max");
    return traj;
}

}  // namespace rabi
