#include "rabi/magnus.hpp"

#include <array>
#include <cmath>

namespace rabi {

namespace {

void require_schrodinger(const Generator& g, const char* who) {
    if (!g.schrodinger)
        throw std::invalid_argument(std::string(who) +
                                    ": requires a Schrodinger-type (anti-Hermitian) generator");
}

TimeGrid quad_grid(double t_a, double t_b, double max_spacing) {
    return TimeGrid::with_spacing(t_a, t_b, max_spacing);
}

}  // namespace

MagnusTerm magnus_term_numeric(const Generator& g, int order, double t_a, double t_b,
                               double max_spacing) {
    if (order < 1 || order > 3)
        throw std::invalid_argument("magnus_term_numeric: orders 1..3 supported");
    if (!(t_b > t_a)) throw std::invalid_argument("magnus_term_numeric: empty interval");

    const TimeGrid grid = quad_grid(t_a, t_b, max_spacing);
    const int n = grid.n_points;
    const double h = grid.spacing();

    std::vector<Matrix> as(n);
    for (int j = 0; j < n; ++j) as[j] = g.a(grid.at(j));
    const std::vector<Matrix> b = cumulative_integral(as, h);
    if (order == 1) return {1, b.back(), t_a, t_b};

    std::vector<Matrix> k(n);
    for (int j = 0; j < n; ++j) k[j] = commutator(as[j], b[j]);
    if (order == 2) return {2, Matrix(0.5 * cumulative_integral(k, h).back()), t_a, t_b};

    // term 1: [A(t1), int_0^{t1} [A,B]]
    const std::vector<Matrix> l = cumulative_integral(k, h);
    std::vector<Matrix> term1(n);
    for (int j = 0; j < n; ++j) term1[j] = commutator(as[j], l[j]);

    // term 2: W(t1) = int_0^{t1} [B(t2), [A(t2), A(t1)]] dt2 depends on the
    // upper limit through A(t1), hence the O(M^2) rescan.
    std::vector<Matrix> w(n);
    std::vector<Matrix> inner;
    inner.reserve(n);
    const Matrix zero = Matrix::Zero(g.dim(), g.dim());
    for (int j = 0; j < n; ++j) {
        inner.clear();
        for (int i = 0; i <= j; ++i) inner.push_back(commutator(b[i], commutator(as[i], as[j])));
        if (j == 0)
            w[j] = zero;
        else if (j == 1)
            w[j] = 0.5 * h * (inner[0] + inner[1]);
        else
            w[j] = cumulative_integral(inner, h).back();
    }
    const Matrix omega3 =
        (cumulative_integral(term1, h).back() + cumulative_integral(w, h).back()) / 6.0;
    return {3, omega3, t_a, t_b};
}

MagnusTerm magnus_semiclassical_analytic(const SemiclassicalParams& p, int order, double t) {
    const double W = p.rabi_freq, w = p.field_freq;
    const Complex I(0.0, 1.0);
    const double wt = w * t;
    Matrix m = Matrix::Zero(2, 2);
    switch (order) {
        case 1: {
            const Complex ge = -W / (2.0 * w) * (1.0 - std::exp(-2.0 * I * wt) + 2.0 * I * wt);
            m(0, 1) = ge;
            m(1, 0) = -std::conj(ge);
            break;
        }
        case 2: {
            const Complex gg =
                I * W * W / (4.0 * w * w) * (-2.0 * wt * std::cos(2.0 * wt) + std::sin(2.0 * wt));
            m(0, 0) = gg;
            m(1, 1) = -gg;
            break;
        }
        case 3: {
            const Complex ge =
                std::pow(W / w, 3) / 8.0 *
                (-3.0 + I * wt + 4.0 / 3.0 * wt * wt +
                 (1.5 + 2.0 * I * wt - 2.0 / 3.0 * wt * wt) * std::exp(-2.0 * I * wt) +
                 (7.0 / 6.0 - 4.0 / 3.0 * I * wt - 2.0 / 3.0 * wt * wt) * std::exp(2.0 * I * wt) +
                 (1.0 / 3.0 + 1.0 / 3.0 * I * wt) * std::exp(-4.0 * I * wt));
            m(0, 1) = ge;
            m(1, 0) = -std::conj(ge);
            break;
        }
        default:
            throw std::invalid_argument("magnus_semiclassical_analytic: orders 1..3 supported");
    }
    return {order, m, 0.0, t};
}

std::string scheme_name(StepScheme s) {
    switch (s) {
        case StepScheme::Order1Exact: return "order1_exact";
        case StepScheme::Order2Midpoint: return "order2_midpoint";
        case StepScheme::Order4Gauss2: return "order4_gauss2";
    }
    return "?";
}

StepScheme scheme_from_name(const std::string& name) {
    if (name == "order1_exact") return StepScheme::Order1Exact;
    if (name == "order2_midpoint") return StepScheme::Order2Midpoint;
    if (name == "order4_gauss2") return StepScheme::Order4Gauss2;
    throw std::invalid_argument("unknown magnus scheme: " + name);
}

PropagatorStep magnus_step(const Generator& g, StepScheme scheme, double t, double h,
                           double quad_spacing) {
    require_schrodinger(g, "magnus_step");
    if (!(h > 0.0)) throw std::invalid_argument("magnus_step: step must be positive");
    Matrix omega;
    switch (scheme) {
        case StepScheme::Order1Exact: {
            const TimeGrid grid = quad_grid(t, t + h, quad_spacing);
            std::vector<Matrix> as(grid.n_points);
            for (int j = 0; j < grid.n_points; ++j) as[j] = g.a(grid.at(j));
            omega = cumulative_integral(as, grid.spacing()).back();
            break;
        }
        case StepScheme::Order2Midpoint:
            omega = h * g.a(t + 0.5 * h);
            break;
        case StepScheme::Order4Gauss2: {
            const double c = std::sqrt(3.0) / 6.0;
            const Matrix a1 = g.a(t + (0.5 - c) * h);
            const Matrix a2 = g.a(t + (0.5 + c) * h);
            omega = 0.5 * h * (a1 + a2) + h * h * std::sqrt(3.0) / 12.0 * commutator(a2, a1);
            break;
        }
    }
    return {expm_antihermitian(omega), t, t + h};
}

Trajectory magnus_propagate(const Generator& g, const StepperConfig& cfg, const Vector& psi0) {
    require_schrodinger(g, "magnus_propagate");
    if (cfg.n_steps < 1) throw std::invalid_argument("magnus_propagate: n_steps >= 1 required");
    if (psi0.size() != g.dim())
        throw std::invalid_argument("magnus_propagate: initial state dimension mismatch");

    Trajectory traj;
    traj.grid = TimeGrid{0.0, cfg.horizon, cfg.n_steps + 1};
    traj.basis = g.basis;
    traj.states.reserve(cfg.n_steps + 1);
    traj.states.push_back(psi0);

    const double h = cfg.horizon / cfg.n_steps;
    Vector psi = psi0;
    for (int k = 0; k < cfg.n_steps; ++k) {
        const PropagatorStep step = magnus_step(g, cfg.scheme, k * h, h, cfg.quad_spacing);
        psi = step.u * psi;
        traj.states.push_back(psi);
        traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(psi.norm() - 1.0));
        if (g.basis.kind == ModelKind::Quantum)
            traj.max_truncation_tail =
                std::max(traj.max_truncation_tail, truncation_tail(psi, g.basis.n_max));
    }
    if (traj.max_truncation_tail > kTruncationTailLimit)
        traj.warnings.push_back("Fock truncation tail exceeded 1e-8; raise n_max");
    return traj;
}

namespace {

// Graded log of the Dyson series: Omega_n as polynomials in P_1..P_n.
std::vector<Matrix> graded_log(const std::vector<Matrix>& p, int max_order) {
    std::vector<Matrix> omegas;
    omegas.push_back(p[1]);
    if (max_order >= 2) omegas.push_back(p[2] - 0.5 * p[1] * p[1]);
    if (max_order >= 3)
        omegas.push_back(p[3] - 0.5 * (p[1] * p[2] + p[2] * p[1]) +
                         (1.0 / 3.0) * p[1] * p[1] * p[1]);
    if (max_order >= 4) {
        const Matrix p11 = p[1] * p[1];
        omegas.push_back(p[4] - 0.5 * (p[1] * p[3] + p[2] * p[2] + p[3] * p[1]) +
                         (1.0 / 3.0) * (p11 * p[2] + p[1] * p[2] * p[1] + p[2] * p11) -
                         0.25 * p11 * p11);
    }
    return omegas;
}

}  // namespace

void magnus_single_interval_scan(
    const Generator& g, int max_order, const TimeGrid& grid,
    const std::function<void(int j, double t, const std::vector<Matrix>& omegas)>& emit) {
    if (max_order < 1 || max_order > 4)
        throw std::invalid_argument("magnus_single_interval_scan: orders 1..4 supported");
    grid.validate();
    if (grid.n_points < 3)
        throw std::invalid_argument("magnus_single_interval_scan: need at least 3 grid points");

    const int n = grid.n_points;
    const int d = g.dim();
    const double h = grid.spacing();
    const Matrix ident = Matrix::Identity(d, d);
    const Matrix zero = Matrix::Zero(d, d);

    // Bootstrap the first three points order by order, then march with
    // backward-only Simpson updates; memory stays O(dim^2).
    Matrix a0 = g.a(grid.at(0)), a1 = g.a(grid.at(1)), a2 = g.a(grid.at(2));
    // p[n][j] for j = 0,1,2
    std::vector<std::array<Matrix, 3>> p(max_order + 1);
    std::vector<std::array<Matrix, 3>> f(max_order + 1);  // integrand samples
    p[0] = {ident, ident, ident};
    for (int ord = 1; ord <= max_order; ++ord) {
        f[ord] = {a0 * p[ord - 1][0], a1 * p[ord - 1][1], a2 * p[ord - 1][2]};
        p[ord][0] = zero;
        p[ord][1] = (h / 12.0) * (5.0 * f[ord][0] + 8.0 * f[ord][1] - f[ord][2]);
        p[ord][2] = (h / 3.0) * (f[ord][0] + 4.0 * f[ord][1] + f[ord][2]);
    }

    auto emit_at = [&](int j, int slot) {
        std::vector<Matrix> pj(max_order + 1);
        for (int ord = 1; ord <= max_order; ++ord) pj[ord] = p[ord][slot];
        emit(j, grid.at(j), graded_log(pj, max_order));
    };
    for (int j = 0; j < std::min(3, n); ++j) emit_at(j, j);

    // ring buffers: slot index j % 3 holds data for time j
    Matrix a_cur = a2;
    for (int j = 3; j < n; ++j) {
        a_cur = g.a(grid.at(j));
        const int s0 = j % 3, s1 = (j - 1) % 3, s2 = (j - 2) % 3;
        // integrand at j needs P_{ord-1}(t_j), which for ord=1 is I and for
        // ord>1 is the value computed this iteration; process orders upward.
        for (int ord = 1; ord <= max_order; ++ord) {
            const Matrix& prev_order_pj = (ord == 1) ? ident : p[ord - 1][s0];
            f[ord][s0] = a_cur * prev_order_pj;
            if (j % 2 == 0)
                p[ord][s0] = p[ord][s2] + (h / 3.0) * (f[ord][s2] + 4.0 * f[ord][s1] + f[ord][s0]);
            else
                p[ord][s0] =
                    p[ord][s1] + (h / 12.0) * (-f[ord][s2] + 8.0 * f[ord][s1] + 5.0 * f[ord][s0]);
        }
        emit_at(j, s0);
    }
}

Matrix MagnusSeries::omega_sum(int j) const {
    Matrix s = terms[0][j];
    for (int n = 1; n < static_cast<int>(terms.size()); ++n) s += terms[n][j];
    return s;
}

MagnusSeries magnus_single_interval(const Generator& g, int max_order, const TimeGrid& grid) {
    MagnusSeries series;
    series.grid = grid;
    series.max_order = max_order;
    series.terms.assign(max_order, {});
    for (auto& v : series.terms) v.reserve(grid.n_points);
    magnus_single_interval_scan(g, max_order, grid,
                                [&](int, double, const std::vector<Matrix>& omegas) {
                                    for (int n = 0; n < max_order; ++n)
                                        series.terms[n].push_back(omegas[n]);
                                });
    return series;
}

Trajectory magnus_single_interval_trajectory(const Generator& g, int max_order,
                                             const TimeGrid& grid, const Vector& psi0) {
    require_schrodinger(g, "magnus_single_interval_trajectory");
    if (psi0.size() != g.dim())
        throw std::invalid_argument("magnus_single_interval_trajectory: state dimension mismatch");
    Trajectory traj;
    traj.grid = grid;
    traj.basis = g.basis;
    traj.states.reserve(grid.n_points);
    magnus_single_interval_scan(
        g, max_order, grid, [&](int, double, const std::vector<Matrix>& omegas) {
            Matrix omega = omegas[0];
            for (int n = 1; n < max_order; ++n) omega += omegas[n];
            // the graded quadrature leaves an O(h^4) anti-Hermiticity
            // defect; project back before exponentiating
            omega = 0.5 * (omega - omega.adjoint().eval());
            const Vector psi = expm_antihermitian(omega) * psi0;
            traj.states.push_back(psi);
            traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(psi.norm() - 1.0));
            if (g.basis.kind == ModelKind::Quantum)
                traj.max_truncation_tail =
                    std::max(traj.max_truncation_tail, truncation_tail(psi, g.basis.n_max));
        });
    if (traj.max_truncation_tail > kTruncationTailLimit)
        traj.warnings.push_back("Fock truncation tail exceeded 1e-8; raise n_max");
    return traj;
}

ConvergenceHorizon convergence_horizon(const Generator& g, double t_max, const TimeGrid& grid) {
    grid.validate();
    if (grid.n_points < 3) throw std::invalid_argument("convergence_horizon: need >= 3 grid points");
    const int n = grid.n_points;
    const double h = grid.spacing();
    std::vector<double> norms(n);
    for (int j = 0; j < n; ++j) {
        const double t = grid.at(j);
        if (t > t_max) break;
        norms[j] = spectral_norm(g.a(t));
    }
    const std::vector<double> running = cumulative_integral(norms, h);

    ConvergenceHorizon out;
    if (g.basis.kind == ModelKind::Quantum)
        out.caveat = "bound computed on the truncated generator; the untruncated A is unbounded";

    auto crossing = [&](double level, bool& crossed, double& t_c) {
        for (int j = 1; j < n; ++j) {
            if (running[j] >= level) {
                const double frac = (level - running[j - 1]) / (running[j] - running[j - 1]);
                t_c = grid.at(j - 1) + frac * h;
                crossed = true;
                return;
            }
        }
        crossed = false;
        t_c = grid.at(n - 1);
    };
    crossing(M_PI, out.crossed, out.t_c);
    out.bound_value = out.crossed ? M_PI : running.back();
    // halved-norm reading == the 2*pi crossing of the literal integral
    crossing(2.0 * M_PI, out.crossed_single_amplitude, out.t_c_single_amplitude);
    return out;
}

}  // namespace rabi
