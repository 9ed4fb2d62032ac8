#include "rabi/picard.hpp"

#include <cmath>
#include <sstream>

namespace rabi {

Vector PicardExpansion::partial_sum(int j, int n_trunc) const {
    if (n_trunc < 0 || n_trunc > max_order())
        throw std::invalid_argument("partial_sum: truncation order out of range");
    Vector s = orders[0][j];
    for (int n = 1; n <= n_trunc; ++n) s += orders[n][j];
    return s;
}

PicardExpansion picard_numeric(const Generator& g, const Vector& psi0, int max_order,
                               const TimeGrid& grid, double omega_scale) {
    grid.validate();
    if (max_order < 0) throw std::invalid_argument("picard_numeric: max_order >= 0 required");
    if (psi0.size() != g.dim())
        throw std::invalid_argument("picard_numeric: initial state dimension mismatch");

    PicardExpansion exp;
    exp.grid = grid;
    exp.basis = g.basis;
    const int n = grid.n_points;
    const double h = grid.spacing();
    if (omega_scale * h > 0.05) {
        std::ostringstream os;
        os << "picard grid is coarse (omega*h = " << omega_scale * h
           << " > 0.05); Simpson endpoint error ~ " << std::pow(omega_scale * h, 4) / 180.0;
        exp.warnings.push_back(os.str());
    }

    std::vector<Matrix> as(n);
    for (int j = 0; j < n; ++j) as[j] = g.a(grid.at(j));

    exp.orders.assign(1, std::vector<Vector>(n, psi0));
    for (int ord = 1; ord <= max_order; ++ord) {
        std::vector<Vector> integrand(n);
        for (int j = 0; j < n; ++j) integrand[j] = as[j] * exp.orders[ord - 1][j];
        exp.orders.push_back(cumulative_integral(integrand, h));
    }
    return exp;
}

Vector picard_semiclassical_analytic(const SemiclassicalParams& p, int order, double t) {
    const double W = p.rabi_freq, w = p.field_freq;
    const Complex I(0.0, 1.0);
    const Complex e2 = std::exp(2.0 * I * w * t);
    const Complex em2 = std::exp(-2.0 * I * w * t);
    const Complex e4 = std::exp(4.0 * I * w * t);
    Vector v = Vector::Zero(2);
    switch (order) {
        case 0:
            v[0] = 1.0;
            return v;
        case 1:
            v[1] = W / (2.0 * w) * (1.0 - e2) - I * (W * t);
            return v;
        case 2:
            v[0] = W * W / (4.0 * w * w) * (-1.0 + e2)
                 - I * W / (2.0 * w) * (W * t) * em2
                 - (W * t) * (W * t) / 2.0;
            return v;
        case 3:
            v[1] = std::pow(W / w, 3) / 8.0 * (2.5 - em2 - e2 - 0.5 * e4)
                 + I * W * W / (4.0 * w * w) * (W * t) * (1.0 - em2 + e2)
                 - W / (4.0 * w) * (W * t) * (W * t) * (1.0 - e2)
                 + I * std::pow(W * t, 3) / 6.0;
            return v;
        default:
            throw std::invalid_argument(
                "picard_semiclassical_analytic: closed forms end at order 3; use picard_numeric");
    }
}

namespace {
Vector quantum_zero(const QuantumParams& p) { return Vector::Zero(2 * (p.n_max + 1)); }
}  // namespace

std::vector<LabeledTerm> picard_quantum_analytic_terms(const QuantumParams& p, int order, double t) {
    if (p.n_max < (order <= 1 ? 1 : (order == 2 ? 2 : 3)))
        throw std::invalid_argument("picard_quantum_analytic: n_max too small for requested order");
    const double lam = p.coupling, w = p.field_freq;
    const Complex I(0.0, 1.0);
    const Complex e2 = std::exp(2.0 * I * w * t);
    const Complex em2 = std::exp(-2.0 * I * w * t);
    const Complex e4 = std::exp(4.0 * I * w * t);
    const double wt = w * t;
    auto idx = [](bool e, int n) { return Basis::quantum_index(e, n); };

    std::vector<LabeledTerm> terms;
    switch (order) {
        case 0: {
            Vector v = quantum_zero(p);
            v[idx(false, 0)] = 1.0;
            terms.push_back({"g0", v});
            break;
        }
        case 1: {
            Vector v = quantum_zero(p);
            v[idx(true, 1)] = lam / (2.0 * w) * (1.0 - e2);
            terms.push_back({"g0->e1", v});
            break;
        }
        case 2: {
            Vector v0 = quantum_zero(p);
            v0[idx(false, 0)] = I * lam * lam / (2.0 * w) * (t + I / (2.0 * w) * (1.0 - em2));
            terms.push_back({"g0->e1->g0", v0});
            Vector v2 = quantum_zero(p);
            v2[idx(false, 2)] =
                I * std::sqrt(2.0) * lam * lam / (2.0 * w) * (-t + I / (2.0 * w) * (1.0 - e2));
            terms.push_back({"g0->e1->g2", v2});
            break;
        }
        case 3: {
            const double l3 = lam * lam * lam;
            Vector va = quantum_zero(p);
            va[idx(true, 1)] = l3 / (4.0 * std::pow(w, 3))
                               * (-1.0 + e2 - I * wt * (1.0 + e2));
            terms.push_back({"g0->e1->g0->e1", va});
            Vector vb = quantum_zero(p);
            vb[idx(true, 3)] = std::sqrt(1.5) * l3 / (8.0 * std::pow(w, 3))
                               * (1.0 - e4 + 4.0 * I * e2 * wt);
            terms.push_back({"g0->e1->g2->e3", vb});
            Vector vc = quantum_zero(p);
            vc[idx(true, 1)] = l3 / (4.0 * std::pow(w, 3))
                               * (1.0 - e2 + 2.0 * I * wt - 2.0 * wt * wt);
            terms.push_back({"g0->e1->g2->e1", vc});
            break;
        }
        default:
            throw std::invalid_argument(
                "picard_quantum_analytic: closed forms end at order 3; use picard_numeric");
    }
    return terms;
}

Vector picard_quantum_analytic(const QuantumParams& p, int order, double t) {
    Vector v = quantum_zero(p);
    for (const auto& term : picard_quantum_analytic_terms(p, order, t)) v += term.state;
    return v;
}

std::string vertex_name(Vertex v) {
    switch (v) {
        case Vertex::SigmaPlusA: return "sigma+ a";
        case Vertex::SigmaMinusADag: return "sigma- a+";
        case Vertex::SigmaMinusA: return "sigma- a";
        case Vertex::SigmaPlusADag: return "sigma+ a+";
    }
    return "?";
}

std::vector<DiagramTerm> enumerate_diagrams(FockLabel initial, int order) {
    if (order < 0) throw std::invalid_argument("enumerate_diagrams: order >= 0 required");
    std::vector<DiagramTerm> work{DiagramTerm{{}, initial, initial, 1.0, false}};
    static constexpr Vertex kAll[] = {Vertex::SigmaPlusA, Vertex::SigmaMinusADag,
                                      Vertex::SigmaMinusA, Vertex::SigmaPlusADag};
    for (int step = 0; step < order; ++step) {
        std::vector<DiagramTerm> next;
        for (const auto& term : work) {
            const FockLabel& s = term.final_label;
            for (Vertex v : kAll) {
                FockLabel out = s;
                double factor = 0.0;
                bool violating = false;
                switch (v) {
                    case Vertex::SigmaPlusA:
                        if (s.excited || s.n < 1) continue;
                        out = {true, s.n - 1};
                        factor = std::sqrt(double(s.n));
                        break;
                    case Vertex::SigmaMinusADag:
                        if (!s.excited) continue;
                        out = {false, s.n + 1};
                        factor = std::sqrt(double(s.n + 1));
                        break;
                    case Vertex::SigmaMinusA:
                        if (!s.excited || s.n < 1) continue;
                        out = {false, s.n - 1};
                        factor = std::sqrt(double(s.n));
                        violating = true;
                        break;
                    case Vertex::SigmaPlusADag:
                        if (s.excited) continue;
                        out = {true, s.n + 1};
                        factor = std::sqrt(double(s.n + 1));
                        violating = true;
                        break;
                }
                DiagramTerm t2 = term;
                t2.vertices.push_back(v);
                t2.final_label = out;
                t2.amplitude_factor *= factor;
                t2.rwa_violating = t2.rwa_violating || violating;
                next.push_back(std::move(t2));
            }
        }
        work = std::move(next);
    }
    return work;
}

double mean_photons_first_order(double coupling, double omega, double t) {
    if (coupling <= 0.0 || omega <= 0.0)
        throw std::invalid_argument("mean_photons_first_order: coupling and omega must be positive");
    const double s = std::sin(omega * t);
    return (coupling / omega) * (coupling / omega) * s * s;
}

DcePrediction dce_prediction(double coupling, double omega) {
    if (coupling <= 0.0 || omega <= 0.0)
        throw std::invalid_argument("dce_prediction: coupling and omega must be positive");
    return DcePrediction{M_PI / (2.0 * omega), (coupling / omega) * (coupling / omega),
                         M_PI / (2.0 * coupling)};
}

}  // namespace rabi
