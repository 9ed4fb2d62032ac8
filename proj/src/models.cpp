#include "rabi/models.hpp"

#include <cmath>
#include <memory>

namespace rabi {

std::string Basis::label(int i) const {
    switch (kind) {
        case ModelKind::Quantum: {
            const int n = i / 2;
            return std::string(i % 2 ? "e," : "g,") + std::to_string(n);
        }
        case ModelKind::Mathieu:
            return i == 0 ? "y" : "p";
        default:
            return i == 0 ? "g" : "e";
    }
}

Matrix semiclassical_generator(const SemiclassicalParams& p, const ModelFlags& flags, double t) {
    Matrix h = Matrix::Zero(2, 2);
    if (!p.window.contains(t)) return h;
    const double dm = p.field_freq - p.qubit_freq;  // co-rotating detuning
    const double dp = p.field_freq + p.qubit_freq;  // counter-rotating
    // coefficient of sigma_+ (matrix element <e|H|g>)
    Complex cp = std::exp(Complex(0.0, -(dm * t + p.phase)));
    if (!flags.rwa) cp += std::exp(Complex(0.0, dp * t + p.phase));
    cp *= p.rabi_freq;
    h(1, 0) = cp;
    h(0, 1) = std::conj(cp);
    return h;
}

std::pair<Matrix, Matrix> ladder_operators(int n_max) {
    if (n_max < 1) throw std::invalid_argument("ladder_operators: n_max >= 1 required");
    Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(double(n));
    return {a, a.adjoint()};
}

namespace {

// kron(field, qubit): qubit index is the fast one, matching Basis ordering.
Matrix kron_fq(const Matrix& field, const Matrix& qubit) {
    const int nf = static_cast<int>(field.rows());
    const int nq = static_cast<int>(qubit.rows());
    Matrix out = Matrix::Zero(nf * nq, nf * nq);
    for (int i = 0; i < nf; ++i)
        for (int j = 0; j < nf; ++j)
            if (field(i, j) != Complex(0.0, 0.0))
                out.block(nq * i, nq * j, nq, nq) = field(i, j) * qubit;
    return out;
}

Matrix sigma_plus() {
    Matrix s = Matrix::Zero(2, 2);
    s(1, 0) = 1.0;  // |e><g|
    return s;
}

}  // namespace

Matrix quantum_generator(const QuantumParams& p, const ModelFlags& flags, double t) {
    if (p.n_max < 1) throw std::invalid_argument("quantum_generator: n_max >= 1 required");
    const int dim = 2 * (p.n_max + 1);
    Matrix h = Matrix::Zero(dim, dim);
    if (!p.window.contains(t)) return h;
    auto [a, ad] = ladder_operators(p.n_max);
    const Matrix sp = sigma_plus();
    const Matrix sm = sp.adjoint();
    const double dm = p.qubit_freq - p.field_freq;
    const double dp = p.qubit_freq + p.field_freq;
    const Complex em = std::exp(Complex(0.0, dm * t));
    const Complex ep = std::exp(Complex(0.0, dp * t));
    h = em * kron_fq(a, sp) + std::conj(em) * kron_fq(ad, sm);
    if (!flags.rwa)
        h += ep * kron_fq(ad, sp) + std::conj(ep) * kron_fq(a, sm);
    return p.coupling * h;
}

Matrix mathieu_generator(const MathieuParams& p, double t) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = -(p.a - 2.0 * p.q * std::cos(p.omega * t));
    return m;
}

Matrix total_excitation_operator(int n_max) {
    const int dim = 2 * (n_max + 1);
    Matrix nt = Matrix::Zero(dim, dim);
    for (int n = 0; n <= n_max; ++n) {
        nt(2 * n, 2 * n) = double(n);
        nt(2 * n + 1, 2 * n + 1) = double(n) + 1.0;
    }
    return nt;
}

Generator make_semiclassical(const SemiclassicalParams& p, const ModelFlags& flags) {
    Generator g;
    g.basis = Basis{ModelKind::Semiclassical, 0};
    g.schrodinger = true;
    g.hamiltonian = [p, flags](double t) { return semiclassical_generator(p, flags, t); };
    return g;
}

Generator make_quantum(const QuantumParams& p, const ModelFlags& flags) {
    if (p.n_max < 1) throw std::invalid_argument("make_quantum: n_max >= 1 required");
    Generator g;
    g.basis = Basis{ModelKind::Quantum, p.n_max};
    g.schrodinger = true;

    // the four vertex blocks are time-independent; cache them so the hot
    // integrator loops only scale and add
    struct Blocks {
        Matrix pa, mad, pad, ma;  // sigma+ a, sigma- a+, sigma+ a+, sigma- a
    };
    auto [a, ad] = ladder_operators(p.n_max);
    const Matrix sp = sigma_plus();
    const Matrix sm = sp.adjoint();
    auto blocks = std::make_shared<Blocks>(Blocks{kron_fq(a, sp), kron_fq(ad, sm),
                                                  kron_fq(ad, sp), kron_fq(a, sm)});
    g.hamiltonian = [p, flags, blocks](double t) -> Matrix {
        if (!p.window.contains(t)) return Matrix::Zero(2 * (p.n_max + 1), 2 * (p.n_max + 1));
        const Complex em = std::exp(Complex(0.0, (p.qubit_freq - p.field_freq) * t));
        const Complex ep = std::exp(Complex(0.0, (p.qubit_freq + p.field_freq) * t));
        Matrix h = em * blocks->pa + std::conj(em) * blocks->mad;
        if (!flags.rwa) h += ep * blocks->pad + std::conj(ep) * blocks->ma;
        return p.coupling * h;
    };
    return g;
}

Generator make_mathieu(const MathieuParams& p) {
    Generator g;
    g.basis = Basis{ModelKind::Mathieu, 0};
    g.schrodinger = false;
    g.hamiltonian = [p](double t) { return mathieu_generator(p, t); };
    return g;
}

Vector schrodinger_rhs(const Generator& g, const Vector& psi, double t) {
    if (psi.size() != g.dim())
        throw std::invalid_argument("schrodinger_rhs: state dimension does not match generator");
    return g.a(t) * psi;
}

double truncation_tail(const Vector& psi, int n_max) {
    const int lo = Basis::quantum_index(false, std::max(0, n_max - 2));
    double s = 0.0;
    for (int i = lo; i < psi.size(); ++i) s += std::norm(psi[i]);
    return s;
}

}  // namespace rabi
