#include <doctest.h>

#include "rabi/picard.hpp"
#include "rabi/rk4.hpp"
#include "test_util.hpp"

using namespace rabi;
using testutil::max_abs;

namespace {

const SemiclassicalParams kSc{0.1, 1.0, 1.0, 0.0, {}};
const QuantumParams kQ{0.1, 1.0, 1.0, 6, {}};

Vector qubit_ground() {
    Vector v = Vector::Zero(2);
    v[0] = 1.0;
    return v;
}

Vector vacuum(const Generator& g) {
    Vector v = Vector::Zero(g.dim());
    v[0] = 1.0;
    return v;
}

}  // namespace

TEST_CASE("order 0 is the constant initial state") {
    const Generator g = make_semiclassical(kSc);
    const PicardExpansion exp = picard_numeric(g, qubit_ground(), 0, {0.0, 5.0, 501});
    for (const auto& s : exp.orders[0]) CHECK(max_abs(Vector(s - qubit_ground())) == 0.0);
}

TEST_CASE("order-n corrections vanish at t=0 and order 0 matches psi0") {
    const Generator g = make_quantum(kQ);
    const PicardExpansion exp = picard_numeric(g, vacuum(g), 3, {0.0, 4.0, 401});
    for (int n = 1; n <= 3; ++n) CHECK(max_abs(exp.orders[n][0]) == 0.0);
}

TEST_CASE("RWA Picard orders reproduce the Taylor terms of (cos, -i sin)") {
    const Generator g = make_semiclassical(kSc, {true});
    const TimeGrid grid{0.0, 10.0, 1001};
    const PicardExpansion exp = picard_numeric(g, qubit_ground(), 3, grid);
    for (int j : {250, 500, 1000}) {
        const double x = 0.1 * grid.at(j);  // Omega t
        CHECK(std::abs(exp.orders[1][j][1] - Complex(0, -x)) < 1e-8);
        CHECK(std::abs(exp.orders[2][j][0] - Complex(-x * x / 2, 0)) < 1e-8);
        CHECK(std::abs(exp.orders[3][j][1] - Complex(0, x * x * x / 6)) < 1e-8);
    }
}

TEST_CASE("quantum order 1 matches (lambda/2w)(1 - e^{2iwt}) |e,1>") {
    const Generator g = make_quantum(kQ);
    const TimeGrid grid{0.0, 6.0, 601};
    const PicardExpansion exp = picard_numeric(g, vacuum(g), 1, grid);
    const int e1 = Basis::quantum_index(true, 1);
    for (int j : {100, 300, 600}) {
        const double t = grid.at(j);
        const Complex expect = 0.1 / 2.0 * (1.0 - std::exp(Complex(0, 2.0 * t)));
        CHECK(std::abs(exp.orders[1][j][e1] - expect) < 1e-8);
    }
}

TEST_CASE("numeric orders 1-3 match the closed forms on w t in [0, 4 pi]") {
    const TimeGrid grid{0.0, 4.0 * M_PI, 2001};
    {
        const Generator g = make_semiclassical(kSc);
        const PicardExpansion exp = picard_numeric(g, qubit_ground(), 3, grid);
        for (int n = 1; n <= 3; ++n)
            for (int j = 0; j < grid.n_points; j += 50)
                CHECK(max_abs(Vector(exp.orders[n][j] -
                                     picard_semiclassical_analytic(kSc, n, grid.at(j)))) < 1e-7);
    }
    {
        const Generator g = make_quantum(kQ);
        const PicardExpansion exp = picard_numeric(g, vacuum(g), 3, grid);
        for (int n = 1; n <= 3; ++n)
            for (int j = 0; j < grid.n_points; j += 50)
                CHECK(max_abs(Vector(exp.orders[n][j] -
                                     picard_quantum_analytic(kQ, n, grid.at(j)))) < 1e-7);
    }
}

TEST_CASE("semiclassical closed forms: special points") {
    CHECK(max_abs(picard_semiclassical_analytic(kSc, 1, 0.0)) == 0.0);
    // at w t = pi the (1 - e^{2iwt}) factor vanishes, leaving -i Omega t |e>
    const Vector v = picard_semiclassical_analytic(kSc, 1, M_PI);
    CHECK(std::abs(v[1] - Complex(0, -0.1 * M_PI)) < 1e-14);
    // order 2 lives on |g> only
    for (double t : {0.3, 1.7, 5.0})
        CHECK(std::abs(picard_semiclassical_analytic(kSc, 2, t)[1]) == 0.0);
    CHECK_THROWS_WITH_AS((void)picard_semiclassical_analytic(kSc, 4, 1.0),
                         doctest::Contains("picard_numeric"), std::invalid_argument);
}

TEST_CASE("quantum closed forms populate the paper's kets") {
    const double t = 1.234;
    const Vector o2 = picard_quantum_analytic(kQ, 2, t);
    for (int i = 0; i < o2.size(); ++i) {
        const bool allowed =
            i == Basis::quantum_index(false, 0) || i == Basis::quantum_index(false, 2);
        if (!allowed) CHECK(std::abs(o2[i]) == 0.0);
    }
    // the |g,2> branch carries the stimulated-emission sqrt(2)
    const Complex g2 = o2[Basis::quantum_index(false, 2)];
    const Complex base = Complex(0, 1) * 0.1 * 0.1 / 2.0 *
                         (-t + Complex(0, 0.5) * (1.0 - std::exp(Complex(0, 2.0 * t))));
    CHECK(std::abs(g2 - std::sqrt(2.0) * base) < 1e-14);

    const Vector o3 = picard_quantum_analytic(kQ, 3, t);
    for (int i = 0; i < o3.size(); ++i) {
        const bool allowed =
            i == Basis::quantum_index(true, 1) || i == Basis::quantum_index(true, 3);
        if (!allowed) CHECK(std::abs(o3[i]) == 0.0);
    }
    CHECK(picard_quantum_analytic_terms(kQ, 3, t).size() == 3);
    CHECK_THROWS_AS((void)picard_quantum_analytic(kQ, 4, t), std::invalid_argument);
}

TEST_CASE("order-n corrections scale with the n-th power of the coupling") {
    SemiclassicalParams weak = kSc;
    SemiclassicalParams strong = kSc;
    strong.rabi_freq = 0.2;
    const TimeGrid grid{0.0, 4.0, 401};
    const PicardExpansion a = picard_numeric(make_semiclassical(weak), qubit_ground(), 3, grid);
    const PicardExpansion b = picard_numeric(make_semiclassical(strong), qubit_ground(), 3, grid);
    for (int n = 1; n <= 3; ++n) {
        const double scale = std::pow(2.0, n);
        for (int j : {100, 250, 400})
            for (int i = 0; i < 2; ++i) {
                const Complex lo = a.orders[n][j][i];
                if (std::abs(lo) < 1e-12) continue;
                CHECK(std::abs(b.orders[n][j][i] / lo - scale) < 1e-10 * scale);
            }
    }
}

TEST_CASE("diagram enumeration from |g,0> reproduces the counts 1,1,2,3") {
    const FockLabel g0{false, 0};
    CHECK(enumerate_diagrams(g0, 0).size() == 1);

    const auto o1 = enumerate_diagrams(g0, 1);
    REQUIRE(o1.size() == 1);
    CHECK(o1[0].vertices == std::vector<Vertex>{Vertex::SigmaPlusADag});
    CHECK(o1[0].final_label.str() == "e1");
    CHECK(o1[0].rwa_violating);

    const auto o2 = enumerate_diagrams(g0, 2);
    REQUIRE(o2.size() == 2);
    std::vector<std::string> finals{o2[0].final_label.str(), o2[1].final_label.str()};
    std::sort(finals.begin(), finals.end());
    CHECK(finals == std::vector<std::string>{"g0", "g2"});

    const auto o3 = enumerate_diagrams(g0, 3);
    REQUIRE(o3.size() == 3);
    int e1 = 0, e3 = 0;
    for (const auto& d : o3) {
        if (d.final_label.str() == "e1") ++e1;
        if (d.final_label.str() == "e3") ++e3;
    }
    CHECK(e1 == 2);
    CHECK(e3 == 1);
}

TEST_CASE("diagram amplitude factors carry the ladder square roots") {
    const auto o2 = enumerate_diagrams({false, 0}, 2);
    for (const auto& d : o2)
        if (d.final_label.str() == "g2") CHECK(d.amplitude_factor == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("order-33 partial sum tracks RK4 for two Rabi periods") {
    const Generator g = make_semiclassical(kSc);
    const double horizon = 2.0 * M_PI / 0.1;  // Omega t = 2 pi
    const TimeGrid grid = TimeGrid::with_spacing(0.0, horizon, 0.01);
    const PicardExpansion exp = picard_numeric(g, qubit_ground(), 33, grid);
    const Trajectory rk = rk4_integrate(g, qubit_ground(), {grid.n_points, horizon});
    double worst = 0.0;
    for (int j = 0; j < grid.n_points; ++j)
        worst = std::max(worst,
                         std::abs(exp.partial_sum(j, 33)[0].real() - rk.states[j][0].real()));
    CHECK(worst < 1e-3);
}

TEST_CASE("first-order DCE law and prediction") {
    CHECK(mean_photons_first_order(0.1, 1.0, M_PI / 2) == doctest::Approx(0.01));
    CHECK(mean_photons_first_order(0.1, 1.0, M_PI) == doctest::Approx(0.0).epsilon(1e-25));
    const DcePrediction p = dce_prediction(0.3, 1.0);
    CHECK(p.peak_time / p.swap_time == doctest::Approx(0.3));
    CHECK(p.peak_value == doctest::Approx(0.09));
}

TEST_CASE("coarse grids trigger a quadrature warning") {
    const Generator g = make_semiclassical(kSc);
    const PicardExpansion exp = picard_numeric(g, qubit_ground(), 1, {0.0, 10.0, 11}, 1.0);
    REQUIRE(!exp.warnings.empty());
    CHECK(exp.warnings[0].find("coarse") != std::string::npos);
}
