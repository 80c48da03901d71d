#include <doctest.h>

#include <cmath>
#include <complex>

#include "biphoton/interface.hpp"

using namespace biphoton;
using cd = std::complex<double>;

TEST_CASE("single-excitation hamiltonian basics") {
    ModelParams p;
    p.n_qubits = 30;
    auto a = build_uniform(p);
    auto h = build_single_hamiltonian(a);

    for (int j = 0; j < 30; ++j) CHECK(std::abs(h(j, j) - cd(0.0, -1.0)) < 1e-15);

    auto r = single_excitation_spectrum(a);
    cd expected(0.0, -1.0 * p.n_qubits);
    CHECK(std::abs(r.values.sum() - expected) <= 1e-8 * std::abs(expected));
}

TEST_CASE("most subradiant state has the largest imaginary part") {
    Eigen::VectorXcd vals(4);
    vals << cd(0.1, -0.5), cd(-0.3, -1e-6), cd(0.7, -2.0), cd(0.2, -0.01);
    CHECK(most_subradiant(vals) == 1);
}

TEST_CASE("ansatz construction") {
    PairBasis b(6);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(6), f = Eigen::VectorXcd::Zero(6);
    c[0] = 1.0;
    f[1] = 1.0;
    auto s = build_ansatz(b, c, f);
    CHECK(std::abs(std::abs(s.psi[static_cast<Eigen::Index>(b.index_of(1, 2))]) - 1.0) <
          1e-14);
    CHECK(s.psi.norm() == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(build_ansatz(b, c, c), std::invalid_argument);

    // underlying two-index form is antisymmetric: psi built from (c, f) is the
    // negative of the one built from (f, c)
    Eigen::VectorXcd c2(6), f2(6);
    for (int k = 0; k < 6; ++k) {
        c2[k] = cd(std::sin(0.3 * k + 0.1), std::cos(0.7 * k));
        f2[k] = cd(std::cos(0.2 * k), std::sin(0.5 * k - 0.4));
    }
    c2.normalize();
    f2.normalize();
    auto sa = build_ansatz(b, c2, f2);
    auto sb = build_ansatz(b, f2, c2);
    double phase_diff = (sa.psi + sb.psi).norm();  // swap flips the overall sign
    CHECK(phase_diff < 1e-12);

    auto sym = build_symmetric_ansatz(b, c2, f2);
    CHECK(sym.psi.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(overlap2(sa.psi, sa.psi) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("critical phases for the reference size") {
    auto roots = critical_phases(100);
    REQUIRE(roots.size() == 2);
    CHECK(std::abs(roots[0] - 5.0 * pi / 6.0) < 1e-12);
    CHECK(std::abs(roots[1] - (5.0 * pi / 6.0 + pi)) < 1e-12);

    // the displayed balance between edge displacements holds at each root
    for (double r : roots) {
        double lhs = std::cos(r - two_pi / 3.0) + std::cos(r);
        double rhs = 2.0 * std::cos(r + two_pi / 3.0);
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("critical phases are spaced by pi and shift by 2*pi/3 with size") {
    for (int n : {40, 67, 99, 100, 101}) {
        auto roots = critical_phases(n);
        REQUIRE(roots.size() == 2);
        CHECK(std::abs(roots[1] - roots[0] - pi) < 1e-10);
    }
    auto circ = [](double a, double b) {
        double d = std::abs(reduce_phase(a) - reduce_phase(b));
        return std::min(d, two_pi - d);
    };
    auto r100 = critical_phases(100);
    auto r101 = critical_phases(101);
    // set-wise: each root for N+1 sites appears among the roots for N shifted
    // by 2*pi/3
    for (std::size_t k = 0; k < 2; ++k) {
        double d = std::min(circ(r101[k], r100[0] + two_pi / 3.0),
                            circ(r101[k], r100[1] + two_pi / 3.0));
        CHECK(d < 1e-10);
    }
}

TEST_CASE("positions are inversion symmetric exactly at a critical phase") {
    const int n = 100;
    auto roots = critical_phases(n);
    ModelParams p;
    p.n_qubits = n;
    p.phi0 = roots[0];
    auto a = build_uniform(p);
    for (int j = 1; j <= n; ++j)
        CHECK(a.z(j) + a.z(n + 1 - j) == doctest::Approx(n + 1.0).epsilon(1e-12));

    // slightly off the root the symmetry is broken
    p.phi0 = roots[0] + 0.05;
    auto b = build_uniform(p);
    double worst = 0.0;
    for (int j = 1; j <= n; ++j)
        worst = std::max(worst, std::abs(b.z(j) + b.z(n + 1 - j) - (n + 1.0)));
    CHECK(worst > 1e-4);
}

TEST_CASE("interface state classification on a synthetic table") {
    std::vector<StateSummary> table = {
        {0, cd(-1.0, -1e-8), 1e-8, 0.1, 0.9},    // ultra subradiant, centred
        {1, cd(-0.9, -0.02), 0.02, 30.0, 0.8},   // bound edge, right
        {2, cd(-0.8, -0.02), 0.02, -31.0, 0.7},  // bound edge, left
        {3, cd(-0.7, -0.5), 0.5, 2.0, 0.1},      // fast scattering state
        {4, cd(-0.6, -0.02), 0.02, 28.0, 0.2},   // edge-tilted but unbound
    };
    auto rep = find_interface_states(table, 100);
    CHECK(rep.most_subradiant_index == 0);
    REQUIRE(rep.ultra.size() == 1);
    CHECK(rep.ultra[0] == 0);
    REQUIRE(rep.bound_edge.size() == 2);
    CHECK(rep.bound_edge[0] == 1);
    CHECK(rep.bound_edge[1] == 2);
}
