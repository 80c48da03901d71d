#include <doctest.h>

#include <cmath>
#include <random>

#include "biphoton/lattice.hpp"

using namespace biphoton;

namespace {
ModelParams base_params() {
    ModelParams p;
    p.n_qubits = 30;
    return p;
}
}  // namespace

TEST_CASE("uniform positions follow the modulation law") {
    ModelParams p = base_params();

    p.delta = 0.0;
    p.phi0 = 1.234;
    CHECK(build_uniform(p).z(7) == doctest::Approx(7.0).epsilon(1e-15));

    p.delta = 0.1;
    p.phi0 = 0.0;
    auto a = build_uniform(p);
    CHECK(a.z(3) == doctest::Approx(3.1).epsilon(1e-15));
    CHECK(a.z(1) == doctest::Approx(0.95).epsilon(1e-15));
}

TEST_CASE("interface positions switch phase after the midpoint") {
    ModelParams p = base_params();
    p.n_qubits = 150;
    auto a = build_interface(p);
    CHECK(a.z(75) == doctest::Approx(75.1).epsilon(1e-15));
    CHECK(a.z(76) == doctest::Approx(76.05).epsilon(1e-15));

    // left half coincides with the uniform array at phi0 = 0
    ModelParams pu = p;
    pu.phi0 = 0.0;
    auto u = build_uniform(pu);
    for (int j = 1; j <= 75; ++j) CHECK(a.z(j) == u.z(j));
    for (int j = 76; j <= 150; ++j)
        CHECK(a.z(j) ==
              doctest::Approx(j + 0.1 * std::cos(two_pi * j / 3.0 + pi)).epsilon(1e-14));

    p.delta = 0.0;
    auto a0 = build_interface(p);
    auto u0 = [&] {
        ModelParams q = p;
        q.phi0 = 0.0;
        return build_uniform(q);
    }();
    for (int j = 1; j <= p.n_qubits; ++j) CHECK(a0.z(j) == u0.z(j));
}

TEST_CASE("geometry builders reject bad input") {
    ModelParams p = base_params();
    p.delta = 0.6;
    CHECK_THROWS_AS(build_uniform(p), std::invalid_argument);
    CHECK_THROWS_AS(build_interface(p), std::invalid_argument);

    p = base_params();
    p.n_qubits = 31;
    CHECK_THROWS_AS(build_interface(p), std::invalid_argument);

    p = base_params();
    CHECK(validate(p).empty());
    p.trunc = 5;
    CHECK(!validate(p).empty());
}

TEST_CASE("positions are strictly increasing for any delta < 0.5") {
    std::mt19937 rng(91);
    std::uniform_real_distribution<double> ud(0.0, 0.4999);
    std::uniform_real_distribution<double> up(0.0, two_pi);
    for (int trial = 0; trial < 200; ++trial) {
        ModelParams p = base_params();
        p.n_qubits = 50;
        p.delta = ud(rng);
        p.phi0 = up(rng);
        auto a = (trial % 2 == 0) ? build_uniform(p) : [&] {
            ModelParams q = p;
            q.n_qubits = 50;
            return build_interface(q);
        }();
        for (int j = 1; j < a.size(); ++j) CHECK(a.z(j + 1) > a.z(j));
    }
}

TEST_CASE("uniform positions repeat every three sites") {
    ModelParams p = base_params();
    p.n_qubits = 60;
    p.phi0 = 2.1;
    auto a = build_uniform(p);
    // the modulation term is reduced mod 3 before the cosine, so the only
    // deviation from an exact period is the rounding of j + c across binades
    for (int j = 1; j + 3 <= a.size(); ++j)
        CHECK(std::abs(a.z(j + 3) - a.z(j) - 3.0) < 1e-13);

    // extended positions agree with the stored array and keep the period
    for (int j = 1; j <= a.size(); ++j) CHECK(modulated_position(p, j) == a.z(j));
    CHECK(std::abs(modulated_position(p, -2) + 3.0 - modulated_position(p, 1)) < 1e-13);
    CHECK(std::abs(modulated_position(p, 0) + 3.0 - modulated_position(p, 3)) < 1e-13);

    // the displacement itself is identical for indices in the same residue
    // class, up to the binade rounding of the site offset
    for (int j : {4, 13, 601, 900001}) {
        double d_big = modulated_position(p, j) - static_cast<double>(j);
        double d_small = modulated_position(p, j % 3) - static_cast<double>(j % 3);
        CHECK(std::abs(d_big - d_small) < 1e-9);
    }
}

TEST_CASE("phase shift by 2*pi leaves the lattice unchanged") {
    ModelParams p = base_params();
    p.phi0 = 0.7;
    auto a = build_uniform(p);
    ModelParams q = p;
    q.phi0 = p.phi0 + two_pi;
    auto b = build_uniform(q);
    for (int j = 1; j <= p.n_qubits; ++j) CHECK(std::abs(a.z(j) - b.z(j)) < 1e-14);
}

TEST_CASE("coupling kernel values and symmetry") {
    ModelParams p = base_params();
    const std::complex<double> i(0.0, 1.0);

    CHECK(std::abs(coupling_kernel(p, 4.2, 4.2) - (-i * p.gamma0)) < 1e-15);

    auto k = coupling_kernel(p, 1.0, 2.0);
    CHECK(k.real() == doctest::Approx(std::sin(0.3)).epsilon(1e-15));
    CHECK(k.imag() == doctest::Approx(-std::cos(0.3)).epsilon(1e-15));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uz(-40.0, 40.0);
    for (int t = 0; t < 100; ++t) {
        double za = uz(rng), zb = uz(rng);
        CHECK(std::abs(coupling_kernel(p, za, zb)) == doctest::Approx(p.gamma0).epsilon(1e-14));
        CHECK(coupling_kernel(p, za, zb) == coupling_kernel(p, zb, za));
    }
}
