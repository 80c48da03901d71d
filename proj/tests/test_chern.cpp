#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "biphoton/chern.hpp"

using namespace biphoton;
using cd = std::complex<double>;

namespace {

// Two-band lattice model d(k)·sigma with d = (sin k1, sin k2, m - cos k1 -
// cos k2). The lower band has Chern number +1 for 0 < m < 2, -1 for
// -2 < m < 0, and 0 for |m| > 2 (degree count over the four d_xy = 0 points),
// which makes it an independent oracle for the plaquette code.
BandSurface qwz_surface(double m, int n) {
    BandSurface s;
    s.band_index = 0;
    s.n_k = n;
    s.n_phi = n;
    std::size_t total = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    s.mask.assign(total, 1);
    s.filled.assign(total, 0);
    s.energy.assign(total, cd(0, 0));
    s.vec.assign(total, Eigen::VectorXcd());
    s.branch.assign(total, 0);
    s.branch_count = 1;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double k1 = two_pi * i / n, k2 = two_pi * j / n;
            double dx = std::sin(k1), dy = std::sin(k2);
            double dz = m - std::cos(k1) - std::cos(k2);
            double d = std::sqrt(dx * dx + dy * dy + dz * dz);
            Eigen::VectorXcd u(2);
            // two charts so the vector never vanishes on either pole
            if (dz <= 0.0)
                u << cd(dz - d, 0.0), cd(dx, dy);
            else
                u << cd(-dx, dy), cd(dz + d, 0.0);
            u.normalize();
            s.vec[s.idx(i, j)] = u;
            s.energy[s.idx(i, j)] = cd(-d, 0.0);
        }
    }
    return s;
}

// hand-built sweep over an nk x np torus with the same candidate list at
// every point (or a per-point generator)
TorusSweep synth_sweep(int nk, int np,
                       const std::function<std::vector<BandCandidate>(int, int)>& gen) {
    TorusSweep sw;
    sw.params.n_k = nk;
    sw.params.n_phi = np;
    sw.gamma0 = 1.0;
    sw.trunc = 10;
    for (int i = 0; i < nk; ++i)
        sw.k_axis.push_back(-pi / 3.0 + (two_pi / 3.0) * i / nk);
    for (int j = 0; j < np; ++j) sw.phi_axis.push_back(two_pi * j / np);
    for (int i = 0; i < nk; ++i)
        for (int j = 0; j < np; ++j) sw.points.push_back(gen(i, j));
    return sw;
}

BandCandidate cand(double re, double p) {
    BandCandidate c;
    c.energy = cd(re, 0.0);
    c.bound_p = p;
    c.continuum_gap = 1.0;
    c.vec = Eigen::VectorXcd::Ones(2) / std::sqrt(2.0);
    return c;
}

SelectionOptions default_sel() { return SelectionOptions{}; }

}  // namespace

TEST_CASE("two-band oracle: link integers and refinement of the raw estimate") {
    for (double m : {1.0, -1.0}) {
        const long long expect = m > 0 ? 1 : -1;
        auto s12 = qwz_surface(m, 12);
        auto s24 = qwz_surface(m, 24);
        auto r12 = chern_link(s12);
        auto r24 = chern_link(s24);
        CHECK(r12.link_chern == expect);
        CHECK(r24.link_chern == expect);
        CHECK(r12.plaquettes == 144);
        CHECK(r24.plaquettes == 576);
        // full coverage: normalized fluxes telescope to the exact integer
        CHECK(std::abs(r12.link_sum - static_cast<double>(expect)) < 1e-12);
        CHECK(std::abs(r24.link_sum - static_cast<double>(expect)) < 1e-12);

        // raw-product estimate approaches the integer from below as the grid
        // refines
        double c12 = chern_continuum(s12);
        double c24 = chern_continuum(s24);
        CHECK(std::signbit(c12) == std::signbit(static_cast<double>(expect)));
        CHECK(std::abs(c12) < std::abs(c24));
        CHECK(std::abs(c24) < 1.0);
        CHECK(std::abs(c12) > 0.8);
        CHECK(std::abs(c24) > 0.95);
    }

    auto trivial = qwz_surface(3.0, 12);
    auto rt = chern_link(trivial);
    CHECK(rt.link_chern == 0);
    CHECK(std::abs(chern_continuum(trivial)) < 0.01);
}

TEST_CASE("random regauge leaves the link integers identical") {
    auto s = qwz_surface(1.0, 24);
    auto before = chern_link(s);

    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-pi, pi);
    for (auto& v : s.vec) {
        double th = u(rng);
        v *= cd(std::cos(th), std::sin(th));
    }
    auto after = chern_link(s);
    CHECK(after.link_chern == before.link_chern);
    // per-plaquette phases cancel exactly up to rounding of the perturbed
    // products
    CHECK(std::abs(after.link_sum - before.link_sum) < 1e-9);
    CHECK(after.plaquettes == before.plaquettes);
}

TEST_CASE("constant field carries zero flux") {
    BandSurface s;
    s.band_index = 1;
    s.n_k = 6;
    s.n_phi = 6;
    s.mask.assign(36, 1);
    s.filled.assign(36, 0);
    s.energy.assign(36, cd(2.5, 0.0));
    Eigen::VectorXcd u(3);
    u << cd(0.2, 0.1), cd(-0.5, 0.3), cd(0.1, -0.7);
    u.normalize();
    s.vec.assign(36, u);

    auto r = chern_link(s);
    CHECK(r.link_chern == 0);
    CHECK(r.link_sum == 0.0);
    CHECK(chern_continuum(s) == 0.0);
    CHECK(r.plaquettes == 36);
}

TEST_CASE("vanishing link overlap is an error, not a zero") {
    BandSurface s;
    s.band_index = 0;
    s.n_k = 2;
    s.n_phi = 2;
    s.mask.assign(4, 1);
    s.filled.assign(4, 0);
    s.energy.assign(4, cd(0, 0));
    Eigen::VectorXcd a(2), b(2);
    a << 1.0, 0.0;
    b << 0.0, 1.0;  // orthogonal to a
    s.vec = {a, b, a, a};
    CHECK_THROWS_AS(chern_link(s), std::runtime_error);
    CHECK_THROWS_AS(chern_continuum(s), std::runtime_error);
}

TEST_CASE("curvature field rows sum to the link total") {
    auto s = qwz_surface(-1.0, 12);
    auto rows = curvature_field(s);
    auto r = chern_link(s);
    CHECK(static_cast<int>(rows.size()) == r.plaquettes);
    double flux = 0.0;
    for (const auto& row : rows) flux += row[2];
    CHECK(flux / two_pi == doctest::Approx(r.link_sum).epsilon(1e-12));
}

TEST_CASE("assign_point windows, orders, and trims candidates") {
    SelectionOptions opt = default_sel();  // P_th 0.25, window [2.3, 3.2]

    SUBCASE("three in-window states map straight to the three slots") {
        std::vector<BandCandidate> cs = {cand(2.4, 0.5), cand(2.7, 0.6), cand(2.9, 0.7)};
        auto slot = assign_point(cs, opt);
        CHECK(slot[0] == 0);
        CHECK(slot[1] == 1);
        CHECK(slot[2] == 2);
    }
    SUBCASE("missing states are the lowest slots") {
        std::vector<BandCandidate> two = {cand(2.7, 0.6), cand(2.9, 0.7)};
        auto slot = assign_point(two, opt);
        CHECK(slot[0] == -1);
        CHECK(slot[1] == 0);
        CHECK(slot[2] == 1);

        std::vector<BandCandidate> one = {cand(2.9, 0.7)};
        slot = assign_point(one, opt);
        CHECK(slot[0] == -1);
        CHECK(slot[1] == -1);
        CHECK(slot[2] == 0);

        slot = assign_point({}, opt);
        CHECK(slot[0] == -1);
        CHECK(slot[1] == -1);
        CHECK(slot[2] == -1);
    }
    SUBCASE("window excludes out-of-band states regardless of probability") {
        std::vector<BandCandidate> cs = {cand(2.0, 0.9), cand(2.5, 0.5), cand(3.4, 0.8)};
        auto slot = assign_point(cs, opt);
        CHECK(slot[0] == -1);
        CHECK(slot[1] == -1);
        CHECK(slot[2] == 1);
    }
    SUBCASE("four in-window states keep the three most bound, energy order") {
        std::vector<BandCandidate> cs = {cand(2.4, 0.30), cand(2.5, 0.55),
                                         cand(2.7, 0.28), cand(2.9, 0.60)};
        auto slot = assign_point(cs, opt);
        CHECK(slot[0] == 0);
        CHECK(slot[1] == 1);
        CHECK(slot[2] == 3);
    }
    SUBCASE("more than max_candidates is a threshold misconfiguration") {
        std::vector<BandCandidate> cs = {cand(2.4, 0.3), cand(2.5, 0.4), cand(2.6, 0.5),
                                         cand(2.7, 0.6), cand(2.8, 0.7)};
        CHECK_THROWS_AS(assign_point(cs, opt), std::runtime_error);
    }
    SUBCASE("option validation") {
        SelectionOptions bad = opt;
        bad.p_th = 1.5;
        CHECK_THROWS_AS(assign_point({}, bad), std::invalid_argument);
        bad = opt;
        bad.e_lo = bad.e_hi;
        CHECK_THROWS_AS(assign_point({}, bad), std::invalid_argument);
    }
}

TEST_CASE("select_bound_bands fills holes from in-window spares") {
    // every point: two states above threshold plus one in-window spare below
    // it; the spare sits lowest, so it legally fills the bottom band
    auto sw = synth_sweep(3, 4, [](int, int) {
        return std::vector<BandCandidate>{cand(2.4, 0.20), cand(2.6, 0.5),
                                          cand(2.9, 0.6)};
    });
    auto bands = select_bound_bands(sw, default_sel());
    CHECK(bands[0].present_count() == 12);
    CHECK(bands[0].fill_count() == 12);
    CHECK(bands[1].fill_count() == 0);
    CHECK(bands[2].fill_count() == 0);
    for (std::size_t c = 0; c < bands[0].mask.size(); ++c) {
        CHECK(bands[0].mask[c] == 0);
        CHECK(bands[0].filled[c] == 1);
        CHECK(bands[0].energy[c].real() == doctest::Approx(2.4));
    }
}

TEST_CASE("fill pass refuses spares that break the energy ordering") {
    // the only spare lies above both identified bands, so the bottom band
    // stays empty everywhere and selection reports it missing
    auto sw = synth_sweep(2, 2, [](int, int) {
        return std::vector<BandCandidate>{cand(2.6, 0.5), cand(2.9, 0.6),
                                          cand(3.1, 0.2)};
    });
    CHECK_THROWS_WITH_AS(select_bound_bands(sw, default_sel()),
                         "band 0 was never identified; fewer than three bound bands",
                         std::runtime_error);
}

TEST_CASE("selection propagates the misconfiguration error with coordinates") {
    auto sw = synth_sweep(2, 2, [](int ik, int) {
        if (ik == 0)
            return std::vector<BandCandidate>{cand(2.4, 0.5), cand(2.5, 0.5),
                                              cand(2.6, 0.5), cand(2.7, 0.5),
                                              cand(2.8, 0.5)};
        return std::vector<BandCandidate>{cand(2.4, 0.5), cand(2.6, 0.5),
                                          cand(2.9, 0.6)};
    });
    CHECK_THROWS_AS(select_bound_bands(sw, default_sel()), std::runtime_error);
}

TEST_CASE("selection rejects a threshold at or below the sweep's storage cut") {
    auto sw = synth_sweep(2, 2, [](int, int) {
        return std::vector<BandCandidate>{cand(2.4, 0.5), cand(2.6, 0.5),
                                          cand(2.9, 0.6)};
    });
    SelectionOptions opt = default_sel();
    opt.p_th = sw.params.p_store;
    CHECK_THROWS_AS(select_bound_bands(sw, opt), std::invalid_argument);
}

TEST_CASE("disconnected presence regions get deterministic branch labels") {
    // band 0 present only on two separated k-strips; bands 1-2 everywhere
    auto sw = synth_sweep(8, 4, [](int ik, int) {
        std::vector<BandCandidate> cs;
        if (ik == 0 || ik == 1 || ik == 4 || ik == 5) cs.push_back(cand(2.4, 0.5));
        cs.push_back(cand(2.6, 0.5));
        cs.push_back(cand(2.9, 0.6));
        return cs;
    });
    auto bands = select_bound_bands(sw, default_sel());
    CHECK(bands[0].branch_count == 2);
    CHECK(bands[1].branch_count == 1);
    CHECK(bands[2].branch_count == 1);
    CHECK(bands[0].present_count() == 16);
    // scan-order labels: the ik=0 strip is component 0, the ik=4 strip is 1
    CHECK(bands[0].branch[bands[0].idx(0, 0)] == 0);
    CHECK(bands[0].branch[bands[0].idx(4, 0)] == 1);
    CHECK(bands[0].branch[bands[0].idx(2, 0)] == -1);
}

TEST_CASE("torus sweep axes are periodic half-open grids") {
    TorusSweepParams sp;
    sp.n_k = 6;
    sp.n_phi = 4;
    sp.kappa_points = 301;
    ModelParams p;
    p.trunc = 12;
    auto sw = sweep_torus(p, sp);
    REQUIRE(sw.k_axis.size() == 6);
    REQUIRE(sw.phi_axis.size() == 4);
    CHECK(sw.k_axis[0] == doctest::Approx(-pi / 3.0));
    CHECK(sw.k_axis[1] - sw.k_axis[0] == doctest::Approx(two_pi / 3.0 / 6));
    // the right edge stops one step short of +pi/3
    CHECK(sw.k_axis[5] == doctest::Approx(pi / 3.0 - two_pi / 3.0 / 6));
    CHECK(sw.phi_axis[0] == 0.0);
    CHECK(sw.phi_axis[3] == doctest::Approx(two_pi * 3.0 / 4.0));
    CHECK(sw.points.size() == 24);
    // at() is row-major with k outer
    CHECK(&sw.at(1, 0) == &sw.points[4]);
    CHECK(&sw.at(0, 3) == &sw.points[3]);
}

TEST_CASE("sweep parameter validation") {
    ModelParams p;
    p.trunc = 12;
    TorusSweepParams sp;
    sp.n_k = 1;
    CHECK_THROWS_AS(sweep_torus(p, sp), std::invalid_argument);
    sp = TorusSweepParams{};
    sp.kappa_points = 1;
    CHECK_THROWS_AS(sweep_torus(p, sp), std::invalid_argument);
    sp = TorusSweepParams{};
    sp.p_store = 1.0;
    CHECK_THROWS_AS(sweep_torus(p, sp), std::invalid_argument);
    ModelParams bad;
    bad.trunc = 5;
    CHECK_THROWS_AS(sweep_torus(bad, TorusSweepParams{}), std::invalid_argument);
}

TEST_CASE("scattering set is sorted and measures distance to the continuum") {
    ModelParams p;
    p.trunc = 40;
    auto env = scattering_set(p, 0.3, 501);
    REQUIRE(env.size() > 100);
    for (std::size_t i = 1; i < env.size(); ++i) CHECK(env[i - 1] <= env[i]);

    // a value inside the set is at distance ~0; one far outside is at the
    // distance to the nearest edge
    double mid = env[env.size() / 2];
    CHECK(continuum_gap(env, mid) == 0.0);
    CHECK(continuum_gap(env, env.back() + 7.0) == doctest::Approx(7.0));
    CHECK(continuum_gap(env, env.front() - 3.0) == doctest::Approx(3.0));
    CHECK(continuum_gap({}, 1.0) == std::numeric_limits<double>::infinity());

    CHECK_THROWS_AS(scattering_set(p, 0.3, 1), std::invalid_argument);
}

TEST_CASE("parallel and serial torus sweeps agree bitwise") {
    ModelParams p;
    p.trunc = 20;
    TorusSweepParams sp;
    sp.n_k = 6;
    sp.n_phi = 6;
    sp.kappa_points = 301;
    auto a = sweep_torus(p, sp);
    auto b = ref::sweep_torus(p, sp);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        REQUIRE(a.points[i].size() == b.points[i].size());
        for (std::size_t c = 0; c < a.points[i].size(); ++c) {
            const auto& x = a.points[i][c];
            const auto& y = b.points[i][c];
            CHECK(x.energy == y.energy);
            CHECK(x.bound_p == y.bound_p);
            CHECK(x.continuum_gap == y.continuum_gap);
            REQUIRE(x.vec.size() == y.vec.size());
            for (Eigen::Index v = 0; v < x.vec.size(); ++v) CHECK(x.vec[v] == y.vec[v]);
        }
    }
}

TEST_CASE("small real sweep: three bands, stable integers across thresholds") {
    ModelParams p;
    p.trunc = 30;
    TorusSweepParams sp;
    sp.n_k = 8;
    sp.n_phi = 8;
    sp.kappa_points = 501;
    auto sw = sweep_torus(p, sp);

    const long long expect[3] = {-1, 2, -1};
    for (double p_th : {0.20, 0.25, 0.30}) {
        SelectionOptions opt;
        opt.p_th = p_th;
        auto bands = select_bound_bands(sw, opt);
        // upper two bands cover the torus; the bottom band lives on a strip
        CHECK(bands[1].present_count() == 64);
        CHECK(bands[2].present_count() == 64);
        CHECK(bands[0].present_count() > 0);
        CHECK(bands[0].present_count() < 64);
        for (int m = 0; m < 3; ++m) {
            auto r = chern_link(bands[static_cast<std::size_t>(m)]);
            CHECK(r.link_chern == expect[m]);
            CHECK(bands[static_cast<std::size_t>(m)].fill_count() == 0);
            CHECK(bands[static_cast<std::size_t>(m)].branch_count == 1);
            // energies stay inside the configured window on the selected set
            for (std::size_t cidx = 0; cidx < bands[m].mask.size(); ++cidx) {
                if (!bands[m].mask[cidx]) continue;
                CHECK(bands[m].energy[cidx].real() >= opt.e_lo);
                CHECK(bands[m].energy[cidx].real() <= opt.e_hi);
            }
        }
    }
}
