#include "biphoton/bloch.hpp"

#include <cmath>
#include <stdexcept>

namespace biphoton {

int selector_f(long x) { return x % 3 == 0 ? 1 : 0; }

double position_difference(const ModelParams& p, long a, long b, double phi0) {
    return static_cast<double>(a - b) +
           (modulation_offset(p, a, phi0) - modulation_offset(p, b, phi0));
}

BlochBlock build_bloch_matrix(const ModelParams& p, double k, double phi0,
                              BlochGauge gauge) {
    require_valid(p);
    const int L = p.trunc;
    BlochBlock block{k, phi0, L, gauge, Eigen::MatrixXcd::Zero(3 * L, 3 * L)};

    auto phase = [&](double d) { return std::polar(1.0, 0.5 * k * d + p.phi * std::abs(d)); };
    auto pd = [&](long a, long b) { return position_difference(p, a, b, phi0); };

    for (int dc = 1; dc <= L; ++dc)
        for (int nc = 1; nc <= 3; ++nc) {
            const auto col = block.index_of(dc, nc);
            for (int dr = 1; dr <= L; ++dr)
                for (int nr = 1; nr <= 3; ++nr) {
                    // terms 2 and 3 swap roles under (row,col) exchange; the
                    // grouping t1 + (t2 + t3) + t4 keeps k -> -k an exact
                    // transpose because IEEE addition commutes bitwise
                    std::complex<double> t1 = 0.0, t2 = 0.0, t3 = 0.0, t4 = 0.0;
                    if (selector_f(nc - nr)) t1 = phase(pd(nc + dc, nc + dr));
                    if (selector_f(nc + dc - nr)) t2 = phase(pd(nc, nc + dc + dr));
                    if (selector_f(nr + dr - nc)) t3 = phase(pd(nc + dc, nc - dr));
                    if (selector_f(nc + dc - dr - nr)) t4 = phase(pd(nc, nc + dc - dr));
                    block.m(block.index_of(dr, nr), col) = t1 + (t2 + t3) + t4;
                }
        }

    if (gauge == BlochGauge::periodic) {
        // basis phases referenced to the cell origin instead of the pair
        // center of mass: entry (r,c) gains e^{iK(w_r - w_c)} with w the
        // intracell center. Shifting K by 2*pi/3 then multiplies the raw
        // entries by exactly the inverse factor, so the matrix is periodic.
        Eigen::VectorXcd s(3 * L);
        for (int d = 1; d <= L; ++d)
            for (int n = 1; n <= 3; ++n)
                s[block.index_of(d, n)] = std::polar(
                    1.0, 0.5 * k *
                             (modulated_position(p, n, phi0) +
                              modulated_position(p, n + d, phi0)));
        for (Eigen::Index c = 0; c < block.m.cols(); ++c)
            for (Eigen::Index r = 0; r < block.m.rows(); ++r)
                block.m(r, c) *= s[r] * std::conj(s[c]);
    }
    return block;
}

BlochBands band_solve(const BlochBlock& block, double gamma0, int delta0,
                      bool with_vectors) {
    if (delta0 < 1 || delta0 > block.trunc)
        throw std::invalid_argument("band_solve: need 1 <= delta0 <= L");
    EigOptions opts;
    opts.vectors = with_vectors;
    opts.residuals = false;
    auto r = eig_dense(std::complex<double>(0.0, -gamma0) * block.m, opts);

    BlochBands bands;
    bands.k = block.k;
    bands.phi0 = block.phi0;
    bands.energies = r.values / 2.0;
    if (with_vectors) {
        const auto nstates = r.values.size();
        bands.bound_p.resize(nstates);
        for (Eigen::Index v = 0; v < nstates; ++v) {
            double w = 0.0;
            for (int d = 1; d <= delta0; ++d)
                for (int n = 1; n <= 3; ++n)
                    w += std::norm(r.right_vectors(block.index_of(d, n), v));
            bands.bound_p[v] = w;
        }
        bands.vectors = std::move(r.right_vectors);
    }
    return bands;
}

namespace {

Eigen::Vector3cd sorted3(Eigen::Vector3cd v) {
    auto lt = [](std::complex<double> a, std::complex<double> b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    };
    if (lt(v[1], v[0])) std::swap(v[0], v[1]);
    if (lt(v[2], v[1])) std::swap(v[1], v[2]);
    if (lt(v[1], v[0])) std::swap(v[0], v[1]);
    return v;
}

}  // namespace

Eigen::Vector3cd single_excitation_dispersion(const ModelParams& p, double k) {
    using cd = std::complex<double>;
    const cd rp = std::polar(1.0, 3.0 * (p.phi + k));
    const cd rm = std::polar(1.0, 3.0 * (p.phi - k));
    if (std::abs(1.0 - rp) < 1e-9 || std::abs(1.0 - rm) < 1e-9)
        throw std::domain_error("single_excitation_dispersion: k within 1e-9 of the "
                                "guided-mode resonance");
    const cd gp = rp / (1.0 - rp);
    const cd gm = rm / (1.0 - rm);

    Eigen::Matrix3cd h;
    for (int nr = 1; nr <= 3; ++nr)
        for (int nc = 1; nc <= 3; ++nc) {
            double zeta = position_difference(p, nc, nr, p.phi0);
            h(nr - 1, nc - 1) =
                cd(0.0, -p.gamma0) *
                (std::polar(1.0, p.phi * std::abs(zeta)) +
                 std::polar(1.0, p.phi * zeta) * gp + std::polar(1.0, -p.phi * zeta) * gm);
        }

    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(h, false);
    if (es.info() != Eigen::Success)
        throw solver_error("single_excitation_dispersion: 3x3 solve failed");
    return sorted3(es.eigenvalues());
}

std::vector<std::complex<double>> scattering_energy(const ModelParams& p, double k,
                                                    double kappa) {
    auto ea = single_excitation_dispersion(p, 0.5 * (k + kappa));
    auto eb = single_excitation_dispersion(p, 0.5 * (k - kappa));
    std::vector<std::complex<double>> out;
    out.reserve(9);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) out.push_back(0.5 * (ea[a] + eb[b]));
    return out;
}

}  // namespace biphoton
