#include "biphoton/dos.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "biphoton/bloch.hpp"

namespace biphoton {

std::complex<double> com_fourier(const PairBasis& b, const QubitArray& a,
                                 const Eigen::VectorXcd& psi, int s, int n, double k,
                                 int m_cells, int offset_cells) {
    if (s < 1 || n < 1 || n > 3 || m_cells < 1)
        throw std::invalid_argument("com_fourier: need s >= 1, n in 1..3, m_cells >= 1");
    if (psi.size() != static_cast<Eigen::Index>(b.size()))
        throw std::invalid_argument("com_fourier: state size mismatch");
    std::complex<double> acc = 0.0;
    for (int m = 0; m < m_cells; ++m) {
        int j2 = 3 * (m + offset_cells) + n;
        int j1 = j2 - s;
        if (j1 < 1 || j2 > a.size())
            throw std::out_of_range("com_fourier: cell range leaves the array");
        acc += psi[static_cast<Eigen::Index>(b.index_of(j1, j2))] *
               std::polar(1.0, 0.5 * k * (a.z(j2) + a.z(j1)));
    }
    return acc;
}

namespace {

// [min, max] of Re E over the bound bands (P > 0.25) on a coarse K sweep
std::pair<double, double> bound_band_window(const ModelParams& p, double phi0) {
    constexpr int nk = 64;
    constexpr double p_th = 0.25;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < nk; ++i) {
        double k = -pi / 3.0 + (two_pi / 3.0) * i / nk;
        auto bands = band_solve(build_bloch_matrix(p, k, phi0), p.gamma0, 5);
        for (Eigen::Index v = 0; v < bands.energies.size(); ++v)
            if (bands.bound_p[v] > p_th) {
                lo = std::min(lo, bands.energies[v].real());
                hi = std::max(hi, bands.energies[v].real());
            }
    }
    if (!(lo < hi)) throw std::runtime_error("dos: no bound bands found for E window");
    return {lo, hi};
}

}  // namespace

DosGrid dos(const QubitArray& a, const PairBasis& b, const Eigen::VectorXcd& pair_values,
            const StateColumn& state, DosParams dp) {
    if (!(dp.sigma > 0.0)) throw std::invalid_argument("dos: sigma > 0 required");
    if (dp.n_e < 2 || dp.n_k < 2) throw std::invalid_argument("dos: need n_e, n_k >= 2");
    const int n_sites = a.size();
    if (3 * (dp.m_cells - 1 + dp.offset_cells) + 3 > n_sites ||
        3 * dp.offset_cells + 1 - dp.s_max < 1)
        throw std::out_of_range("dos: cell range does not fit the array");

    if (std::isnan(dp.e_min) || std::isnan(dp.e_max)) {
        auto [lo, hi] = bound_band_window(a.params, a.params.phi0);
        dp.e_min = lo - 10.0 * dp.sigma;
        dp.e_max = hi + 10.0 * dp.sigma;
    }

    DosGrid g;
    g.params = dp;
    g.e_axis.setLinSpaced(dp.n_e, dp.e_min, dp.e_max);
    g.k_axis.setLinSpaced(dp.n_k, -pi / 3.0, pi / 3.0);
    g.f = Eigen::MatrixXd::Zero(dp.n_e, dp.n_k);

    const double reach = dp.skip_sigma * dp.sigma;
    Eigen::VectorXd gauss(dp.n_e), w(dp.n_k);
    for (Eigen::Index v = 0; v < pair_values.size(); ++v) {
        const double e_v = 0.5 * pair_values[v].real();
        if (e_v < dp.e_min - reach || e_v > dp.e_max + reach) continue;
        const Eigen::VectorXcd psi = state(v);

#pragma omp parallel for schedule(static)
        for (int j = 0; j < dp.n_k; ++j) {
            double acc = 0.0;
            for (int s = 1; s <= dp.s_max; ++s)
                for (int n = 1; n <= 3; ++n)
                    acc += std::norm(com_fourier(b, a, psi, s, n, g.k_axis[j],
                                                 dp.m_cells, dp.offset_cells));
            w[j] = acc;
        }
        for (int i = 0; i < dp.n_e; ++i) {
            double d = (g.e_axis[i] - e_v) / dp.sigma;
            gauss[i] = std::exp(-0.5 * d * d);
        }
        g.f.noalias() += gauss * w.transpose();
    }
    return g;
}

}  // namespace biphoton
