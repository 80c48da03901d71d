#include "biphoton/interface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace biphoton {

Eigen::MatrixXcd build_single_hamiltonian(const QubitArray& a) {
    const int n = a.size();
    Eigen::MatrixXcd h(n, n);
    for (int c = 1; c <= n; ++c)
        for (int r = 1; r <= n; ++r)
            h(r - 1, c - 1) = coupling_kernel(a.params, a.z(r), a.z(c));
    return h;
}

EigResult single_excitation_spectrum(const QubitArray& a) {
    return eig_dense(build_single_hamiltonian(a));
}

int most_subradiant(const Eigen::VectorXcd& values) {
    if (values.size() == 0) throw std::invalid_argument("most_subradiant: empty spectrum");
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < values.size(); ++i)
        if (values[i].imag() > values[best].imag()) best = i;
    return static_cast<int>(best);
}

namespace {

AnsatzState combine(const PairBasis& b, const Eigen::VectorXcd& c, const Eigen::VectorXcd& f,
                    double sign) {
    if (c.size() != b.n || f.size() != b.n)
        throw std::invalid_argument("ansatz: amplitude vectors must have one entry per site");
    AnsatzState s;
    s.psi.resize(static_cast<Eigen::Index>(b.size()));
    for (std::size_t r = 0; r < b.size(); ++r) {
        auto [j, l] = b.pair_at(r);
        s.psi[static_cast<Eigen::Index>(r)] = c[j - 1] * f[l - 1] + sign * c[l - 1] * f[j - 1];
    }
    double nrm = s.psi.norm();
    if (nrm < 1e-12)
        throw std::invalid_argument("ansatz: combination vanishes (c and f are parallel)");
    s.psi /= nrm;
    return s;
}

}  // namespace

AnsatzState build_ansatz(const PairBasis& b, const Eigen::VectorXcd& c,
                         const Eigen::VectorXcd& f) {
    return combine(b, c, f, -1.0);
}

AnsatzState build_symmetric_ansatz(const PairBasis& b, const Eigen::VectorXcd& c,
                                   const Eigen::VectorXcd& f) {
    return combine(b, c, f, 1.0);
}

double overlap2(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return std::norm(a.dot(b));
}

InterfaceReport find_interface_states(const std::vector<StateSummary>& table, int n_sites,
                                      const InterfaceThresholds& th) {
    if (table.empty()) throw std::invalid_argument("find_interface_states: empty table");
    InterfaceReport rep;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : table) {
        if (s.gamma < best) {
            best = s.gamma;
            rep.most_subradiant_index = s.index;
        }
        if (s.gamma < th.gamma_ultra) rep.ultra.push_back(s.index);
        if (std::abs(s.tilt) > n_sites / 4.0 && s.weight > th.weight_min &&
            s.gamma >= th.gamma_edge_lo && s.gamma <= th.gamma_edge_hi)
            rep.bound_edge.push_back(s.index);
    }
    return rep;
}

std::vector<double> critical_phases(int n_sites) {
    if (n_sites < 1) throw std::invalid_argument("critical_phases: need n_sites >= 1");
    // inversion symmetry z_j + z_{N+1-j} = const reduces to g(phi0) = 0
    auto g = [&](double phi0) { return std::cos(pi * (n_sites + 1) / 3.0 + phi0); };

    std::vector<double> roots;
    const int steps = 4096;
    double prev_x = 0.0, prev_g = g(0.0);
    for (int i = 1; i <= steps; ++i) {
        double x = two_pi * i / steps;
        double gx = g(x);
        if (prev_g == 0.0) roots.push_back(prev_x);
        if (prev_g * gx < 0.0) {
            double lo = prev_x, hi = x, glo = prev_g;
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                double gm = g(mid);
                if (gm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (glo * gm < 0.0)
                    hi = mid;
                else {
                    lo = mid;
                    glo = gm;
                }
                if (hi - lo < 1e-15) break;
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_g = gx;
    }
    for (auto& r : roots) r = reduce_phase(r);
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace biphoton
