#include "biphoton/finite.hpp"

#include <cmath>
#include <stdexcept>

namespace biphoton {

PairBasis::PairBasis(int n_sites) : n(n_sites) {
    if (n_sites < 2) throw std::invalid_argument("PairBasis: need at least 2 sites");
    pairs.reserve(static_cast<std::size_t>(n_sites) * (n_sites - 1) / 2);
    for (int j = 1; j < n_sites; ++j)
        for (int l = j + 1; l <= n_sites; ++l) pairs.emplace_back(j, l);
}

std::size_t PairBasis::index_of(int j, int l) const {
    if (!(1 <= j && j < l && l <= n))
        throw std::invalid_argument("PairBasis::index_of: need 1 <= j < l <= N");
    // lexicographic offset: pairs starting below j, then the (j, l) block
    auto jj = static_cast<std::size_t>(j - 1);
    return jj * static_cast<std::size_t>(2 * n - j) / 2 + static_cast<std::size_t>(l - j - 1);
}

namespace {

template <class Real>
void fill_pair_column(const QubitArray& a, const PairBasis& basis, std::size_t col,
                      std::complex<Real>* column_data) {
    using C = std::complex<Real>;
    const auto& p = a.params;
    auto [j, l] = basis.pair_at(col);
    auto put = [&](std::size_t row, std::complex<double> v) {
        column_data[row] += C(static_cast<Real>(v.real()), static_cast<Real>(v.imag()));
    };
    // one-excitation hop from each member of the pair; target equal to the
    // spectator would be a double occupancy and stays projected out
    for (int t = 1; t <= basis.n; ++t) {
        if (t != l)
            put(basis.index_of(std::min(t, l), std::max(t, l)),
                coupling_kernel(p, a.z(t), a.z(j)));
        if (t != j)
            put(basis.index_of(std::min(j, t), std::max(j, t)),
                coupling_kernel(p, a.z(t), a.z(l)));
    }
}

template <class Real>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> build_pair_matrix(
    const QubitArray& a, bool parallel) {
    if (a.size() < 4)
        throw std::invalid_argument("build_pair_hamiltonian: need at least 4 qubits");
    PairBasis basis(a.size());
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> h(dim, dim);
    h.setZero();
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (Eigen::Index c = 0; c < dim; ++c)
            fill_pair_column<Real>(a, basis, static_cast<std::size_t>(c), h.col(c).data());
    } else {
        for (Eigen::Index c = 0; c < dim; ++c)
            fill_pair_column<Real>(a, basis, static_cast<std::size_t>(c), h.col(c).data());
    }
    return h;
}

}  // namespace

Eigen::MatrixXcd build_pair_hamiltonian(const QubitArray& a) {
    return build_pair_matrix<double>(a, true);
}

Eigen::MatrixXcf build_pair_hamiltonian_f(const QubitArray& a) {
    return build_pair_matrix<float>(a, true);
}

namespace ref {
Eigen::MatrixXcd build_pair_hamiltonian(const QubitArray& a) {
    return build_pair_matrix<double>(a, false);
}
}  // namespace ref

Eigen::VectorXcd apply_pair_hamiltonian(const QubitArray& a, const Eigen::VectorXcd& x) {
    PairBasis basis(a.size());
    if (x.size() != static_cast<Eigen::Index>(basis.size()))
        throw std::invalid_argument("apply_pair_hamiltonian: size mismatch");
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(x.size());
    const auto& p = a.params;
    for (std::size_t c = 0; c < basis.size(); ++c) {
        auto [j, l] = basis.pair_at(c);
        std::complex<double> xc = x[static_cast<Eigen::Index>(c)];
        if (xc == 0.0) continue;
        for (int t = 1; t <= basis.n; ++t) {
            if (t != l) {
                std::size_t row = basis.index_of(std::min(t, l), std::max(t, l));
                y[static_cast<Eigen::Index>(row)] += coupling_kernel(p, a.z(t), a.z(j)) * xc;
            }
            if (t != j) {
                std::size_t row = basis.index_of(std::min(j, t), std::max(j, t));
                y[static_cast<Eigen::Index>(row)] += coupling_kernel(p, a.z(t), a.z(l)) * xc;
            }
        }
    }
    return y;
}

TwoExSpectrum solve_two_excitation(const QubitArray& a, const EigOptions& opts) {
    TwoExSpectrum s{PairBasis(a.size()), {}};
    s.eig = eig_dense(build_pair_hamiltonian(a), opts);
    return s;
}

Eigen::VectorXcd bosonic_oracle_spectrum(const QubitArray& a, double chi) {
    const int n = a.size();
    if (n > 8) throw std::invalid_argument("bosonic_oracle_spectrum: N <= 8 only");
    const auto& p = a.params;
    const double sqrt2 = std::sqrt(2.0);

    // basis: all (j, l) with j <= l, lexicographic; doubly occupied when j == l
    std::vector<std::pair<int, int>> basis;
    for (int j = 1; j <= n; ++j)
        for (int l = j; l <= n; ++l) basis.emplace_back(j, l);
    auto index_of = [&](int j, int l) {
        if (j > l) std::swap(j, l);
        auto jj = static_cast<std::size_t>(j - 1);
        // row offset of the block starting at j, for the j <= l enumeration
        return jj * static_cast<std::size_t>(2 * n - j + 2) / 2 +
               static_cast<std::size_t>(l - j);
    };

    const auto dim = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t c = 0; c < basis.size(); ++c) {
        auto [j, l] = basis[c];
        if (j == l) {
            h(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c)) +=
                chi + 2.0 * coupling_kernel(p, a.z(j), a.z(j));
            // sqrt(2) enhancement moving one boson out of a doubly occupied site
            for (int t = 1; t <= n; ++t) {
                if (t == j) continue;
                h(static_cast<Eigen::Index>(index_of(t, j)), static_cast<Eigen::Index>(c)) +=
                    sqrt2 * coupling_kernel(p, a.z(t), a.z(j));
            }
        } else {
            for (int t = 1; t <= n; ++t) {
                double amp = (t == l) ? sqrt2 : 1.0;
                h(static_cast<Eigen::Index>(index_of(t, l)), static_cast<Eigen::Index>(c)) +=
                    amp * coupling_kernel(p, a.z(t), a.z(j));
                amp = (t == j) ? sqrt2 : 1.0;
                h(static_cast<Eigen::Index>(index_of(j, t)), static_cast<Eigen::Index>(c)) +=
                    amp * coupling_kernel(p, a.z(t), a.z(l));
            }
        }
    }

    EigOptions opts;
    opts.vectors = false;
    opts.residuals = false;
    return eig_dense(std::move(h), opts).values;
}

double tilted_degree(const PairBasis& b, const Eigen::VectorXcd& psi, double g) {
    if (psi.size() != static_cast<Eigen::Index>(b.size()))
        throw std::invalid_argument("tilted_degree: size mismatch");
    double t = 0.0;
    for (std::size_t r = 0; r < b.size(); ++r) {
        auto [j, l] = b.pair_at(r);
        t += g * (j + l - (b.n + 1)) * std::norm(psi[static_cast<Eigen::Index>(r)]);
    }
    return t;
}

double bound_weight(const PairBasis& b, const Eigen::VectorXcd& psi, int delta0) {
    if (delta0 < 1) throw std::invalid_argument("bound_weight: delta0 >= 1 required");
    if (psi.size() != static_cast<Eigen::Index>(b.size()))
        throw std::invalid_argument("bound_weight: size mismatch");
    double w = 0.0;
    for (std::size_t r = 0; r < b.size(); ++r) {
        auto [j, l] = b.pair_at(r);
        if (l - j <= delta0) w += std::norm(psi[static_cast<Eigen::Index>(r)]);
    }
    return w;
}

Eigen::MatrixXd joint_probability(const PairBasis& b, const Eigen::VectorXcd& psi) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(b.n, b.n);
    for (std::size_t r = 0; r < b.size(); ++r) {
        auto [j, l] = b.pair_at(r);
        double v = std::norm(psi[static_cast<Eigen::Index>(r)]);
        m(j - 1, l - 1) = v;
        m(l - 1, j - 1) = v;
    }
    return m;
}

std::vector<StateSummary> summarize_states(const PairBasis& b, const EigResult& eig,
                                           double g, int delta0) {
    const auto nstates = static_cast<int>(eig.values.size());
    std::vector<StateSummary> table(static_cast<std::size_t>(nstates));
#pragma omp parallel for schedule(static)
    for (int v = 0; v < nstates; ++v) {
        const auto psi = eig.right_vectors.col(v);
        double t = 0.0, w = 0.0;
        for (std::size_t r = 0; r < b.size(); ++r) {
            auto [j, l] = b.pair_at(r);
            double pr = std::norm(psi[static_cast<Eigen::Index>(r)]);
            t += g * (j + l - (b.n + 1)) * pr;
            if (l - j <= delta0) w += pr;
        }
        const std::complex<double> eps = eig.values[v] / 2.0;
        table[static_cast<std::size_t>(v)] = StateSummary{v, eps, -eps.imag(), t, w};
    }
    return table;
}

Eigen::VectorXcd relabeled_pair_spectrum(const QubitArray& a) {
    auto h = build_pair_hamiltonian(a);
    PairBasis b(a.size());
    const auto dim = static_cast<Eigen::Index>(b.size());
    Eigen::VectorXi perm(dim);
    for (std::size_t r = 0; r < b.size(); ++r) {
        auto [j, l] = b.pair_at(r);
        perm[static_cast<Eigen::Index>(r)] =
            static_cast<int>(b.index_of(b.n + 1 - l, b.n + 1 - j));
    }
    Eigen::MatrixXcd hp(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c)
        for (Eigen::Index r = 0; r < dim; ++r) hp(perm[r], perm[c]) = h(r, c);
    h.resize(0, 0);
    EigOptions lean;
    lean.vectors = false;
    lean.residuals = false;
    return eig_dense(std::move(hp), lean).values;
}

}  // namespace biphoton
