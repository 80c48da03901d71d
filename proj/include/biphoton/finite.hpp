#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "biphoton/eig.hpp"
#include "biphoton/lattice.hpp"

namespace biphoton {

// Hard-core two-excitation basis |j;l>, 1 <= j < l <= N, lexicographic in (j, l).
struct PairBasis {
    explicit PairBasis(int n_sites);

    int n = 0;
    std::size_t size() const { return pairs.size(); }
    std::size_t index_of(int j, int l) const;  // requires 1 <= j < l <= n
    std::pair<int, int> pair_at(std::size_t row) const { return pairs[row]; }

    std::vector<std::pair<int, int>> pairs;
};

// H2 over the pair basis: diagonal -2i*gamma0; pairs sharing exactly one site
// couple through a single kernel hop of the moved excitation; everything else
// vanishes (double occupancy is projected out by the basis itself).
// Assembly is OpenMP-parallel over columns; ref::build_pair_hamiltonian is the
// serial reference used by the parity tests and the benchmark.
Eigen::MatrixXcd build_pair_hamiltonian(const QubitArray& a);
Eigen::MatrixXcf build_pair_hamiltonian_f(const QubitArray& a);

namespace ref {
Eigen::MatrixXcd build_pair_hamiltonian(const QubitArray& a);
}

// y = H2 * x streamed from the geometry without materializing H2.
Eigen::VectorXcd apply_pair_hamiltonian(const QubitArray& a, const Eigen::VectorXcd& x);

struct TwoExSpectrum {
    PairBasis basis;
    EigResult eig;  // eig.values are the raw pair eigenvalues 2*eps_v

    // eps_v and Gamma_v = -Im(eps_v) are quoted per excitation throughout.
    Eigen::VectorXcd per_excitation_energies() const { return eig.values / 2.0; }
    Eigen::VectorXd decay_rates() const { return -eig.values.imag() / 2.0; }
};

TwoExSpectrum solve_two_excitation(const QubitArray& a, const EigOptions& opts = {});

// Full two-boson model including doubly occupied sites (dimension N(N+1)/2)
// with on-site interaction chi; validation oracle for N <= 8.
Eigen::VectorXcd bosonic_oracle_spectrum(const QubitArray& a, double chi);

// T = sum_{j<l} g*(j + l - (N+1)) * |psi_{j,l}|^2
double tilted_degree(const PairBasis& b, const Eigen::VectorXcd& psi, double g);

// Probability of the two excitations sitting within delta0 sites of each other.
double bound_weight(const PairBasis& b, const Eigen::VectorXcd& psi, int delta0);

// N x N map |psi_{j,l}|^2 symmetrized over j <-> l; diagonal is zero.
Eigen::MatrixXd joint_probability(const PairBasis& b, const Eigen::VectorXcd& psi);

struct StateSummary {
    int index;
    std::complex<double> eps;  // per-excitation energy (pair eigenvalue / 2)
    double gamma;              // -Im(eps)
    double tilt;
    double weight;             // bound_weight at the chosen delta0
};

std::vector<StateSummary> summarize_states(const PairBasis& b, const EigResult& eig,
                                           double g, int delta0);

// Pair spectrum with the basis relabeled (j,l) -> (N+1-l, N+1-j), sorted like
// eig_dense. The relabeling is a permutation similarity, so the multiset always
// matches the plain spectrum; residual deviations measure eigensolver
// reproducibility under row reordering, not a property of the geometry.
Eigen::VectorXcd relabeled_pair_spectrum(const QubitArray& a);

}  // namespace biphoton
