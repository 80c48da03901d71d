#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "biphoton/eig.hpp"
#include "biphoton/lattice.hpp"

namespace biphoton {

// 1 iff x is a multiple of 3 (mathematical modulus; true for negatives too).
int selector_f(long x);

// z_a - z_b computed as (a - b) + (offset_a - offset_b): the result depends
// only on a - b and the residue classes of a and b, so it is exactly invariant
// under shifting both indices by a multiple of 3 and exactly antisymmetric.
double position_difference(const ModelParams& p, long a, long b, double phi0);

// lattice: the matrix exactly as written in the pair-momentum representation;
// periodic: conjugated by diag(e^{iK(z_n + z_{n+Delta})/2}), which makes the
// matrix an exactly 2*pi/3-periodic function of K (used for torus sweeps).
enum class BlochGauge { lattice, periodic };

// Center-of-mass Bloch block at momentum K: basis (Delta in 1..L, n in 1..3),
// row = 3*(Delta-1) + (n-1). The Hamiltonian is -i*gamma0 * m.
struct BlochBlock {
    double k = 0.0;
    double phi0 = 0.0;
    int trunc = 0;
    BlochGauge gauge = BlochGauge::lattice;
    Eigen::MatrixXcd m;

    Eigen::Index index_of(int delta, int n) const {
        return static_cast<Eigen::Index>(3 * (delta - 1) + (n - 1));
    }
};

BlochBlock build_bloch_matrix(const ModelParams& p, double k, double phi0,
                              BlochGauge gauge = BlochGauge::lattice);

// All 3L eigenpairs of -i*gamma0*M/2 sorted by (Re, Im) ascending, each with
// the probability of the two excitations sitting within delta0 of each other.
struct BlochBands {
    double k = 0.0;
    double phi0 = 0.0;
    Eigen::VectorXcd energies;   // per-excitation, units of gamma0
    Eigen::VectorXd bound_p;     // sum over n=1..3, Delta <= delta0 of |u|^2
    Eigen::MatrixXcd vectors;    // empty when solved values-only
};

BlochBands band_solve(const BlochBlock& block, double gamma0, int delta0,
                      bool with_vectors = true);

// Three Bloch branches of the single-excitation problem at momentum k, from
// the 3x3 cell-gauge block with the infinite inter-cell sums in closed form
// (geometric series r/(1-r), r = e^{3i(phi +- k)}). Throws std::domain_error
// within 1e-9 of the guided-mode resonance |1 - r| = 0.
Eigen::Vector3cd single_excitation_dispersion(const ModelParams& p, double k);

// Scattering-continuum estimate [eps_{(K+kappa)/2} + eps_{(K-kappa)/2}] / 2
// for all nine branch pairings, row-major in (branch_a, branch_b).
std::vector<std::complex<double>> scattering_energy(const ModelParams& p, double k,
                                                    double kappa);

}  // namespace biphoton
