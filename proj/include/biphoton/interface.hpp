#pragma once

#include <vector>

#include <Eigen/Dense>

#include "biphoton/finite.hpp"

namespace biphoton {

// H1[j,l] = coupling_kernel(z_j, z_l); diagonal -i*gamma0.
Eigen::MatrixXcd build_single_hamiltonian(const QubitArray& a);
EigResult single_excitation_spectrum(const QubitArray& a);

// Index of the eigenvalue with the smallest decay rate -Im(eps).
int most_subradiant(const Eigen::VectorXcd& values);

struct AnsatzState {
    Eigen::VectorXcd psi;  // pair-basis amplitudes, unit norm
};

// psi_{j,l} proportional to c_j*f_l - c_l*f_j for j < l. Throws when c and f
// are parallel (the antisymmetric combination vanishes identically).
AnsatzState build_ansatz(const PairBasis& b, const Eigen::VectorXcd& c,
                         const Eigen::VectorXcd& f);

// Symmetric counterpart (plus sign), used only as a fidelity baseline.
AnsatzState build_symmetric_ansatz(const PairBasis& b, const Eigen::VectorXcd& c,
                                   const Eigen::VectorXcd& f);

double overlap2(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);  // |<a|b>|^2

struct InterfaceThresholds {
    double gamma_ultra = 1e-6;    // long-lived interface states
    double gamma_edge_lo = 1e-3;  // expected decay window of bound-edge states
    double gamma_edge_hi = 1e-1;
    double weight_min = 0.5;      // bound_weight cut classifying a state as bound
};

struct InterfaceReport {
    int most_subradiant_index = -1;
    std::vector<int> ultra;       // gamma < gamma_ultra
    std::vector<int> bound_edge;  // |T| > N/4 and weight > weight_min
};

InterfaceReport find_interface_states(const std::vector<StateSummary>& table, int n_sites,
                                      const InterfaceThresholds& th = {});

// Modulation phases in [0, 2pi) at which the array is inversion symmetric,
// i.e. z_j + z_{N+1-j} is independent of j. Located by sign-change bracketing
// and bisection of g(phi0) = cos(pi*(N+1)/3 + phi0).
std::vector<double> critical_phases(int n_sites);

}  // namespace biphoton
