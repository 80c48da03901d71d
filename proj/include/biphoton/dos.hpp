#pragma once

#include <complex>
#include <functional>
#include <limits>

#include <Eigen/Dense>

#include "biphoton/finite.hpp"

namespace biphoton {

// Center-of-mass Fourier amplitude of a pair state at fixed relative distance
// s and sublattice n: sum over cells m of psi_{j-s,j} e^{iK(z_j + z_{j-s})/2}
// with j = 3*(m + offset) + n. Throws std::out_of_range if any index leaves
// the array.
std::complex<double> com_fourier(const PairBasis& b, const QubitArray& a,
                                 const Eigen::VectorXcd& psi, int s, int n, double k,
                                 int m_cells, int offset_cells);

struct DosParams {
    double sigma = 1e-3;
    int s_max = 10;
    int m_cells = 50;
    int offset_cells = 10;  // cells skipped at the left edge
    int n_e = 1200;
    int n_k = 201;
    // E window; NaN = auto from the Bloch bound bands at these parameters,
    // padded by 10 sigma
    double e_min = std::numeric_limits<double>::quiet_NaN();
    double e_max = std::numeric_limits<double>::quiet_NaN();
    // states further than this many sigma outside the window are dropped
    double skip_sigma = 12.0;
};

struct DosGrid {
    Eigen::VectorXd e_axis;  // per-excitation energy, units of gamma0
    Eigen::VectorXd k_axis;  // [-pi/3, pi/3]
    Eigen::MatrixXd f;       // n_e x n_k, nonnegative
    DosParams params;
};

// Wave-vector-resolved density of states
//   F(E, K) = sum_v exp(-(E - Re eps_v)^2 / 2 sigma^2)
//             * sum_{s <= s_max, n} |Psi_{s,n}^{(v)}(K)|^2
// with eps_v = pair_values_v / 2 and the state columns fetched on demand (so
// a float-precision eigenvector matrix can be streamed without a full copy).
using StateColumn = std::function<Eigen::VectorXcd(Eigen::Index)>;

DosGrid dos(const QubitArray& a, const PairBasis& b, const Eigen::VectorXcd& pair_values,
            const StateColumn& state, DosParams dp = {});

}  // namespace biphoton
