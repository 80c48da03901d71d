#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace biphoton {

struct solver_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EigOptions {
    bool vectors = true;
    // Residual verification keeps a copy of the input matrix; disable it for
    // problems where a second n*n buffer does not fit in memory.
    bool residuals = true;
};

struct EigResult {
    Eigen::VectorXcd values;         // sorted by (Re, Im) ascending
    Eigen::MatrixXcd right_vectors;  // unit-norm columns in matching order
    Eigen::VectorXd residuals;       // ||A v_k - lambda_k v_k||_2
};

// Dense non-Hermitian eigendecomposition (LAPACK zgeev). The argument is used
// as scratch; std::move it in to avoid a copy. Throws std::invalid_argument on
// non-square or non-finite input and solver_error when the QR iteration fails.
EigResult eig_dense(Eigen::MatrixXcd a, const EigOptions& opts = {});

struct EigResultF {
    Eigen::VectorXcf values;
    Eigen::MatrixXcf right_vectors;
};

// Single-precision variant (cgeev) for problems too large for double buffers.
EigResultF eig_dense_f(Eigen::MatrixXcf a, bool vectors = true);

}  // namespace biphoton
