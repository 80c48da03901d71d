#include "biphoton/eig.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace biphoton {
namespace {

template <class Matrix>
void check_input(const Matrix& a) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw std::invalid_argument("eig_dense: matrix must be square and non-empty");
    if (!a.allFinite())
        throw std::invalid_argument("eig_dense: matrix has non-finite entries");
}

template <class Complex>
std::vector<lapack_int> sort_order(const std::vector<Complex>& w) {
    std::vector<lapack_int> idx(w.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](lapack_int i, lapack_int j) {
        if (w[static_cast<std::size_t>(i)].real() != w[static_cast<std::size_t>(j)].real())
            return w[static_cast<std::size_t>(i)].real() < w[static_cast<std::size_t>(j)].real();
        return w[static_cast<std::size_t>(i)].imag() < w[static_cast<std::size_t>(j)].imag();
    });
    return idx;
}

// In-place column permutation (cycle chasing) so huge solves avoid a second
// n*n buffer.
template <class Matrix>
void permute_columns(Matrix& m, const std::vector<lapack_int>& perm) {
    const auto n = static_cast<std::size_t>(perm.size());
    std::vector<bool> done(n, false);
    typename Matrix::ColXpr::PlainObject tmp;
    for (std::size_t start = 0; start < n; ++start) {
        if (done[start] || static_cast<std::size_t>(perm[start]) == start) {
            done[start] = true;
            continue;
        }
        tmp = m.col(static_cast<Eigen::Index>(start));
        std::size_t hole = start;
        while (true) {
            std::size_t src = static_cast<std::size_t>(perm[hole]);
            done[hole] = true;
            if (src == start) {
                m.col(static_cast<Eigen::Index>(hole)) = tmp;
                break;
            }
            m.col(static_cast<Eigen::Index>(hole)) = m.col(static_cast<Eigen::Index>(src));
            hole = src;
        }
    }
}

}  // namespace

EigResult eig_dense(Eigen::MatrixXcd a, const EigOptions& opts) {
    check_input(a);
    if (opts.residuals && !opts.vectors)
        throw std::invalid_argument("eig_dense: residuals require vectors");
    const lapack_int n = static_cast<lapack_int>(a.rows());

    Eigen::MatrixXcd saved;
    if (opts.residuals) saved = a;

    EigResult r;
    std::vector<std::complex<double>> w(static_cast<std::size_t>(n));
    if (opts.vectors) r.right_vectors.resize(n, n);

    lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', opts.vectors ? 'V' : 'N', n, a.data(), n, w.data(), nullptr, 1,
        opts.vectors ? r.right_vectors.data() : nullptr, opts.vectors ? n : 1);
    if (info < 0)
        throw std::invalid_argument("eig_dense: illegal argument to zgeev at position " +
                                    std::to_string(-info));
    if (info > 0)
        throw solver_error("eig_dense: QR iteration failed to converge (" +
                           std::to_string(info) + " eigenvalues missing)");
    a.resize(0, 0);

    auto perm = sort_order(w);
    r.values.resize(n);
    for (lapack_int k = 0; k < n; ++k)
        r.values[k] = w[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])];
    if (opts.vectors) {
        permute_columns(r.right_vectors, perm);
        for (lapack_int k = 0; k < n; ++k) r.right_vectors.col(k).normalize();
    }

    if (opts.residuals) {
        r.residuals.resize(n);
        Eigen::MatrixXcd av = saved * r.right_vectors;
        for (lapack_int k = 0; k < n; ++k)
            r.residuals[k] = (av.col(k) - r.values[k] * r.right_vectors.col(k)).norm();
    }
    return r;
}

EigResultF eig_dense_f(Eigen::MatrixXcf a, bool vectors) {
    check_input(a);
    const lapack_int n = static_cast<lapack_int>(a.rows());

    EigResultF r;
    std::vector<std::complex<float>> w(static_cast<std::size_t>(n));
    if (vectors) r.right_vectors.resize(n, n);

    lapack_int info = LAPACKE_cgeev(LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', n, a.data(), n,
                                    w.data(), nullptr, 1,
                                    vectors ? r.right_vectors.data() : nullptr,
                                    vectors ? n : 1);
    if (info < 0)
        throw std::invalid_argument("eig_dense_f: illegal argument to cgeev at position " +
                                    std::to_string(-info));
    if (info > 0)
        throw solver_error("eig_dense_f: QR iteration failed to converge (" +
                           std::to_string(info) + " eigenvalues missing)");
    a.resize(0, 0);

    auto perm = sort_order(w);
    r.values.resize(n);
    for (lapack_int k = 0; k < n; ++k)
        r.values[k] = w[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])];
    if (vectors) {
        permute_columns(r.right_vectors, perm);
        for (lapack_int k = 0; k < n; ++k) r.right_vectors.col(k).normalize();
    }
    return r;
}

}  // namespace biphoton
