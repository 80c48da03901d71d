// Times the OpenMP kernels against their serial references and checks that
// both produce identical output.
//   bench_sweep [n_qubits] [trunc] [grid]

#include <omp.h>

#include <cstdio>
#include <cstdlib>

#include "biphoton/chern.hpp"
#include "biphoton/finite.hpp"

using namespace biphoton;

namespace {

long sweep_mismatches(const TorusSweep& x, const TorusSweep& y) {
    long bad = 0;
    for (std::size_t i = 0; i < x.points.size(); ++i) {
        const auto& a = x.points[i];
        const auto& b = y.points[i];
        if (a.size() != b.size()) {
            ++bad;
            continue;
        }
        for (std::size_t c = 0; c < a.size(); ++c) {
            bool same = a[c].energy == b[c].energy && a[c].bound_p == b[c].bound_p &&
                        a[c].vec.size() == b[c].vec.size();
            for (Eigen::Index v = 0; same && v < a[c].vec.size(); ++v)
                same = a[c].vec[v] == b[c].vec[v];
            bad += !same;
        }
    }
    return bad;
}

}  // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 60;
    const int trunc = argc > 2 ? std::atoi(argv[2]) : 30;
    const int grid = argc > 3 ? std::atoi(argv[3]) : 6;

    std::printf("threads: %d\n", omp_get_max_threads());

    ModelParams p;
    p.n_qubits = n;
    auto a = build_uniform(p);

    double t0 = omp_get_wtime();
    auto h_omp = build_pair_hamiltonian(a);
    double t_omp = omp_get_wtime() - t0;
    t0 = omp_get_wtime();
    auto h_ser = ref::build_pair_hamiltonian(a);
    double t_ser = omp_get_wtime() - t0;
    double dev = (h_omp - h_ser).cwiseAbs().maxCoeff();
    std::printf("pair H    N=%-4d dim=%-6ld omp %7.3fs  serial %7.3fs  speedup %5.2fx  max dev %.1e\n",
                n, static_cast<long>(h_omp.rows()), t_omp, t_ser,
                t_omp > 0 ? t_ser / t_omp : 0.0, dev);

    ModelParams q;
    q.trunc = trunc;
    TorusSweepParams sp;
    sp.n_k = grid;
    sp.n_phi = grid;

    t0 = omp_get_wtime();
    auto sw_omp = sweep_torus(q, sp);
    t_omp = omp_get_wtime() - t0;
    t0 = omp_get_wtime();
    auto sw_ser = ref::sweep_torus(q, sp);
    t_ser = omp_get_wtime() - t0;
    long bad = sweep_mismatches(sw_omp, sw_ser);
    std::printf("sweep     L=%-4d grid=%dx%-3d omp %7.3fs  serial %7.3fs  speedup %5.2fx  %s\n",
                trunc, grid, grid, t_omp, t_ser, t_omp > 0 ? t_ser / t_omp : 0.0,
                bad == 0 ? "bitwise identical" : "MISMATCH");
    return bad == 0 && dev == 0.0 ? 0 : 1;
}
