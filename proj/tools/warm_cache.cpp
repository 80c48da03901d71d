// Precomputes the expensive eigendecompositions and caches compact summaries
// (CSV + JSON + raw vectors) that the acceptance checks and the CLI reuse.
//
//   warm_cache interface <N> <outdir>   two-excitation interface run
//   warm_cache critical <N> <outdir>    spectra + relabeled spectra at the
//                                       critical modulation phases
//   warm_cache dosval <N> <outdir>      double vs float density-of-states
//                                       cross-check on a mid-size array
//   warm_cache dos <N> <outdir>         wave-vector-resolved density of
//                                       states, float eigensolve

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>

#include "biphoton/dos.hpp"
#include "biphoton/finite.hpp"
#include "biphoton/interface.hpp"
#include "biphoton/io.hpp"

using namespace biphoton;
namespace fs = std::filesystem;

namespace {

constexpr double kTiltFactor = 0.5;
constexpr int kBoundCutoff = 5;

void write_summary_csv(const fs::path& path, const std::vector<StateSummary>& table) {
    std::vector<std::vector<double>> rows;
    rows.reserve(table.size());
    for (const auto& s : table)
        rows.push_back({static_cast<double>(s.index), s.eps.real(), s.eps.imag(), s.gamma,
                        s.tilt, s.weight});
    write_csv(path, {"state", "eps_re", "eps_im", "gamma", "tilt", "weight"}, rows);
}

int run_interface(int n, const fs::path& dir) {
    ModelParams p;
    p.n_qubits = n;
    auto a = build_interface(p);

    double t0 = omp_get_wtime();
    EigOptions opts;
    opts.residuals = false;  // a second matrix copy would not fit at N=150
    auto s = solve_two_excitation(a, opts);
    double t_solve = omp_get_wtime() - t0;
    std::printf("[interface N=%d] solve %.1fs\n", n, t_solve);

    auto table = summarize_states(s.basis, s.eig, kTiltFactor, kBoundCutoff);
    auto rep = find_interface_states(table, n);

    const int most = rep.most_subradiant_index;
    Eigen::VectorXcd psi = s.eig.right_vectors.col(most);

    // spot residual through the streamed product; the dense matrix is gone
    double resid = (apply_pair_hamiltonian(a, psi) - s.eig.values[most] * psi).norm();

    std::complex<double> tr_expected(0.0, -p.gamma0 * n * (n - 1));
    double trace_rel =
        std::abs(s.eig.values.sum() - tr_expected) / std::abs(tr_expected);

    // antisymmetric-product ansatz against the winning state
    auto full = single_excitation_spectrum(a);
    Eigen::VectorXcd c = full.right_vectors.col(most_subradiant(full.values));

    ModelParams ph = p;
    ph.n_qubits = n / 2;
    auto left = build_uniform(ph);
    auto lspec = single_excitation_spectrum(left);
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(n);
    f.head(n / 2) = lspec.right_vectors.col(most_subradiant(lspec.values));

    double fid_anti = overlap2(build_ansatz(s.basis, c, f).psi, psi);
    double fid_sym = overlap2(build_symmetric_ansatz(s.basis, c, f).psi, psi);

    std::string tag = "interface_N" + std::to_string(n);
    write_summary_csv(dir / (tag + ".summary.csv"), table);
    write_cvector(dir / (tag + ".most.bin"), psi);

    auto meta = JsonValue::object();
    meta.set("n_qubits", JsonValue(n));
    meta.set("geometry", JsonValue("interface"));
    meta.set("gamma0", JsonValue(p.gamma0));
    meta.set("phi", JsonValue(p.phi));
    meta.set("delta", JsonValue(p.delta));
    meta.set("tilt_factor", JsonValue(kTiltFactor));
    meta.set("bound_cutoff", JsonValue(kBoundCutoff));
    meta.set("dim", JsonValue(static_cast<long long>(s.basis.size())));
    meta.set("most_subradiant_index", JsonValue(most));
    meta.set("min_gamma", JsonValue(table[static_cast<std::size_t>(most)].gamma));
    meta.set("most_eps_re", JsonValue(table[static_cast<std::size_t>(most)].eps.real()));
    meta.set("most_eps_im", JsonValue(table[static_cast<std::size_t>(most)].eps.imag()));
    meta.set("n_ultra", JsonValue(static_cast<long long>(rep.ultra.size())));
    meta.set("n_bound_edge", JsonValue(static_cast<long long>(rep.bound_edge.size())));
    meta.set("fidelity_anti", JsonValue(fid_anti));
    meta.set("fidelity_sym", JsonValue(fid_sym));
    meta.set("residual_most", JsonValue(resid));
    meta.set("trace_rel_err", JsonValue(trace_rel));
    meta.set("solve_seconds", JsonValue(t_solve));
    write_text_file(dir / (tag + ".meta.json"), meta.dump());

    std::printf("[interface N=%d] min_gamma %.3e  ultra %zu  bound_edge %zu\n", n,
                table[static_cast<std::size_t>(most)].gamma, rep.ultra.size(),
                rep.bound_edge.size());
    std::printf("[interface N=%d] fid_anti %.6f  fid_sym %.6f  resid %.2e  trace %.2e\n",
                n, fid_anti, fid_sym, resid, trace_rel);
    return 0;
}

int run_critical(int n, const fs::path& dir) {
    auto roots = critical_phases(n);
    std::string tag = "critical_N" + std::to_string(n);

    auto meta = JsonValue::object();
    meta.set("n_qubits", JsonValue(n));
    auto root_arr = JsonValue::array();
    for (double r : roots) root_arr.push(JsonValue(r));
    meta.set("roots", root_arr);

    const char* names[] = {"a", "b"};
    for (std::size_t k = 0; k < roots.size() && k < 2; ++k) {
        ModelParams p;
        p.n_qubits = n;
        p.phi0 = roots[k];
        auto a = build_uniform(p);

        double t0 = omp_get_wtime();
        EigOptions lean;
        lean.vectors = false;
        lean.residuals = false;
        auto orig = eig_dense(build_pair_hamiltonian(a), lean).values;
        auto relab = relabeled_pair_spectrum(a);
        double dt = omp_get_wtime() - t0;

        std::vector<std::vector<double>> rows;
        rows.reserve(static_cast<std::size_t>(orig.size()));
        for (Eigen::Index i = 0; i < orig.size(); ++i)
            rows.push_back(
                {orig[i].real(), orig[i].imag(), relab[i].real(), relab[i].imag()});
        write_csv(dir / (tag + ".spec_" + names[k] + ".csv"),
                  {"orig_re", "orig_im", "relab_re", "relab_im"}, rows);

        double worst = 0.0;
        for (Eigen::Index i = 0; i < orig.size(); ++i)
            worst = std::max(worst, std::abs(orig[i] - relab[i]));
        meta.set(std::string("max_multiset_diff_") + names[k], JsonValue(worst));
        std::printf("[critical N=%d] root %s = %.12f  multiset diff %.3e  (%.1fs)\n", n,
                    names[k], roots[k], worst, dt);
    }
    write_text_file(dir / (tag + ".meta.json"), meta.dump());
    return 0;
}

// all cells that fit after the left offset
DosParams dos_params_for(int n) {
    DosParams dp;
    dp.m_cells = (n - 3) / 3 - dp.offset_cells + 1;
    return dp;
}

void write_ridge_csv(const fs::path& path, const DosGrid& g) {
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(g.k_axis.size()));
    for (Eigen::Index j = 0; j < g.k_axis.size(); ++j) {
        Eigen::Index ridge;
        double fmax = g.f.col(j).maxCoeff(&ridge);
        rows.push_back({g.k_axis[j], g.e_axis[ridge], fmax});
    }
    write_csv(path, {"k", "e_ridge", "f_max"}, rows);
}

int run_dosval(int n, const fs::path& dir) {
    ModelParams p;
    p.n_qubits = n;
    p.trunc = 99;  // converged bound bands for the auto E window
    auto a = build_uniform(p);
    PairBasis b(n);

    DosParams dp = dos_params_for(n);
    dp.n_e = 600;
    dp.n_k = 101;

    double t0 = omp_get_wtime();
    EigOptions opts;
    opts.residuals = false;
    auto sd = solve_two_excitation(a, opts);
    double t_d = omp_get_wtime() - t0;
    auto gd = dos(
        a, b, sd.eig.values,
        [&](Eigen::Index v) { return Eigen::VectorXcd(sd.eig.right_vectors.col(v)); },
        dp);

    t0 = omp_get_wtime();
    auto sf = eig_dense_f(build_pair_hamiltonian_f(a));
    double t_f = omp_get_wtime() - t0;
    Eigen::VectorXcd vals_f = sf.values.cast<std::complex<double>>();
    auto gf = dos(
        a, b, vals_f,
        [&](Eigen::Index v) {
            return Eigen::VectorXcd(sf.right_vectors.col(v).cast<std::complex<double>>());
        },
        gd.params);  // identical, already-resolved window

    // in-window eigenvalues: nearest-match deviation, per-excitation units
    double max_dev = 0.0, sum_dev = 0.0;
    long n_win = 0;
    for (Eigen::Index v = 0; v < vals_f.size(); ++v) {
        double e = 0.5 * vals_f[v].real();
        if (e < gd.params.e_min || e > gd.params.e_max) continue;
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index w = 0; w < sd.eig.values.size(); ++w)
            best = std::min(best, std::abs(0.5 * (vals_f[v] - sd.eig.values[w])));
        max_dev = std::max(max_dev, best);
        sum_dev += best;
        ++n_win;
    }

    Eigen::Index rd, rf;
    double ridge_dev = 0.0;
    int same_bin = 0;
    for (Eigen::Index j = 0; j < gd.k_axis.size(); ++j) {
        gd.f.col(j).maxCoeff(&rd);
        gf.f.col(j).maxCoeff(&rf);
        ridge_dev = std::max(ridge_dev, std::abs(gd.e_axis[rd] - gd.e_axis[rf]));
        same_bin += rd == rf;
    }
    double frob = (gf.f - gd.f).norm() / gd.f.norm();

    std::string tag = "dosval_N" + std::to_string(n);
    write_ridge_csv(dir / (tag + ".ridge_double.csv"), gd);
    write_ridge_csv(dir / (tag + ".ridge_float.csv"), gf);

    auto meta = JsonValue::object();
    meta.set("n_qubits", JsonValue(n));
    meta.set("dim", JsonValue(static_cast<long long>(b.size())));
    meta.set("e_min", JsonValue(gd.params.e_min));
    meta.set("e_max", JsonValue(gd.params.e_max));
    meta.set("n_inwindow", JsonValue(static_cast<long long>(n_win)));
    meta.set("eig_max_dev", JsonValue(max_dev));
    meta.set("eig_mean_dev", JsonValue(n_win ? sum_dev / n_win : 0.0));
    meta.set("ridge_max_dev", JsonValue(ridge_dev));
    meta.set("ridge_same_bin", JsonValue(static_cast<long long>(same_bin)));
    meta.set("n_k", JsonValue(gd.params.n_k));
    meta.set("f_rel_frobenius", JsonValue(frob));
    meta.set("solve_double_seconds", JsonValue(t_d));
    meta.set("solve_float_seconds", JsonValue(t_f));
    write_text_file(dir / (tag + ".meta.json"), meta.dump());

    std::printf("[dosval N=%d] eig dev max %.3e mean %.3e  (%ld in window)\n", n, max_dev,
                n_win ? sum_dev / n_win : 0.0, n_win);
    std::printf("[dosval N=%d] ridge dev %.3e  same bin %d/%d  frob %.3e\n", n, ridge_dev,
                same_bin, gd.params.n_k, frob);
    return 0;
}

int run_dos(int n, const fs::path& dir) {
    ModelParams p;
    p.n_qubits = n;
    p.trunc = 99;
    auto a = build_uniform(p);
    PairBasis b(n);

    double t0 = omp_get_wtime();
    auto sf = eig_dense_f(build_pair_hamiltonian_f(a));
    double t_solve = omp_get_wtime() - t0;
    std::printf("[dos N=%d] float solve %.1fs\n", n, t_solve);

    DosParams dp = dos_params_for(n);
    Eigen::VectorXcd vals = sf.values.cast<std::complex<double>>();
    t0 = omp_get_wtime();
    auto g = dos(
        a, b, vals,
        [&](Eigen::Index v) {
            return Eigen::VectorXcd(sf.right_vectors.col(v).cast<std::complex<double>>());
        },
        dp);
    double t_dos = omp_get_wtime() - t0;

    // spot-check the float eigenvalues against double Rayleigh quotients on a
    // spread of in-window states
    std::vector<Eigen::Index> in_window;
    for (Eigen::Index v = 0; v < vals.size(); ++v) {
        double e = 0.5 * vals[v].real();
        if (e >= g.params.e_min && e <= g.params.e_max) in_window.push_back(v);
    }
    double rq_max = 0.0, rq_sum = 0.0;
    long rq_n = 0;
    const auto stride =
        std::max<std::size_t>(1, in_window.size() / 24);
    for (std::size_t i = 0; i < in_window.size(); i += stride) {
        Eigen::VectorXcd psi =
            sf.right_vectors.col(in_window[i]).cast<std::complex<double>>();
        psi.normalize();
        std::complex<double> rq = psi.dot(apply_pair_hamiltonian(a, psi));
        double dev = std::abs(0.5 * (rq - vals[in_window[i]]));
        rq_max = std::max(rq_max, dev);
        rq_sum += dev;
        ++rq_n;
    }

    std::string tag = "dos_N" + std::to_string(n);
    write_ridge_csv(dir / (tag + ".ridge.csv"), g);

    std::vector<std::string> header = {"e"};
    for (Eigen::Index j = 0; j < g.k_axis.size(); ++j) header.push_back(fmt(g.k_axis[j]));
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(g.e_axis.size()));
    for (Eigen::Index i = 0; i < g.e_axis.size(); ++i) {
        std::vector<double> row;
        row.reserve(static_cast<std::size_t>(1 + g.k_axis.size()));
        row.push_back(g.e_axis[i]);
        for (Eigen::Index j = 0; j < g.k_axis.size(); ++j) row.push_back(g.f(i, j));
        rows.push_back(std::move(row));
    }
    write_csv(dir / (tag + ".grid.csv"), header, rows);

    auto meta = JsonValue::object();
    meta.set("n_qubits", JsonValue(n));
    meta.set("dim", JsonValue(static_cast<long long>(b.size())));
    meta.set("trunc", JsonValue(p.trunc));
    meta.set("sigma", JsonValue(g.params.sigma));
    meta.set("s_max", JsonValue(g.params.s_max));
    meta.set("m_cells", JsonValue(g.params.m_cells));
    meta.set("offset_cells", JsonValue(g.params.offset_cells));
    meta.set("n_e", JsonValue(g.params.n_e));
    meta.set("n_k", JsonValue(g.params.n_k));
    meta.set("e_min", JsonValue(g.params.e_min));
    meta.set("e_max", JsonValue(g.params.e_max));
    meta.set("n_inwindow", JsonValue(static_cast<long long>(in_window.size())));
    meta.set("rq_checked", JsonValue(static_cast<long long>(rq_n)));
    meta.set("rq_max_dev", JsonValue(rq_max));
    meta.set("rq_mean_dev", JsonValue(rq_n ? rq_sum / rq_n : 0.0));
    meta.set("solve_seconds", JsonValue(t_solve));
    meta.set("dos_seconds", JsonValue(t_dos));
    write_text_file(dir / (tag + ".meta.json"), meta.dump());

    std::printf("[dos N=%d] window [%.4f, %.4f]  states in window %zu\n", n,
                g.params.e_min, g.params.e_max, in_window.size());
    std::printf("[dos N=%d] rq dev max %.3e mean %.3e over %ld states  dos %.1fs\n", n,
                rq_max, rq_n ? rq_sum / rq_n : 0.0, rq_n, t_dos);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 4) {
        std::fprintf(stderr,
                     "usage: warm_cache {interface|critical|dosval|dos} <N> <outdir>\n");
        return 2;
    }
    std::string mode = argv[1];
    int n = std::atoi(argv[2]);
    fs::path dir = argv[3];
    fs::create_directories(dir);
    try {
        if (mode == "interface") return run_interface(n, dir);
        if (mode == "critical") return run_critical(n, dir);
        if (mode == "dosval") return run_dosval(n, dir);
        if (mode == "dos") return run_dos(n, dir);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "warm_cache: %s\n", e.what());
        return 1;
    }
    std::fprintf(stderr, "warm_cache: unknown mode '%s'\n", mode.c_str());
    return 2;
}
