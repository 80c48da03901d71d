// Experiment orchestration behind the CLI: each run() call executes one
// experiment and writes plot-ready CSV grids plus a JSON report into the
// configured output directory. Reports carry no wall-clock fields and all
// floats go through fmt(), so a fixed config reproduces byte-identical files.

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "biphoton/bloch.hpp"
#include "biphoton/chern.hpp"
#include "biphoton/dos.hpp"
#include "biphoton/finite.hpp"
#include "biphoton/interface.hpp"
#include "biphoton/io.hpp"
#include "biphoton/run_config.hpp"

namespace biphoton {

namespace fs = std::filesystem;

namespace {

using cd = std::complex<double>;

int grid_or(int value, int fallback) { return value > 0 ? value : fallback; }

JsonValue params_json(const ModelParams& p) {
    auto j = JsonValue::object();
    j.set("gamma0", JsonValue(p.gamma0));
    j.set("phi", JsonValue(p.phi));
    j.set("delta", JsonValue(p.delta));
    j.set("phi0", JsonValue(p.phi0));
    j.set("n_qubits", JsonValue(p.n_qubits));
    j.set("trunc", JsonValue(p.trunc));
    return j;
}

SelectionOptions selection_of(const RunConfig& c) {
    SelectionOptions opt;
    opt.p_th = c.p_th;
    opt.e_lo = c.band_e_lo;
    opt.e_hi = c.band_e_hi;
    return opt;
}

void set_selection_fields(JsonValue& rep, const RunConfig& c) {
    rep.set("P_th", JsonValue(c.p_th));
    rep.set("band_e_lo", JsonValue(c.band_e_lo));
    rep.set("band_e_hi", JsonValue(c.band_e_hi));
    rep.set("delta0", JsonValue(c.delta0));
    rep.set("p_store", JsonValue(c.p_store));
    rep.set("kappa_points", JsonValue(c.kappa_points));
}

void write_summary_csv(const fs::path& path, const std::vector<StateSummary>& table) {
    std::vector<std::vector<double>> rows;
    rows.reserve(table.size());
    for (const auto& s : table)
        rows.push_back({static_cast<double>(s.index), s.eps.real(), s.eps.imag(), s.gamma,
                        s.tilt, s.weight});
    write_csv(path, {"state", "eps_re", "eps_im", "gamma", "tilt", "weight"}, rows);
}

// Fixed-k zone scan: full Bloch spectrum plus the selected bound trio per k.
void run_bands(const RunConfig& c, const fs::path& dir) {
    const ModelParams& p = c.params;
    const int nk = grid_or(c.n_k, 201);
    const auto opt = selection_of(c);

    std::vector<std::vector<double>> state_rows, sel_rows;
    int present[3] = {0, 0, 0};

    for (int i = 0; i < nk; ++i) {
        double k = -pi / 3.0 + (two_pi / 3.0) * i / (nk - 1);
        auto bands = band_solve(build_bloch_matrix(p, k, p.phi0, BlochGauge::periodic),
                                p.gamma0, c.delta0, true);
        auto env = scattering_set(p, k, c.kappa_points);

        std::vector<BandCandidate> cands;
        for (Eigen::Index v = 0; v < bands.energies.size(); ++v) {
            state_rows.push_back({k, bands.energies[v].real(), bands.energies[v].imag(),
                                  bands.bound_p[v]});
            if (bands.bound_p[v] <= c.p_store) continue;
            BandCandidate bc;
            bc.energy = bands.energies[v];
            bc.bound_p = bands.bound_p[v];
            bc.continuum_gap = continuum_gap(env, bc.energy.real());
            cands.push_back(std::move(bc));
        }

        std::array<int, 3> slot{};
        try {
            slot = assign_point(cands, opt);
        } catch (const std::runtime_error& err) {
            std::ostringstream msg;
            msg << "k = " << k << ": " << err.what();
            throw std::runtime_error(msg.str());
        }
        for (int m = 0; m < 3; ++m) {
            int s = slot[static_cast<std::size_t>(m)];
            if (s < 0) continue;
            const auto& bc = cands[static_cast<std::size_t>(s)];
            sel_rows.push_back({k, static_cast<double>(m), bc.energy.real(),
                                bc.energy.imag(), bc.bound_p, bc.continuum_gap});
            ++present[m];
        }
    }

    write_csv(dir / "bands.states.csv", {"k", "eps_re", "eps_im", "bound_p"}, state_rows);
    write_csv(dir / "bands.selected.csv",
              {"k", "band", "eps_re", "eps_im", "bound_p", "continuum_gap"}, sel_rows);

    auto rep = JsonValue::object();
    rep.set("experiment", JsonValue("bands"));
    rep.set("params", params_json(p));
    rep.set("n_k", JsonValue(nk));
    rep.set("L", JsonValue(p.trunc));
    set_selection_fields(rep, c);
    auto arr = JsonValue::array();
    for (int m = 0; m < 3; ++m) {
        auto jb = JsonValue::object();
        jb.set("band", JsonValue(m));
        jb.set("points", JsonValue(present[m]));
        arr.push(jb);
    }
    rep.set("bands", arr);
    write_text_file(dir / "bands.json", rep.dump());
}

void run_chern(const RunConfig& c, const fs::path& dir) {
    TorusSweepParams sp;
    sp.n_k = grid_or(c.n_k, 48);
    sp.n_phi = grid_or(c.n_phi, 48);
    sp.delta0 = c.delta0;
    sp.p_store = c.p_store;
    sp.kappa_points = c.kappa_points;

    auto sw = sweep_torus(c.params, sp);
    auto bands = select_bound_bands(sw, selection_of(c));

    auto rep = JsonValue::object();
    rep.set("experiment", JsonValue("chern"));
    rep.set("params", params_json(c.params));
    auto grid = JsonValue::object();
    grid.set("n_k", JsonValue(sp.n_k));
    grid.set("n_phi", JsonValue(sp.n_phi));
    rep.set("grid", grid);
    rep.set("L", JsonValue(c.params.trunc));
    set_selection_fields(rep, c);

    const double cell = (two_pi / 3.0 / sp.n_k) * (two_pi / sp.n_phi);
    auto arr = JsonValue::array();
    for (const auto& s : bands) {
        auto r = chern_link(s);
        auto jb = JsonValue::object();
        jb.set("band", JsonValue(s.band_index));
        jb.set("link_chern", JsonValue(static_cast<long long>(r.link_chern)));
        jb.set("link_sum", JsonValue(r.link_sum));
        jb.set("continuum_chern", JsonValue(r.continuum_chern));
        jb.set("present_points", JsonValue(s.present_count()));
        jb.set("filled_points", JsonValue(s.fill_count()));
        jb.set("branch_count", JsonValue(s.branch_count));
        jb.set("plaquettes", JsonValue(r.plaquettes));
        arr.push(jb);

        if (c.curvature_csv) {
            std::vector<std::vector<double>> rows;
            for (const auto& f : curvature_field(s))
                rows.push_back({f[0], f[1], f[2] / cell});  // flux -> curvature density
            write_csv(dir / ("chern.curvature_band" + std::to_string(s.band_index) +
                             ".csv"),
                      {"K", "phi0", "F_m"}, rows);
        }
    }
    rep.set("bands", arr);
    write_text_file(dir / "chern.json", rep.dump());
}

void run_finite(const RunConfig& c, const fs::path& dir) {
    auto a = c.geometry == "interface" ? build_interface(c.params)
                                       : build_uniform(c.params);
    PairBasis b(a.size());

    EigResult eig;
    if (c.solver == "float") {
        auto sf = eig_dense_f(build_pair_hamiltonian_f(a));
        eig.values = sf.values.cast<cd>();
        eig.right_vectors = sf.right_vectors.cast<cd>();
    } else {
        EigOptions opts;
        opts.residuals = false;
        eig = solve_two_excitation(a, opts).eig;
    }

    auto table = summarize_states(b, eig, c.tilt_g, c.delta0);
    InterfaceThresholds th{c.gamma_ultra, c.gamma_edge_lo, c.gamma_edge_hi, c.weight_min};
    auto cls = find_interface_states(table, a.size(), th);

    write_summary_csv(dir / "finite.summary.csv", table);

    const cd tr_expected(0.0, -c.params.gamma0 * a.size() * (a.size() - 1));
    const double trace_rel =
        std::abs(eig.values.sum() - tr_expected) / std::abs(tr_expected);
    double min_gamma_all = std::numeric_limits<double>::infinity();
    for (const auto& s : table) min_gamma_all = std::min(min_gamma_all, s.gamma);

    const auto most = static_cast<std::size_t>(cls.most_subradiant_index);
    auto rep = JsonValue::object();
    rep.set("experiment", JsonValue("finite"));
    rep.set("params", params_json(c.params));
    rep.set("geometry", JsonValue(c.geometry));
    rep.set("solver", JsonValue(c.solver));
    rep.set("dim", JsonValue(static_cast<long long>(b.size())));
    rep.set("tilt_factor", JsonValue(c.tilt_g));
    rep.set("bound_cutoff", JsonValue(c.delta0));
    rep.set("most_subradiant_index", JsonValue(cls.most_subradiant_index));
    rep.set("min_gamma", JsonValue(table[most].gamma));
    rep.set("most_eps_re", JsonValue(table[most].eps.real()));
    rep.set("most_eps_im", JsonValue(table[most].eps.imag()));
    rep.set("n_ultra", JsonValue(static_cast<long long>(cls.ultra.size())));
    rep.set("n_bound_edge", JsonValue(static_cast<long long>(cls.bound_edge.size())));
    rep.set("trace_rel_err", JsonValue(trace_rel));
    rep.set("min_gamma_overall", JsonValue(min_gamma_all));
    write_text_file(dir / "finite.json", rep.dump());
}

void run_dos_exp(const RunConfig& c, const fs::path& dir) {
    auto a = c.geometry == "interface" ? build_interface(c.params)
                                       : build_uniform(c.params);
    PairBasis b(a.size());

    DosParams dp;
    dp.sigma = c.sigma;
    dp.s_max = c.s_max;
    dp.m_cells = c.m_cells;
    dp.offset_cells = c.offset_cells;
    dp.n_e = grid_or(c.n_e, 1200);
    dp.n_k = grid_or(c.n_k, 201);
    dp.e_min = c.e_min;
    dp.e_max = c.e_max;
    dp.skip_sigma = c.skip_sigma;

    const int cap = (a.size() - 3) / 3 - dp.offset_cells + 1;
    if (dp.m_cells > cap) {
        std::ostringstream msg;
        msg << "m_cells = " << dp.m_cells << " does not fit: n = " << a.size()
            << " with offset_cells = " << dp.offset_cells << " holds at most " << cap
            << " cells";
        throw std::invalid_argument(msg.str());
    }
    if (3 * dp.offset_cells + 1 - dp.s_max < 1)
        throw std::invalid_argument(
            "offset_cells too small for s_max; the left edge underflows");

    Eigen::VectorXcd vals;
    DosGrid g;
    if (c.solver == "float") {
        auto sf = eig_dense_f(build_pair_hamiltonian_f(a));
        vals = sf.values.cast<cd>();
        g = dos(
            a, b, vals,
            [&](Eigen::Index v) {
                return Eigen::VectorXcd(sf.right_vectors.col(v).cast<cd>());
            },
            dp);
    } else {
        EigOptions opts;
        opts.residuals = false;
        auto sd = solve_two_excitation(a, opts);
        vals = sd.eig.values;
        g = dos(
            a, b, vals,
            [&](Eigen::Index v) { return Eigen::VectorXcd(sd.eig.right_vectors.col(v)); },
            dp);
    }

    long n_win = 0;
    for (Eigen::Index v = 0; v < vals.size(); ++v) {
        double e = 0.5 * vals[v].real();
        n_win += e >= g.params.e_min && e <= g.params.e_max;
    }

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
    write_csv(dir / "dos.grid.csv", header, rows);

    std::vector<std::vector<double>> ridge;
    ridge.reserve(static_cast<std::size_t>(g.k_axis.size()));
    for (Eigen::Index j = 0; j < g.k_axis.size(); ++j) {
        Eigen::Index r;
        double fmax = g.f.col(j).maxCoeff(&r);
        ridge.push_back({g.k_axis[j], g.e_axis[r], fmax});
    }
    write_csv(dir / "dos.ridge.csv", {"k", "e_ridge", "f_max"}, ridge);

    auto rep = JsonValue::object();
    rep.set("experiment", JsonValue("dos"));
    rep.set("params", params_json(c.params));
    rep.set("geometry", JsonValue(c.geometry));
    rep.set("solver", JsonValue(c.solver));
    rep.set("dim", JsonValue(static_cast<long long>(b.size())));
    rep.set("sigma", JsonValue(g.params.sigma));
    rep.set("s_max", JsonValue(g.params.s_max));
    rep.set("m_cells", JsonValue(g.params.m_cells));
    rep.set("offset_cells", JsonValue(g.params.offset_cells));
    rep.set("n_e", JsonValue(g.params.n_e));
    rep.set("n_k", JsonValue(g.params.n_k));
    rep.set("e_min", JsonValue(g.params.e_min));
    rep.set("e_max", JsonValue(g.params.e_max));
    rep.set("n_inwindow", JsonValue(static_cast<long long>(n_win)));
    write_text_file(dir / "dos.json", rep.dump());
}

void run_interface_exp(const RunConfig& c, const fs::path& dir) {
    const ModelParams& p = c.params;
    auto a = build_interface(p);  // geometry implied by the experiment
    EigOptions opts;
    opts.residuals = false;
    auto s = solve_two_excitation(a, opts);
    auto table = summarize_states(s.basis, s.eig, c.tilt_g, c.delta0);
    InterfaceThresholds th{c.gamma_ultra, c.gamma_edge_lo, c.gamma_edge_hi, c.weight_min};
    auto cls = find_interface_states(table, a.size(), th);

    const int most = cls.most_subradiant_index;
    Eigen::VectorXcd psi = s.eig.right_vectors.col(most);
    const double resid =
        (apply_pair_hamiltonian(a, psi) - s.eig.values[most] * psi).norm();
    const cd tr_expected(0.0, -p.gamma0 * a.size() * (a.size() - 1));
    const double trace_rel =
        std::abs(s.eig.values.sum() - tr_expected) / std::abs(tr_expected);

    // product ansatz built from the most subradiant single-excitation modes of
    // the full array and of the left segment alone
    auto full = single_excitation_spectrum(a);
    Eigen::VectorXcd cmode = full.right_vectors.col(most_subradiant(full.values));
    ModelParams ph = p;
    ph.n_qubits = a.size() / 2;
    auto left = build_uniform(ph);
    auto lspec = single_excitation_spectrum(left);
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(a.size());
    f.head(a.size() / 2) = lspec.right_vectors.col(most_subradiant(lspec.values));
    const double fid_anti = overlap2(build_ansatz(s.basis, cmode, f).psi, psi);
    const double fid_sym = overlap2(build_symmetric_ansatz(s.basis, cmode, f).psi, psi);

    auto roots = critical_phases(a.size());

    write_summary_csv(dir / "interface.summary.csv", table);
    write_cvector(dir / "interface.most.bin", psi);

    auto rep = JsonValue::object();
    rep.set("experiment", JsonValue("interface"));
    rep.set("params", params_json(p));
    rep.set("dim", JsonValue(static_cast<long long>(s.basis.size())));
    rep.set("tilt_factor", JsonValue(c.tilt_g));
    rep.set("bound_cutoff", JsonValue(c.delta0));
    rep.set("gamma_ultra", JsonValue(c.gamma_ultra));
    rep.set("gamma_edge_lo", JsonValue(c.gamma_edge_lo));
    rep.set("gamma_edge_hi", JsonValue(c.gamma_edge_hi));
    rep.set("weight_min", JsonValue(c.weight_min));
    rep.set("most_subradiant_index", JsonValue(most));
    rep.set("min_gamma", JsonValue(table[static_cast<std::size_t>(most)].gamma));
    rep.set("most_eps_re", JsonValue(table[static_cast<std::size_t>(most)].eps.real()));
    rep.set("most_eps_im", JsonValue(table[static_cast<std::size_t>(most)].eps.imag()));
    rep.set("n_ultra", JsonValue(static_cast<long long>(cls.ultra.size())));
    rep.set("n_bound_edge", JsonValue(static_cast<long long>(cls.bound_edge.size())));
    rep.set("fidelity_anti", JsonValue(fid_anti));
    rep.set("fidelity_sym", JsonValue(fid_sym));
    rep.set("residual_most", JsonValue(resid));
    rep.set("trace_rel_err", JsonValue(trace_rel));
    auto root_arr = JsonValue::array();
    for (double r : roots) root_arr.push(JsonValue(r));
    rep.set("critical_phases", root_arr);
    write_text_file(dir / "interface.json", rep.dump());
}

void run_critical_exp(const RunConfig& c, const fs::path& dir) {
    auto roots = critical_phases(c.params.n_qubits);

    auto rep = JsonValue::object();
    rep.set("experiment", JsonValue("critical-phase"));
    rep.set("params", params_json(c.params));
    auto arr = JsonValue::array();
    for (double r : roots) arr.push(JsonValue(r));
    rep.set("roots", arr);
    rep.set("inversion_check", JsonValue(c.inversion_check));

    if (c.inversion_check) {
        const char* names[] = {"a", "b"};
        for (std::size_t i = 0; i < roots.size() && i < 2; ++i) {
            ModelParams p = c.params;
            p.phi0 = roots[i];
            auto a = build_uniform(p);
            EigOptions lean;
            lean.vectors = false;
            lean.residuals = false;
            auto orig = eig_dense(build_pair_hamiltonian(a), lean).values;
            auto relab = relabeled_pair_spectrum(a);

            std::vector<std::vector<double>> rows;
            rows.reserve(static_cast<std::size_t>(orig.size()));
            double worst = 0.0;
            for (Eigen::Index v = 0; v < orig.size(); ++v) {
                rows.push_back({orig[v].real(), orig[v].imag(), relab[v].real(),
                                relab[v].imag()});
                worst = std::max(worst, std::abs(orig[v] - relab[v]));
            }
            write_csv(dir / (std::string("critical.spec_") + names[i] + ".csv"),
                      {"orig_re", "orig_im", "relab_re", "relab_im"}, rows);
            rep.set(std::string("max_multiset_diff_") + names[i], JsonValue(worst));
        }
    }
    write_text_file(dir / "critical.json", rep.dump());
}

}  // namespace

void run(const RunConfig& c) {
    auto violations = validate(c);
    if (!violations.empty()) {
        std::string msg = "invalid config:";
        for (const auto& v : violations) msg += "\n  " + v;
        throw std::invalid_argument(msg);
    }
    if (c.workers > 0) omp_set_num_threads(c.workers);

    fs::path dir(c.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw io_error("cannot create output directory " + dir.string() + ": " +
                       ec.message());

    const std::string prefix =
        c.experiment == "critical-phase" ? "critical" : c.experiment;
    write_text_file(dir / (prefix + ".config.txt"), emit_config(c));

    if (c.experiment == "bands")
        run_bands(c, dir);
    else if (c.experiment == "chern")
        run_chern(c, dir);
    else if (c.experiment == "finite")
        run_finite(c, dir);
    else if (c.experiment == "dos")
        run_dos_exp(c, dir);
    else if (c.experiment == "interface")
        run_interface_exp(c, dir);
    else if (c.experiment == "critical-phase")
        run_critical_exp(c, dir);
    else
        throw std::invalid_argument("unknown experiment '" + c.experiment + "'");
}

}  // namespace biphoton
