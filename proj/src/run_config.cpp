#include "biphoton/run_config.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "biphoton/io.hpp"

namespace biphoton {

namespace {

const char* kExperiments[] = {"bands", "chern", "finite", "dos", "interface",
                              "critical-phase"};

bool known_experiment(const std::string& s) {
    for (const char* e : kExperiments)
        if (s == e) return true;
    return false;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool to_double(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) return false;
        out = v;
        return true;
    } catch (...) {
        return false;
    }
}

// window bounds additionally accept the word "auto"
bool to_window(const std::string& s, double& out) {
    if (s == "auto") {
        out = std::nan("");
        return true;
    }
    return to_double(s, out);
}

bool to_int(const std::string& s, int& out) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size() || v < -2147483648LL || v > 2147483647LL) return false;
        out = static_cast<int>(v);
        return true;
    } catch (...) {
        return false;
    }
}

bool to_bool(const std::string& s, bool& out) {
    if (s == "true") {
        out = true;
        return true;
    }
    if (s == "false") {
        out = false;
        return true;
    }
    return false;
}

std::string window_str(double x) { return std::isnan(x) ? "auto" : fmt(x); }

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::vector<std::string> errs;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            errs.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty() || val.empty()) {
            errs.push_back("line " + std::to_string(lineno) + ": empty key or value");
            continue;
        }
        if (!seen.insert(key).second) {
            errs.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key +
                           "'");
            continue;
        }

        bool ok = true;
        if (key == "gamma0") ok = to_double(val, c.params.gamma0);
        else if (key == "phi") ok = to_double(val, c.params.phi);
        else if (key == "delta") ok = to_double(val, c.params.delta);
        else if (key == "phi0") ok = to_double(val, c.params.phi0);
        else if (key == "n") ok = to_int(val, c.params.n_qubits);
        else if (key == "trunc") ok = to_int(val, c.params.trunc);
        else if (key == "experiment") c.experiment = val;
        else if (key == "geometry") c.geometry = val;
        else if (key == "solver") c.solver = val;
        else if (key == "n_k") ok = to_int(val, c.n_k);
        else if (key == "n_phi") ok = to_int(val, c.n_phi);
        else if (key == "n_e") ok = to_int(val, c.n_e);
        else if (key == "p_th") ok = to_double(val, c.p_th);
        else if (key == "delta0") ok = to_int(val, c.delta0);
        else if (key == "p_store") ok = to_double(val, c.p_store);
        else if (key == "band_e_lo") ok = to_double(val, c.band_e_lo);
        else if (key == "band_e_hi") ok = to_double(val, c.band_e_hi);
        else if (key == "kappa_points") ok = to_int(val, c.kappa_points);
        else if (key == "tilt_g") ok = to_double(val, c.tilt_g);
        else if (key == "gamma_ultra") ok = to_double(val, c.gamma_ultra);
        else if (key == "gamma_edge_lo") ok = to_double(val, c.gamma_edge_lo);
        else if (key == "gamma_edge_hi") ok = to_double(val, c.gamma_edge_hi);
        else if (key == "weight_min") ok = to_double(val, c.weight_min);
        else if (key == "sigma") ok = to_double(val, c.sigma);
        else if (key == "s_max") ok = to_int(val, c.s_max);
        else if (key == "m_cells") ok = to_int(val, c.m_cells);
        else if (key == "offset_cells") ok = to_int(val, c.offset_cells);
        else if (key == "e_min") ok = to_window(val, c.e_min);
        else if (key == "e_max") ok = to_window(val, c.e_max);
        else if (key == "skip_sigma") ok = to_double(val, c.skip_sigma);
        else if (key == "inversion_check") ok = to_bool(val, c.inversion_check);
        else if (key == "curvature_csv") ok = to_bool(val, c.curvature_csv);
        else if (key == "out_dir") c.out_dir = val;
        else if (key == "workers") ok = to_int(val, c.workers);
        else {
            errs.push_back("line " + std::to_string(lineno) + ": unknown key '" + key +
                           "'");
            continue;
        }
        if (!ok)
            errs.push_back("line " + std::to_string(lineno) + ": malformed value for '" +
                           key + "'");
    }
    if (!errs.empty()) {
        std::string msg = "config errors:";
        for (const auto& e : errs) msg += "\n  " + e;
        throw std::invalid_argument(msg);
    }
    return c;
}

std::string emit_config(const RunConfig& c) {
    std::ostringstream out;
    out << "# model\n";
    out << "gamma0 = " << fmt(c.params.gamma0) << "\n";
    out << "phi = " << fmt(c.params.phi) << "\n";
    out << "delta = " << fmt(c.params.delta) << "\n";
    out << "phi0 = " << fmt(c.params.phi0) << "\n";
    out << "n = " << c.params.n_qubits << "\n";
    out << "trunc = " << c.params.trunc << "\n";
    out << "# experiment\n";
    if (!c.experiment.empty()) out << "experiment = " << c.experiment << "\n";
    out << "geometry = " << c.geometry << "\n";
    out << "solver = " << c.solver << "\n";
    out << "# grids (0 = per-experiment default)\n";
    out << "n_k = " << c.n_k << "\n";
    out << "n_phi = " << c.n_phi << "\n";
    out << "n_e = " << c.n_e << "\n";
    out << "# band selection\n";
    out << "p_th = " << fmt(c.p_th) << "\n";
    out << "delta0 = " << c.delta0 << "\n";
    out << "p_store = " << fmt(c.p_store) << "\n";
    out << "band_e_lo = " << fmt(c.band_e_lo) << "\n";
    out << "band_e_hi = " << fmt(c.band_e_hi) << "\n";
    out << "kappa_points = " << c.kappa_points << "\n";
    out << "# finite-array classification\n";
    out << "tilt_g = " << fmt(c.tilt_g) << "\n";
    out << "gamma_ultra = " << fmt(c.gamma_ultra) << "\n";
    out << "gamma_edge_lo = " << fmt(c.gamma_edge_lo) << "\n";
    out << "gamma_edge_hi = " << fmt(c.gamma_edge_hi) << "\n";
    out << "weight_min = " << fmt(c.weight_min) << "\n";
    out << "# density of states\n";
    out << "sigma = " << fmt(c.sigma) << "\n";
    out << "s_max = " << c.s_max << "\n";
    out << "m_cells = " << c.m_cells << "\n";
    out << "offset_cells = " << c.offset_cells << "\n";
    out << "e_min = " << window_str(c.e_min) << "\n";
    out << "e_max = " << window_str(c.e_max) << "\n";
    out << "skip_sigma = " << fmt(c.skip_sigma) << "\n";
    out << "# switches\n";
    out << "inversion_check = " << (c.inversion_check ? "true" : "false") << "\n";
    out << "curvature_csv = " << (c.curvature_csv ? "true" : "false") << "\n";
    out << "# output\n";
    out << "out_dir = " << c.out_dir << "\n";
    out << "workers = " << c.workers << "\n";
    return out.str();
}

RunConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_text_file(path));
}

std::vector<std::string> validate(const RunConfig& c) {
    std::vector<std::string> v = validate(c.params);
    if (c.experiment.empty())
        v.push_back("experiment required (bands|chern|finite|dos|interface|critical-phase)");
    else if (!known_experiment(c.experiment))
        v.push_back("unknown experiment '" + c.experiment + "'");
    if (c.geometry != "uniform" && c.geometry != "interface")
        v.push_back("geometry must be uniform or interface");
    if (c.solver != "double" && c.solver != "float")
        v.push_back("solver must be double or float");
    if (c.n_k != 0 && c.n_k < 2) v.push_back("n_k >= 2 required (0 = default)");
    if (c.n_phi != 0 && c.n_phi < 2) v.push_back("n_phi >= 2 required (0 = default)");
    if (c.n_e != 0 && c.n_e < 2) v.push_back("n_e >= 2 required (0 = default)");
    if (!(c.p_th > 0.0 && c.p_th < 1.0)) v.push_back("p_th in (0, 1) required");
    if (!(c.p_store > 0.0 && c.p_store < 1.0)) v.push_back("p_store in (0, 1) required");
    if (c.p_store >= c.p_th) v.push_back("p_store < p_th required");
    if (c.delta0 < 1) v.push_back("delta0 >= 1 required");
    if (c.delta0 > c.params.trunc) v.push_back("delta0 <= trunc required");
    if (!(c.band_e_lo < c.band_e_hi)) v.push_back("band_e_lo < band_e_hi required");
    if (c.kappa_points < 2) v.push_back("kappa_points >= 2 required");
    if (!(c.gamma_ultra > 0.0)) v.push_back("gamma_ultra > 0 required");
    if (!(c.gamma_edge_lo > 0.0 && c.gamma_edge_lo < c.gamma_edge_hi))
        v.push_back("0 < gamma_edge_lo < gamma_edge_hi required");
    if (!(c.weight_min >= 0.0 && c.weight_min <= 1.0))
        v.push_back("weight_min in [0, 1] required");
    if (!(c.sigma > 0.0)) v.push_back("sigma > 0 required");
    if (c.s_max < 1) v.push_back("s_max >= 1 required");
    if (c.m_cells < 1) v.push_back("m_cells >= 1 required");
    if (c.offset_cells < 0) v.push_back("offset_cells >= 0 required");
    if (std::isnan(c.e_min) != std::isnan(c.e_max))
        v.push_back("e_min and e_max must both be auto or both numeric");
    if (!std::isnan(c.e_min) && !std::isnan(c.e_max) && !(c.e_min < c.e_max))
        v.push_back("e_min < e_max required");
    if (!(c.skip_sigma > 0.0)) v.push_back("skip_sigma > 0 required");
    if (c.out_dir.empty()) v.push_back("out_dir required");
    if (c.workers < 0) v.push_back("workers >= 0 required");
    return v;
}

}  // namespace biphoton
