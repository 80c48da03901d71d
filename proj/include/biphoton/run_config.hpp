#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "biphoton/params.hpp"

namespace biphoton {

// Everything a single experiment invocation needs, parsed from a flat
// "key = value" text file. Grid sizes left at 0 pick the per-experiment
// default; e_min/e_max left at NaN ("auto") derive the window from the
// bound-band sweep.
struct RunConfig {
    ModelParams params;       // keys: gamma0, phi, delta, phi0, n, trunc
    std::string experiment;   // usually given as the CLI positional
    std::string geometry = "uniform";  // uniform | interface
    std::string solver = "double";     // double | float (pair-sector eigensolve)

    // grids
    int n_k = 0;   // K axis (bands/dos: 201, chern: 48)
    int n_phi = 0; // phi0 axis (chern: 48)
    int n_e = 0;   // energy axis (dos: 1200)

    // selection thresholds
    double p_th = 0.25;
    int delta0 = 5;
    double p_store = 0.15;
    double band_e_lo = 2.3;  // energy window holding the bound-band trio
    double band_e_hi = 3.2;
    int kappa_points = 2001;

    // finite-array classification
    double tilt_g = 0.5;
    double gamma_ultra = 1e-6;
    double gamma_edge_lo = 1e-3;
    double gamma_edge_hi = 1e-1;
    double weight_min = 0.5;

    // density of states
    double sigma = 1e-3;
    int s_max = 10;
    int m_cells = 50;
    int offset_cells = 10;
    double e_min = std::nan("");
    double e_max = std::nan("");
    double skip_sigma = 12.0;

    // critical-phase extras
    bool inversion_check = false;

    // chern extras
    bool curvature_csv = false;

    // output
    std::string out_dir = "out";
    int workers = 0;  // 0 keeps the environment's thread count
};

// Exhaustive precondition report; empty means runnable.
std::vector<std::string> validate(const RunConfig& c);

// Strict parser: unknown or duplicate keys, malformed numbers, and trailing
// garbage are all reported together in one std::invalid_argument.
RunConfig parse_config(const std::string& text);

// Deterministic emitter; parse_config(emit_config(c)) reproduces c exactly
// (NaN window bounds round-trip through the word "auto").
std::string emit_config(const RunConfig& c);

RunConfig load_config(const std::filesystem::path& path);

// Runs one experiment, writing CSV/JSON artifacts into c.out_dir. Throws
// std::invalid_argument on a config violation, io_error on write failure,
// and other exceptions on solver failures. Reports contain no wall-clock
// fields, so identical configs produce byte-identical files.
void run(const RunConfig& c);

}  // namespace biphoton
