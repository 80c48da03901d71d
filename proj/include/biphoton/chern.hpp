#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "biphoton/bloch.hpp"
#include "biphoton/lattice.hpp"

namespace biphoton {

// One pair eigenstate kept at a torus grid point.
struct BandCandidate {
    std::complex<double> energy;  // per-excitation, units of gamma0
    double bound_p = 0.0;         // probability of separation <= delta0
    double continuum_gap = 0.0;   // |Re E - nearest scattering estimate|
    Eigen::VectorXcd vec;         // periodic-gauge right eigenvector, unit norm
};

struct TorusSweepParams {
    int n_k = 48;             // K points in [-pi/3, pi/3), endpoint identified
    int n_phi = 48;           // phi0 points in [0, 2pi), endpoint identified
    int delta0 = 5;
    double p_store = 0.15;    // keep every state above this bound probability
    int kappa_points = 2001;  // relative-momentum resolution of the continuum scan
};

// Candidates at every (K, phi0) grid point. K is the outer (first) axis and
// phi0 the inner one, both ascending: the right-handed orientation the flux
// sums assume. Candidates at a point are sorted by (Re, Im) of the energy.
struct TorusSweep {
    TorusSweepParams params;
    double gamma0 = 1.0;
    int trunc = 0;
    std::vector<double> k_axis;
    std::vector<double> phi_axis;
    std::vector<std::vector<BandCandidate>> points;  // index ik * n_phi + iphi

    const std::vector<BandCandidate>& at(int ik, int iphi) const {
        return points[static_cast<std::size_t>(ik) *
                          static_cast<std::size_t>(params.n_phi) +
                      static_cast<std::size_t>(iphi)];
    }
};

// OpenMP over grid points; ref:: is the serial reference used by the parity
// test and the benchmark. Both produce bit-identical sweeps.
TorusSweep sweep_torus(const ModelParams& p, const TorusSweepParams& sp);
namespace ref {
TorusSweep sweep_torus(const ModelParams& p, const TorusSweepParams& sp);
}

// Sorted real parts of the nine-branch scattering estimates at momentum k
// (phi0 taken from p), kappa scanned over one full period. Guided-mode
// resonance points are skipped, as are |e| > 25 superradiant outliers.
std::vector<double> scattering_set(const ModelParams& p, double k, int kappa_points);

// Distance from re_e to the nearest element of a sorted scattering set.
double continuum_gap(const std::vector<double>& sorted_set, double re_e);

struct SelectionOptions {
    double p_th = 0.25;      // bound-probability threshold
    double e_lo = 2.3;       // energy window bracketing the bound trio; the
    double e_hi = 3.2;       // defaults hold for L in [40, 100] at delta ~ 0.1
    int max_candidates = 4;  // more than this after filtering is a misconfiguration
};

// Candidates above p_store at a single (k, phi0) point, energy-ascending,
// with or without eigenvectors. Used by the torus sweep and the fixed-phi0
// zone scans.
std::vector<BandCandidate> bound_candidates(const ModelParams& p,
                                            const TorusSweepParams& sp, double k,
                                            double phi0, bool with_vectors = true);

// Indices into `candidates` for (bottom, middle, top), -1 where absent.
// Filters to the energy window and threshold; when a state is missing it is
// the lowest one (the bottom band is the one that merges into the scattering
// continuum). Throws std::runtime_error past max_candidates.
std::array<int, 3> assign_point(const std::vector<BandCandidate>& candidates,
                                const SelectionOptions& opt);

// One band tracked over the torus; entries are valid where present() is true.
struct BandSurface {
    int band_index = 0;  // 0 bottom, 1 middle, 2 top in ascending Re E
    int n_k = 0;
    int n_phi = 0;
    double p_th = 0.25;
    double e_lo = 0.0;
    double e_hi = 0.0;
    int trunc = 0;
    int branch_count = 0;                 // connected components of the domain
    std::vector<std::uint8_t> mask;       // identified above threshold
    std::vector<std::uint8_t> filled;     // fallback candidate below threshold
    std::vector<std::int16_t> branch;     // component label, -1 where absent
    std::vector<std::complex<double>> energy;
    std::vector<Eigen::VectorXcd> vec;

    std::size_t idx(int ik, int iphi) const {
        return static_cast<std::size_t>(ik) * static_cast<std::size_t>(n_phi) +
               static_cast<std::size_t>(iphi);
    }
    bool present(int ik, int iphi) const {
        std::size_t i = idx(ik, iphi);
        return mask[i] != 0 || filled[i] != 0;
    }
    int fill_count() const;
    int present_count() const;
};

// Splits the stored candidates into the three bound bands. A candidate counts
// when its probability clears p_th and its energy lies in [e_lo, e_hi]: the
// probability threshold alone also passes band-edge resonances far outside
// the bound-band cluster (counts reach 7 per point at reference parameters),
// so the window carries the selection where the threshold cannot. Missing
// points are filled with the most-bound in-window candidate when one exists
// and keeps the bands energy-ordered; the bottom band keeps holes where it
// has merged into the scattering continuum (its branches are labeled through
// `branch`). Throws std::runtime_error when a grid point carries more than
// max_candidates filtered states or when fewer than three bands are
// identifiable anywhere.
std::array<BandSurface, 3> select_bound_bands(const TorusSweep& sweep,
                                              const SelectionOptions& opt = {});

struct ChernResult {
    int band_index = 0;
    long long link_chern = 0;      // rounded flux sum; exact up to link_residual
    double link_sum = 0.0;         // raw flux sum / 2pi
    double continuum_chern = 0.0;  // unnormalized-product curvature estimate
    int n_k = 0;
    int n_phi = 0;
    int trunc = 0;
    double p_th = 0.25;
    int filled_points = 0;
    int branch_count = 0;
    int plaquettes = 0;  // plaquettes with all four corners present
};

// Plaquette-flux (link-variable) invariant over the present region of the
// surface: flux = arg of the product of the four normalized overlap links,
// accumulated in a fixed row-major order. Throws std::runtime_error on a
// vanishing link overlap (|<u|u'>| < 1e-12, a band-tracking failure).
ChernResult chern_link(const BandSurface& surface);

// Same plaquette loop without link normalization: Im of the raw overlap
// product is a finite-difference Berry curvature times the cell area, so the
// sum converges to the integer from below as the grid refines and the link
// deficit 1-|W| vanishes. This is the non-integer estimate reported next to
// the exact link integers.
double chern_continuum(const BandSurface& surface);

// Curvature field rows (k, phi0, flux) for every present plaquette, in the
// same fixed order as the chern_link reduction.
std::vector<std::array<double, 3>> curvature_field(const BandSurface& surface);

}  // namespace biphoton
