#include "biphoton/chern.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "biphoton/params.hpp"

namespace biphoton {

namespace {

using cd = std::complex<double>;

void require_sweep_params(const ModelParams& p, const TorusSweepParams& sp) {
    require_valid(p);
    if (sp.n_k < 2 || sp.n_phi < 2)
        throw std::invalid_argument("torus sweep needs at least 2 points per axis");
    if (sp.kappa_points < 2)
        throw std::invalid_argument("kappa_points must be at least 2");
    if (!(sp.p_store > 0.0) || sp.p_store >= 1.0)
        throw std::invalid_argument("p_store must lie in (0, 1)");
}

}  // namespace

std::vector<BandCandidate> bound_candidates(const ModelParams& p,
                                            const TorusSweepParams& sp, double k,
                                            double phi0, bool with_vectors) {
    ModelParams q = p;
    q.phi0 = phi0;
    // the probability weights need the eigenvectors either way; the flag only
    // controls whether they are kept
    auto bands = band_solve(build_bloch_matrix(q, k, phi0, BlochGauge::periodic),
                            q.gamma0, sp.delta0, true);
    auto env = scattering_set(q, k, sp.kappa_points);

    std::vector<BandCandidate> out;
    for (Eigen::Index v = 0; v < bands.energies.size(); ++v) {
        if (bands.bound_p[v] <= sp.p_store) continue;
        BandCandidate c;
        c.energy = bands.energies[v];
        c.bound_p = bands.bound_p[v];
        c.continuum_gap = continuum_gap(env, c.energy.real());
        if (with_vectors) c.vec = bands.vectors.col(v);
        out.push_back(std::move(c));
    }
    return out;
}

namespace {

TorusSweep sweep_impl(const ModelParams& p, const TorusSweepParams& sp, bool parallel) {
    require_sweep_params(p, sp);

    TorusSweep sw;
    sw.params = sp;
    sw.gamma0 = p.gamma0;
    sw.trunc = p.trunc;
    sw.k_axis.resize(static_cast<std::size_t>(sp.n_k));
    sw.phi_axis.resize(static_cast<std::size_t>(sp.n_phi));
    for (int i = 0; i < sp.n_k; ++i)
        sw.k_axis[static_cast<std::size_t>(i)] =
            -pi / 3.0 + (two_pi / 3.0) * i / sp.n_k;
    for (int j = 0; j < sp.n_phi; ++j)
        sw.phi_axis[static_cast<std::size_t>(j)] = two_pi * j / sp.n_phi;

    const std::size_t total =
        static_cast<std::size_t>(sp.n_k) * static_cast<std::size_t>(sp.n_phi);
    sw.points.resize(total);

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(total); ++idx) {
        int ik = static_cast<int>(idx) / sp.n_phi;
        int iphi = static_cast<int>(idx) % sp.n_phi;
        sw.points[static_cast<std::size_t>(idx)] =
            bound_candidates(p, sp, sw.k_axis[static_cast<std::size_t>(ik)],
                             sw.phi_axis[static_cast<std::size_t>(iphi)]);
    }
    return sw;
}

}  // namespace

TorusSweep sweep_torus(const ModelParams& p, const TorusSweepParams& sp) {
    return sweep_impl(p, sp, true);
}

namespace ref {
TorusSweep sweep_torus(const ModelParams& p, const TorusSweepParams& sp) {
    return sweep_impl(p, sp, false);
}
}  // namespace ref

std::vector<double> scattering_set(const ModelParams& p, double k, int kappa_points) {
    if (kappa_points < 2)
        throw std::invalid_argument("kappa_points must be at least 2");
    std::vector<double> env;
    env.reserve(static_cast<std::size_t>(9) * static_cast<std::size_t>(kappa_points));
    for (int i = 0; i < kappa_points; ++i) {
        double kappa = -two_pi / 3.0 + (2.0 * two_pi / 3.0) * i / (kappa_points - 1);
        try {
            for (cd e : scattering_energy(p, k, kappa))
                if (std::abs(e) < 25.0) env.push_back(e.real());
        } catch (const std::domain_error&) {
            // guided-mode resonance at this kappa; measure-zero, skip
        }
    }
    std::sort(env.begin(), env.end());
    return env;
}

double continuum_gap(const std::vector<double>& sorted_set, double re_e) {
    if (sorted_set.empty()) return std::numeric_limits<double>::infinity();
    auto it = std::lower_bound(sorted_set.begin(), sorted_set.end(), re_e);
    double best = std::numeric_limits<double>::infinity();
    if (it != sorted_set.end()) best = std::min(best, std::abs(*it - re_e));
    if (it != sorted_set.begin()) best = std::min(best, std::abs(*(it - 1) - re_e));
    return best;
}

int BandSurface::fill_count() const {
    int c = 0;
    for (std::uint8_t f : filled) c += f != 0;
    return c;
}

int BandSurface::present_count() const {
    int c = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) c += mask[i] != 0 || filled[i] != 0;
    return c;
}

namespace {

// Connected components of the present region, 4-neighborhood, periodic wrap
// on both axes. Labels are assigned in scan order, so they are deterministic.
void label_branches(BandSurface& s) {
    const int nk = s.n_k, np = s.n_phi;
    s.branch.assign(static_cast<std::size_t>(nk) * static_cast<std::size_t>(np), -1);
    std::int16_t next = 0;
    std::vector<std::size_t> stack;
    for (int ik = 0; ik < nk; ++ik) {
        for (int ip = 0; ip < np; ++ip) {
            std::size_t root = s.idx(ik, ip);
            if (!s.present(ik, ip) || s.branch[root] >= 0) continue;
            s.branch[root] = next;
            stack.assign(1, root);
            while (!stack.empty()) {
                std::size_t cur = stack.back();
                stack.pop_back();
                int ck = static_cast<int>(cur) / np;
                int cp = static_cast<int>(cur) % np;
                const int nbk[4] = {(ck + 1) % nk, (ck + nk - 1) % nk, ck, ck};
                const int nbp[4] = {cp, cp, (cp + 1) % np, (cp + np - 1) % np};
                for (int t = 0; t < 4; ++t) {
                    std::size_t ni = s.idx(nbk[t], nbp[t]);
                    if (s.present(nbk[t], nbp[t]) && s.branch[ni] < 0) {
                        s.branch[ni] = next;
                        stack.push_back(ni);
                    }
                }
            }
            ++next;
        }
    }
    s.branch_count = next;
}

}  // namespace

std::array<int, 3> assign_point(const std::vector<BandCandidate>& candidates,
                                const SelectionOptions& opt) {
    if (!(opt.p_th > 0.0) || opt.p_th >= 1.0)
        throw std::invalid_argument("p_th must lie in (0, 1)");
    if (!(opt.e_lo < opt.e_hi))
        throw std::invalid_argument("energy window needs e_lo < e_hi");

    // window + threshold survivors; candidates arrive energy-ascending
    std::vector<int> in;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        double re = c.energy.real();
        if (c.bound_p > opt.p_th && re >= opt.e_lo && re <= opt.e_hi)
            in.push_back(static_cast<int>(i));
    }

    if (static_cast<int>(in.size()) > opt.max_candidates) {
        std::ostringstream msg;
        msg << in.size() << " bound candidates above P=" << opt.p_th
            << " inside [" << opt.e_lo << ", " << opt.e_hi
            << "]; threshold misconfiguration";
        throw std::runtime_error(msg.str());
    }
    if (in.size() > 3) {
        // keep the three most bound, restore energy order
        std::sort(in.begin(), in.end(), [&](int a, int b) {
            return candidates[static_cast<std::size_t>(a)].bound_p >
                   candidates[static_cast<std::size_t>(b)].bound_p;
        });
        in.resize(3);
        std::sort(in.begin(), in.end(), [&](int a, int b) {
            return candidates[static_cast<std::size_t>(a)].energy.real() <
                   candidates[static_cast<std::size_t>(b)].energy.real();
        });
    }

    // missing states are the lowest ones: the bottom band is the one that
    // dives into the continuum
    std::array<int, 3> slot{-1, -1, -1};
    int base = 3 - static_cast<int>(in.size());
    for (std::size_t t = 0; t < in.size(); ++t)
        slot[static_cast<std::size_t>(base) + t] = in[t];
    return slot;
}

std::array<BandSurface, 3> select_bound_bands(const TorusSweep& sweep,
                                              const SelectionOptions& opt) {
    if (opt.p_th <= sweep.params.p_store)
        throw std::invalid_argument("p_th must exceed the sweep's p_store");

    const int nk = sweep.params.n_k, np = sweep.params.n_phi;
    const std::size_t total = static_cast<std::size_t>(nk) * static_cast<std::size_t>(np);

    std::array<BandSurface, 3> out;
    for (int m = 0; m < 3; ++m) {
        out[static_cast<std::size_t>(m)].band_index = m;
        out[static_cast<std::size_t>(m)].n_k = nk;
        out[static_cast<std::size_t>(m)].n_phi = np;
        out[static_cast<std::size_t>(m)].p_th = opt.p_th;
        out[static_cast<std::size_t>(m)].e_lo = opt.e_lo;
        out[static_cast<std::size_t>(m)].e_hi = opt.e_hi;
        out[static_cast<std::size_t>(m)].trunc = sweep.trunc;
        out[static_cast<std::size_t>(m)].mask.assign(total, 0);
        out[static_cast<std::size_t>(m)].filled.assign(total, 0);
        out[static_cast<std::size_t>(m)].energy.assign(total, cd(0.0, 0.0));
        out[static_cast<std::size_t>(m)].vec.assign(total, Eigen::VectorXcd());
    }

    for (int ik = 0; ik < nk; ++ik) {
        for (int ip = 0; ip < np; ++ip) {
            const auto& cands = sweep.at(ik, ip);
            std::size_t cell = out[0].idx(ik, ip);

            std::array<int, 3> slot{};
            try {
                slot = assign_point(cands, opt);
            } catch (const std::runtime_error& err) {
                std::ostringstream msg;
                msg << "grid point (k=" << sweep.k_axis[static_cast<std::size_t>(ik)]
                    << ", phi0=" << sweep.phi_axis[static_cast<std::size_t>(ip)]
                    << "): " << err.what();
                throw std::runtime_error(msg.str());
            }

            for (int m = 0; m < 3; ++m) {
                if (slot[static_cast<std::size_t>(m)] < 0) continue;
                const auto& c =
                    cands[static_cast<std::size_t>(slot[static_cast<std::size_t>(m)])];
                auto& s = out[static_cast<std::size_t>(m)];
                s.mask[cell] = 1;
                s.energy[cell] = c.energy;
                s.vec[cell] = c.vec;
            }

            // fill holes with the most-bound in-window spare that keeps
            // Re E ascending across the bands present at this point
            for (int m = 0; m < 3; ++m) {
                if (slot[static_cast<std::size_t>(m)] >= 0) continue;
                int best = -1;
                for (std::size_t i = 0; i < cands.size(); ++i) {
                    bool used = false;
                    for (int u : slot) used |= (u == static_cast<int>(i));
                    if (used) continue;
                    const auto& c = cands[i];
                    double re = c.energy.real();
                    if (re < opt.e_lo || re > opt.e_hi) continue;
                    bool ordered = true;
                    for (int o = 0; o < 3; ++o) {
                        auto& s = out[static_cast<std::size_t>(o)];
                        if (s.mask[cell] == 0 && s.filled[cell] == 0) continue;
                        double e = s.energy[cell].real();
                        if (o < m && !(e < re)) ordered = false;
                        if (o > m && !(re < e)) ordered = false;
                    }
                    if (!ordered) continue;
                    if (best < 0 || c.bound_p > cands[static_cast<std::size_t>(best)].bound_p)
                        best = static_cast<int>(i);
                }
                if (best >= 0) {
                    auto& s = out[static_cast<std::size_t>(m)];
                    s.filled[cell] = 1;
                    s.energy[cell] = cands[static_cast<std::size_t>(best)].energy;
                    s.vec[cell] = cands[static_cast<std::size_t>(best)].vec;
                    slot[static_cast<std::size_t>(m)] = best;
                }
            }
        }
    }

    for (auto& s : out) {
        if (s.present_count() == 0) {
            std::ostringstream msg;
            msg << "band " << s.band_index
                << " was never identified; fewer than three bound bands";
            throw std::runtime_error(msg.str());
        }
        label_branches(s);
    }
    return out;
}

namespace {

struct PlaquetteWalk {
    // corner order 00 -> 10 -> 11 -> 01; links normalized for flux
    cd w_norm;
    cd w_raw;
};

bool plaquette(const BandSurface& s, int ik, int ip, PlaquetteWalk& out) {
    const int jk = (ik + 1) % s.n_k;
    const int jp = (ip + 1) % s.n_phi;
    if (!s.present(ik, ip) || !s.present(jk, ip) || !s.present(jk, jp) ||
        !s.present(ik, jp))
        return false;

    const Eigen::VectorXcd& u00 = s.vec[s.idx(ik, ip)];
    const Eigen::VectorXcd& u10 = s.vec[s.idx(jk, ip)];
    const Eigen::VectorXcd& u11 = s.vec[s.idx(jk, jp)];
    const Eigen::VectorXcd& u01 = s.vec[s.idx(ik, jp)];

    const cd links[4] = {u00.dot(u10), u10.dot(u11), u11.dot(u01), u01.dot(u00)};
    cd wn(1.0, 0.0), wr(1.0, 0.0);
    for (const cd& l : links) {
        double a = std::abs(l);
        if (a < 1e-12) {
            std::ostringstream msg;
            msg << "vanishing link overlap at plaquette (" << ik << ", " << ip
                << ") of band " << s.band_index << "; band tracking failed";
            throw std::runtime_error(msg.str());
        }
        wn *= l / a;
        wr *= l;
    }
    out.w_norm = wn;
    out.w_raw = wr;
    return true;
}

}  // namespace

ChernResult chern_link(const BandSurface& surface) {
    ChernResult r;
    r.band_index = surface.band_index;
    r.n_k = surface.n_k;
    r.n_phi = surface.n_phi;
    r.trunc = surface.trunc;
    r.p_th = surface.p_th;
    r.filled_points = surface.fill_count();
    r.branch_count = surface.branch_count;

    double flux_sum = 0.0, raw_sum = 0.0;
    PlaquetteWalk w;
    for (int ik = 0; ik < surface.n_k; ++ik) {
        for (int ip = 0; ip < surface.n_phi; ++ip) {
            if (!plaquette(surface, ik, ip, w)) continue;
            flux_sum += std::arg(w.w_norm);
            raw_sum += w.w_raw.imag();
            ++r.plaquettes;
        }
    }
    r.link_sum = flux_sum / two_pi;
    r.link_chern = std::llround(r.link_sum);
    r.continuum_chern = raw_sum / two_pi;
    return r;
}

double chern_continuum(const BandSurface& surface) {
    double raw_sum = 0.0;
    PlaquetteWalk w;
    for (int ik = 0; ik < surface.n_k; ++ik)
        for (int ip = 0; ip < surface.n_phi; ++ip)
            if (plaquette(surface, ik, ip, w)) raw_sum += w.w_raw.imag();
    return raw_sum / two_pi;
}

std::vector<std::array<double, 3>> curvature_field(const BandSurface& surface) {
    std::vector<std::array<double, 3>> rows;
    PlaquetteWalk w;
    for (int ik = 0; ik < surface.n_k; ++ik) {
        for (int ip = 0; ip < surface.n_phi; ++ip) {
            if (!plaquette(surface, ik, ip, w)) continue;
            double k = -pi / 3.0 + (two_pi / 3.0) * ik / surface.n_k;
            double phi0 = two_pi * ip / surface.n_phi;
            rows.push_back({k, phi0, std::arg(w.w_norm)});
        }
    }
    return rows;
}

}  // namespace biphoton
