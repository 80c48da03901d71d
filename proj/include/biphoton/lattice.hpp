#pragma once

#include <complex>
#include <vector>

#include "biphoton/params.hpp"

namespace biphoton {

enum class Geometry { uniform, interface };

struct QubitArray {
    std::vector<double> positions;  // positions[j-1] = z_j, strictly increasing
    Geometry kind = Geometry::uniform;
    ModelParams params;

    int size() const { return static_cast<int>(positions.size()); }
    double z(int j) const { return positions[static_cast<std::size_t>(j) - 1]; }  // 1-based
};

// delta*cos(2*pi*j/beta + phi0) for any integer j; the cosine argument is
// reduced mod beta first, so the offset is exactly 3-periodic in j (the same
// double for every j in a residue class).
double modulation_offset(const ModelParams& p, long j, double phi0);

// z_j = j + modulation_offset(j), defined for any integer j.
double modulated_position(const ModelParams& p, long j, double phi0);
inline double modulated_position(const ModelParams& p, long j) {
    return modulated_position(p, j, p.phi0);
}

QubitArray build_uniform(const ModelParams& p);

// Two segments with modulation phases 0 (j <= N/2) and pi (j > N/2); N must be even.
QubitArray build_interface(const ModelParams& p);

// -i*gamma0 * exp(i*phi*|za - zb|)
std::complex<double> coupling_kernel(const ModelParams& p, double za, double zb);

}  // namespace biphoton
