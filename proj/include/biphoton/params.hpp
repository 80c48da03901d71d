#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace biphoton {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// All rates are in units of gamma0, all lengths in units of the array spacing.
// phi0 is treated modulo 2*pi everywhere; builders reduce it on use.
struct ModelParams {
    double gamma0 = 1.0;   // single-qubit radiative rate
    double phi = 0.3;      // waveguide phase accumulated per unit spacing
    double delta = 0.1;    // position modulation amplitude, must stay < 0.5
    double phi0 = 0.0;     // modulation phase
    int beta = 3;          // modulation period in sites (fixed)
    int n_qubits = 100;
    int trunc = 70;        // relative-distance truncation L for the Bloch problem
};

inline double reduce_phase(double x) {
    double r = x - two_pi * std::floor(x / two_pi);
    if (r >= two_pi) r -= two_pi;
    if (r < 0.0) r = 0.0;
    return r;
}

std::vector<std::string> validate(const ModelParams& p);
void require_valid(const ModelParams& p);  // throws std::invalid_argument with all violations

}  // namespace biphoton
