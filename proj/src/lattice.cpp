#include "biphoton/lattice.hpp"

#include <sstream>
#include <stdexcept>

namespace biphoton {

std::vector<std::string> validate(const ModelParams& p) {
    std::vector<std::string> v;
    if (!(p.gamma0 > 0.0)) v.push_back("gamma0 > 0 required");
    if (p.beta != 3) v.push_back("beta = 3 required");
    if (!(p.delta >= 0.0 && p.delta < 0.5)) v.push_back("0 <= delta < 0.5 required");
    if (p.n_qubits < 1) v.push_back("n_qubits >= 1 required");
    if (p.trunc < 10) v.push_back("trunc >= 10 required");
    if (!std::isfinite(p.phi) || !std::isfinite(p.phi0) || !std::isfinite(p.delta) ||
        !std::isfinite(p.gamma0))
        v.push_back("parameters must be finite");
    return v;
}

void require_valid(const ModelParams& p) {
    auto v = validate(p);
    if (v.empty()) return;
    std::ostringstream msg;
    msg << "invalid parameters:";
    for (const auto& s : v) msg << " " << s << ";";
    throw std::invalid_argument(msg.str());
}

double modulation_offset(const ModelParams& p, long j, double phi0) {
    long m = j % 3;
    if (m < 0) m += 3;
    double arg = two_pi * static_cast<double>(m) / 3.0 + reduce_phase(phi0);
    return p.delta * std::cos(arg);
}

double modulated_position(const ModelParams& p, long j, double phi0) {
    return static_cast<double>(j) + modulation_offset(p, j, phi0);
}

QubitArray build_uniform(const ModelParams& p) {
    require_valid(p);
    QubitArray a;
    a.kind = Geometry::uniform;
    a.params = p;
    a.positions.resize(static_cast<std::size_t>(p.n_qubits));
    for (int j = 1; j <= p.n_qubits; ++j)
        a.positions[static_cast<std::size_t>(j) - 1] = modulated_position(p, j, p.phi0);
    return a;
}

QubitArray build_interface(const ModelParams& p) {
    require_valid(p);
    if (p.n_qubits % 2 != 0)
        throw std::invalid_argument("interface geometry requires an even qubit count");
    QubitArray a;
    a.kind = Geometry::interface;
    a.params = p;
    a.positions.resize(static_cast<std::size_t>(p.n_qubits));
    for (int j = 1; j <= p.n_qubits; ++j) {
        double phase = (j <= p.n_qubits / 2) ? 0.0 : pi;
        a.positions[static_cast<std::size_t>(j) - 1] = modulated_position(p, j, phase);
    }
    return a;
}

std::complex<double> coupling_kernel(const ModelParams& p, double za, double zb) {
    double d = std::abs(za - zb);
    return std::complex<double>(0.0, -p.gamma0) *
           std::exp(std::complex<double>(0.0, p.phi * d));
}

}  // namespace biphoton
