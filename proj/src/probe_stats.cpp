#include "qbound/probe_stats.hpp"

#include <cmath>

namespace qbound {

ProbeMoments moments(const ProbeSpec& spec, MomentMode mode) {
    if (spec.n_modes < 1) throw std::domain_error("n_modes must be >= 1");
    ProbeMoments m;
    m.n_modes = spec.n_modes;

    switch (spec.family) {
        case ProbeFamily::coherent: {
            if (spec.alpha < 0.0) throw std::domain_error("alpha must be >= 0");
            const double nbar = spec.alpha * spec.alpha;
            m.mean = spec.n_modes * nbar;
            m.var = spec.n_modes * nbar;  // Poissonian per mode
            return m;
        }
        case ProbeFamily::fock: {
            if (spec.photons < 0) throw std::domain_error("photon count must be >= 0");
            m.mean = static_cast<double>(spec.n_modes) * spec.photons;
            m.var = 0.0;
            return m;
        }
        case ProbeFamily::thermal_probe: {
            if (spec.mean < 0.0) throw std::domain_error("thermal mean must be >= 0");
            m.mean = spec.n_modes * spec.mean;
            m.var = spec.n_modes * spec.mean * (spec.mean + 1.0);
            return m;
        }
        case ProbeFamily::squeezed_vacuum: {
            if (spec.squeeze < 0.0) throw std::domain_error("squeeze parameter must be >= 0");
            const double nbar = std::sinh(spec.squeeze) * std::sinh(spec.squeeze);
            m.mean = spec.n_modes * nbar;
            m.var = spec.n_modes * 2.0 * nbar * (nbar + 1.0);
            return m;
        }
        case ProbeFamily::entangled_coherent: {
            if (spec.n_modes != 2) throw std::domain_error("entangled_coherent requires n_modes = 2");
            if (spec.alpha < 0.0) throw std::domain_error("alpha must be >= 0");
            const double a2 = spec.alpha * spec.alpha;
            const double denom = 1.0 + std::exp(-a2);
            m.mean = a2 / denom;
            if (mode == MomentMode::nominal_moments) {
                // variance-equals-mean convention, Poissonian-looking
                m.var = m.mean;
            } else {
                // direct <n^2> - <n>^2 on the normalized superposition
                m.var = (a2 + a2 * a2) / denom - (a2 * a2) / (denom * denom);
            }
            return m;
        }
        case ProbeFamily::custom: {
            if (spec.mean < 0.0) throw std::domain_error("custom mean must be >= 0");
            if (spec.var < 0.0) throw std::domain_error("custom variance must be >= 0");
            m.mean = spec.mean;
            m.var = spec.var;
            return m;
        }
    }
    throw std::domain_error("unknown probe family");
}

ProbeFamily probe_family_from_string(const std::string& name) {
    if (name == "coherent") return ProbeFamily::coherent;
    if (name == "fock") return ProbeFamily::fock;
    if (name == "thermal" || name == "thermal_probe") return ProbeFamily::thermal_probe;
    if (name == "squeezed" || name == "squeezed_vacuum") return ProbeFamily::squeezed_vacuum;
    if (name == "ecs" || name == "entangled_coherent") return ProbeFamily::entangled_coherent;
    if (name == "custom") return ProbeFamily::custom;
    throw std::domain_error("unknown probe family: " + name);
}

std::string to_string(ProbeFamily family) {
    switch (family) {
        case ProbeFamily::coherent: return "coherent";
        case ProbeFamily::fock: return "fock";
        case ProbeFamily::thermal_probe: return "thermal_probe";
        case ProbeFamily::squeezed_vacuum: return "squeezed_vacuum";
        case ProbeFamily::entangled_coherent: return "entangled_coherent";
        case ProbeFamily::custom: return "custom";
    }
    return "?";
}

}  // namespace qbound
