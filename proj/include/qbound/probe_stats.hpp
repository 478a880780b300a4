#pragma once

// Probe state families and their photon-number moments.  Moments feed the
// closed-form bound; families with a Fock-space representation are also
// constructible in the oracle (fock.hpp) for cross-checking.

#include <string>

#include "qbound/channel_math.hpp"

namespace qbound {

enum class ProbeFamily {
    coherent,            // |alpha> per mode
    fock,                // |m> per mode
    thermal_probe,       // thermal state of mean occupation per mode
    squeezed_vacuum,     // squeezed vacuum of parameter r per mode
    entangled_coherent,  // (|alpha,0> + |0,alpha>)/sqrt(norm), exactly 2 modes
    custom,              // moments given directly, no canonical state
};

// Which photon-number variance the entangled-coherent family reports:
// nominal_moments takes the variance-equals-mean convention, oracle_moments
// the direct expectation on the normalized state.  Other families are
// unaffected.
enum class MomentMode { nominal_moments, oracle_moments };

struct ProbeSpec {
    ProbeFamily family = ProbeFamily::coherent;
    int n_modes = 1;       // iid copies; entangled_coherent requires 2
    double alpha = 0.0;    // |alpha|, coherent and entangled_coherent
    int photons = 0;       // fock
    double mean = 0.0;     // thermal_probe (per mode), custom (total)
    double var = 0.0;      // custom (total)
    double squeeze = 0.0;  // squeezed_vacuum r >= 0
};

// Total mean/variance over all modes.  Throws std::domain_error on negative
// or inconsistent fields (entangled_coherent with n_modes != 2, ...).
ProbeMoments moments(const ProbeSpec& spec, MomentMode mode = MomentMode::nominal_moments);

ProbeFamily probe_family_from_string(const std::string& name);
std::string to_string(ProbeFamily family);

}  // namespace qbound
