#pragma once

// Parameter sweeps of the closed-form bound, CSV-serialized with stable
// formatting so sweep outputs can be committed and byte-compared.

#include <string>
#include <vector>

#include "qbound/channel_math.hpp"
#include "qbound/probe_stats.hpp"

namespace qbound {

struct SweepSpec {
    std::vector<double> etas;
    double nbar_start = 0.0;
    double nbar_stop = 0.0;
    int nbar_count = 1;
    ProbeSpec probe;
    MomentMode mode = MomentMode::nominal_moments;
};

struct SweepRow {
    double eta, nbar_b;
    int n_modes;
    double mean_ns, var_ns;
    double x0, y0, cq_star, mse_lower;
};

// Loss/noise sweep of the two-mode entangled-coherent bound:
// eta in {0.1, 0.4, 0.7}, nbar_b from 0 to 5 in 101 steps, |alpha| = 1.
SweepSpec reference_sweep_spec();

// Rows ordered by (eta, nbar_b), both ascending.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

std::string sweep_csv_header();
std::string sweep_csv(const SweepSpec& spec);

}  // namespace qbound
