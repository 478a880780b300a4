#pragma once

// Truncated Fock-space representations: Kraus operator bands, probe states,
// and photon statistics.  Everything here is brute-force and independent of
// the closed forms in channel_math.hpp; it exists to check them.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qbound/channel_math.hpp"
#include "qbound/probe_stats.hpp"

namespace qbound {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Raised when a truncation-induced deficit exceeds its budget.
struct truncation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Single-band operator: entry (j + offset, j) = amp[j], all other entries
// zero.  Every Kraus operator of the loss/amplifier decomposition has this
// shape; to_matrix materializes the band in a dim x dim space (rows outside
// [0, dim) are dropped, which is where truncation enters).
struct BandOp {
    int offset = 0;
    std::vector<double> amp;

    Mat to_matrix(int dim) const;
};

// Loss Kraus operator A_l for transmissivity tau:
// amp[m] = sqrt(C(m,l) (1-tau)^l tau^(m-l)), offset -l (zero for m < l).
BandOp loss_kraus(int l, double tau, int dim);

// Amplifier Kraus operator B_k for gain G:
// amp[m] = sqrt(C(m+k,k) (1/G)^(m+1) ((G-1)/G)^k), offset +k.
BandOp amp_kraus(int k, double gain, int dim);

// Probability rows of the underlying distributions.  loss_weights(m):
// binomial over l <= m of losing l photons from |m>.  amp_weights(j, kmax):
// negative-binomial over k of the amplifier adding k photons to |j>.
std::vector<double> loss_weights(int m, double tau);
std::vector<double> amp_weights(int j, double gain, int kmax);

// Smallest k-cutoff whose (1 + k^2)-weighted negative-binomial tail, at the
// worst occupied level r-1, is below tol.  Grows roughly linearly in r.
int amp_cutoff(double gain, int r, double tol);

Mat annihilation_matrix(int dim);
Mat number_matrix(int dim);

// One or two bosonic modes truncated to dim levels each (total dimension
// dim^n_modes, mode-major index m1*dim + m2).
struct TruncatedState {
    int n_modes = 1;
    int dim = 0;
    bool pure = false;
    Vec psi;              // only when pure
    Mat rho;              // always filled
    double build_deficit = 0.0;    // probability mass lost at construction
    double channel_deficit = 0.0;  // trace lost by the last channel application

    int total_dim() const { return pure ? static_cast<int>(psi.size()) : static_cast<int>(rho.rows()); }
    Eigen::VectorXd diag_pmf() const;
};

// Fock representation of a probe family (throws std::domain_error for
// custom, which has no canonical state).  Amplitudes are renormalized after
// truncation; the pre-normalization deficit lands in build_deficit and must
// stay below budget.
TruncatedState build_state(const ProbeSpec& spec, int dim, double budget = 1e-10);

// Diagonal mixture with the given pmf over Fock levels (padded/renormalized).
TruncatedState diagonal_state(const std::vector<double>& pmf, int dim);

// Mean and variance of the total photon number.
ProbeMoments state_moments(const TruncatedState& state);

// Occupation of the top Fock level(s); a cheap truncation-quality probe.
double top_level_mass(const TruncatedState& state);

}  // namespace qbound
