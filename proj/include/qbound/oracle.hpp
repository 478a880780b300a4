#pragma once

// Brute-force oracle: explicit Kraus-sum channel application, operator
// identity verification, generator moments, numeric bound surface and exact
// QFI on truncated Fock spaces.  Shares no closed-form bound code with
// channel_math.hpp; agreement between the two paths is the point.

#include <map>
#include <string>

#include "qbound/fock.hpp"

namespace qbound {

struct OracleCutoffs {
    double trace_budget = 1e-10;  // largest tolerated channel trace deficit
    int amp_k = -1;               // amplifier k-cutoff; -1 = automatic tail rule
};

// Applies the phase-encoding channel exp(i theta n) after loss + amplifier,
// in the Kraus representation picked by the gauge point: each (l, k) term is
// conjugated by exp(i theta (n + l x + k y)).  Multi-mode states get the
// channel on every mode, each with its own (l, k) phases.  The result is the
// output density matrix; its lost trace is recorded in channel_deficit and
// checked against the budget.
TruncatedState apply_channel(const TruncatedState& state, const ChannelParams& p,
                             double theta, const KrausGaugePoint& g,
                             const OracleCutoffs& cutoffs = {});

struct HMoments {
    double h1 = 0.0;  // <H1> = sum w (j + k + l x + k y)^2
    double h2 = 0.0;  // <H2> = sum w (j + k + l x + k y)
};

// Per-level generator moments: h1_of[m], h2_of[m] are the exact channel
// expectations started from |m>, with the k-sum carried to the tail rule
// (no space cap; the channel itself lives in infinite dimension).
struct HTable {
    std::vector<double> h1_of;
    std::vector<double> h2_of;
};
HTable h_table(const ChannelParams& p, const KrausGaugePoint& g, int dim,
               const OracleCutoffs& cutoffs = {});

// State-averaged generator moments (diagonal pmf is all that enters; both
// generators are diagonal in the number basis).
HMoments h_moments(const TruncatedState& state, const ChannelParams& p,
                   const KrausGaugePoint& g, const OracleCutoffs& cutoffs = {});

// Numeric bound at one gauge point: 4 (<H1> - <H2>^2).
double cq_numeric(const TruncatedState& state, const ChannelParams& p,
                  const KrausGaugePoint& g, const OracleCutoffs& cutoffs = {});

// Two-mode version with the pairwise cross term:
// sum_m 4 (<H1^m> - <H2^m>^2) + 8 sum_{m'<m} (<H2^m H2^m'> - <H2^m><H2^m'>).
double cq_numeric_multimode(const TruncatedState& state, const ChannelParams& p,
                            const KrausGaugePoint& g, const OracleCutoffs& cutoffs = {});

// Regression of the two-mode cross moment <H2 H2'> against
// c^2 <n n'> + d1 d (<n> + <n'>) + d^2 for the undetermined linear
// coefficient d1 (c, d taken from the oracle's own single-level table).
double fit_cross_coefficient(const TruncatedState& state, const ChannelParams& p,
                             const KrausGaugePoint& g, const OracleCutoffs& cutoffs = {});

struct MinimizeResult {
    KrausGaugePoint argmin;
    double value = 0.0;
    double fit_residual = 0.0;  // max |surface - fitted quadratic| over the grid
};

// Samples the numeric surface on a gauge grid, least-squares fits the exact
// quadratic and solves its stationary point.  The fit residual doubles as a
// check that the sampled surface really is quadratic.
MinimizeResult minimize_cq_numeric(const TruncatedState& state, const ChannelParams& p,
                                   const OracleCutoffs& cutoffs = {},
                                   double grid_lo = -5.0, double grid_hi = 5.0,
                                   int grid_n = 21);

// Exact QFI of the channel output by the symmetric-logarithmic-derivative
// spectral formula.  d(rho)/d(theta) = i [N, rho] is formed exactly; the
// truncated output is renormalized; eigenvalue pairs below 1e-12 * lambda_max
// are dropped.
double qfi_exact(const TruncatedState& state, const ChannelParams& p,
                 double theta, const OracleCutoffs& cutoffs = {});

// Operator identity suite.  Builds the Kraus families in an enlarged working
// space (block + adaptive amplifier headroom), forms the eleven labeled
// operator sums by explicit summation and compares them on the top-left
// block x block corner against their closed forms; also checks the four
// ladder/number commutation lemmas on random monomials.
struct IdentityReport {
    int block = 0;            // asserted corner size
    int working_dim = 0;      // enlarged space the sums are built in
    int amp_k = 0;            // amplifier cutoff used
    double tail_bound = 0.0;  // weighted negative-binomial tail at the cutoff
    std::map<std::string, double> max_dev;  // identity name -> max abs deviation on block
    double max_deviation() const;
    bool all_below(double tol) const;
};

IdentityReport verify_identities(const ChannelParams& p, int block_dim);

// Max deviation over random (l, k) monomial instances of the four lemmas
// a^l n^k = (n+l)^k a^l, (a+)^l n^k = (n-l)^k (a+)^l, a^k a+^k = prod (n+j),
// a+^k a^k = prod (n-j+1), computed with dense matrix products.
double check_commutation_lemmas(int dim, int draws, unsigned long long seed);

}  // namespace qbound
