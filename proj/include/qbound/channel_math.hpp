#pragma once

// Closed-form machinery for the optimized QFI upper bound of phase estimation
// through a lossy thermal-noise bosonic channel.  The channel (transmissivity
// eta, environment occupation nbar_b) is decomposed as pure loss of
// transmissivity tau = eta/G followed by a quantum-limited amplifier of gain
// G = 1 + (1-eta) nbar_b.  A two-parameter gauge (x, y) of equivalent Kraus
// representations leaves the channel invariant but moves the bound;
// the bound surface is an exact quadratic in (x, y) and the optimum is
// available in closed form.

#include <stdexcept>

namespace qbound {

struct ChannelParams {
    double eta = 0.0;     // transmissivity, [0, 1]
    double nbar_b = 0.0;  // environment thermal occupation, >= 0
    double gain = 1.0;    // amplifier gain G = 1 + (1-eta) nbar_b
    double tau = 0.0;     // loss transmissivity eta/G
};

// Kraus gauge point.  (x, y) shift the generator phases of the loss and
// amplifier Kraus families respectively; the one-parameter gamma family is
// the slice x = -gamma, y = gamma.
struct KrausGaugePoint {
    double x = 0.0;
    double y = 0.0;
};

inline KrausGaugePoint gamma_point(double gamma) { return {-gamma, gamma}; }

// Total mean photon number and total photon-number variance of the probe,
// together with the number of channel uses it is spread over.
struct ProbeMoments {
    int n_modes = 1;
    double mean = 0.0;
    double var = 0.0;
};

// Coefficients of the gauge-dependent generator moments: H2 = c2 n + d0 and
// H1 = c2^2 n^2 + c1 n + c0 on number states of the input mode.
struct GaugeCoefficients {
    double c2 = 0.0;
    double c1 = 0.0;
    double c0 = 0.0;
    double d0 = 0.0;
};

// q(x, y) = xx x^2 + yy y^2 + xy x y + x_ x + y_ y + c
struct QuadraticForm {
    double xx = 0.0, yy = 0.0, xy = 0.0, x_ = 0.0, y_ = 0.0, c = 0.0;

    double eval(double x, double y) const {
        return xx * x * x + yy * y * y + xy * x * y + x_ * x + y_ * y + c;
    }
    double dx(double x, double y) const { return 2.0 * xx * x + xy * y + x_; }
    double dy(double x, double y) const { return 2.0 * yy * y + xy * x + y_; }
};

struct BoundResult {
    double cq_star = 0.0;       // optimized bound, units of 1/rad^2 per shot
    KrausGaugePoint gauge;      // minimizing gauge point
    bool hessian_ok = false;    // strict positive-definiteness of the surface Hessian
    bool degenerate = false;    // flat direction or vanishing stationary denominator
    double mse_lower = 0.0;     // 1/cq_star, inf when cq_star = 0
};

// Raised when a stationary point is requested where the closed-form
// denominator vanishes (mean = var = 0 probes below unit transmissivity).
struct degenerate_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Validates eta in [0,1], nbar_b >= 0 and fills gain/tau.
ChannelParams derive_params(double eta, double nbar_b);

// Generator-moment coefficients at a gauge point.
GaugeCoefficients gauge_coefficients(const ChannelParams& p, const KrausGaugePoint& g);

// Quadratic coefficient tables.  quadratic_a multiplies the probe variance;
// omega_form collects everything else (depends on probe mean and mode count).
QuadraticForm quadratic_a_form(const ChannelParams& p);
QuadraticForm omega_form(const ChannelParams& p, const ProbeMoments& probe);

double quadratic_a(const ChannelParams& p, const KrausGaugePoint& g);
double omega_single(const ChannelParams& p, const KrausGaugePoint& g, const ProbeMoments& probe);
double omega_n(const ChannelParams& p, const KrausGaugePoint& g, const ProbeMoments& probe);

// Bound surface C(x, y) = 4 [A(x, y) var + Omega(x, y)].
double cq_surface(const ChannelParams& p, const KrausGaugePoint& g, const ProbeMoments& probe);
QuadraticForm surface_form(const ChannelParams& p, const ProbeMoments& probe);

// Denominator of the stationary-point solution; zero iff mean = var = 0
// (for eta < 1) and the optimum is then undefined.
double stationary_denominator(const ChannelParams& p, const ProbeMoments& probe);

// Closed-form minimizing gauge.  Throws degenerate_error when the
// denominator vanishes.
KrausGaugePoint optimal_gauge_single(const ChannelParams& p, const ProbeMoments& probe);
KrausGaugePoint optimal_gauge_n(const ChannelParams& p, const ProbeMoments& probe);

// Strict convexity of the surface (positive Hessian determinant).  False on
// flat surfaces: eta = 1, nbar_b = 0, or probes with mean = 0 or var = 0.
bool hessian_condition(const ChannelParams& p, const ProbeMoments& probe);

// Optimized bound.  Never throws: flat and degenerate cases come back with
// the degenerate flag set (eta = 1 gives the exact 4*var plateau value).
BoundResult cq_star_single(const ChannelParams& p, const ProbeMoments& probe);
BoundResult cq_star_n(const ChannelParams& p, const ProbeMoments& probe);

// d(cq_star)/d(nbar_b) at fixed probe; <= 0 everywhere, 0 on degenerate input.
double bound_derivative_nbar(const ChannelParams& p, const ProbeMoments& probe);

}  // namespace qbound
