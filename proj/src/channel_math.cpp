#include "qbound/channel_math.hpp"

#include <cmath>
#include <limits>

namespace qbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_probe(const ProbeMoments& probe) {
    if (probe.n_modes < 1) throw std::domain_error("n_modes must be >= 1");
    if (probe.mean < 0.0) throw std::domain_error("probe mean must be >= 0");
    if (probe.var < 0.0) throw std::domain_error("probe variance must be >= 0");
}

}  // namespace

ChannelParams derive_params(double eta, double nbar_b) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::domain_error("eta must lie in [0, 1]");
    if (!(nbar_b >= 0.0)) throw std::domain_error("nbar_b must be >= 0");
    ChannelParams p;
    p.eta = eta;
    p.nbar_b = nbar_b;
    p.gain = 1.0 + (1.0 - eta) * nbar_b;
    p.tau = eta / p.gain;
    return p;
}

GaugeCoefficients gauge_coefficients(const ChannelParams& p, const KrausGaugePoint& g) {
    const double eta = p.eta, nb = p.nbar_b;
    const double G = p.gain;
    const double u = (1.0 - eta) * nb;  // = G - 1
    const double x = g.x, y = g.y;

    GaugeCoefficients c;
    c.c2 = (eta + (1.0 - eta) * ((nb + 1.0) * x + eta * nb * (y + 1.0))) / G;
    c.c1 = (1.0 - eta) / (G * G) *
           (eta * (nb + 1.0) * x * x
            + eta * nb * (1.0 - u * (eta - 4.0 * u - 5.0)) * y * y
            + 2.0 * (1.0 - eta) * (1.0 - eta) * nb * (nb + 1.0) * (nb + 1.0) * x * y
            + 2.0 * (nb + 1.0) * G * (u - eta) * x
            + 2.0 * eta * nb * G * (3.0 - eta + 4.0 * u) * y
            + eta * (4.0 * nb + 1.0) * G * G);
    c.c0 = (1.0 - eta) * nb * (2.0 * u + 1.0) * (y + 1.0) * (y + 1.0);
    c.d0 = (1.0 - eta) * nb * (y + 1.0);
    return c;
}

QuadraticForm quadratic_a_form(const ChannelParams& p) {
    const double eta = p.eta, nb = p.nbar_b, G = p.gain;
    QuadraticForm a;
    a.xx = std::pow((nb + 1.0) * (1.0 - eta) / G, 2);
    a.yy = std::pow(nb * eta * (1.0 - eta) / G, 2);
    a.xy = 2.0 * nb * (nb + 1.0) * eta * (1.0 - eta) * (1.0 - eta) / (G * G);
    a.x_ = 2.0 * (nb + 1.0) * eta * (1.0 - eta) / G;
    a.y_ = 2.0 * nb * eta * eta * (1.0 - eta) / G;
    a.c = eta * eta;
    return a;
}

QuadraticForm omega_form(const ChannelParams& p, const ProbeMoments& probe) {
    validate_probe(probe);
    const double eta = p.eta, nb = p.nbar_b, G = p.gain;
    const double u = (1.0 - eta) * nb;
    const double N = probe.mean;
    const double n = probe.n_modes;

    QuadraticForm w;
    w.xx = (nb + 1.0) * eta * (1.0 - eta) * N / (G * G);
    w.yy = nb * (1.0 - eta) * (n * G * G * G + eta * N * (1.0 + u * (3.0 + 2.0 * u - eta))) / (G * G);
    w.xy = -2.0 * eta * (1.0 - eta) * (1.0 - eta) * nb * (nb + 1.0) * N / (G * G);
    w.x_ = -2.0 * eta * (1.0 - eta) * (nb + 1.0) * N / G;
    // y coefficient: the number-moment route fixes the eta sign as -eta here
    // (2 + 2u - eta); the stationary point and the brute-force generator
    // moments both require it.
    w.y_ = 2.0 * nb * (1.0 - eta) * (n * G * G + eta * N * (2.0 + 2.0 * u - eta)) / G;
    w.c = (1.0 - eta) * (n * nb * nb * (1.0 - eta) + eta * N + nb * (n + 2.0 * eta * N));
    return w;
}

double quadratic_a(const ChannelParams& p, const KrausGaugePoint& g) {
    return quadratic_a_form(p).eval(g.x, g.y);
}

double omega_n(const ChannelParams& p, const KrausGaugePoint& g, const ProbeMoments& probe) {
    return omega_form(p, probe).eval(g.x, g.y);
}

double omega_single(const ChannelParams& p, const KrausGaugePoint& g, const ProbeMoments& probe) {
    if (probe.n_modes != 1) throw std::domain_error("omega_single expects a 1-mode probe");
    return omega_n(p, g, probe);
}

QuadraticForm surface_form(const ChannelParams& p, const ProbeMoments& probe) {
    const QuadraticForm a = quadratic_a_form(p);
    const QuadraticForm w = omega_form(p, probe);
    const double V = probe.var;
    QuadraticForm s;
    s.xx = 4.0 * (a.xx * V + w.xx);
    s.yy = 4.0 * (a.yy * V + w.yy);
    s.xy = 4.0 * (a.xy * V + w.xy);
    s.x_ = 4.0 * (a.x_ * V + w.x_);
    s.y_ = 4.0 * (a.y_ * V + w.y_);
    s.c = 4.0 * (a.c * V + w.c);
    return s;
}

double cq_surface(const ChannelParams& p, const KrausGaugePoint& g, const ProbeMoments& probe) {
    return 4.0 * (quadratic_a(p, g) * probe.var + omega_n(p, g, probe));
}

double stationary_denominator(const ChannelParams& p, const ProbeMoments& probe) {
    validate_probe(probe);
    const double eta = p.eta, nb = p.nbar_b, G = p.gain;
    const double N = probe.mean, V = probe.var;
    const double n = probe.n_modes;
    return eta * eta * N * N + eta * n * N * G
         + (1.0 - eta) * eta * V * N * (1.0 + 2.0 * nb)
         - (1.0 - eta) * eta * V * n * nb * (1.0 + nb)
         + (1.0 - eta) * n * V * (1.0 + nb) * (1.0 + nb);
}

KrausGaugePoint optimal_gauge_n(const ChannelParams& p, const ProbeMoments& probe) {
    const double D = stationary_denominator(p, probe);
    if (D <= 0.0) throw degenerate_error("stationary denominator vanishes (mean = var = 0 probe)");
    const double eta = p.eta, nb = p.nbar_b, G = p.gain;
    const double N = probe.mean, V = probe.var;
    const double n = probe.n_modes;
    KrausGaugePoint g;
    g.x = -(eta * eta * N * (V - N) + eta * n * (V - N) * G) / D;
    g.y = (eta * eta * N * (V - N)
           - (n * V * (1.0 + nb) * (1.0 - eta) + eta * N * (n + 2.0 * V)) * G) / D;
    return g;
}

KrausGaugePoint optimal_gauge_single(const ChannelParams& p, const ProbeMoments& probe) {
    if (probe.n_modes != 1) throw std::domain_error("optimal_gauge_single expects a 1-mode probe");
    const double D = stationary_denominator(p, probe);
    if (D <= 0.0) throw degenerate_error("stationary denominator vanishes (mean = var = 0 probe)");
    const double eta = p.eta, nb = p.nbar_b;
    const double N = probe.mean, V = probe.var;
    // single-use printed forms; identical to optimal_gauge_n at n = 1 up to
    // association order
    KrausGaugePoint g;
    g.x = eta * (N - V) * (eta * N + (1.0 - eta) * nb + 1.0) / D;
    g.y = -1.0 - eta * V * N / D;
    return g;
}

bool hessian_condition(const ChannelParams& p, const ProbeMoments& probe) {
    const QuadraticForm s = surface_form(p, probe);
    const double det = 4.0 * s.xx * s.yy - s.xy * s.xy;
    return det > 0.0;
}

namespace {

BoundResult assemble(const ChannelParams& p, const ProbeMoments& probe,
                     double cq, const KrausGaugePoint& g, bool degenerate) {
    BoundResult r;
    r.cq_star = cq;
    r.gauge = g;
    // normalize -0 coordinates so serialized output is sign-stable
    r.gauge.x += 0.0;
    r.gauge.y += 0.0;
    r.hessian_ok = hessian_condition(p, probe);
    r.degenerate = degenerate || !r.hessian_ok;
    r.mse_lower = cq > 0.0 ? 1.0 / cq : kInf;
    return r;
}

}  // namespace

BoundResult cq_star_n(const ChannelParams& p, const ProbeMoments& probe) {
    validate_probe(probe);
    if (p.eta == 1.0) {
        // lossless: the surface is identically 4 var, every gauge optimal
        KrausGaugePoint g{0.0, 0.0};
        const double D = stationary_denominator(p, probe);
        if (D > 0.0) g = optimal_gauge_n(p, probe);
        return assemble(p, probe, 4.0 * probe.var, g, true);
    }
    const double D = stationary_denominator(p, probe);
    if (D <= 0.0) {
        return assemble(p, probe, 0.0, {0.0, 0.0}, true);
    }
    const double eta = p.eta, G = p.gain;
    const double N = probe.mean, V = probe.var;
    const double n = probe.n_modes;
    const double cq = (4.0 * n * eta * V * N * G + 4.0 * eta * eta * V * N * N) / D;
    return assemble(p, probe, cq, optimal_gauge_n(p, probe), false);
}

BoundResult cq_star_single(const ChannelParams& p, const ProbeMoments& probe) {
    if (probe.n_modes != 1) throw std::domain_error("cq_star_single expects a 1-mode probe");
    if (p.eta == 1.0 || stationary_denominator(p, probe) <= 0.0) return cq_star_n(p, probe);
    const double eta = p.eta, nb = p.nbar_b;
    const double N = probe.mean, V = probe.var;
    const double D = stationary_denominator(p, probe);
    const double cq = 4.0 * eta * V * N * (eta * N + (1.0 - eta) * nb + 1.0) / D;
    return assemble(p, probe, cq, optimal_gauge_single(p, probe), false);
}

double bound_derivative_nbar(const ChannelParams& p, const ProbeMoments& probe) {
    validate_probe(probe);
    const double eta = p.eta, nb = p.nbar_b, G = p.gain;
    const double N = probe.mean, V = probe.var;
    const double n = probe.n_modes;
    const double D = stationary_denominator(p, probe);
    if (D <= 0.0) return 0.0;  // bound identically zero
    return -4.0 * eta * (1.0 - eta) * N * V * V / (D * D) *
           (n * eta * N * (3.0 + 2.0 * nb * (1.0 - eta)) + 2.0 * eta * eta * N * N + n * n * G * G);
}

}  // namespace qbound
