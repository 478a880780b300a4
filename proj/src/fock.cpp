#include "qbound/fock.hpp"

#include <cmath>
#include <numeric>

namespace qbound {

Mat BandOp::to_matrix(int dim) const {
    Mat m = Mat::Zero(dim, dim);
    for (int j = 0; j < dim && j < static_cast<int>(amp.size()); ++j) {
        const int i = j + offset;
        if (i >= 0 && i < dim) m(i, j) = amp[j];
    }
    return m;
}

std::vector<double> loss_weights(int m, double tau) {
    // binomial row: w(l) = C(m,l) (1-tau)^l tau^(m-l), l = 0..m
    std::vector<double> w(m + 1, 0.0);
    if (tau == 1.0) {
        w[0] = 1.0;
        return w;
    }
    if (tau == 0.0) {
        w[m] = 1.0;
        return w;
    }
    double cur = std::pow(tau, m);
    for (int l = 0; l <= m; ++l) {
        w[l] = cur;
        cur *= (1.0 - tau) / tau * static_cast<double>(m - l) / (l + 1.0);
    }
    return w;
}

std::vector<double> amp_weights(int j, double gain, int kmax) {
    // negative-binomial row: w(k) = C(j+k,k) (1/G)^(j+1) q^k, q = (G-1)/G
    std::vector<double> w(kmax + 1, 0.0);
    if (gain == 1.0) {
        w[0] = 1.0;
        return w;
    }
    const double q = (gain - 1.0) / gain;
    double cur = std::pow(1.0 / gain, j + 1);
    for (int k = 0; k <= kmax; ++k) {
        w[k] = cur;
        cur *= q * static_cast<double>(j + k + 1) / (k + 1.0);
    }
    return w;
}

BandOp loss_kraus(int l, double tau, int dim) {
    BandOp op;
    op.offset = -l;
    op.amp.assign(dim, 0.0);
    if (tau == 1.0) {
        if (l == 0) op.amp.assign(dim, 1.0);
        return op;
    }
    // recurrence in the source level m: w(l|l) = (1-tau)^l,
    // w(l|m+1) = w(l|m) tau (m+1)/(m+1-l)
    double w = std::pow(1.0 - tau, l);
    for (int m = l; m < dim; ++m) {
        op.amp[m] = std::sqrt(w);
        w *= tau * (m + 1.0) / (m + 1.0 - l);
    }
    return op;
}

BandOp amp_kraus(int k, double gain, int dim) {
    BandOp op;
    op.offset = k;
    op.amp.assign(dim, 0.0);
    if (gain == 1.0) {
        if (k == 0) op.amp.assign(dim, 1.0);
        return op;
    }
    const double q = (gain - 1.0) / gain;
    // w(k|0) = (1/G) q^k, w(k|j+1) = w(k|j) (1/G) (j+1+k)/(j+1)
    double w = std::pow(q, k) / gain;
    for (int j = 0; j < dim; ++j) {
        op.amp[j] = std::sqrt(w);
        w *= (j + 1.0 + k) / ((j + 1.0) * gain);
    }
    return op;
}

int amp_cutoff(double gain, int r, double tol) {
    if (gain <= 1.0) return 0;
    // scan the worst row (j = r-1) and find where the (1+k^2)-weighted tail
    // drops below tol; scan limit generous enough for q up to ~0.75
    const int kcap = static_cast<int>(64 + 12 * r * gain);
    std::vector<double> w = amp_weights(r - 1, gain, kcap);
    std::vector<double> tail(kcap + 2, 0.0);
    for (int k = kcap; k >= 0; --k)
        tail[k] = tail[k + 1] + (1.0 + static_cast<double>(k) * k) * w[k];
    for (int k = 0; k <= kcap; ++k)
        if (tail[k + 1] <= tol) return k;
    return kcap;
}

Mat annihilation_matrix(int dim) {
    Mat a = Mat::Zero(dim, dim);
    for (int m = 1; m < dim; ++m) a(m - 1, m) = std::sqrt(static_cast<double>(m));
    return a;
}

Mat number_matrix(int dim) {
    Mat n = Mat::Zero(dim, dim);
    for (int m = 0; m < dim; ++m) n(m, m) = m;
    return n;
}

Eigen::VectorXd TruncatedState::diag_pmf() const {
    const int d = total_dim();
    Eigen::VectorXd p(d);
    if (pure) {
        for (int i = 0; i < d; ++i) p(i) = std::norm(psi(i));
    } else {
        for (int i = 0; i < d; ++i) p(i) = rho(i, i).real();
    }
    return p;
}

namespace {

std::vector<double> coherent_amps(double alpha, int dim) {
    // e^(-a^2/2) a^m / sqrt(m!)
    std::vector<double> c(dim);
    double cur = std::exp(-0.5 * alpha * alpha);
    for (int m = 0; m < dim; ++m) {
        c[m] = cur;
        cur *= alpha / std::sqrt(m + 1.0);
    }
    return c;
}

TruncatedState from_pure(int n_modes, int dim, Vec psi, double budget) {
    TruncatedState s;
    s.n_modes = n_modes;
    s.dim = dim;
    s.pure = true;
    const double norm2 = psi.squaredNorm();
    s.build_deficit = 1.0 - norm2;
    if (s.build_deficit > budget)
        throw truncation_error("state truncation deficit exceeds budget");
    if (norm2 > 0.0) psi /= std::sqrt(norm2);
    s.psi = psi;
    s.rho = psi * psi.adjoint();
    return s;
}

}  // namespace

TruncatedState build_state(const ProbeSpec& spec, int dim, double budget) {
    if (dim < 1) throw std::domain_error("dim must be >= 1");
    switch (spec.family) {
        case ProbeFamily::coherent: {
            if (spec.n_modes != 1) throw std::domain_error("build_state: 1-mode families only");
            if (spec.alpha < 0.0) throw std::domain_error("alpha must be >= 0");
            const std::vector<double> c = coherent_amps(spec.alpha, dim);
            Vec psi(dim);
            for (int m = 0; m < dim; ++m) psi(m) = c[m];
            return from_pure(1, dim, psi, budget);
        }
        case ProbeFamily::fock: {
            if (spec.n_modes != 1) throw std::domain_error("build_state: 1-mode families only");
            if (spec.photons < 0 || spec.photons >= dim)
                throw std::domain_error("fock level outside truncated space");
            Vec psi = Vec::Zero(dim);
            psi(spec.photons) = 1.0;
            return from_pure(1, dim, psi, budget);
        }
        case ProbeFamily::thermal_probe: {
            if (spec.n_modes != 1) throw std::domain_error("build_state: 1-mode families only");
            if (spec.mean < 0.0) throw std::domain_error("thermal mean must be >= 0");
            const double s = spec.mean / (spec.mean + 1.0);
            std::vector<double> pmf(dim);
            double cur = 1.0 / (spec.mean + 1.0);
            for (int m = 0; m < dim; ++m) {
                pmf[m] = cur;
                cur *= s;
            }
            const double mass = std::accumulate(pmf.begin(), pmf.end(), 0.0);
            if (1.0 - mass > budget)
                throw truncation_error("state truncation deficit exceeds budget");
            TruncatedState st = diagonal_state(pmf, dim);
            st.build_deficit = 1.0 - mass;
            return st;
        }
        case ProbeFamily::squeezed_vacuum: {
            if (spec.n_modes != 1) throw std::domain_error("build_state: 1-mode families only");
            if (spec.squeeze < 0.0) throw std::domain_error("squeeze parameter must be >= 0");
            const double t = std::tanh(spec.squeeze);
            Vec psi = Vec::Zero(dim);
            // c_{2m} = (-t)^m sqrt((2m)!) / (2^m m!) / sqrt(cosh r)
            double cur = 1.0 / std::sqrt(std::cosh(spec.squeeze));
            for (int m = 0; 2 * m < dim; ++m) {
                psi(2 * m) = cur;
                cur *= -t * std::sqrt((2.0 * m + 1.0) * (2.0 * m + 2.0)) / (2.0 * (m + 1.0));
            }
            return from_pure(1, dim, psi, budget);
        }
        case ProbeFamily::entangled_coherent: {
            if (spec.n_modes != 2) throw std::domain_error("entangled_coherent requires n_modes = 2");
            if (spec.alpha < 0.0) throw std::domain_error("alpha must be >= 0");
            const std::vector<double> c = coherent_amps(spec.alpha, dim);
            // (|alpha, 0> + |0, alpha>) before normalization
            Vec psi = Vec::Zero(dim * dim);
            for (int m = 0; m < dim; ++m) {
                psi(m * dim + 0) += c[m];
                psi(0 * dim + m) += c[m];
            }
            const double norm2_exact = 2.0 * (1.0 + std::exp(-spec.alpha * spec.alpha));
            const double deficit = 1.0 - psi.squaredNorm() / norm2_exact;
            if (deficit > budget) throw truncation_error("state truncation deficit exceeds budget");
            psi /= psi.norm();
            TruncatedState st;
            st.n_modes = 2;
            st.dim = dim;
            st.pure = true;
            st.psi = psi;
            st.rho = psi * psi.adjoint();
            st.build_deficit = deficit;
            return st;
        }
        case ProbeFamily::custom:
            throw std::domain_error("custom probes have no canonical Fock representation");
    }
    throw std::domain_error("unknown probe family");
}

TruncatedState diagonal_state(const std::vector<double>& pmf, int dim) {
    if (static_cast<int>(pmf.size()) > dim)
        throw std::domain_error("pmf longer than truncated space");
    TruncatedState s;
    s.n_modes = 1;
    s.dim = dim;
    s.pure = false;
    s.rho = Mat::Zero(dim, dim);
    double mass = 0.0;
    for (double v : pmf) {
        if (v < 0.0) throw std::domain_error("pmf entries must be >= 0");
        mass += v;
    }
    if (mass <= 0.0) throw std::domain_error("pmf must have positive mass");
    for (int m = 0; m < static_cast<int>(pmf.size()); ++m) s.rho(m, m) = pmf[m] / mass;
    return s;
}

ProbeMoments state_moments(const TruncatedState& state) {
    const Eigen::VectorXd p = state.diag_pmf();
    const int dtot = static_cast<int>(p.size());
    double mean = 0.0, second = 0.0;
    for (int i = 0; i < dtot; ++i) {
        // total photon number of basis state i (mode-major index)
        int n = 0;
        if (state.n_modes == 1) {
            n = i;
        } else {
            n = i / state.dim + i % state.dim;
        }
        mean += p(i) * n;
        second += p(i) * static_cast<double>(n) * n;
    }
    ProbeMoments m;
    m.n_modes = state.n_modes;
    m.mean = mean;
    m.var = second - mean * mean;
    return m;
}

double top_level_mass(const TruncatedState& state) {
    const Eigen::VectorXd p = state.diag_pmf();
    double mass = 0.0;
    if (state.n_modes == 1) {
        mass = p(p.size() - 1);
    } else {
        const int d = state.dim;
        for (int m = 0; m < d; ++m) mass += p((d - 1) * d + m) + p(m * d + (d - 1));
        mass -= p((d - 1) * d + (d - 1));
    }
    return mass;
}

}  // namespace qbound
