#include "qbound/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qbound {

namespace {

// looser than the library default: verification states (thermal tails at
// d = 30) legitimately carry ~1e-5 build deficits, and dominance runs push
// high-gain channels through truncated spaces
constexpr double kDrawBudget = 1e-4;
constexpr double kQfiBudget = 5e-3;

std::string fmt_sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

CheckResult make_result(const std::string& group, const std::string& name, double metric,
                        double tol, const std::string& detail = "") {
    CheckResult r;
    r.group = group;
    r.name = name;
    r.metric = metric;
    r.tol = tol;
    r.pass = metric < tol;
    r.detail = detail;
    return r;
}

double trace_distance(const Mat& a, const Mat& b) {
    const Mat diff = a - b;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (diff + diff.adjoint()));
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace

ProbeDraw random_probe_draw(Rng& rng, int dim) {
    ProbeDraw d;
    d.params = derive_params(rng.uniform(0.05, 0.95), rng.uniform(0.0, 3.0));
    const int fam = rng.uniform_int(0, 3);
    if (fam == 0) {
        d.spec.family = ProbeFamily::coherent;
        d.spec.alpha = std::sqrt(rng.uniform(0.2, 3.0));
        d.state = build_state(d.spec, dim, kDrawBudget);
    } else if (fam == 1) {
        d.spec.family = ProbeFamily::thermal_probe;
        d.spec.mean = rng.uniform(0.2, 2.0);
        d.state = build_state(d.spec, dim, kDrawBudget);
    } else if (fam == 2) {
        d.spec.family = ProbeFamily::fock;
        d.spec.photons = rng.uniform_int(1, 4);
        d.state = build_state(d.spec, dim, kDrawBudget);
    } else {
        d.spec.family = ProbeFamily::custom;
        const int support = rng.uniform_int(2, 6);
        std::vector<double> pmf(13, 0.0);
        for (int i = 0; i < support; ++i) pmf[rng.uniform_int(0, 12)] += rng.uniform(0.05, 1.0);
        d.state = diagonal_state(pmf, dim);
    }
    // the closed form is always fed the moments of the state actually built
    d.probe = state_moments(d.state);
    d.spec.mean = d.probe.mean;
    d.spec.var = d.probe.var;
    return d;
}

std::vector<CheckResult> check_identities(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    double worst = 0.0;
    double tol = 0.0;
    std::ostringstream detail;
    for (double eta : {0.3, 0.7}) {
        for (double nb : {0.5, 2.0}) {
            const IdentityReport rep = verify_identities(derive_params(eta, nb), opt.dim);
            worst = std::max(worst, rep.max_deviation());
            tol = std::max(1e-10, 2.0 * rep.tail_bound);
            detail << "(" << eta << "," << nb << ")->" << fmt_sci(rep.max_deviation()) << " ";
        }
    }
    out.push_back(make_result("identities", "operator sums on " + std::to_string(opt.dim) +
                              "-level corner", worst, tol, detail.str()));
    const double lemma_dev = check_commutation_lemmas(24, 20, opt.seed);
    out.push_back(make_result("identities", "ladder/number commutation lemmas", lemma_dev, 1e-8));
    return out;
}

std::vector<CheckResult> check_dual_path(const VerifyOptions& opt) {
    Rng rng(opt.seed);
    double worst_value = 0.0, worst_min_xy = 0.0, worst_min_val = 0.0, worst_reduction = 0.0;
    for (int t = 0; t < opt.draws; ++t) {
        const ProbeDraw d = random_probe_draw(rng, opt.dim);
        const BoundResult closed = cq_star_single(d.params, d.probe);
        const double oracle = cq_numeric(d.state, d.params, closed.gauge);
        worst_value = std::max(worst_value,
                               std::abs(oracle - closed.cq_star) / std::max(1.0, closed.cq_star));

        const MinimizeResult m = minimize_cq_numeric(d.state, d.params);
        worst_min_xy = std::max({worst_min_xy, std::abs(m.argmin.x - closed.gauge.x),
                                 std::abs(m.argmin.y - closed.gauge.y)});
        worst_min_val = std::max(worst_min_val,
                                 std::abs(m.value - closed.cq_star) / std::max(1.0, closed.cq_star));

        const ProbeMoments as_n = {1, d.probe.mean, d.probe.var};
        const BoundResult viaN = cq_star_n(d.params, as_n);
        worst_reduction = std::max(worst_reduction,
                                   std::abs(viaN.cq_star - closed.cq_star) / std::max(1.0, closed.cq_star));
    }
    std::vector<CheckResult> out;
    const std::string n = std::to_string(opt.draws) + " draws";
    out.push_back(make_result("dual-path", "closed form vs oracle at optimum (" + n + ")",
                              worst_value, 1e-8));
    out.push_back(make_result("dual-path", "numeric minimizer recovers gauge point", worst_min_xy, 1e-4));
    out.push_back(make_result("dual-path", "numeric minimum value", worst_min_val, 1e-6));
    out.push_back(make_result("dual-path", "n-use formula reduces to single use", worst_reduction, 1e-12));
    return out;
}

std::vector<CheckResult> check_gauge_invariance(const VerifyOptions& opt) {
    const std::vector<KrausGaugePoint> gauges = {
        {0.0, 0.0}, {3.0, -2.0}, {0.37, 0.5},
        gamma_point(-1.0), gamma_point(0.0), gamma_point(0.37)};
    OracleCutoffs cut;
    cut.trace_budget = 1e-6;
    const double theta = 0.7;

    std::vector<CheckResult> out;
    {
        ProbeSpec spec;
        spec.family = ProbeFamily::coherent;
        spec.alpha = 1.0;
        const TruncatedState st = build_state(spec, opt.dim);
        const ChannelParams p = derive_params(0.5, 1.0);
        const TruncatedState ref = apply_channel(st, p, theta, gauges[0], cut);
        double worst = 0.0;
        for (size_t i = 1; i < gauges.size(); ++i)
            worst = std::max(worst, trace_distance(ref.rho,
                             apply_channel(st, p, theta, gauges[i], cut).rho));
        out.push_back(make_result("gauge", "coherent output invariant across gauges", worst, 1e-10));
    }
    {
        ProbeSpec spec;
        spec.family = ProbeFamily::entangled_coherent;
        spec.n_modes = 2;
        spec.alpha = 1.0;
        const int d2 = std::min(opt.dim, 25);
        const TruncatedState st = build_state(spec, d2);
        const ChannelParams p = derive_params(0.4, 0.5);
        const TruncatedState ref = apply_channel(st, p, theta, gauges[0], cut);
        double worst = 0.0;
        for (size_t i = 1; i < gauges.size(); ++i)
            worst = std::max(worst, trace_distance(ref.rho,
                             apply_channel(st, p, theta, gauges[i], cut).rho));
        out.push_back(make_result("gauge", "entangled-coherent output invariant across gauges",
                                  worst, 1e-10));
    }
    return out;
}

std::vector<CheckResult> check_stationarity(const VerifyOptions& opt) {
    Rng rng(opt.seed + 1);
    const double h = 1e-5;
    double worst = 0.0;
    const int ndraws = std::max(20, opt.draws / 4);
    for (int t = 0; t < ndraws; ++t) {
        const ChannelParams p = derive_params(rng.uniform(0.05, 0.95), rng.uniform(0.05, 3.0));
        ProbeMoments probe;
        probe.n_modes = rng.uniform_int(1, 3);
        probe.mean = rng.uniform(0.1, 4.0);
        probe.var = rng.uniform(0.05, 5.0);
        const KrausGaugePoint g = optimal_gauge_n(p, probe);
        // differencing noise grows with the size of the cancelling quadratic
        // terms, so normalize by their magnitude rather than by the minimum
        const QuadraticForm f = surface_form(p, probe);
        const double terms = std::abs(f.xx) * g.x * g.x + std::abs(f.yy) * g.y * g.y
                           + std::abs(f.xy * g.x * g.y) + std::abs(f.x_ * g.x)
                           + std::abs(f.y_ * g.y) + std::abs(f.c);
        const double scale = std::max(1.0, terms);
        const double dx = (cq_surface(p, {g.x + h, g.y}, probe)
                         - cq_surface(p, {g.x - h, g.y}, probe)) / (2.0 * h);
        const double dy = (cq_surface(p, {g.x, g.y + h}, probe)
                         - cq_surface(p, {g.x, g.y - h}, probe)) / (2.0 * h);
        worst = std::max({worst, std::abs(dx) / scale, std::abs(dy) / scale});
    }
    return {make_result("stationarity", "surface gradient vanishes at closed-form optimum",
                        worst, 1e-9)};
}

std::vector<CheckResult> check_monotonicity(const VerifyOptions&) {
    const double h = 1e-5;
    const ProbeMoments probes[5] = {
        {1, 1.0, 1.0}, {1, 0.5, 0.75}, {3, 2.0, 2.0}, {2, 1.3, 0.4}, {1, 1.0, 4.0}};
    double worst_sign = -1.0;  // most positive derivative seen
    double worst_match = 0.0;
    for (int ie = 0; ie < 10; ++ie) {
        const double eta = 0.05 + 0.90 * ie / 9.0;
        for (int ib = 0; ib < 10; ++ib) {
            const double nb = 0.1 + (4.0 - 0.1) * ib / 9.0;
            for (const ProbeMoments& probe : probes) {
                const double d = bound_derivative_nbar(derive_params(eta, nb), probe);
                worst_sign = std::max(worst_sign, d);
                const double up = cq_star_n(derive_params(eta, nb + h), probe).cq_star;
                const double dn = cq_star_n(derive_params(eta, nb - h), probe).cq_star;
                const double fd = (up - dn) / (2.0 * h);
                worst_match = std::max(worst_match, std::abs(fd - d) / std::abs(d));
            }
        }
    }
    std::vector<CheckResult> out;
    out.push_back(make_result("monotonicity", "d(bound)/d(nbar_b) negative on grid",
                              worst_sign, 0.0, "most positive derivative"));
    out.push_back(make_result("monotonicity", "derivative matches central differences",
                              worst_match, 1e-6));
    return out;
}

std::vector<CheckResult> check_dominance(const VerifyOptions& opt) {
    Rng rng(opt.seed);
    OracleCutoffs cut;
    cut.trace_budget = kQfiBudget;
    const double theta = 0.3;
    double worst = -1.0;  // most positive F - C
    for (int t = 0; t < opt.draws; ++t) {
        const ProbeDraw d = random_probe_draw(rng, opt.dim);
        const double F = qfi_exact(d.state, d.params, theta, cut);
        const double C = cq_star_single(d.params, d.probe).cq_star;
        worst = std::max(worst, F - C);
    }
    std::vector<CheckResult> out;
    out.push_back(make_result("dominance", "exact QFI below closed-form bound ("
                              + std::to_string(opt.draws) + " draws)", worst, 1e-9));

    ProbeSpec ecs;
    ecs.family = ProbeFamily::entangled_coherent;
    ecs.n_modes = 2;
    ecs.alpha = 1.0;
    const TruncatedState st = build_state(ecs, 25);
    const ProbeMoments pm = state_moments(st);
    double worst_ecs = -1.0;
    for (double eta : {0.1, 0.4, 0.7}) {
        const ChannelParams p = derive_params(eta, 0.5);
        const double F = qfi_exact(st, p, theta, cut);
        const double C = cq_star_n(p, pm).cq_star;
        worst_ecs = std::max(worst_ecs, F - C);
    }
    out.push_back(make_result("dominance", "entangled-coherent QFI below 2-mode bound",
                              worst_ecs, 1e-9));
    return out;
}

std::vector<CheckResult> check_ecs_moments(const VerifyOptions&) {
    ProbeSpec ecs;
    ecs.family = ProbeFamily::entangled_coherent;
    ecs.n_modes = 2;
    ecs.alpha = 1.0;
    const ProbeMoments nominal = moments(ecs, MomentMode::nominal_moments);
    const ProbeMoments direct = moments(ecs, MomentMode::oracle_moments);
    const ProbeMoments oracle = state_moments(build_state(ecs, 25));

    std::vector<CheckResult> out;
    out.push_back(make_result("ecs-moments", "mean agrees across all three routes",
                              std::max(std::abs(nominal.mean - oracle.mean),
                                       std::abs(direct.mean - oracle.mean)), 1e-6));
    out.push_back(make_result("ecs-moments", "direct-form variance agrees with state",
                              std::abs(direct.var - oracle.var), 1e-6));
    // the two conventions genuinely disagree; surfaced, not failed
    CheckResult note = make_result("ecs-moments", "variance convention spread", 0.0, 1.0);
    note.metric = std::abs(nominal.var - direct.var);
    note.pass = true;
    std::ostringstream os;
    os << "DISCREPANCY nominal-moments var=" << nominal.var << " oracle-moments var=" << direct.var
       << " state var=" << oracle.var << "; bound consumers choose via --moments";
    note.detail = os.str();
    out.push_back(note);
    return out;
}

std::vector<CheckResult> run_checks(const VerifyOptions& opt) {
    const std::vector<std::pair<std::string,
        std::vector<CheckResult> (*)(const VerifyOptions&)>> groups = {
        {"identities", check_identities},
        {"dual-path", check_dual_path},
        {"gauge", check_gauge_invariance},
        {"stationarity", check_stationarity},
        {"monotonicity", check_monotonicity},
        {"dominance", check_dominance},
        {"ecs-moments", check_ecs_moments},
    };
    std::vector<CheckResult> out;
    for (const auto& [name, fn] : groups) {
        if (!opt.only.empty() &&
            std::find(opt.only.begin(), opt.only.end(), name) == opt.only.end())
            continue;
        const std::vector<CheckResult> r = fn(opt);
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

bool all_pass(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CheckResult& r) { return r.pass; });
}

}  // namespace qbound
