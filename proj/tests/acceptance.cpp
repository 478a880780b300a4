// Acceptance gate: one line per criterion, process exits with the number of
// failed criteria.  Tolerances are fixed here on purpose; loosening them is a
// design change, not a test fix.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qbound/channel_math.hpp"
#include "qbound/fock.hpp"
#include "qbound/oracle.hpp"
#include "qbound/probe_stats.hpp"
#include "qbound/rng.hpp"
#include "qbound/sweep.hpp"
#include "qbound/verify.hpp"

using namespace qbound;

namespace {

std::vector<ProbeDraw> g_draws;  // shared by criteria 2, 4

const std::vector<ProbeDraw>& shared_draws() {
    if (g_draws.empty()) {
        Rng rng(42);
        g_draws.reserve(200);
        for (int t = 0; t < 200; ++t) g_draws.push_back(random_probe_draw(rng, 30));
    }
    return g_draws;
}

double trace_distance(const Mat& a, const Mat& b) {
    const Mat diff = a - b;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (diff + diff.adjoint()));
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

TruncatedState ecs_state(int dim) {
    ProbeSpec s;
    s.family = ProbeFamily::entangled_coherent;
    s.n_modes = 2;
    s.alpha = 1.0;
    return build_state(s, dim);
}

bool criterion1_lossless() {
    Rng rng(101);
    double worst = 0.0;
    for (double nb : {0.0, 1.0, 5.0}) {
        for (int t = 0; t < 50; ++t) {
            ProbeMoments probe;
            probe.n_modes = rng.uniform_int(1, 4);
            probe.mean = rng.uniform(0.0, 5.0);
            probe.var = rng.uniform(0.0, 5.0);
            const double cq = cq_star_n(derive_params(1.0, nb), probe).cq_star;
            worst = std::max(worst,
                             std::abs(cq - 4.0 * probe.var) / std::max(1.0, 4.0 * probe.var));
        }
    }
    std::printf("criterion 1 (lossless plateau equals four variances): %s  "
                "worst rel dev %.3e (tol 1e-12)\n",
                worst < 1e-12 ? "PASS" : "FAIL", worst);
    return worst < 1e-12;
}

bool criterion2_dual_path() {
    double worst_val = 0.0, worst_xy = 0.0, worst_min = 0.0;
    for (const ProbeDraw& d : shared_draws()) {
        const BoundResult closed = cq_star_single(d.params, d.probe);
        const double numeric = cq_numeric(d.state, d.params, closed.gauge);
        worst_val = std::max(worst_val,
                             std::abs(numeric - closed.cq_star) / std::max(1.0, closed.cq_star));
        const MinimizeResult m = minimize_cq_numeric(d.state, d.params);
        worst_xy = std::max({worst_xy, std::abs(m.argmin.x - closed.gauge.x),
                             std::abs(m.argmin.y - closed.gauge.y)});
        worst_min = std::max(worst_min,
                             std::abs(m.value - closed.cq_star) / std::max(1.0, closed.cq_star));
    }
    const bool ok = worst_val < 1e-8 && worst_xy < 1e-4 && worst_min < 1e-6;
    std::printf("criterion 2 (closed form vs oracle, 200 draws): %s  "
                "value dev %.3e (tol 1e-8), argmin dev %.3e (tol 1e-4), "
                "minimum dev %.3e (tol 1e-6)\n",
                ok ? "PASS" : "FAIL", worst_val, worst_xy, worst_min);
    return ok;
}

bool criterion3_identities() {
    bool ok = true;
    double worst30 = 0.0;
    for (double eta : {0.3, 0.7}) {
        for (double nb : {0.5, 2.0}) {
            const ChannelParams p = derive_params(eta, nb);
            const IdentityReport rep = verify_identities(p, 30);
            worst30 = std::max(worst30, rep.max_deviation());
            ok = ok && rep.all_below(1e-10);

            // doubling the block shrinks the deviation until both sides hit
            // the long-double accumulation floor
            const double floor = 5e-15;
            const double d16 = verify_identities(p, 16).max_deviation();
            const double d32 = verify_identities(p, 32).max_deviation();
            const double d64 = verify_identities(p, 64).max_deviation();
            ok = ok && (d32 < d16 || (d16 < floor && d32 < floor));
            ok = ok && (d64 < d32 || (d32 < floor && d64 < floor));
        }
    }
    const double lemmas = check_commutation_lemmas(30, 25, 42);
    ok = ok && lemmas < 1e-7;
    std::printf("criterion 3 (operator identity suite): %s  "
                "corner dev %.3e at d=30 (tol 1e-10), doubling shrink verified, "
                "rearrangement lemmas %.3e (tol 1e-7)\n",
                ok ? "PASS" : "FAIL", worst30, lemmas);
    return ok;
}

bool criterion4_dominance() {
    OracleCutoffs cut;
    cut.trace_budget = 5e-3;
    double worst = -1e300;
    for (const ProbeDraw& d : shared_draws()) {
        const double fq = qfi_exact(d.state, d.params, 0.3, cut);
        const double cq = cq_star_single(d.params, d.probe).cq_star;
        worst = std::max(worst, fq - cq);
    }
    const TruncatedState ecs = ecs_state(25);
    const ProbeMoments pm = state_moments(ecs);
    for (double eta : {0.1, 0.4, 0.7}) {
        for (double nb : {0.2, 1.0, 3.0}) {
            const ChannelParams p = derive_params(eta, nb);
            const double fq = qfi_exact(ecs, p, 0.3, cut);
            const double cq = cq_star_n(p, pm).cq_star;
            worst = std::max(worst, fq - cq);
        }
    }
    const bool ok = worst <= 1e-9;
    std::printf("criterion 4 (exact QFI never beats the bound): %s  "
                "largest qfi - bound %.3e (tol 1e-9)\n", ok ? "PASS" : "FAIL", worst);
    return ok;
}

bool criterion5_monotonicity() {
    const double h = 1e-5;
    const ProbeMoments probes[5] = {
        {1, 1.0, 1.0}, {1, 0.5, 0.75}, {3, 2.0, 2.0}, {2, 1.3, 0.4}, {1, 1.0, 4.0}};
    double worst_sign = -1e300, worst_match = 0.0;
    for (int ie = 0; ie < 10; ++ie) {
        const double eta = 0.05 + 0.90 * ie / 9.0;
        for (int ib = 0; ib < 10; ++ib) {
            const double nb = 0.1 + 3.9 * ib / 9.0;
            for (const ProbeMoments& probe : probes) {
                const double d = bound_derivative_nbar(derive_params(eta, nb), probe);
                worst_sign = std::max(worst_sign, d);
                const double fd = (cq_star_n(derive_params(eta, nb + h), probe).cq_star
                                 - cq_star_n(derive_params(eta, nb - h), probe).cq_star)
                                / (2.0 * h);
                worst_match = std::max(worst_match, std::abs(fd - d) / std::abs(d));
            }
        }
    }
    const bool ok = worst_sign < 0.0 && worst_match < 1e-6;
    std::printf("criterion 5 (bound decreases with environment occupation): %s  "
                "max derivative %.3e (must be < 0), fd mismatch %.3e (tol 1e-6)\n",
                ok ? "PASS" : "FAIL", worst_sign, worst_match);
    return ok;
}

bool criterion6_gauge_invariance() {
    const std::vector<KrausGaugePoint> gauges = {
        {0.0, 0.0}, {3.0, -2.0}, {0.37, 0.5},
        gamma_point(-1.0), gamma_point(0.0), gamma_point(0.37)};
    OracleCutoffs cut;
    cut.trace_budget = 1e-6;
    double worst = 0.0;

    ProbeSpec coh;
    coh.family = ProbeFamily::coherent;
    coh.alpha = 1.0;
    const TruncatedState single = build_state(coh, 30);
    const ChannelParams p1 = derive_params(0.5, 1.0);
    const TruncatedState ref1 = apply_channel(single, p1, 0.7, gauges[0], cut);
    for (size_t i = 1; i < gauges.size(); ++i)
        worst = std::max(worst,
                         trace_distance(ref1.rho, apply_channel(single, p1, 0.7, gauges[i], cut).rho));

    const TruncatedState ecs = ecs_state(25);
    const ChannelParams p2 = derive_params(0.4, 0.5);
    const TruncatedState ref2 = apply_channel(ecs, p2, 0.7, gauges[0], cut);
    for (size_t i = 1; i < gauges.size(); ++i)
        worst = std::max(worst,
                         trace_distance(ref2.rho, apply_channel(ecs, p2, 0.7, gauges[i], cut).rho));

    const bool ok = worst < 1e-10;
    std::printf("criterion 6 (outputs invariant across kraus gauges): %s  "
                "max trace distance %.3e (tol 1e-10)\n", ok ? "PASS" : "FAIL", worst);
    return ok;
}

bool criterion7_sweep() {
    const SweepSpec spec = reference_sweep_spec();
    const std::vector<SweepRow> rows = run_sweep(spec);
    bool ok = rows.size() == 303;

    for (int c = 0; c < 3 && ok; ++c)
        for (int i = 1; i < 101; ++i)
            ok = ok && rows[c * 101 + i].cq_star < rows[c * 101 + i - 1].cq_star;
    const bool curves_ok = ok;

    const std::string committed = slurp(std::filesystem::path(QB_GOLDEN_DIR) / "sweep_default.csv");
    const bool bytes_ok = !committed.empty() && committed == sweep_csv(spec);
    ok = ok && bytes_ok;

    const TruncatedState ecs = ecs_state(25);
    const ProbeMoments pm = state_moments(ecs);
    double worst = 0.0;
    for (int idx : {0, 75, 151, 226, 302}) {
        const ChannelParams p = derive_params(rows[idx].eta, rows[idx].nbar_b);
        const BoundResult closed = cq_star_n(p, pm);
        const double numeric = cq_numeric_multimode(ecs, p, closed.gauge);
        worst = std::max(worst,
                         std::abs(numeric - closed.cq_star) / std::max(1.0, closed.cq_star));
    }
    ok = ok && worst < 1e-6;

    std::printf("criterion 7 (sweep preset reproduction): %s  "
                "curves decreasing %s, golden csv byte-identical %s, "
                "oracle spot dev %.3e (tol 1e-6)\n",
                ok ? "PASS" : "FAIL", curves_ok ? "yes" : "NO",
                bytes_ok ? "yes" : "NO", worst);
    return ok;
}

bool criterion8_ecs_moments() {
    const ProbeMoments st = state_moments(ecs_state(25));
    ProbeSpec ecs;
    ecs.family = ProbeFamily::entangled_coherent;
    ecs.n_modes = 2;
    ecs.alpha = 1.0;
    const double nominal_var = moments(ecs, MomentMode::nominal_moments).var;
    const double direct_var = moments(ecs, MomentMode::oracle_moments).var;

    const bool mean_ok = std::abs(st.mean - 0.7310585786300049) < 1e-6;
    const bool direct_ok = std::abs(st.var - direct_var) < 1e-6;
    const bool ok = mean_ok && direct_ok;
    std::printf("criterion 8 (entangled-pair moment adjudication): %s  "
                "state mean %.12g (expect 0.731059), state var %.12g; "
                "variance-equals-mean convention gives %.12g, direct expectation %.12g, "
                "spread %.3e reported without failing\n",
                ok ? "PASS" : "FAIL", st.mean, st.var, nominal_var, direct_var,
                std::abs(nominal_var - st.var));
    return ok;
}

bool criterion9_reduction() {
    Rng rng(103);
    double worst_val = 0.0, worst_gauge = 0.0;
    for (int t = 0; t < 100; ++t) {
        const ChannelParams p = derive_params(rng.uniform(0.05, 0.95), rng.uniform(0.0, 3.0));
        const ProbeMoments probe = {1, rng.uniform(0.0, 4.0), rng.uniform(0.0, 4.0)};
        const BoundResult a = cq_star_single(p, probe);
        const BoundResult b = cq_star_n(p, probe);
        worst_val = std::max(worst_val,
                             std::abs(a.cq_star - b.cq_star) / std::max(1.0, a.cq_star));
        worst_gauge = std::max({worst_gauge, std::abs(a.gauge.x - b.gauge.x),
                                std::abs(a.gauge.y - b.gauge.y)});
    }
    const bool ok = worst_val < 1e-12 && worst_gauge < 1e-10;
    std::printf("criterion 9 (n-use formula reduces to the single use): %s  "
                "value dev %.3e (tol 1e-12), gauge dev %.3e (tol 1e-10)\n",
                ok ? "PASS" : "FAIL", worst_val, worst_gauge);
    return ok;
}

}  // namespace

int main() {
    int failures = 0;
    failures += !criterion1_lossless();
    failures += !criterion2_dual_path();
    failures += !criterion3_identities();
    failures += !criterion4_dominance();
    failures += !criterion5_monotonicity();
    failures += !criterion6_gauge_invariance();
    failures += !criterion7_sweep();
    failures += !criterion8_ecs_moments();
    failures += !criterion9_reduction();
    std::printf("%d/9 criteria passed\n", 9 - failures);
    return failures;
}
