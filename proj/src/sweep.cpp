#include "qbound/sweep.hpp"

#include <algorithm>

#include "qbound/serialize.hpp"

namespace qbound {

SweepSpec reference_sweep_spec() {
    SweepSpec s;
    s.etas = {0.1, 0.4, 0.7};
    s.nbar_start = 0.0;
    s.nbar_stop = 5.0;
    s.nbar_count = 101;
    s.probe.family = ProbeFamily::entangled_coherent;
    s.probe.n_modes = 2;
    s.probe.alpha = 1.0;
    s.mode = MomentMode::nominal_moments;
    return s;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    if (spec.nbar_count < 1) throw std::domain_error("nbar_count must be >= 1");
    std::vector<double> etas = spec.etas;
    std::sort(etas.begin(), etas.end());
    const ProbeMoments probe = moments(spec.probe, spec.mode);

    std::vector<SweepRow> rows;
    rows.reserve(etas.size() * spec.nbar_count);
    for (double eta : etas) {
        for (int i = 0; i < spec.nbar_count; ++i) {
            const double nb = spec.nbar_count == 1
                ? spec.nbar_start
                : spec.nbar_start + (spec.nbar_stop - spec.nbar_start) * i / (spec.nbar_count - 1.0);
            const ChannelParams p = derive_params(eta, nb);
            const BoundResult b = cq_star_n(p, probe);
            rows.push_back({eta, nb, probe.n_modes, probe.mean, probe.var,
                            b.gauge.x, b.gauge.y, b.cq_star, b.mse_lower});
        }
    }
    return rows;
}

std::string sweep_csv_header() {
    return "eta,nbar_b,n_modes,mean_ns,var_ns,x0,y0,cq_star,mse_lower";
}

std::string sweep_csv(const SweepSpec& spec) {
    std::string out = sweep_csv_header() + "\n";
    for (const SweepRow& r : run_sweep(spec)) {
        out += fmt12(r.eta) + "," + fmt12(r.nbar_b) + "," + std::to_string(r.n_modes) + ","
             + fmt12(r.mean_ns) + "," + fmt12(r.var_ns) + "," + fmt12(r.x0) + ","
             + fmt12(r.y0) + "," + fmt12(r.cq_star) + "," + fmt12(r.mse_lower) + "\n";
    }
    return out;
}

}  // namespace qbound
