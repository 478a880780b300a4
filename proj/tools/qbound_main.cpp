#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qbound/channel_math.hpp"
#include "qbound/fock.hpp"
#include "qbound/oracle.hpp"
#include "qbound/probe_stats.hpp"
#include "qbound/serialize.hpp"
#include "qbound/sweep.hpp"
#include "qbound/verify.hpp"

namespace {

// exit codes: 0 ok, 1 failed verification, 2 bad arguments or domain error,
// 3 degenerate stationary denominator, 4 I/O, 5 truncation budget
enum ExitCode { kOk = 0, kVerifyFail = 1, kArgs = 2, kDegenerate = 3, kIo = 4, kTruncation = 5 };

struct ProbeFlags {
    std::string family = "coherent";
    int n_modes = 0;  // 0 resolves to 1 (2 for the entangled pair)
    double alpha = 1.0;
    int photons = 0;
    double mean = 0.0;
    double var = 0.0;
    double squeeze = 0.0;
    std::string moments = "nominal";
};

void add_probe_flags(CLI::App* sub, ProbeFlags& v) {
    sub->add_option("--probe", v.family,
                    "probe family: coherent|fock|thermal|squeezed|ecs|custom")
        ->capture_default_str();
    sub->add_option("--n-modes", v.n_modes, "channel uses (0 = family default)");
    sub->add_option("--alpha", v.alpha, "coherent/ecs amplitude |alpha|")->capture_default_str();
    sub->add_option("--photons", v.photons, "fock occupation");
    sub->add_option("--mean", v.mean, "thermal per-mode mean, or custom total mean");
    sub->add_option("--var", v.var, "custom total variance");
    sub->add_option("--squeeze", v.squeeze, "squeezed-vacuum parameter r");
    sub->add_option("--moments", v.moments, "ecs variance convention: nominal|oracle")
        ->check(CLI::IsMember({"nominal", "oracle"}))
        ->capture_default_str();
}

qbound::ProbeSpec resolve_probe(const ProbeFlags& v) {
    qbound::ProbeSpec s;
    s.family = qbound::probe_family_from_string(v.family);
    s.n_modes = v.n_modes > 0
        ? v.n_modes
        : (s.family == qbound::ProbeFamily::entangled_coherent ? 2 : 1);
    s.alpha = v.alpha;
    s.photons = v.photons;
    s.mean = v.mean;
    s.var = v.var;
    s.squeeze = v.squeeze;
    return s;
}

qbound::MomentMode resolve_mode(const ProbeFlags& v) {
    return v.moments == "oracle" ? qbound::MomentMode::oracle_moments
                                 : qbound::MomentMode::nominal_moments;
}

int write_out(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return kOk;
    }
    std::ofstream os(path, std::ios::binary);
    os << text;
    os.flush();
    if (!os) {
        std::cerr << "error: cannot write " << path << "\n";
        return kIo;
    }
    return kOk;
}

std::string bound_json(const qbound::ChannelParams& p, const qbound::ProbeMoments& probe,
                       const qbound::BoundResult& r) {
    using qbound::fmt12;
    return qbound::json_object({
        {"eta", fmt12(p.eta)},
        {"nbar_b", fmt12(p.nbar_b)},
        {"n_modes", std::to_string(probe.n_modes)},
        {"mean_ns", fmt12(probe.mean)},
        {"var_ns", fmt12(probe.var)},
        {"x0", fmt12(r.gauge.x)},
        {"y0", fmt12(r.gauge.y)},
        {"cq_star", fmt12(r.cq_star)},
        {"mse_lower", fmt12(r.mse_lower)},
        {"hessian_ok", r.hessian_ok ? "true" : "false"},
        {"degenerate", r.degenerate ? "true" : "false"},
    }) + "\n";
}

std::string bound_csv(const qbound::ChannelParams& p, const qbound::ProbeMoments& probe,
                      const qbound::BoundResult& r) {
    using qbound::fmt12;
    std::string row = qbound::sweep_csv_header() + "\n";
    row += fmt12(p.eta);
    row += "," + fmt12(p.nbar_b);
    row += "," + std::to_string(probe.n_modes);
    row += "," + fmt12(probe.mean);
    row += "," + fmt12(probe.var);
    row += "," + fmt12(r.gauge.x);
    row += "," + fmt12(r.gauge.y);
    row += "," + fmt12(r.cq_star);
    row += "," + fmt12(r.mse_lower);
    row += "\n";
    return row;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"closed-form phase-estimation bound for lossy thermal-noise channels,\n"
                 "with a truncated-space brute-force oracle for cross-checking"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "read flags from a key=value file (flags override)");

    unsigned long long seed = 42;
    int dim = 30;
    std::string output;
    std::string format = "json";
    app.add_option("--seed", seed, "generator seed for randomized checks")->capture_default_str();
    app.add_option("--dim", dim, "fock-space cutoff per mode")->capture_default_str();
    app.add_option("--output", output, "write to file instead of stdout");
    CLI::Option* format_opt =
        app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));

    // bound: closed-form optimum for one channel/probe configuration
    CLI::App* bound = app.add_subcommand("bound", "evaluate the optimized closed-form bound");
    double b_eta = 0.0, b_nbar = 0.0;
    bound->add_option("--eta", b_eta, "transmissivity")->required()->check(CLI::Range(0.0, 1.0));
    bound->add_option("--nbar-b", b_nbar, "environment mean occupation")
        ->check(CLI::NonNegativeNumber)->capture_default_str();
    ProbeFlags b_probe;
    add_probe_flags(bound, b_probe);

    // sweep: csv over an (eta, nbar_b) grid; defaults reproduce the committed golden
    CLI::App* sweep = app.add_subcommand("sweep", "closed-form bound over a parameter grid");
    qbound::SweepSpec preset = qbound::reference_sweep_spec();
    std::vector<double> s_etas = preset.etas;
    double s_start = preset.nbar_start, s_stop = preset.nbar_stop;
    int s_count = preset.nbar_count;
    ProbeFlags s_probe;
    s_probe.family = "ecs";
    s_probe.alpha = 1.0;
    bool s_regen = false, s_iknow = false;
    std::string s_golden_dir = "golden";
    sweep->add_option("--eta-list", s_etas, "transmissivity grid")->capture_default_str();
    sweep->add_option("--nbar-start", s_start, "first environment occupation")
        ->check(CLI::NonNegativeNumber)->capture_default_str();
    sweep->add_option("--nbar-stop", s_stop, "last environment occupation")
        ->check(CLI::NonNegativeNumber)->capture_default_str();
    sweep->add_option("--nbar-count", s_count, "grid points between start and stop")
        ->check(CLI::PositiveNumber)->capture_default_str();
    add_probe_flags(sweep, s_probe);
    sweep->add_flag("--regen-golden", s_regen, "rewrite the committed golden csv");
    sweep->add_flag("--i-know", s_iknow, "confirm golden regeneration");
    sweep->add_option("--golden-dir", s_golden_dir, "golden file directory")->capture_default_str();

    // verify: the cross-validation suite
    CLI::App* verify = app.add_subcommand("verify", "run closed-form vs oracle checks");
    int v_draws = 200;
    std::vector<std::string> v_only;
    verify->add_option("--draws", v_draws, "random probe/channel draws per group")
        ->capture_default_str();
    verify->add_option("--only", v_only, "restrict to groups")
        ->check(CLI::IsMember({"identities", "dual-path", "gauge", "stationarity",
                               "monotonicity", "dominance", "ecs-moments"}));
    ProbeFlags v_probe;
    v_probe.family = "";  // empty = no focused run
    double v_eta = 0.4, v_nbar = 0.5;
    verify->add_option("--eta", v_eta, "focused dominance: transmissivity")
        ->check(CLI::Range(0.0, 1.0));
    verify->add_option("--nbar-b", v_nbar, "focused dominance: environment occupation")
        ->check(CLI::NonNegativeNumber);
    add_probe_flags(verify, v_probe);

    // oracle: brute-force QFI vs the bound for one configuration
    CLI::App* oracle = app.add_subcommand("oracle", "truncated-space exact QFI vs the bound");
    double o_eta = 0.0, o_nbar = 0.0, o_theta = 0.3, o_budget = 5e-3;
    oracle->add_option("--eta", o_eta, "transmissivity")->required()->check(CLI::Range(0.0, 1.0));
    oracle->add_option("--nbar-b", o_nbar, "environment mean occupation")
        ->check(CLI::NonNegativeNumber)->capture_default_str();
    oracle->add_option("--theta", o_theta, "encoded phase")->capture_default_str();
    oracle->add_option("--budget", o_budget, "acceptable channel trace deficit")
        ->check(CLI::PositiveNumber)->capture_default_str();
    ProbeFlags o_probe;
    add_probe_flags(oracle, o_probe);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kArgs;
    }

    try {
        if (bound->parsed()) {
            const qbound::ChannelParams p = qbound::derive_params(b_eta, b_nbar);
            const qbound::ProbeMoments probe =
                qbound::moments(resolve_probe(b_probe), resolve_mode(b_probe));
            if (p.eta < 1.0 && qbound::stationary_denominator(p, probe) <= 0.0) {
                std::cerr << "error: stationary point undefined for this probe "
                             "(zero mean and variance)\n";
                return kDegenerate;
            }
            const qbound::BoundResult r = qbound::cq_star_n(p, probe);
            const std::string text = (format_opt->count() && format == "csv")
                ? bound_csv(p, probe, r) : bound_json(p, probe, r);
            return write_out(output, text);
        }

        if (sweep->parsed()) {
            qbound::SweepSpec spec;
            spec.etas = s_etas;
            spec.nbar_start = s_start;
            spec.nbar_stop = s_stop;
            spec.nbar_count = s_count;
            spec.probe = resolve_probe(s_probe);
            spec.mode = resolve_mode(s_probe);
            const std::string csv = qbound::sweep_csv(spec);
            if (s_regen) {
                if (!s_iknow) {
                    std::cerr << "error: --regen-golden rewrites committed data; "
                                 "pass --i-know to confirm\n";
                    return kArgs;
                }
                const std::string path = s_golden_dir + "/sweep_default.csv";
                const int rc = write_out(path, csv);
                if (rc == kOk) std::cerr << "regenerated " << path << "\n";
                return rc;
            }
            return write_out(output, csv);
        }

        if (verify->parsed()) {
            if (!v_probe.family.empty()) {
                // focused run: one probe, one channel, dominance only
                const qbound::ProbeSpec spec = resolve_probe(v_probe);
                const qbound::ChannelParams p = qbound::derive_params(v_eta, v_nbar);
                const int d = spec.n_modes == 2 ? std::min(dim, 25) : dim;
                const qbound::TruncatedState st = qbound::build_state(spec, d, 1e-4);
                qbound::OracleCutoffs cut;
                cut.trace_budget = 5e-3;
                const double fq = qbound::qfi_exact(st, p, 0.3, cut);
                const qbound::ProbeMoments pm = qbound::state_moments(st);
                const double cq = qbound::cq_star_n(p, pm).cq_star;
                const double gap = cq - fq;
                std::printf("%s dominance | f_q=%s cq_star=%s gap=%s\n",
                            gap >= -1e-9 ? "[PASS]" : "[FAIL]", qbound::fmt12(fq).c_str(),
                            qbound::fmt12(cq).c_str(), qbound::fmt12(gap).c_str());
                return gap >= -1e-9 ? kOk : kVerifyFail;
            }

            qbound::VerifyOptions opt;
            opt.seed = seed;
            opt.dim = dim;
            opt.draws = v_draws;
            opt.only = v_only;
            const std::vector<qbound::CheckResult> results = qbound::run_checks(opt);
            if (format_opt->count() && format == "json") {
                std::string text = "[";
                for (size_t i = 0; i < results.size(); ++i) {
                    const qbound::CheckResult& r = results[i];
                    if (i) text += ",\n ";
                    text += qbound::json_object({
                        {"group", r.group},
                        {"name", r.name},
                        {"pass", r.pass ? "true" : "false"},
                        {"metric", qbound::fmt12(r.metric)},
                        {"tol", qbound::fmt12(r.tol)},
                        {"detail", r.detail},
                    });
                }
                text += "]\n";
                const int rc = write_out(output, text);
                if (rc != kOk) return rc;
            } else {
                std::string text;
                int passed = 0;
                for (const qbound::CheckResult& r : results) {
                    text += r.pass ? "[PASS] " : "[FAIL] ";
                    text += r.group + " | " + r.name;
                    text += " | metric=" + qbound::fmt12(r.metric)
                          + " tol=" + qbound::fmt12(r.tol) + "\n";
                    if (!r.detail.empty()) text += "       " + r.detail + "\n";
                    passed += r.pass;
                }
                text += std::to_string(passed) + "/" + std::to_string(results.size())
                      + " checks passed\n";
                const int rc = write_out(output, text);
                if (rc != kOk) return rc;
            }
            return qbound::all_pass(results) ? kOk : kVerifyFail;
        }

        if (oracle->parsed()) {
            const qbound::ProbeSpec spec = resolve_probe(o_probe);
            const qbound::ChannelParams p = qbound::derive_params(o_eta, o_nbar);
            const qbound::TruncatedState st = qbound::build_state(spec, dim, 1e-4);
            qbound::OracleCutoffs cut;
            cut.trace_budget = o_budget;
            const double fq = qbound::qfi_exact(st, p, o_theta, cut);
            const qbound::ProbeMoments pm = qbound::state_moments(st);
            const qbound::BoundResult r = qbound::cq_star_n(p, pm);
            const qbound::TruncatedState out = qbound::apply_channel(st, p, o_theta, {0.0, 0.0}, cut);
            const std::string text = qbound::json_object({
                {"eta", qbound::fmt12(p.eta)},
                {"nbar_b", qbound::fmt12(p.nbar_b)},
                {"dim", std::to_string(dim)},
                {"theta", qbound::fmt12(o_theta)},
                {"n_modes", std::to_string(pm.n_modes)},
                {"mean_ns", qbound::fmt12(pm.mean)},
                {"var_ns", qbound::fmt12(pm.var)},
                {"f_q", qbound::fmt12(fq)},
                {"cq_star", qbound::fmt12(r.cq_star)},
                {"gap", qbound::fmt12(r.cq_star - fq)},
                {"x0", qbound::fmt12(r.gauge.x)},
                {"y0", qbound::fmt12(r.gauge.y)},
                {"build_deficit", qbound::fmt12(st.build_deficit)},
                {"trace_deficit", qbound::fmt12(out.channel_deficit)},
            }) + "\n";
            return write_out(output, text);
        }
    } catch (const qbound::truncation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kTruncation;
    } catch (const qbound::degenerate_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDegenerate;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kArgs;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kVerifyFail;
    }
    return kOk;
}
