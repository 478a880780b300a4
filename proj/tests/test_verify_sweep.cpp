#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "qbound/serialize.hpp"
#include "qbound/sweep.hpp"
#include "qbound/verify.hpp"

using namespace qbound;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

struct RunResult {
    int code = -1;
    std::string out;
};

// runs the built binary, captures stdout, returns the exit code
RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const std::filesystem::path tmp =
        std::filesystem::temp_directory_path() / ("qbound_cli_out_" + std::to_string(counter++));
    const std::string cmd = std::string("\"") + QB_CLI_PATH + "\" " + args + " > "
                          + tmp.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    RunResult r;
    if (status != -1 && WIFEXITED(status)) r.code = WEXITSTATUS(status);
    r.out = slurp(tmp);
    std::filesystem::remove(tmp);
    return r;
}

}  // namespace

TEST_CASE("stable twelve-digit formatting") {
    CHECK(fmt12(0.5) == "0.5");
    CHECK(fmt12(16.0 / 13.0) == "1.23076923077");
    CHECK(fmt12(-12.0 / 11.0) == "-1.09090909091");
    CHECK(fmt12(0.0) == "0");
    CHECK(fmt12(-0.0) == "0");
    CHECK(fmt12(1e-5) == "1e-05");
    CHECK(fmt12(3.0) == "3");
    CHECK(fmt12(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(fmt12(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(fmt12(std::nan("")) == "nan");
}

TEST_CASE("json rendering quotes what is not a number") {
    const std::string obj = json_object({
        {"a", "1.5"},
        {"b", "inf"},
        {"c", "true"},
        {"d", "hello \"there\""},
        {"e", "-2e-07"},
    });
    CHECK(obj == "{\"a\": 1.5, \"b\": \"inf\", \"c\": true, "
                 "\"d\": \"hello \\\"there\\\"\", \"e\": -2e-07}");
}

TEST_CASE("sweep grid layout and monotonicity") {
    CHECK(sweep_csv_header() == "eta,nbar_b,n_modes,mean_ns,var_ns,x0,y0,cq_star,mse_lower");

    const SweepSpec spec = reference_sweep_spec();
    CHECK(spec.etas == std::vector<double>{0.1, 0.4, 0.7});
    CHECK(spec.nbar_count == 101);
    CHECK(spec.probe.family == ProbeFamily::entangled_coherent);
    CHECK(spec.probe.alpha == 1.0);
    CHECK(spec.mode == MomentMode::nominal_moments);

    const std::vector<SweepRow> rows = run_sweep(spec);
    REQUIRE(static_cast<int>(rows.size()) == 303);
    CHECK(rows[0].nbar_b == 0.0);
    CHECK(rows[100].nbar_b == 5.0);
    CHECK(rows[0].eta == 0.1);
    CHECK(rows[302].eta == 0.7);

    for (int c = 0; c < 3; ++c) {
        for (int i = 1; i < 101; ++i) {
            const SweepRow& prev = rows[c * 101 + i - 1];
            const SweepRow& cur = rows[c * 101 + i];
            CHECK(cur.eta == prev.eta);
            CHECK(cur.nbar_b > prev.nbar_b);
            CHECK(cur.cq_star < prev.cq_star);  // noise only ever hurts
        }
    }
    for (int i = 0; i < 101; ++i) {
        CHECK(rows[i].cq_star < rows[101 + i].cq_star);  // more transmission helps
        CHECK(rows[101 + i].cq_star < rows[202 + i].cq_star);
    }
    for (const SweepRow& r : rows)
        CHECK(r.mse_lower == doctest::Approx(1.0 / r.cq_star).epsilon(1e-14));
}

TEST_CASE("single-point sweep equals the direct bound") {
    SweepSpec spec;
    spec.etas = {0.5};
    spec.nbar_start = 1.0;
    spec.nbar_stop = 1.0;
    spec.nbar_count = 1;
    spec.probe.family = ProbeFamily::custom;
    spec.probe.mean = 1.0;
    spec.probe.var = 1.0;
    const std::vector<SweepRow> rows = run_sweep(spec);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].cq_star == doctest::Approx(16.0 / 13.0).epsilon(1e-14));
    CHECK(rows[0].y0 == doctest::Approx(-15.0 / 13.0).epsilon(1e-14));
    CHECK(rows[0].x0 == 0.0);
}

TEST_CASE("committed sweep csv is regenerable byte for byte") {
    const std::string committed = slurp(std::filesystem::path(QB_GOLDEN_DIR) / "sweep_default.csv");
    REQUIRE_FALSE(committed.empty());
    CHECK(committed == sweep_csv(reference_sweep_spec()));
}

TEST_CASE("check harness smoke run") {
    VerifyOptions opt;
    opt.seed = 42;
    opt.dim = 30;  // custom probes occupy levels up to 12, smaller spaces blow the amp budget
    opt.draws = 15;
    const std::vector<CheckResult> all = run_checks(opt);
    CHECK(all.size() == 16);
    CHECK(all_pass(all));
    CHECK(all.front().group == "identities");
    CHECK(all.back().group == "ecs-moments");

    opt.only = {"gauge"};
    const std::vector<CheckResult> gauge_only = run_checks(opt);
    CHECK(gauge_only.size() == 2);
    for (const CheckResult& r : gauge_only) CHECK(r.group == "gauge");
}

TEST_CASE("cli bound output and exit codes") {
    RunResult r = run_cli("bound --eta 0.5 --nbar-b 1 --probe custom --mean 1 --var 1");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"cq_star\": 1.23076923077") != std::string::npos);
    CHECK(r.out.find("\"y0\": -1.15384615385") != std::string::npos);
    CHECK(r.out.find("\"x0\": 0,") != std::string::npos);

    r = run_cli("bound --eta 0.5 --nbar-b 1 --probe custom --mean 1 --var 1 --format csv");
    CHECK(r.code == 0);
    CHECK(r.out.rfind(sweep_csv_header() + "\n", 0) == 0);

    CHECK(run_cli("bound --eta 0.5 --probe custom --mean 0 --var 0").code == 3);
    CHECK(run_cli("bound --eta 1.5 --probe coherent").code == 2);
    CHECK(run_cli("bound --eta 0.5 --probe gaussian").code == 2);
    CHECK(run_cli("").code == 2);  // a subcommand is required
}

TEST_CASE("cli sweep matches the committed file and guards regeneration") {
    const std::filesystem::path tmp =
        std::filesystem::temp_directory_path() / "qbound_sweep_test.csv";
    const RunResult r = run_cli("sweep --output " + tmp.string());
    CHECK(r.code == 0);
    CHECK(slurp(tmp) == slurp(std::filesystem::path(QB_GOLDEN_DIR) / "sweep_default.csv"));
    std::filesystem::remove(tmp);

    CHECK(run_cli("sweep --regen-golden").code == 2);
}

TEST_CASE("cli verify modes") {
    RunResult r = run_cli("verify --only ecs-moments --format json");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"pass\": true") != std::string::npos);
    CHECK(r.out.find("DISCREPANCY") != std::string::npos);

    r = run_cli("verify --only dominance --probe ecs --alpha 1 --eta 0.4 --nbar-b 0.5");
    CHECK(r.code == 0);
    CHECK(r.out.find("[PASS] dominance") != std::string::npos);

    // config file feeds top-level flags
    const std::filesystem::path cfg =
        std::filesystem::temp_directory_path() / "qbound_test_cfg.ini";
    std::ofstream(cfg) << "dim = 16\n";
    r = run_cli("--config " + cfg.string() + " verify --only identities");
    CHECK(r.code == 0);
    CHECK(r.out.find("16-level corner") != std::string::npos);
    std::filesystem::remove(cfg);
}

TEST_CASE("cli oracle reproduces its committed record") {
    const RunResult r = run_cli("oracle --eta 0.5 --nbar-b 1 --probe coherent --alpha 1");
    CHECK(r.code == 0);
    CHECK(r.out == slurp(std::filesystem::path(QB_GOLDEN_DIR) / "oracle_gap.json"));

    CHECK(run_cli("oracle --eta 0.3 --nbar-b 2.5 --probe coherent --alpha 1.5 "
                  "--dim 12 --budget 1e-9").code == 5);
    CHECK(run_cli("oracle --eta 0.5 --probe fock --photons 40").code == 2);
    CHECK(run_cli("oracle --eta 0.5 --probe custom --mean 1 --var 1").code == 2);
}
