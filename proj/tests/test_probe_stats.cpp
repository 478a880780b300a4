#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qbound/fock.hpp"
#include "qbound/probe_stats.hpp"

using namespace qbound;

TEST_CASE("family moment formulas") {
    ProbeSpec coh;
    coh.family = ProbeFamily::coherent;
    coh.alpha = 1.5;
    ProbeMoments m = moments(coh);
    CHECK(m.mean == doctest::Approx(2.25).epsilon(1e-15));
    CHECK(m.var == doctest::Approx(2.25).epsilon(1e-15));
    coh.n_modes = 3;
    m = moments(coh);
    CHECK(m.mean == doctest::Approx(6.75).epsilon(1e-15));
    CHECK(m.n_modes == 3);

    ProbeSpec fk;
    fk.family = ProbeFamily::fock;
    fk.photons = 3;
    m = moments(fk);
    CHECK(m.mean == 3.0);
    CHECK(m.var == 0.0);

    ProbeSpec th;
    th.family = ProbeFamily::thermal_probe;
    th.mean = 2.0;
    m = moments(th);
    CHECK(m.mean == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(m.var == doctest::Approx(6.0).epsilon(1e-15));

    ProbeSpec sq;
    sq.family = ProbeFamily::squeezed_vacuum;
    sq.squeeze = std::asinh(1.0);  // sinh^2 r = 1
    m = moments(sq);
    CHECK(m.mean == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.var == doctest::Approx(4.0).epsilon(1e-14));

    ProbeSpec cu;
    cu.family = ProbeFamily::custom;
    cu.mean = 1.3;
    cu.var = 0.4;
    m = moments(cu);
    CHECK(m.mean == 1.3);
    CHECK(m.var == 0.4);
}

TEST_CASE("entangled pair moment conventions") {
    ProbeSpec ecs;
    ecs.family = ProbeFamily::entangled_coherent;
    ecs.n_modes = 2;
    ecs.alpha = 1.0;

    const ProbeMoments nominal = moments(ecs, MomentMode::nominal_moments);
    CHECK(nominal.mean == doctest::Approx(0.7310585786300049).epsilon(1e-15));
    CHECK(nominal.var == doctest::Approx(0.7310585786300049).epsilon(1e-15));

    const ProbeMoments direct = moments(ecs, MomentMode::oracle_moments);
    CHECK(direct.mean == doctest::Approx(0.7310585786300049).epsilon(1e-15));
    CHECK(direct.var == doctest::Approx(0.9276705118714867).epsilon(1e-14));

    // the two conventions differ by a finite amount at |alpha| = 1
    CHECK(std::abs(nominal.var - direct.var) > 0.19);
}

TEST_CASE("argument validation") {
    ProbeSpec bad;
    bad.family = ProbeFamily::coherent;
    bad.alpha = -1.0;
    CHECK_THROWS_AS(moments(bad), std::domain_error);

    bad = ProbeSpec{};
    bad.n_modes = 0;
    CHECK_THROWS_AS(moments(bad), std::domain_error);

    bad = ProbeSpec{};
    bad.family = ProbeFamily::entangled_coherent;
    bad.n_modes = 3;
    bad.alpha = 1.0;
    CHECK_THROWS_AS(moments(bad), std::domain_error);

    bad = ProbeSpec{};
    bad.family = ProbeFamily::thermal_probe;
    bad.mean = -0.5;
    CHECK_THROWS_AS(moments(bad), std::domain_error);

    CHECK_THROWS_AS(probe_family_from_string("gaussian"), std::domain_error);
    CHECK(probe_family_from_string("thermal") == ProbeFamily::thermal_probe);
    CHECK(probe_family_from_string("ecs") == ProbeFamily::entangled_coherent);
    CHECK(to_string(ProbeFamily::squeezed_vacuum) == "squeezed_vacuum");
}

// The analytic moments must match the brute-force state expectation once the
// cutoff swallows the occupation tail; geometric-type tails need much larger
// spaces than the mean suggests.
TEST_CASE("moments against truncated-state expectations") {
    struct Row {
        ProbeSpec spec;
        int dim;
    };
    std::vector<Row> rows;

    ProbeSpec coh;
    coh.family = ProbeFamily::coherent;
    coh.alpha = std::sqrt(2.0);
    rows.push_back({coh, 40});

    ProbeSpec fk;
    fk.family = ProbeFamily::fock;
    fk.photons = 4;
    rows.push_back({fk, 10});

    ProbeSpec th;
    th.family = ProbeFamily::thermal_probe;
    th.mean = 2.0;
    rows.push_back({th, 70});

    ProbeSpec sq;
    sq.family = ProbeFamily::squeezed_vacuum;
    sq.squeeze = std::asinh(1.0);
    // the fourth moment converges slowly for squeezed vacuum, needs the deep cutoff
    rows.push_back({sq, 140});

    ProbeSpec ecs;
    ecs.family = ProbeFamily::entangled_coherent;
    ecs.n_modes = 2;
    ecs.alpha = 1.0;
    rows.push_back({ecs, 25});

    for (const Row& r : rows) {
        const TruncatedState st = build_state(r.spec, r.dim, 1e-4);
        const ProbeMoments closed = moments(r.spec, MomentMode::oracle_moments);
        const ProbeMoments brute = state_moments(st);
        CHECK(brute.mean == doctest::Approx(closed.mean).epsilon(1e-8));
        if (closed.var > 0.0) {
            CHECK(brute.var == doctest::Approx(closed.var).epsilon(1e-8));
        } else {
            CHECK(std::abs(brute.var) < 1e-10);
        }
    }
}
