#include "doctest.h"

#include <cmath>

#include "ddrc/bounds.hpp"
#include "ddrc/errors.hpp"
#include "ddrc/msp.hpp"
#include "ddrc/oracle.hpp"
#include "ddrc/rng.hpp"
#include "ddrc/sra.hpp"
#include "helpers.hpp"

using namespace ddrc;
using ddrc::testing::backstop_instance;
using ddrc::testing::series_path_instance;
using ddrc::testing::sparse_grid_instance;

TEST_CASE("deterministic instance needs no refinement") {
    Instance inst = series_path_instance(3.0, 2.0, 1, 1.0);
    // make both arcs unattackable in effect: never fail at any level
    for (int i = 0; i < 2; ++i)
        for (int l = 0; l <= 1; ++l) {
            inst.table.prob(i, 0, l) = 1.0;
            inst.table.prob(i, 1, l) = 0.0;
        }
    inst.refresh_varying();
    REQUIRE(inst.varying.empty());

    const sra::Result res = sra::run(inst);
    REQUIRE(res.status == bnb::SolveStatus::Optimal);
    CHECK(res.refinements == 0);
    CHECK(res.objective == doctest::Approx(2.0));

    const oracle::OracleResult exact = oracle::brute_force_solve(inst);
    CHECK(res.objective == doctest::Approx(exact.value));

    const msp::Result m = msp::solve_msp(inst);
    REQUIRE(m.status == bnb::SolveStatus::Optimal);
    CHECK(m.objective == doctest::Approx(exact.value));
}

TEST_CASE("huge epsilon returns the mean-value solution with no refinements") {
    const Instance inst = series_path_instance(3.0, 2.0, 1, 1.0);
    sra::Options opts;
    opts.epsilon = 1e9;
    const sra::Result res = sra::run(inst, opts);
    REQUIRE(res.status == bnb::SolveStatus::Optimal);
    CHECK(res.refinements == 0);
    CHECK(res.leaf_count == 1);
}

TEST_CASE("series path: refinement closes the gap to the oracle") {
    const Instance inst = series_path_instance(3.0, 2.0, 1, 1.0);
    sra::Options opts;
    opts.epsilon = 1e-9;
    opts.gap_tol = 1e-9;
    const sra::Result res = sra::run(inst, opts);
    REQUIRE(res.status == bnb::SolveStatus::Optimal);

    const oracle::OracleResult exact = oracle::brute_force_solve(inst);
    CHECK(std::fabs(res.objective - exact.value) < 1e-6);
    CHECK(res.refinements >= 1);
}

TEST_CASE("three-way agreement on seeded sparse grids") {
    for (int seed = 1; seed <= 6; ++seed) {
        const Instance inst = sparse_grid_instance(3, 3, seed, 4, 1, 1);
        const oracle::OracleResult exact = oracle::brute_force_solve(inst);

        sra::Options sopts;
        sopts.epsilon = 1e-9;
        sopts.gap_tol = 1e-9;
        const sra::Result s = sra::run(inst, sopts);
        REQUIRE(s.status == bnb::SolveStatus::Optimal);
        CHECK(std::fabs(s.objective - exact.value) < 1e-6);

        msp::Options mopts;
        mopts.gap_tol = 1e-9;
        const msp::Result m = msp::solve_msp(inst, mopts);
        REQUIRE(m.status == bnb::SolveStatus::Optimal);
        CHECK(std::fabs(m.objective - exact.value) < 1e-6);
    }
}

TEST_CASE("generic template end to end") {
    const Instance inst = backstop_instance();
    const oracle::OracleResult exact = oracle::brute_force_solve(inst);

    sra::Options sopts;
    sopts.epsilon = 1e-9;
    sopts.gap_tol = 1e-9;
    const sra::Result s = sra::run(inst, sopts);
    REQUIRE(s.status == bnb::SolveStatus::Optimal);
    CHECK(std::fabs(s.objective - exact.value) < 1e-6);

    msp::Options mopts;
    mopts.gap_tol = 1e-9;
    const msp::Result m = msp::solve_msp(inst, mopts);
    REQUIRE(m.status == bnb::SolveStatus::Optimal);
    CHECK(std::fabs(m.objective - exact.value) < 1e-6);
}

TEST_CASE("epigraph replay is monotone and capped by the oracle value") {
    const Instance inst = sparse_grid_instance(3, 3, 11, 4, 2, 1);
    sra::Options opts;
    opts.epsilon = 1e-9;
    opts.gap_tol = 1e-9;
    const sra::Result res = sra::run(inst, opts);
    REQUIRE(res.status == bnb::SolveStatus::Optimal);
    const double zstar = oracle::brute_force_solve(inst).value;

    double prev = -1e100;
    for (std::size_t prefix = 0; prefix <= res.events.size(); ++prefix) {
        const double w = sra::epigraph_value_for_prefix(inst, res.events, prefix);
        CHECK(w >= prev - 1e-7);
        CHECK(w <= zstar + 1e-7);
        prev = w;
    }
    CHECK(std::fabs(res.objective - zstar) < 1e-6);
}

TEST_CASE("msp scenario and chain counts") {
    // one varying component, K=1: two scenarios
    Instance inst = series_path_instance(3.0, 2.0, 1, 1.0);
    for (int l = 0; l <= 1; ++l) {
        inst.table.prob(0, 0, l) = 1.0;
        inst.table.prob(0, 1, l) = 0.0;
    }
    inst.refresh_varying();
    REQUIRE(inst.varying.size() == 1);
    const msp::MspModel model = msp::build_msp(inst);
    CHECK(model.scenarios.size() == 2);
    CHECK(model.scenario_prob_var.size() == 2);

    Instance det = inst;
    for (int l = 0; l <= 1; ++l) {
        det.table.prob(1, 0, l) = 1.0;
        det.table.prob(1, 1, l) = 0.0;
    }
    det.refresh_varying();
    const msp::MspModel dm = msp::build_msp(det);
    CHECK(dm.scenarios.size() == 1);
}

TEST_CASE("msp model value is exact at binary allocations") {
    Rng rng(31007);
    const Instance inst = sparse_grid_instance(3, 3, 23, 4, 2, 2);
    const msp::MspModel model = msp::build_msp(inst);
    for (int trial = 0; trial < 8; ++trial) {
        Allocation x;
        x.level.assign(inst.n(), 0);
        int spend = 0;
        while (spend < inst.budget_rhs) {
            const int i = static_cast<int>(rng.next_below(inst.n()));
            if (x.level[i] < inst.L()) {
                x.level[i]++;
                spend++;
            } else
                break;
        }
        const double via_model = msp::model_objective_at(model, inst, x);
        const double exact = oracle::exact_objective(inst, x);
        CHECK(std::fabs(via_model - exact) < 1e-8);
    }
}

TEST_CASE("msp trips its capacity guard on dense uniform grids") {
    const Instance inst = make_grid_instance(3, 3, 5, snip::AMode::uniform(), 2, 2);
    REQUIRE(inst.varying.size() == 24);
    CHECK_THROWS_AS(msp::build_msp(inst), capacity_error);
}

TEST_CASE("budget zero forces the all-zero allocation") {
    Instance inst = sparse_grid_instance(3, 3, 31, 3, 1, 1);
    inst.budget_rhs = 0;
    const oracle::OracleResult exact = oracle::brute_force_solve(inst);
    for (int l : exact.x.level) CHECK(l == 0);

    const msp::Result m = msp::solve_msp(inst);
    REQUIRE(m.status == bnb::SolveStatus::Optimal);
    CHECK(std::fabs(m.objective - exact.value) < 1e-6);
    // nothing attacked: the expectation is the unprotected max flow
    const std::vector<double> zero(inst.n(), 0.0);
    CHECK(m.objective == doctest::Approx(bounds::recourse_value(inst, zero)));
}

TEST_CASE("oracle tie-break is lexicographic on symmetric instances") {
    // two identical series arcs: attacking either one is equivalent
    snip::GridNetwork net;
    net.rows = 1;
    net.cols = 1;
    net.num_nodes = 3;
    net.arcs.push_back(snip::Arc{0, 2, 5.0, 1.0});
    net.arcs.push_back(snip::Arc{2, 1, 5.0, 1.0});
    net.failable = {0, 1};
    Instance inst;
    inst.table = StateProbabilityTable::zeros(2, 1, 1);
    for (int i = 0; i < 2; ++i)
        for (int l = 0; l <= 1; ++l) {
            const double f = snip::interdiction_probability(1.0, 1, l);
            inst.table.prob(i, 1, l) = f;
            inst.table.prob(i, 0, l) = 1.0 - f;
        }
    inst.alloc_cost.assign(2, {0.0, 0.0});
    inst.budget_rhs = 1;
    SnipRecourse rec;
    rec.component_arc = net.failable;
    rec.net = std::move(net);
    inst.recourse = std::move(rec);
    inst.refresh_varying();

    const oracle::OracleResult exact = oracle::brute_force_solve(inst);
    // (0,1) precedes (1,0) lexicographically among the tied optima
    CHECK(exact.x.level[0] == 0);
    CHECK(exact.x.level[1] == 1);
}
