#include "doctest.h"

#include <cmath>
#include <cstdio>

#include "ddrc/errors.hpp"
#include "ddrc/instance.hpp"
#include "ddrc/rng.hpp"

using namespace ddrc;

namespace {

// single component, K=1: fails with probability `fail` at level 1, never at level 0
Instance one_component(double fail) {
    Instance inst;
    inst.table = StateProbabilityTable::zeros(1, 1, 1);
    inst.table.prob(0, 0, 0) = 1.0;
    inst.table.prob(0, 1, 0) = 0.0;
    inst.table.prob(0, 0, 1) = 1.0 - fail;
    inst.table.prob(0, 1, 1) = fail;
    inst.alloc_cost = {{0.0, 0.0}};
    inst.budget_rhs = 1;
    GenericRecourse r;
    r.n_y = 1;
    r.q = {0.0};
    r.capacity_var = {0};
    r.u = {1.0};
    r.M = {1.0};
    inst.recourse = std::move(r);
    inst.refresh_varying();
    return inst;
}

Instance independent_pair(double fail1, double fail2) {
    Instance inst;
    inst.table = StateProbabilityTable::zeros(2, 1, 1);
    for (int i = 0; i < 2; ++i) {
        const double f = (i == 0) ? fail1 : fail2;
        inst.table.prob(i, 0, 0) = 1.0;
        inst.table.prob(i, 1, 0) = 0.0;
        inst.table.prob(i, 0, 1) = 1.0 - f;
        inst.table.prob(i, 1, 1) = f;
    }
    inst.alloc_cost = {{0.0, 0.0}, {0.0, 0.0}};
    inst.budget_rhs = 2;
    GenericRecourse r;
    r.n_y = 2;
    r.q = {0.0, 0.0};
    r.capacity_var = {0, 1};
    r.u = {1.0, 1.0};
    r.M = {1.0, 1.0};
    inst.recourse = std::move(r);
    inst.refresh_varying();
    return inst;
}

}  // namespace

TEST_CASE("realization probability is the per-component product") {
    const Instance inst = one_component(0.5);
    const Allocation x{{1}};
    CHECK(realization_probability(inst, x, {1}) == doctest::Approx(0.5));
    CHECK(realization_probability(inst, x, {0}) == doctest::Approx(0.5));

    const Instance pair = independent_pair(0.5, 0.5);
    const Allocation both{{1, 1}};
    CHECK(realization_probability(pair, both, {1, 1}) == doctest::Approx(0.25));
}

TEST_CASE("empty varying set gives probability one") {
    Instance inst = one_component(0.0);  // degenerate at every level
    inst.refresh_varying();
    CHECK(inst.varying.empty());
    CHECK(realization_probability(inst, Allocation{{0}}, {0}) == doctest::Approx(1.0));
}

TEST_CASE("dimension mismatches raise input errors") {
    const Instance inst = one_component(0.5);
    CHECK_THROWS_AS(realization_probability(inst, Allocation{{1}}, {0, 1}), input_error);
    CHECK_THROWS_AS(realization_probability(inst, Allocation{{1}}, {2}), input_error);
}

TEST_CASE("expected state with and without fixings") {
    const Instance inst = one_component(0.5);
    const Allocation x{{1}};
    CHECK(expected_state(inst, x, {-1})[0] == doctest::Approx(0.5));
    CHECK(expected_state(inst, x, {0})[0] == doctest::Approx(0.0));

    // K = 2 component with P(0)=0.2, P(1)=0.3, P(2)=0.5
    Instance inst2;
    inst2.table = StateProbabilityTable::zeros(1, 2, 0);
    inst2.table.prob(0, 0, 0) = 0.2;
    inst2.table.prob(0, 1, 0) = 0.3;
    inst2.table.prob(0, 2, 0) = 0.5;
    inst2.alloc_cost = {{0.0}};
    inst2.budget_rhs = 0;
    GenericRecourse r;
    r.n_y = 1;
    r.q = {0.0};
    r.capacity_var = {0};
    r.u = {1.0};
    r.M = {1.0};
    inst2.recourse = std::move(r);
    inst2.refresh_varying();
    CHECK(expected_state(inst2, Allocation{{0}}, {-1})[0] == doctest::Approx(1.3));
    CHECK_THROWS_AS(expected_state(inst2, Allocation{{0}}, {5}), input_error);
}

TEST_CASE("scenario counts follow (K+1)^varying") {
    Instance pair3;
    pair3.table = StateProbabilityTable::zeros(3, 1, 1);
    for (int i = 0; i < 3; ++i) {
        pair3.table.prob(i, 0, 0) = 0.5;
        pair3.table.prob(i, 1, 0) = 0.5;
        pair3.table.prob(i, 0, 1) = 0.5;
        pair3.table.prob(i, 1, 1) = 0.5;
    }
    pair3.alloc_cost = {{0, 0}, {0, 0}, {0, 0}};
    pair3.budget_rhs = 3;
    GenericRecourse r;
    r.n_y = 3;
    r.q = {0, 0, 0};
    r.capacity_var = {0, 1, 2};
    r.u = {1, 1, 1};
    r.M = {1, 1, 1};
    pair3.recourse = std::move(r);
    pair3.refresh_varying();
    CHECK(enumerate_scenarios(pair3).size() == 8);

    Instance det = one_component(0.0);
    det.refresh_varying();
    CHECK(enumerate_scenarios(det).size() == 1);

    Instance k2;
    k2.table = StateProbabilityTable::zeros(2, 2, 0);
    for (int i = 0; i < 2; ++i) {
        k2.table.prob(i, 0, 0) = 0.3;
        k2.table.prob(i, 1, 0) = 0.3;
        k2.table.prob(i, 2, 0) = 0.4;
    }
    k2.alloc_cost = {{0.0}, {0.0}};
    k2.budget_rhs = 0;
    GenericRecourse r2;
    r2.n_y = 2;
    r2.q = {0, 0};
    r2.capacity_var = {0, 1};
    r2.u = {1, 1};
    r2.M = {1, 1};
    k2.recourse = std::move(r2);
    k2.refresh_varying();
    CHECK(enumerate_scenarios(k2).size() == 9);
}

TEST_CASE("scenario guard trips with the required count") {
    Instance big;
    const int nv = 30;
    big.table = StateProbabilityTable::zeros(nv, 1, 0);
    for (int i = 0; i < nv; ++i) {
        big.table.prob(i, 0, 0) = 0.5;
        big.table.prob(i, 1, 0) = 0.5;
    }
    big.alloc_cost.assign(nv, {0.0});
    big.budget_rhs = 0;
    GenericRecourse r;
    r.n_y = nv;
    r.q.assign(nv, 0.0);
    for (int i = 0; i < nv; ++i) r.capacity_var.push_back(i);
    r.u.assign(nv, 1.0);
    r.M.assign(nv, 1.0);
    big.recourse = std::move(r);
    big.refresh_varying();
    CHECK_THROWS_AS(enumerate_scenarios(big), capacity_error);
}

TEST_CASE("scenario probabilities sum to one for feasible allocations") {
    Rng rng(90210);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_below(3));
        const int K = 1 + static_cast<int>(rng.next_below(2));
        const int L = 1 + static_cast<int>(rng.next_below(3));
        Instance inst;
        inst.table = StateProbabilityTable::zeros(n, K, L);
        for (int i = 0; i < n; ++i)
            for (int l = 0; l <= L; ++l) {
                double total = 0.0;
                std::vector<double> w(K + 1);
                for (int k = 0; k <= K; ++k) total += (w[k] = 0.05 + rng.next_double());
                for (int k = 0; k <= K; ++k) inst.table.prob(i, k, l) = w[k] / total;
            }
        inst.alloc_cost.assign(n, std::vector<double>(L + 1, 0.0));
        inst.budget_rhs = n * L;
        GenericRecourse r;
        r.n_y = n;
        r.q.assign(n, 0.0);
        for (int i = 0; i < n; ++i) r.capacity_var.push_back(i);
        r.u.assign(n, 1.0);
        r.M.assign(n, 1.0);
        inst.recourse = std::move(r);
        inst.refresh_varying();

        Allocation x;
        for (int i = 0; i < n; ++i) x.level.push_back(static_cast<int>(rng.next_below(L + 1)));
        int spend = x.spend();
        while (spend > inst.budget_rhs) {
            x.level[spend % n] = 0;
            spend = x.spend();
        }

        const std::vector<Scenario> scenarios = enumerate_scenarios(inst);
        double total = 0.0;
        for (const Scenario& s : scenarios) total += realization_probability(inst, x, s.state);
        CHECK(std::fabs(total - 1.0) < 1e-9);

        // block multiplicativity: split components into two halves
        const Scenario& probe = scenarios[rng.next_below(scenarios.size())];
        double left = 1.0, right = 1.0;
        for (int i = 0; i < n; ++i) {
            const double f = inst.table.prob(i, probe.state[i], x.level[i]);
            if (i < n / 2) left *= f;
            else right *= f;
        }
        CHECK(std::fabs(left * right - realization_probability(inst, x, probe.state)) < 1e-12);

        // expected_state with no fixings equals the enumeration mean
        const std::vector<double> xbar = expected_state(inst, x, std::vector<int>(n, -1));
        std::vector<double> mean(n, 0.0);
        for (const Scenario& s : scenarios) {
            const double p = realization_probability(inst, x, s.state);
            for (int i = 0; i < n; ++i) mean[i] += p * s.state[i];
        }
        for (int i = 0; i < n; ++i) CHECK(std::fabs(mean[i] - xbar[i]) < 1e-9);
    }
}

TEST_CASE("table validation rejects bad distributions") {
    StateProbabilityTable t = StateProbabilityTable::zeros(1, 1, 0);
    t.prob(0, 0, 0) = 0.6;
    t.prob(0, 1, 0) = 0.6;
    CHECK_THROWS_AS(t.validate(), input_error);
}

TEST_CASE("grid instance files round-trip") {
    const Instance inst = make_grid_instance(3, 3, 42, snip::AMode::uniform(), 2, 2);
    CHECK(inst.n() == 24);  // interior arcs of a 3x3 grid
    CHECK(inst.budget_rhs == 4);

    const std::string path = "/tmp/ddrc_test_instance.json";
    save_instance(inst, path);
    const Instance back = load_instance(path);
    CHECK(back.n() == inst.n());
    CHECK(back.budget_rhs == inst.budget_rhs);
    CHECK(back.table.p == inst.table.p);
    CHECK(back.snip_recourse().net.arcs.size() == inst.snip_recourse().net.arcs.size());
    for (std::size_t k = 0; k < back.snip_recourse().net.arcs.size(); ++k)
        CHECK(back.snip_recourse().net.arcs[k].cap == inst.snip_recourse().net.arcs[k].cap);
    std::remove(path.c_str());
}

TEST_CASE("generic instance files round-trip") {
    Instance inst = one_component(0.5);
    const std::string path = "/tmp/ddrc_test_generic.json";
    save_instance(inst, path);
    const Instance back = load_instance(path);
    CHECK(back.n() == 1);
    CHECK(back.table.p == inst.table.p);
    CHECK(back.generic_recourse().n_y == 1);
    std::remove(path.c_str());
}
