#include "doctest.h"

#include <cmath>

#include "ddrc/errors.hpp"
#include "ddrc/linearize.hpp"
#include "ddrc/rng.hpp"

using namespace ddrc;
using lp::kInf;
using lp::LinearProgram;
using lp::Relation;
using lp::Solution;

namespace {

// feasible interval of `var` once all listed vars are pinned to `fix`
std::pair<double, double> var_range(LinearProgram prog, int var,
                                    const std::vector<std::pair<int, double>>& fix) {
    for (auto [v, val] : fix) {
        prog.lo[v] = val;
        prog.hi[v] = val;
    }
    for (double& c : prog.obj) c = 0.0;
    prog.obj[var] = 1.0;
    const Solution lo = lp::solve(prog);
    REQUIRE(lo.optimal());
    prog.obj[var] = -1.0;
    const Solution hi = lp::solve(prog);
    REQUIRE(hi.optimal());
    return {lo.primal[var], hi.primal[var]};
}

}  // namespace

TEST_CASE("binary one forces z to t") {
    LinearProgram prog;
    const int b = prog.add_variable(0.0, 1.0, 0.0);
    const int t = prog.add_variable(0.0, 4.0, 0.0);
    const ProductAux p = mccormick_product(prog, b, t, 0.0, 4.0);
    auto [zlo, zhi] = var_range(prog, p.aux, {{b, 1.0}, {t, 3.0}});
    CHECK(zlo == doctest::Approx(3.0));
    CHECK(zhi == doctest::Approx(3.0));
}

TEST_CASE("binary zero annihilates the product") {
    LinearProgram prog;
    const int b = prog.add_variable(0.0, 1.0, 0.0);
    const int t = prog.add_variable(0.0, 4.0, 0.0);
    const ProductAux p = mccormick_product(prog, b, t, 0.0, 4.0);
    auto [zlo, zhi] = var_range(prog, p.aux, {{b, 0.0}, {t, 2.5}});
    CHECK(zlo == doctest::Approx(0.0));
    CHECK(zhi == doctest::Approx(0.0));
}

TEST_CASE("fractional b pins the hull vertex") {
    LinearProgram prog;
    const int b = prog.add_variable(0.0, 1.0, 0.0);
    const int t = prog.add_variable(0.0, 4.0, 0.0);
    const ProductAux p = mccormick_product(prog, b, t, 0.0, 4.0);
    auto [zlo, zhi] = var_range(prog, p.aux, {{b, 0.5}, {t, 4.0}});
    CHECK(zlo == doctest::Approx(2.0));
    CHECK(zhi == doctest::Approx(2.0));
}

TEST_CASE("infinite bounds are rejected") {
    LinearProgram prog;
    const int b = prog.add_variable(0.0, 1.0, 0.0);
    const int t = prog.add_variable(0.0, kInf, 0.0);
    CHECK_THROWS_AS(mccormick_product(prog, b, t, 0.0, kInf), input_error);
}

TEST_CASE("chain of one factor matches a single envelope") {
    LinearProgram prog;
    const int b = prog.add_variable(0.0, 1.0, 0.0);
    const int tail = prog.add_variable(0.0, 8.0, 0.0);
    const ChainResult chain =
        chain_multilinear(prog, {AffineExpr{0.0, {{b, 1.0}}}}, tail, 8.0);
    auto [lo1, hi1] = var_range(prog, chain.result_var, {{b, 1.0}, {tail, 5.0}});
    CHECK(lo1 == doctest::Approx(5.0));
    CHECK(hi1 == doctest::Approx(5.0));
    auto [lo0, hi0] = var_range(prog, chain.result_var, {{b, 0.0}, {tail, 5.0}});
    CHECK(lo0 == doctest::Approx(0.0));
    CHECK(hi0 == doctest::Approx(0.0));
}

TEST_CASE("two half-weight factors on a fixed tail") {
    LinearProgram prog;
    const int b1 = prog.add_variable(0.0, 1.0, 0.0);
    const int b2 = prog.add_variable(0.0, 1.0, 0.0);
    const int tail = prog.add_variable(8.0, 8.0, 0.0);
    const ChainResult chain = chain_multilinear(
        prog, {AffineExpr{0.0, {{b1, 0.5}}}, AffineExpr{0.0, {{b2, 0.5}}}}, tail, 8.0);
    auto [lo, hi] = var_range(prog, chain.result_var, {{b1, 1.0}, {b2, 1.0}});
    CHECK(lo == doctest::Approx(2.0));
    CHECK(hi == doctest::Approx(2.0));
}

TEST_CASE("zero factor annihilates the whole chain") {
    LinearProgram prog;
    const int b1 = prog.add_variable(0.0, 1.0, 0.0);
    const int b2 = prog.add_variable(0.0, 1.0, 0.0);
    const int tail = prog.add_variable(0.0, 6.0, 0.0);
    const ChainResult chain = chain_multilinear(
        prog, {AffineExpr{0.0, {{b1, 0.0}}}, AffineExpr{0.0, {{b2, 1.0}}}}, tail, 6.0);
    auto [lo, hi] = var_range(prog, chain.result_var, {{b1, 1.0}, {b2, 1.0}, {tail, 6.0}});
    CHECK(lo == doctest::Approx(0.0));
    CHECK(hi == doctest::Approx(0.0));
}

TEST_CASE("empty factor list is rejected") {
    LinearProgram prog;
    const int tail = prog.add_variable(0.0, 1.0, 0.0);
    CHECK_THROWS_AS(chain_multilinear(prog, {}, tail, 1.0), input_error);
}

TEST_CASE("chains are exact at random binary points") {
    Rng rng(55001);
    for (int trial = 0; trial < 500; ++trial) {
        const int nf = 1 + static_cast<int>(rng.next_below(6));
        LinearProgram prog;
        std::vector<int> binaries;
        std::vector<AffineExpr> factors;
        for (int f = 0; f < nf; ++f) {
            // convex weights over two fresh binaries plus a constant,
            // guaranteed inside [0,1] at binary points
            const int b1 = prog.add_variable(0.0, 1.0, 0.0);
            const int b2 = prog.add_variable(0.0, 1.0, 0.0);
            binaries.push_back(b1);
            binaries.push_back(b2);
            const double w1 = 0.5 * rng.next_double();
            const double w2 = 0.5 * rng.next_double();
            const double c = rng.next_double() * (1.0 - w1 - w2);
            factors.push_back(AffineExpr{c, {{b1, w1}, {b2, w2}}});
        }
        const double tail_hi = 1.0 + 9.0 * rng.next_double();
        const int tail = prog.add_variable(0.0, tail_hi, 0.0);
        const ChainResult chain = chain_multilinear(prog, factors, tail, tail_hi);

        std::vector<std::pair<int, double>> fix;
        std::vector<double> point(prog.num_vars(), 0.0);
        for (int b : binaries) {
            const double v = rng.next_below(2) ? 1.0 : 0.0;
            fix.push_back({b, v});
            point[b] = v;
        }
        const double tval = tail_hi * rng.next_double();
        fix.push_back({tail, tval});

        double expect = tval;
        for (const AffineExpr& f : factors) expect *= f.value_at(point);

        auto [lo, hi] = var_range(prog, chain.result_var, fix);
        CHECK(std::fabs(lo - expect) < 1e-9);
        CHECK(std::fabs(hi - expect) < 1e-9);
    }
}

TEST_CASE("hull contains the true product at fractional points") {
    Rng rng(55002);
    for (int trial = 0; trial < 100; ++trial) {
        const int nf = 1 + static_cast<int>(rng.next_below(4));
        LinearProgram prog;
        std::vector<int> binaries;
        std::vector<AffineExpr> factors;
        for (int f = 0; f < nf; ++f) {
            const int b = prog.add_variable(0.0, 1.0, 0.0);
            binaries.push_back(b);
            factors.push_back(AffineExpr{0.0, {{b, 1.0}}});
        }
        const double tail_hi = 5.0;
        const int tail = prog.add_variable(0.0, tail_hi, 0.0);
        const ChainResult chain = chain_multilinear(prog, factors, tail, tail_hi);

        std::vector<std::pair<int, double>> fix;
        std::vector<double> point(prog.num_vars(), 0.0);
        for (int b : binaries) {
            const double v = rng.next_double();
            fix.push_back({b, v});
            point[b] = v;
        }
        const double tval = tail_hi * rng.next_double();
        fix.push_back({tail, tval});
        double product = tval;
        for (const AffineExpr& f : factors) product *= f.value_at(point);

        auto [lo, hi] = var_range(prog, chain.result_var, fix);
        CHECK(product >= lo - 1e-9);
        CHECK(product <= hi + 1e-9);
    }
}
