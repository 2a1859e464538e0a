#include "doctest.h"

#include "flatcheck/criterion.hpp"
#include "flatcheck/errors.hpp"
#include "support/random.hpp"

using namespace flatcheck;

namespace {

Presentation pres(const SplitPtr& s, std::vector<std::vector<std::string>> rows, int order = 8) {
    return Presentation{SeriesMatrix::parse(s, rows, order), "test"};
}

EngineConfig cfg(int order = 8) {
    EngineConfig c;
    c.order = order;
    c.verify_reductions = true;
    return c;
}

}  // namespace

TEST_CASE("complement condition on diag(x, y)") {
    auto s = make_split(1, 1);
    auto b = s->base_only();
    auto p = pres(s, {{"x", "0"}, {"0", "y"}});
    auto dec = choose_block(p.phi);
    auto fail = check_complement_condition(dec, Ideal::zero(b), 8);
    CHECK_FALSE(fail.passed);
    REQUIRE(fail.witness);
    CHECK(fail.witness->coefficient.to_string() == "y");
    CHECK(check_complement_condition(dec, Ideal::parse(b, {"y"}, 8), 8).passed);
}

TEST_CASE("complement condition is vacuous when the block uses every row") {
    auto s = make_split(1, 1);
    auto p = pres(s, {{"x", "y"}});
    auto c = check_complement_condition(choose_block(p.phi), Ideal::zero(s->base_only()), 8);
    CHECK(c.passed);
    CHECK(c.entries_checked == 0);
}

TEST_CASE("reduction of [[x, y], [0, 0]]") {
    auto s = make_split(1, 1);
    auto p = pres(s, {{"x", "y"}, {"0", "0"}});
    auto dec = choose_block(p.phi);
    auto red = build_reduction(dec, 8, cfg());
    CHECK(red.wdata.d == 1);
    REQUIRE(red.G.rows() == 1);
    REQUIRE(red.G.cols() == 1);
    CHECK(red.G.at(0, 0).to_string() == "y");
    CHECK(red.T.size() == 1);
    CHECK(verify_reduction(dec, red, 8));
}

TEST_CASE("reduction with an empty beta") {
    auto s = make_split(1, 1);
    auto p = pres(s, {{"x^2 - y"}});
    auto red = build_reduction(choose_block(p.phi), 8, cfg());
    CHECK(red.wdata.d == 2);
    CHECK(red.G.rows() == 2);
    CHECK(red.G.cols() == 0);
}

TEST_CASE("G is multiplication by x on K{y}[x]/(x^2 - x*y)") {
    // x * 1 = x and x * x = x^2 = x*y mod P, so column j=1 (basis x) maps to
    // y*x and column j=2 (basis 1) maps to x. Rows/columns are ordered x^{d-i}.
    // choose_block would prefer the column x, so the block is fixed by hand.
    auto s = make_split(1, 1);
    auto p = pres(s, {{"x^2 - x*y", "x"}});
    auto alpha = p.phi.submatrix({0}, {0});
    BlockDecomposition dec{
        .row_perm = {0},
        .col_perm = {0, 1},
        .r = 1,
        .alpha = alpha,
        .beta = p.phi.submatrix({0}, {1}),
        .gamma = SeriesMatrix(s, 0, 1, 8),
        .delta = SeriesMatrix(s, 0, 1, 8),
        .g = alpha.at(0, 0),
        .adj = adjugate(alpha),
        .l = 0,
        .rank_certified = true,
    };
    auto red = build_reduction(dec, 8, cfg());
    CHECK(red.change.is_identity());
    REQUIRE(red.G.rows() == 2);
    REQUIRE(red.G.cols() == 2);
    CHECK(red.G.at(0, 0).to_string() == "y");
    CHECK(red.G.at(0, 1).to_string() == "1");
    CHECK(red.G.at(1, 0).to_string() == "0");
    CHECK(red.G.at(1, 1).to_string() == "0");
    CHECK(verify_reduction(dec, red, 8));
}

TEST_CASE("check_flat examples") {
    auto s = make_split(1, 1);
    auto b = s->base_only();

    auto torsion = check_flat(pres(s, {{"x*y"}}), Ideal::zero(b), cfg());
    CHECK(torsion.status == FlatStatus::not_flat);
    REQUIRE(torsion.chain.size() == 1);
    CHECK(torsion.chain[0].level == 0);
    REQUIRE(torsion.chain[0].complement_check.witness);
    CHECK(torsion.chain[0].complement_check.witness->coefficient.to_string() == "y");

    auto free2 = check_flat(pres(s, {{"x^2 - y"}}), Ideal::zero(b), cfg());
    CHECK(free2.status == FlatStatus::flat);
    CHECK(free2.exact);
    CHECK(free2.certified_order_string() == "exact");
    CHECK(free2.chain.size() == 2);
    CHECK(free2.chain[1].fiber_dim == 0);

    auto summand = check_flat(pres(s, {{"x", "y"}, {"0", "0"}}), Ideal::zero(b), cfg());
    CHECK(summand.status == FlatStatus::not_flat);
    REQUIRE(summand.chain.size() == 2);
    CHECK(summand.chain[1].level == 1);
    CHECK_FALSE(summand.chain[1].complement_check.passed);

    CHECK(check_flat(pres(s, {{"x", "y"}, {"0", "0"}}), Ideal::parse(b, {"y"}, 8), cfg()).status == FlatStatus::flat);
}

TEST_CASE("precision exhaustion is inconclusive") {
    auto s = make_split(1, 1);
    auto p = Presentation{
        SeriesMatrix::parse(s, {{"x^2 - y"}}, 2).map([](const Series& e) { return e.as_truncated(); }), "truncated"};
    auto v = check_flat(p, Ideal::zero(s->base_only()), cfg(2));
    CHECK(v.status == FlatStatus::inconclusive);
}

TEST_CASE("describe_psi") {
    auto s = make_split(1, 1);
    auto text = describe_psi(choose_block(pres(s, {{"x", "0"}, {"0", "y"}}).phi));
    CHECK(text.find("g = x") != std::string::npos);
    CHECK(text.find("l = 1") != std::string::npos);
    auto full = describe_psi(choose_block(pres(s, {{"x", "y"}}).phi));
    CHECK(full.find("l = 0") != std::string::npos);
}

TEST_CASE("property: the maximal ideal always gives flat") {
    auto s = make_split(2, 2);
    testing::RandomPolys rnd(s, 11);
    Ideal m = Ideal::maximal(s->base_only());
    for (int t = 0; t < 25; ++t) {
        auto phi = rnd.matrix(1 + t % 3, 1 + (t / 3) % 3, 2, 3, 8);
        auto v = check_flat(Presentation{phi, "random"}, m, cfg());
        CHECK(v.status != FlatStatus::not_flat);
    }
}

TEST_CASE("property: not_flat persists as the order grows") {
    auto s = make_split(1, 2);
    testing::RandomPolys rnd(s, 5);
    Ideal zero = Ideal::zero(s->base_only());
    for (int t = 0; t < 25; ++t) {
        auto phi = rnd.matrix(2, 2, 2, 3, 12);
        bool seen_not_flat = false;
        for (int n : {4, 8, 12}) {
            auto v = check_flat(Presentation{phi.at_precision(n), "random"}, zero, cfg(n));
            if (seen_not_flat) CHECK(v.status == FlatStatus::not_flat);
            if (v.status == FlatStatus::not_flat) seen_not_flat = true;
        }
    }
}
