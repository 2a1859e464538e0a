#include "doctest.h"

#include "flatcheck/errors.hpp"
#include "flatcheck/flattener.hpp"
#include "support/random.hpp"

using namespace flatcheck;

namespace {

Presentation pres(const SplitPtr& s, std::vector<std::vector<std::string>> rows, int order = 8) {
    return Presentation{SeriesMatrix::parse(s, rows, order), "test"};
}

std::vector<Rational> point(std::initializer_list<Rational> values) { return values; }

}  // namespace

TEST_CASE("level ideals") {
    auto s = make_split(2, 1);
    auto b = s->base_only();
    CHECK(level_ideal(choose_block(pres(s, {{"y1*x - y2"}}).phi), b, 8).to_string() == "(y1, y2)");
    auto s1 = make_split(1, 1);
    auto b1 = s1->base_only();
    CHECK(level_ideal(choose_block(pres(s1, {{"x", "0"}, {"0", "y"}}).phi), b1, 8).to_string() == "(y)");
    CHECK(level_ideal(choose_block(pres(s1, {{"x^2 - y"}}).phi), b1, 8).kind() == IdealKind::zero);
}

TEST_CASE("flattener ideal examples") {
    EngineConfig config;
    auto s1 = make_split(1, 1);
    auto torsion = flattener_ideal(pres(s1, {{"x*y"}}), config);
    REQUIRE(torsion.complete);
    CHECK(torsion.total->to_string() == "(y)");
    CHECK(torsion.levels.size() == 1);

    auto s2 = make_split(2, 1);
    auto blowup = flattener_ideal(pres(s2, {{"y1*x - y2"}}), config);
    CHECK(blowup.total->to_string() == "(y1, y2)");

    auto summand = flattener_ideal(pres(s1, {{"x", "y"}, {"0", "0"}}), config);
    REQUIRE(summand.levels.size() == 2);
    CHECK(summand.levels[0].ideal.kind() == IdealKind::zero);
    CHECK(summand.levels[1].ideal.to_string() == "(y)");
    CHECK(summand.total->to_string() == "(y)");
    CHECK(summand.effective_order_string() == "exact");
}

TEST_CASE("verify_flattener") {
    EngineConfig config;
    auto s2 = make_split(2, 1);
    auto blowup = pres(s2, {{"y1*x - y2"}});
    auto check = verify_flattener(blowup, flattener_ideal(blowup, config), config);
    CHECK(check.restriction == FlatStatus::flat);
    CHECK(check.probes.size() == 2);
    CHECK(check.passed);

    auto s1 = make_split(1, 1);
    auto d = pres(s1, {{"x", "0"}, {"0", "y"}});
    auto dc = verify_flattener(d, flattener_ideal(d, config), config);
    CHECK(dc.passed);
    REQUIRE(dc.probes.size() == 1);
    CHECK(dc.probes[0].status == FlatStatus::not_flat);

    auto free2 = pres(s1, {{"x^2 - y"}});
    auto fc = verify_flattener(free2, flattener_ideal(free2, config), config);
    CHECK(fc.passed);
    CHECK(fc.probes.empty());
}

TEST_CASE("translation of presentations") {
    auto s = make_split(1, 1);
    auto t = translate_presentation(pres(s, {{"y*x"}}), point({1}));
    CHECK(t.phi.at(0, 0).to_string() == parse_series("x*y + x", s, 8).to_string());
    auto same = translate_presentation(pres(s, {{"y*x"}}), point({0}));
    CHECK(same.phi.at(0, 0) == parse_series("x*y", s, 8));
    auto s2 = make_split(2, 1);
    auto b = translate_presentation(pres(s2, {{"y1*x - y2"}}), point({1, 0}));
    CHECK(b.phi.at(0, 0) == parse_series("y1*x + x - y2", s2, 8));
    CHECK_THROWS_AS(translate_presentation(pres(s, {{"x"}}), point({1, 2})), SplitMismatch);
}

TEST_CASE("openness checks") {
    EngineConfig config;
    auto s2 = make_split(2, 1);
    auto r = openness_check(pres(s2, {{"y1*x"}}), point({0, Rational(1, 2)}), {}, config);
    REQUIRE(r.precondition_ok);
    CHECK(r.contained);
    CHECK(r.local->to_string() == "(y1)");

    auto blow = openness_check(pres(s2, {{"y1*x - y2"}}), point({0, 0}), {}, config);
    CHECK(blow.precondition_ok);
    CHECK(blow.contained);

    auto off = openness_check(pres(s2, {{"y1*x - y2"}}), point({1, 0}), {}, config);
    CHECK_FALSE(off.precondition_ok);

    // At x = 1 the germ of A/(x*y) is A/(y), again with flattener (y).
    auto s1 = make_split(1, 1);
    auto fiber = openness_check(pres(s1, {{"x*y"}}), point({0}), point({1}), config);
    CHECK(fiber.precondition_ok);
    CHECK(fiber.contained);
    CHECK(fiber.local->to_string() == "(y)");
}

TEST_CASE("property: ideals containing I(F) give flat restrictions") {
    auto s = make_split(2, 2);
    testing::RandomPolys rnd(s, 3);
    testing::RandomPolys base_rnd(s->base_only(), 4);
    EngineConfig config;
    for (int t = 0; t < 20; ++t) {
        Presentation p{rnd.matrix(1 + t % 2, 1 + (t / 2) % 3, 2, 3, 8), "random"};
        auto f = flattener_ideal(p, config);
        if (!f.complete) continue;
        CHECK(check_flat(p, *f.total, config).status != FlatStatus::not_flat);
        std::vector<Series> gens = f.total->generators();
        auto extra = base_rnd.poly(2, 2, 8);
        if (sgn(extra.constant_term()) != 0)
            extra = extra - Series::constant(extra.split_ptr(), 8, extra.constant_term());
        gens.push_back(extra);
        Ideal bigger(f.total->base_split(), gens);
        CHECK(check_flat(p, bigger, config).status != FlatStatus::not_flat);
    }
}
