#include "doctest.h"

#include <random>

#include "flatcheck/errors.hpp"
#include "flatcheck/series.hpp"
#include "flatcheck/sparse_linalg.hpp"

using namespace flatcheck;

namespace {

Series P(const SplitPtr& s, const char* text, int order = 8) { return parse_series(text, s, order); }

}  // namespace

TEST_CASE("monomial packing") {
    Monomial a = Monomial::var(0, 2) * Monomial::var(3);
    CHECK(a.exp(0) == 2);
    CHECK(a.exp(3) == 1);
    CHECK(a.degree() == 3);
    CHECK(a.divisible_by(Monomial::var(0)));
    CHECK_FALSE(a.divisible_by(Monomial::var(1)));
    CHECK((a / Monomial::var(0)).exp(0) == 1);
    CHECK(a.restricted(0, 2) == Monomial::var(0, 2));
    GradedLess less;
    CHECK(less(Monomial::var(5), Monomial::var(0, 2)));
    CHECK(less(Monomial::var(1), Monomial::var(0)));
}

TEST_CASE("polynomial product is exact") {
    auto s = make_split(1, 1);
    Series p = P(s, "(x + y)*(x - y)", 2);
    CHECK(p.is_exact());
    CHECK(p.same_terms(P(s, "x^2 - y^2")));
    Series q = P(s, "x + y", 2) * P(s, "x - y", 2);
    CHECK(q.is_exact());
    CHECK(q.same_terms(p));
}

TEST_CASE("truncation clears exactness") {
    auto s = make_split(1, 1);
    Series a = P(s, "x + y", 2);
    Series cube = a * a * a;
    CHECK(cube.order() == 2);
    CHECK_FALSE(cube.is_exact());
    CHECK(cube.is_zero());
}

TEST_CASE("arithmetic takes the smaller order") {
    auto s = make_split(1, 1);
    Series a = P(s, "1 + x", 3).as_truncated();
    Series b = P(s, "y", 5);
    CHECK((a + b).order() == 3);
    CHECK((a * b).order() == 3);
    CHECK_FALSE((a + b).is_exact());
    CHECK((b - b).is_zero());
    CHECK((b - b).is_exact());
}

TEST_CASE("inverse of a unit") {
    auto s = make_split(1, 1);
    Series u = P(s, "1 - x - y", 6);
    Series v = inverse(u);
    CHECK_FALSE(v.is_exact());
    Series one = (u * v).truncated(6);
    CHECK(one.same_terms(Series::constant(s, 6, 1)));
    CHECK(v.coeff(Monomial::var(0) * Monomial::var(1)) == 2);
    CHECK(inverse(Series::constant(s, 4, 3)).is_exact());
    CHECK_THROWS_AS(inverse(P(s, "x")), NotRegular);
}

TEST_CASE("parser") {
    auto s = make_split(std::vector<std::string>{"y1", "y2"}, std::vector<std::string>{"x1", "x2"});
    Series f = P(s, "3/2*y1*x1^2 - (x2 + 1)^2 + y2");
    CHECK(f.coeff(Monomial::var(0) * Monomial::var(2, 2)) == Rational(3, 2));
    CHECK(f.coeff(Monomial::var(3)) == -2);
    CHECK(f.constant_term() == -1);
    CHECK(P(s, "x1^9", 4).order() == 9);
    CHECK(P(s, "x1^9", 4).is_exact());
    CHECK(f.to_string() == P(s, f.to_string().c_str()).to_string());

    try {
        P(s, "y1 + z");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 5);
        CHECK(e.token() == "z");
    }
    CHECK_THROWS_AS(P(s, "x1 +"), ParseError);
    CHECK_THROWS_AS(P(s, "(x1"), ParseError);
    CHECK_THROWS_AS(P(s, "x1^y1"), ParseError);
}

TEST_CASE("translation and evaluation") {
    auto s = make_split(1, 1);
    Series f = P(s, "x*y - y^2");
    std::vector<Rational> eta{Rational(1)};
    Series g = translate_base(f, eta);
    CHECK(g.same_terms(P(s, "x*y + x - y^2 - 2*y - 1")));
    CHECK(g.is_exact());
    std::vector<Rational> xi{Rational(-1, 2)};
    CHECK(translate_fiber(P(s, "x^2"), xi).same_terms(P(s, "x^2 - x + 1/4")));

    auto b = make_split(1, 0);
    std::vector<Rational> pt{Rational(2)};
    CHECK(evaluate_base(P(b, "y^2 - 3*y"), pt) == -2);
}

TEST_CASE("split bookkeeping") {
    auto s = make_split(2, 2);
    CHECK(s->name(0) == "y1");
    CHECK(s->name(3) == "x2");
    auto small = s->without_last_fiber();
    CHECK(small->size() == 3);
    Series f = P(s, "y1*x1 + x1^2");
    Series g = f.dropping_last_fiber(small);
    CHECK(g.lifted_to(s).same_terms(f));
    CHECK_THROWS_AS(P(s, "x2").dropping_last_fiber(small), Error);
    CHECK(P(s, "x1*y2 + y1").evaluate_base_origin().is_zero());
    CHECK_THROWS_AS(f + P(make_split(1, 1), "x"), SplitMismatch);
}

TEST_CASE("property: multiplication is associative and distributes") {
    auto s = make_split(2, 1);
    std::mt19937_64 rng(7);
    auto random_poly = [&](int deg) {
        std::vector<Term> t;
        for (int k = 0; k < 5; ++k) {
            Monomial m;
            for (std::size_t i = 0; i < 3; ++i) m = m * Monomial::var(i, unsigned(rng() % unsigned(deg + 1)));
            Rational c(long(rng() % 7) - 3, long(rng() % 3) + 1);
            c.canonicalize();
            t.push_back(Term{m, c});
        }
        return Series(s, 6, true, std::move(t));
    };
    for (int trial = 0; trial < 30; ++trial) {
        Series a = random_poly(2), b = random_poly(2), c = random_poly(1);
        CHECK(((a * b) * c).same_terms(a * (b * c)));
        CHECK((a * (b + c)).same_terms(a * b + a * c));
    }
}

TEST_CASE("echelon basis and nullspace") {
    using namespace flatcheck::linalg;
    EchelonBasis basis(4);
    CHECK(basis.insert(make_sparse({{0, 1}, {1, 2}})));
    CHECK(basis.insert(make_sparse({{1, 1}, {3, -1}})));
    CHECK_FALSE(basis.insert(make_sparse({{0, 1}, {1, 3}, {3, -1}})));
    CHECK(basis.rank() == 2);
    auto ns = basis.nullspace();
    CHECK(ns.size() == 2);
    for (const auto& z : ns)
        for (const auto& r : basis.rows()) CHECK(sgn(dot(r, z)) == 0);
    auto rref = basis.rref();
    CHECK(rref[0] == make_sparse({{0, 1}, {3, 2}}));
}
