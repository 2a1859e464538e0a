#include "doctest.h"

#include <random>

#include "flatcheck/division.hpp"
#include "flatcheck/errors.hpp"

using namespace flatcheck;

namespace {

Series P(const SplitPtr& s, const char* text, int order = 8) { return parse_series(text, s, order); }

}  // namespace

TEST_CASE("xm_order") {
    auto s = make_split(1, 2);
    CHECK(xm_order(P(s, "x2^3 + y*x2 + x1")) == 3);
    CHECK(xm_order(P(s, "2 + x2")) == 0);
    CHECK_FALSE(xm_order(P(s, "y*x2")).has_value());
    CHECK_FALSE(xm_order(P(s, "x1*x2")).has_value());
}

TEST_CASE("linear change preserves degree and order") {
    auto s = make_split(1, 2);
    auto L = LinearChange::from_matrix({{1, 1}, {0, 1}}, 5);
    Series f = P(s, "x1*x2 + y*x1", 6);
    Series g = apply_linear_change(f, L);
    CHECK(g.order() == 6);
    CHECK(g.is_exact());
    CHECK(g.same_terms(P(s, "x1*x2 + x2^2 + y*x1 + y*x2")));
    CHECK_THROWS_AS(LinearChange::from_matrix({{1, 2}, {2, 4}}, 1), Error);
}

TEST_CASE("regularization") {
    auto s = make_split(1, 2);
    Series g = P(s, "x1*x2 + y");
    auto reg = regularize(g, 11);
    CHECK(reg.attempts > 1);
    CHECK(reg.d == 2);
    CHECK(xm_order(apply_linear_change(g, reg.change)) == 2);
    auto again = regularize(g, 11);
    CHECK(again.change.matrix == reg.change.matrix);
    CHECK(regularize(P(s, "x2 + x1"), 3).attempts == 1);
    CHECK_THROWS_AS(regularize(P(s, "y*x1"), 3), RegularizationFailed);
}

TEST_CASE("property: xm_order after a generic change equals the vanishing order of g(0,x)") {
    auto s = make_split(1, 2);
    const char* forms[] = {"x1*x2", "x1^2", "x1^2*x2 - x1^3 + y", "x1^3 + y*x2"};
    int expected[] = {2, 2, 3, 3};
    for (int i = 0; i < 4; ++i) {
        auto reg = regularize(P(s, forms[i]), 100 + std::uint64_t(i));
        CHECK(reg.d == expected[i]);
    }
}

TEST_CASE("weierstrass division examples") {
    auto s = make_split(1, 1);
    auto res = weierstrass_divide(P(s, "x^2"), P(s, "x - y"), 1, 8);
    CHECK(res.exact);
    CHECK(res.n_eff == 7);
    CHECK(res.remainder.same_terms(P(s, "y^2")));
    CHECK(res.quotient.same_terms(P(s, "x + y")));

    // already reduced
    auto red = weierstrass_divide(P(s, "x + y^3"), P(s, "x^2 - y"), 2, 8);
    CHECK(red.quotient.is_zero());
    CHECK(red.remainder.same_terms(P(s, "x + y^3")));

    // x^6 mod (x^2 - y) is y^3: weight bookkeeping keeps it although x^2 - y costs 2 orders
    auto hi = weierstrass_divide(P(s, "x^6"), P(s, "x^2 - y"), 2, 8);
    CHECK(hi.exact);
    CHECK(hi.remainder.same_terms(P(s, "y^3")));

    CHECK_THROWS_AS(weierstrass_divide(P(s, "x"), P(s, "y*x"), 1, 8), NotRegular);
    CHECK_THROWS_AS(weierstrass_divide(P(s, "x"), P(s, "x^3 - y"), 3, 2), PrecisionExhausted);
}

TEST_CASE("division by a non-polynomial unit part") {
    auto s = make_split(1, 1);
    Series g = P(s, "x - y + x^2");
    auto res = weierstrass_divide(P(s, "x^3 + y"), g, 1, 8);
    CHECK_FALSE(res.exact);
    CHECK(res.n_eff == 7);
    CHECK(res.remainder.max_exp(1) <= 0);
    Series residual = (P(s, "x^3 + y") - res.quotient * g - res.remainder).truncated(7);
    CHECK(residual.is_zero());
}

TEST_CASE("truncated inputs lose precision per the weighted rule") {
    auto s = make_split(1, 1);
    Series g = P(s, "x^2 - y + x^3", 9).as_truncated();
    auto res = weierstrass_divide(P(s, "x^5"), g, 2, 9);
    CHECK(res.n_eff == 3);
    Series residual = (P(s, "x^5") - res.quotient * g - res.remainder).truncated(res.n_eff);
    CHECK(residual.is_zero());
}

TEST_CASE("preparation") {
    auto s = make_split(1, 1);
    auto prep = weierstrass_prepare(P(s, "(1 + y)*(x - y)"), 1, 8);
    CHECK(prep.unit.truncated(prep.n_eff).same_terms(P(s, "1 + y")));
    CHECK(prep.distinguished.same_terms(P(s, "x - y")));
    CHECK(prep.coeffs.size() == 1);
    CHECK(prep.coeffs[0].same_terms(P(s, "-y")));

    auto prep2 = weierstrass_prepare(P(s, "x^2 + x^3 - y"), 2, 10);
    CHECK(prep2.d == 2);
    CHECK(sgn(prep2.unit.constant_term()) != 0);
    for (const auto& c : prep2.coeffs) CHECK(sgn(c.constant_term()) == 0);
}

TEST_CASE("euclidean division by a monic polynomial") {
    auto s = make_split(1, 1);
    auto res = euclid_divide(P(s, "x^2"), P(s, "x^2 - y*x"), 2);
    CHECK(res.remainder.same_terms(P(s, "y*x")));
    CHECK(res.quotient.same_terms(P(s, "1")));
    CHECK(res.remainder.is_exact());
}

TEST_CASE("property: random divisions satisfy the residual identity") {
    auto s = make_split(1, 2);
    std::mt19937_64 rng(2024);
    auto random_poly = [&](int deg, int terms) {
        std::vector<Term> t;
        for (int k = 0; k < terms; ++k) {
            Monomial m;
            int left = int(rng() % unsigned(deg + 1));
            for (std::size_t i = 0; i < 3 && left > 0; ++i) {
                unsigned e = unsigned(rng() % unsigned(left + 1));
                m = m * Monomial::var(i, e);
                left -= int(e);
            }
            t.push_back(Term{m, Rational(long(rng() % 9) - 4)});
        }
        return Series(s, 8, true, std::move(t));
    };
    for (int trial = 0; trial < 40; ++trial) {
        int d = 1 + trial % 3;
        Series g = Series::monomial(s, 8, Monomial::var(2, unsigned(d))) + random_poly(3, 4);
        // keep x_m-regularity of order d: strip pure x_m terms of lower order
        std::vector<Term> t;
        for (const auto& term : g.terms()) {
            unsigned e = term.mono.exp(2);
            if (term.mono == Monomial::var(2, e) && int(e) < d) continue;
            t.push_back(term);
        }
        g = Series(s, 8, true, std::move(t));
        if (xm_order(g) != d) continue;
        Series f = random_poly(4, 5);
        auto res = weierstrass_divide(f, g, d, 8);
        CHECK(res.remainder.max_exp(2) < d);
        Series residual = (f - res.quotient * g - res.remainder).truncated(res.n_eff);
        CHECK(residual.is_zero());

        auto prep = weierstrass_prepare(g, d, 8);
        CHECK((prep.unit * prep.distinguished - g).truncated(prep.n_eff).is_zero());
        auto again = weierstrass_divide(f, g, d, 8);
        CHECK(again.remainder == res.remainder);
        CHECK(again.quotient == res.quotient);

        // Euclid against P yields the same remainder
        XmPolynomial fp = XmPolynomial::from_series(f);
        auto eu = euclid_divide(fp, prep.polynomial);
        Series er = eu.remainder.to_series(s, prep.n_eff);
        CHECK((er - res.remainder).truncated(std::max(res.n_eff - d, 0)).is_zero());
    }
}
