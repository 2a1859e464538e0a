#include "doctest.h"

#include <chrono>

#include "flatcheck/errors.hpp"
#include "flatcheck/oracle.hpp"
#include "support/random.hpp"

using namespace flatcheck;

namespace {

SeriesMatrix M(const SplitPtr& s, std::vector<std::vector<std::string>> rows, int order = 8) {
    return SeriesMatrix::parse(s, rows, order);
}

}  // namespace

TEST_CASE("jet kernels at the origin") {
    auto s = make_split(1, 1);
    CHECK(jet_kernel_at_origin(M(s, {{"x"}}), 8).dimension() == 0);
    auto zero = jet_kernel_at_origin(M(s, {{"0"}}), 8);
    CHECK(zero.dimension() == zero.columns());
    auto diag = jet_kernel_at_origin(M(s, {{"x", "0"}, {"0", "y"}}), 8);
    // window is degree <= 7 in x, second entry free
    CHECK(diag.window == 7);
    CHECK(diag.dimension() == 8);
    for (std::size_t k = 0; k < diag.dimension(); ++k) CHECK(diag.vector(k, s)[0].is_zero());
}

TEST_CASE("jet kernels modulo J") {
    auto s = make_split(1, 1);
    auto b = s->base_only();
    auto xy = M(s, {{"x*y"}});
    auto lifted = jet_kernel_mod_J(xy, Ideal::parse(b, {"y"}, 8), 8);
    CHECK(lifted.dimension() == lifted.columns());
    CHECK(jet_kernel_mod_J(xy, Ideal::zero(b), 8).dimension() == 0);
    auto unit = jet_kernel_mod_J(xy, Ideal::parse(b, {"1"}, 8), 8);
    CHECK(unit.dimension() == unit.columns());
}

TEST_CASE("direct flatness test examples") {
    auto s = make_split(1, 1);
    auto b = s->base_only();
    auto xy = direct_flatness_test(M(s, {{"x*y"}}), Ideal::zero(b), 8);
    CHECK(xy.status == OracleStatus::not_flat);
    REQUIRE(xy.gap_witness);
    CHECK(xy.gap_witness->at(0) == "1");
    CHECK(direct_flatness_test(M(s, {{"x^2 - y"}}), Ideal::zero(b), 8).status == OracleStatus::flat_to_order);
    CHECK(direct_flatness_test(M(s, {{"x", "0"}, {"0", "y"}}), Ideal::parse(b, {"y"}, 8), 8).status ==
          OracleStatus::flat_to_order);
    CHECK(direct_flatness_test(M(s, {{"x", "0"}, {"0", "y"}}), Ideal::zero(b), 8).status == OracleStatus::not_flat);
    CHECK(direct_flatness_test(M(s, {{"x", "y"}, {"0", "0"}}), Ideal::zero(b), 8).status == OracleStatus::not_flat);
    CHECK(direct_flatness_test(M(s, {{"x^2 - x*y"}}), Ideal::zero(b), 8).status == OracleStatus::flat_to_order);
    CHECK(direct_flatness_test(M(s, {{"x^3"}}), Ideal::zero(b), 2).status == OracleStatus::inconclusive);

    auto s2 = make_split(2, 1);
    auto b2 = s2->base_only();
    auto blow = M(s2, {{"y1*x - y2"}});
    CHECK(direct_flatness_test(blow, Ideal::zero(b2), 8).status == OracleStatus::not_flat);
    CHECK(direct_flatness_test(blow, Ideal::parse(b2, {"y2"}, 8), 8).status == OracleStatus::not_flat);
    CHECK(direct_flatness_test(blow, Ideal::parse(b2, {"y1 - y2"}, 8), 8).status == OracleStatus::not_flat);
    CHECK(direct_flatness_test(blow, Ideal::maximal(b2), 8).status == OracleStatus::flat_to_order);
}

TEST_CASE("projection memberships") {
    auto s = make_split(1, 1);
    auto b = s->base_only();
    auto phi = M(s, {{"x", "y"}, {"0", "0"}});
    auto dec = choose_block(phi);
    CHECK(check_projection_memberships(phi, Ideal::parse(b, {"y"}, 8), dec, 8).holds);
    CHECK(check_projection_memberships(phi, Ideal::zero(b), dec, 8).holds);
}

TEST_CASE("projection views") {
    auto s = make_split(1, 1);
    auto b = s->base_only();
    auto phi = M(s, {{"x", "y"}, {"0", "0"}});
    auto origin = jet_kernel_at_origin(phi, 8);
    auto lifted = jet_kernel_mod_J(phi, Ideal::parse(b, {"y"}, 8), 8);
    CHECK(projection_view(origin, {1}).contains(projection_view(lifted, {1})));
    CHECK(projection_view(lifted, {1}).contains(projection_view(origin, {1})));
}

TEST_CASE("echelon form is canonical under a change of generating set") {
    auto s = make_split(1, 2);
    auto k = jet_kernel_at_origin(M(s, {{"x1", "x2", "0"}}), 6);
    REQUIRE(k.dimension() > 2);
    linalg::EchelonBasis b(k.columns());
    for (std::size_t i = 0; i + 1 < k.dimension(); ++i) {
        auto v = k.basis[i];
        for (const auto& [c, x] : k.basis[i + 1]) v.emplace_back(c, 3 * x);
        b.insert(linalg::make_sparse(v));
    }
    b.insert(k.basis.back());
    CHECK(b.rref() == k.basis);
}

TEST_CASE("cross validation on the hand examples") {
    auto s = make_split(1, 1);
    auto b = s->base_only();
    EngineConfig config;
    for (auto rows : std::vector<std::vector<std::vector<std::string>>>{
             {{"x*y"}}, {{"x^2 - y"}}, {{"x^2 - x*y"}}, {{"x", "0"}, {"0", "y"}}, {{"x", "y"}, {"0", "0"}}}) {
        for (const Ideal& j : {Ideal::zero(b), Ideal::parse(b, {"y"}, 8), Ideal::maximal(b)}) {
            auto cv = cross_validate(Presentation{M(s, rows), "hand"}, j, config);
            CHECK(cv.comparable);
            CHECK(cv.consistent);
        }
    }
}

TEST_CASE("property: one-sided containment and agreement on random presentations") {
    auto s = make_split(2, 2);
    testing::RandomPolys rnd(s, 17);
    EngineConfig config;
    auto start = std::chrono::steady_clock::now();
    int comparable = 0;
    for (int t = 0; t < 20; ++t) {
        Presentation p{rnd.matrix(1 + t % 3, 1 + (t / 3) % 3, 2, 3, 8), "random"};
        auto cv = cross_validate(p, Ideal::zero(s->base_only()), config);
        CHECK(cv.oracle.containment);
        CHECK_MESSAGE(cv.consistent, cv.note);
        comparable += cv.comparable;
    }
    MESSAGE("comparable: " << comparable << ", seconds: "
                           << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}
