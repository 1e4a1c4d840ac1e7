#include <doctest.h>

#include "cmlocus/locus.hpp"

using namespace cmlocus;

namespace {

ClosedPointClass pick(i64 dk, i64 ell, int a, std::tuple<int, int, int> path) {
    for (const auto& c : closed_point_classes(make_order(dk, 1), ell, a))
        if (c.path == path) return c;
    FAIL("no class with that path");
    return {};
}

const std::tuple<int, int, int> kLoop{0, 1, 0};

}  // namespace

TEST_CASE("full level structure") {
    CHECK(x_nn_residue(make_order(-4, 1), 2) == Qf(1, -4));
    CHECK(x_nn_residue(make_order(-3, 1), 2) == Kf(1, -3));
    CHECK(x_nn_residue(make_order(-4, 1), 3) == Kf(3, -4));
    CHECK(x_nn_residue(make_order(-4, 3), 2) == Qf(6, -4));
}

TEST_CASE("residue fields on X0(N)") {
    const OrderDisc o = make_order(-4, 1);
    CHECK(residue_X0N(o, {{2, 0, 2, pick(-4, 2, 2, {0, 0, 2})}}) == Qf(4, -4));
    CHECK(residue_X0N(o, {{5, 0, 1, pick(-4, 5, 1, kLoop)}}) == Kf(1, -4));
    CHECK(residue_X0N(make_order(-3, 1), {{2, 0, 1, pick(-3, 2, 1, {0, 0, 1})}, {3, 0, 1, pick(-3, 3, 1, {0, 0, 1})}}) ==
          Qf(6, -3));
    CHECK_THROWS_AS(residue_X0N(make_order(-4, 2), {}), ValidationError);
}

TEST_CASE("how many points share a tuple of local classes") {
    const OrderDisc o = make_order(-4, 1);
    auto s0 = count_fiber_X0N(o, {{2, 0, 1, pick(-4, 2, 1, {0, 0, 1})}, {5, 0, 1, pick(-4, 5, 1, {0, 0, 1})}});
    CHECK(s0.first == 1);
    CHECK(s0.second == Qf(10, -4));
    auto s2 = count_fiber_X0N(o, {{5, 0, 1, pick(-4, 5, 1, kLoop)}, {13, 0, 1, pick(-4, 13, 1, kLoop)}});
    CHECK(s2.first == 2);
    auto s3 = count_fiber_X0N(
        o, {{5, 0, 1, pick(-4, 5, 1, kLoop)}, {13, 0, 1, pick(-4, 13, 1, kLoop)}, {17, 0, 1, pick(-4, 17, 1, kLoop)}});
    CHECK(s3.first == 4);
    CHECK_THROWS_AS(count_fiber_X0N(o, {{5, 0, 1, pick(-4, 5, 1, kLoop)}, {5, 0, 1, pick(-4, 5, 1, kLoop)}}), ValidationError);
}

TEST_CASE("fields and counts on X0(M,N)") {
    const OrderDisc o = make_order(-4, 1);
    CHECK(residue_X0MN(o, 2, 8, {{2, 1, 3, pick(-4, 2, 3, {0, 0, 3})}}) == Qf(8, -4));
    CHECK(residue_X0MN(o, 2, 8, {{2, 1, 3, pick(-4, 2, 3, {0, 1, 2})}}) == Kf(4, -4));
    CHECK(residue_X0MN(make_order(-3, 1), 3, 9, {{3, 1, 2, pick(-3, 3, 2, {0, 0, 2})}}) == Kf(9, -3));
    CHECK(count_fiber_X0MN(o, 2, 2, {{2, 1, 1, pick(-4, 2, 1, {0, 0, 1})}}) == 2);
    // 2, not 4: with 4 the fiber total would exceed psi(8)*2*phi(2) = 24
    CHECK(count_fiber_X0MN(o, 2, 8, {{2, 1, 3, pick(-4, 2, 3, {0, 0, 3})}}) == 2);
    // halving when the upstairs field gains K although no local field contains it
    CHECK(count_fiber_X0MN(o, 3, 3, {{3, 1, 1, pick(-4, 3, 1, {0, 0, 1})}}) == 3);
}

TEST_CASE("worked fibers") {
    auto x2 = fiber_X0N(make_order(-4, 1), 2);
    REQUIRE(x2.classes.size() == 2);
    CHECK(x2.check_total == 3);
    auto x10 = fiber_X0N(make_order(-4, 1), 10);
    CHECK(x10.check_total == 18);
    CHECK(x10.classes.size() == 4);
    auto m28 = fiber_X0MN(make_order(-4, 1), 2, 8);
    CHECK(m28.check_total == 24);
    CHECK(m28.psi_check());
    auto one = fiber_X0MN(make_order(-3, 2), 1, 1);
    REQUIRE(one.classes.size() == 1);
    CHECK(one.classes[0].field == Qf(2, -3));
    CHECK_THROWS_AS(fiber_X0MN(make_order(-4, 1), 3, 4), ValidationError);
}

TEST_CASE("thread count does not change the fiber") {
    for (auto [dk, f, M, N] : std::vector<std::tuple<i64, i64, i64, i64>>{{-4, 1, 2, 120}, {-3, 6, 1, 180}, {-4, 5, 5, 100}}) {
        auto a = fiber_X0MN(make_order(dk, f), M, N, 1);
        auto b = fiber_X0MN(make_order(dk, f), M, N, 7);
        REQUIRE(a.classes.size() == b.classes.size());
        for (std::size_t i = 0; i < a.classes.size(); ++i) {
            CHECK(a.classes[i].field == b.classes[i].field);
            CHECK(a.classes[i].count == b.classes[i].count);
            CHECK(a.classes[i].type == b.classes[i].type);
        }
    }
}

TEST_CASE("field-of-moduli band") {
    auto [lo, hi] = moduli_bounds(make_order(-4, 1), {{2, 2}, {5, 1}});
    CHECK(lo == Qf(20, -4));
    CHECK(hi == Kf(20, -4));
    auto [lo1, hi1] = moduli_bounds(make_order(-4, 3), {{2, 1}});
    CHECK(lo1 == Qf(6, -4));
    CHECK(hi1 == Kf(6, -4));
}

TEST_CASE("primitive fields and degrees of composite levels") {
    auto a = primitive_X0MN(make_order(-4, 1), 1, 5);
    CHECK(a.fields == std::vector<FieldSymbol>{Qf(5, -4), Kf(1, -4)});
    CHECK(a.degrees == std::vector<i64>{2});
    auto b = primitive_X0MN(make_order(-3, 1), 2, 2);
    CHECK(b.fields == std::vector<FieldSymbol>{Kf(2, -3)});
    CHECK(b.degrees == std::vector<i64>{2});
    auto c = primitive_X0MN(make_order(-4, 5), 1, 125);
    CHECK(c.degrees.size() == 2);
    CHECK(c.all_two_field_1_5b);
    for (auto [dk, f, M, N] : std::vector<std::tuple<i64, i64, i64, i64>>{{-4, 1, 1, 5}, {-4, 5, 1, 125}, {-3, 1, 2, 30}, {-4, 3, 2, 40}}) {
        auto p = primitive_X0MN(make_order(dk, f), M, N);
        auto fib = fiber_X0MN(make_order(dk, f), M, N);
        CHECK(minimal_degrees(fib.classes) == p.degrees);
    }
}

TEST_CASE("X1 over X0") {
    auto a = x1_fiber(make_order(-4, 1), 1, 5, true);
    CHECK(a.e == 2);
    CHECK(a.f == 1);
    CHECK_FALSE(a.inert);
    auto b = x1_fiber(make_order(-3, 1), 1, 7, true);
    CHECK(b.e == 3);
    CHECK(b.f == 1);
    auto c = x1_fiber(make_order(-4, 2), 1, 7, false);
    CHECK(c.inert);
    CHECK(c.f == 3);
    CHECK(x1_fiber(make_order(-4, 1), 1, 2, false).f == 1);
    CHECK_THROWS_AS(x1_fiber(make_order(-4, 2), 1, 5, true), ValidationError);
    CHECK_THROWS_AS(x1_fiber(make_order(-4, 1), 2, 10, true), ValidationError);
    CHECK_THROWS_AS(x1_fiber(make_order(-4, 1), 1, 3, true), ValidationError);
    CHECK_THROWS_AS(x1_fiber(make_order(-4, 1), 1, 7, true), ValidationError);
}
