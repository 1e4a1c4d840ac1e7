#include <doctest.h>

#include "cmlocus/primitive.hpp"

using namespace cmlocus;

namespace {

ClosedPointClass pick(i64 dk, i64 f, i64 ell, int a, std::tuple<int, int, int> path) {
    for (const auto& c : closed_point_classes(make_order(dk, f), ell, a))
        if (c.path == path) return c;
    FAIL("no class with that path");
    return {};
}

}  // namespace

TEST_CASE("primitive fields of prime-power levels") {
    auto a = primitive_prime_power(make_order(-4, 1), 5, 0, 1);
    CHECK(a.case_id == "1.2");
    CHECK(a.fields == std::vector<FieldSymbol>{Qf(5, -4), Kf(1, -4)});
    auto b = primitive_prime_power(make_order(-3, 1), 2, 1, 1);
    CHECK(b.case_id == "3.1");
    CHECK(b.fields == std::vector<FieldSymbol>{Kf(2, -3)});
    auto c = primitive_prime_power(make_order(-4, 1), 2, 1, 2);
    CHECK(c.case_id == "4.1");
    CHECK(c.fields == std::vector<FieldSymbol>{Qf(4, -4), Kf(2, -4)});
    auto d = primitive_prime_power(make_order(-4, 5), 5, 0, 3);
    CHECK(d.case_id == "1.5b");
    CHECK(d.fields == std::vector<FieldSymbol>{Qf(25, -4), Kf(5, -4)});
    CHECK(primitive_prime_power(make_order(-4, 3), 2, 1, 3).fields == std::vector<FieldSymbol>{Qf(24, -4), Kf(12, -4)});
    CHECK_THROWS_AS(primitive_prime_power(make_order(-4, 1), 6, 0, 1), ValidationError);
    CHECK_THROWS_AS(primitive_prime_power(make_order(-4, 1), 2, 2, 1), ValidationError);
}

TEST_CASE("fields above X0(ell^a) on X0(ell^a', ell^a)") {
    const OrderDisc o = make_order(-4, 1);
    CHECK(lift_residue_prime_power(o, {2, 1, 2, pick(-4, 1, 2, 2, {0, 0, 2})}) == Qf(4, -4));
    CHECK(lift_residue_prime_power(o, {2, 1, 2, pick(-4, 1, 2, 2, {0, 1, 1})}) == Kf(2, -4));
    CHECK(lift_residue_prime_power(make_order(-3, 1), {3, 1, 2, pick(-3, 1, 3, 2, {0, 0, 2})}) == Kf(9, -3));
    // f > 1 at the surface: leaving horizontally first forces K
    CHECK(lift_residue_prime_power(make_order(-4, 3), {2, 1, 3, pick(-4, 3, 2, 3, {0, 1, 2})}) == Kf(12, -4));
    CHECK(lift_residue_prime_power(make_order(-4, 3), {2, 1, 3, pick(-4, 3, 2, 3, {0, 0, 3})}) == Qf(24, -4));
    CHECK_THROWS_AS(lift_residue_prime_power(o, {2, 0, 2, pick(-4, 1, 2, 2, {0, 0, 2})}), ValidationError);
}
