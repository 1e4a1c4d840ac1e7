#include <doctest.h>

#include "cmlocus/tables.hpp"

using namespace cmlocus;

namespace {

struct Row {
    FieldSymbol F;
    i64 d;
    int e;
    i64 count;
    std::tuple<int, int, int> path;
};

void same(const std::vector<ClosedPointClass>& got, const std::vector<Row>& want) {
    REQUIRE(got.size() == want.size());
    for (const auto& w : want) {
        bool hit = false;
        for (const auto& c : got)
            hit = hit || (c.field == w.F && c.d == w.d && c.e == w.e && c.count == w.count && c.path == w.path);
        CHECK_MESSAGE(hit, to_string(w.F));
    }
}

}  // namespace

TEST_CASE("small prime-power fibers") {
    same(closed_point_classes(make_order(-4, 1), 2, 1), {{Qf(1, -4), 1, 1, 1, {0, 1, 0}}, {Qf(2, -4), 1, 2, 1, {0, 0, 1}}});
    same(closed_point_classes(make_order(-3, 1), 3, 1), {{Qf(1, -3), 1, 1, 1, {0, 1, 0}}, {Qf(3, -3), 1, 3, 1, {0, 0, 1}}});
    same(closed_point_classes(make_order(-4, 2), 2, 2),
         {{Qf(8, -4), 4, 1, 1, {0, 0, 2}}, {Qf(2, -4), 1, 1, 1, {1, 0, 1}}, {Qf(2, -4), 1, 1, 1, {1, 1, 0}}});
    same(closed_point_classes(make_order(-4, 1), 5, 1), {{Qf(5, -4), 2, 2, 1, {0, 0, 1}}, {Kf(1, -4), 2, 1, 1, {0, 1, 0}}});
    same(closed_point_classes(make_order(-3, 1), 2, 1), {{Qf(2, -3), 1, 3, 1, {0, 0, 1}}});
}

TEST_CASE("psi-sum and conductor divisibility") {
    for (i64 dk : {-3, -4})
        for (i64 f = 1; f <= 8; ++f)
            for (i64 ell : {2, 3, 5, 7, 11, 13})
                for (int a = 1; a <= 6; ++a) {
                    const OrderDisc ord = make_order(dk, f);
                    auto cs = closed_point_classes(ord, ell, a);
                    CHECK(checked_total(cs) == psi(ipow(ell, a)));
                    for (const auto& c : cs) {
                        // the target has conductor f * ell^(end level - L); the field sees lcm of both
                        const i64 target = prime_to_part(f, ell) * ipow(ell, c.end_level);
                        CHECK(c.field.m % lcm(f, target) == 0);
                        CHECK((c.e == 1 || (f == 1 && std::get<2>(c.path) > 0)));
                        CHECK(c.count > 0);
                    }
                }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(closed_point_classes(make_order(-4, 1), 4, 1), ValidationError);
    CHECK_THROWS_AS(closed_point_classes(make_order(-4, 1), 2, 0), ValidationError);
}
