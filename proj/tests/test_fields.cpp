#include <doctest.h>

#include "cmlocus/fields.hpp"

using namespace cmlocus;

TEST_CASE("field degrees and the class-number-one collapse") {
    CHECK(field_degree(Qf(1, -4)) == 1);
    CHECK(field_degree(Kf(6, -3)) == 6);
    CHECK(field_degree(Qf(8, -4)) == 4);
    CHECK(in_S(2, -4));
    CHECK(in_S(3, -3));
    CHECK_FALSE(in_S(5, -4));
    CHECK(canonical(Kf(2, -3)) == Kf(1, -3));
    CHECK(canonical(Qf(2, -4)) == Qf(1, -4));
    CHECK(canonical(Kf(2, -4)) == Kf(1, -4));
    CHECK(canonical(Kf(10, -4)) == Kf(10, -4));
    CHECK(to_string(Kf(12, -3)) == "K(12)");
}

TEST_CASE("embeddings") {
    CHECK(embeds(Qf(5, -4), Qf(10, -4)));
    CHECK(embeds(Qf(5, -4), Kf(5, -4)));
    CHECK_FALSE(embeds(Kf(1, -4), Qf(5, -4)));
    CHECK(is_isomorphic(Kf(6, -3), Kf(6, -3)));
    CHECK(is_isomorphic(Kf(2, -3), Kf(3, -3)));
    CHECK(properly_embeds(Kf(2, -3), Kf(6, -3)));
    CHECK_FALSE(embeds(Qf(4, -4), Qf(3, -4)));
}

TEST_CASE("composita of ring class fields") {
    auto a = compose_rcf({Kf(2, -3), Kf(3, -3)});
    CHECK(a.closure == Kf(6, -3));
    CHECK(a.index == 3);
    CHECK(result_degree(a) == field_degree(Kf(1, -3)));
    auto b = compose_rcf({Kf(6, -3), Kf(10, -3)});
    CHECK(b.closure == Kf(30, -3));
    CHECK(b.index == 1);
    auto c = compose_rcf({Kf(5, -4), Kf(7, -4)});
    CHECK(c.closure == Kf(35, -4));
    CHECK(c.index == 2);
    // dropping S-factors can leave a three-factor compositum with index > 1 despite a shared prime
    auto d = compose_rcf({Kf(2, -3), Kf(3, -3), Kf(10, -3)});
    CHECK(d.closure == Kf(30, -3));
    CHECK(d.index == 3);
    CHECK_THROWS_AS(compose_rcf({Qf(5, -4)}), ValidationError);
}

TEST_CASE("tensor products over rational ring class fields") {
    auto a = tensor_rcf(Kf(2, -4), Kf(3, -4), 1);
    REQUIRE(a.size() == 2);
    CHECK(a[0].closure == Kf(3, -4));
    CHECK(a[1].closure == Kf(3, -4));
    auto b = tensor_rcf(Qf(6, -3), Qf(10, -3), 2);
    REQUIRE(b.size() == 1);
    CHECK(b[0].closure == Qf(30, -3));
    auto c = tensor_rcf(Kf(6, -3), Kf(10, -3), 2);
    REQUIRE(c.size() == 2);
    CHECK(c[0].closure == Kf(30, -3));
    auto d = tensor_rcf(Kf(5, -4), Qf(7, -4), 1);
    REQUIRE(d.size() == 1);
    CHECK(d[0].index == 2);
    // dimensions add up: [F1:Q(m)][F2:Q(m)] = sum of factor degrees over Q(m)
    for (const auto& [F1, F2, m] : std::vector<std::tuple<FieldSymbol, FieldSymbol, i64>>{
             {Kf(5, -4), Kf(7, -4), 1}, {Qf(6, -3), Kf(10, -3), 2}, {Kf(2, -4), Qf(9, -4), 1}}) {
        const i64 base = field_degree(Qf(m, F1.delta_K));
        i64 sum = 0;
        for (const auto& r : tensor_rcf(F1, F2, m)) sum += result_degree(r) / base;
        CHECK(sum == (field_degree(F1) / base) * (field_degree(F2) / base));
    }
    CHECK_THROWS_AS(tensor_rcf(Kf(5, -4), Kf(7, -4), 5), ValidationError);
}
