#include <doctest.h>

#include "cmlocus/forms.hpp"

using namespace cmlocus;

TEST_CASE("splitting discriminants") {
    auto a = split_discriminant(-16);
    CHECK(a.delta_K == -4);
    CHECK(a.f == 2);
    auto b = split_discriminant(-27);
    CHECK(b.delta_K == -3);
    CHECK(b.f == 3);
    auto c = split_discriminant(-243);
    CHECK(c.delta_K == -3);
    CHECK(c.f == 9);
    CHECK(split_discriminant(-20).delta_K == -20);
    CHECK_THROWS_AS(split_discriminant(-5), ValidationError);
    CHECK_THROWS_AS(order_from_delta(-20), ValidationError);
    CHECK(make_order(-4, 5).delta == -100);
}

TEST_CASE("class numbers from reduced forms") {
    CHECK(class_number(-4) == 1);
    CHECK(class_number(-64) == 2);
    CHECK(class_number(-243) == 3);
    CHECK(class_number(-23) == 3);
    CHECK(class_number(-56) == 4);
    CHECK(class_number(-108) == 3);
    CHECK(class_number(-256) == 4);
    for (const auto& q : reduced_forms(-9999 * 4)) CHECK(is_reduced(q));
}

TEST_CASE("relative ring class degree matches the form count") {
    CHECK(rcf_rel_degree(-3, 1) == 1);
    CHECK(rcf_rel_degree(-4, 1) == 1);
    CHECK(rcf_rel_degree(-3, 6) == 3);
    CHECK(rcf_rel_degree(-4, 2) == 1);
    for (i64 dk : {-3, -4})
        for (i64 f = 1; f <= 60; ++f) CHECK(rcf_rel_degree(dk, f) == class_number(f * f * dk));
}

TEST_CASE("composition is a group law on classes") {
    const i64 d = -4 * 65;
    auto forms = reduced_forms(d);
    const Form e = principal_form(d);
    for (const auto& q : forms) {
        CHECK(compose(q, e) == q);
        CHECK(compose(q, form_inverse(q)) == e);
        for (const auto& r : forms) CHECK(compose(q, r) == compose(r, q));
    }
}

TEST_CASE("two-torsion: ambiguous forms against genus theory") {
    CHECK(two_torsion_count(-4) == 1);
    CHECK(two_torsion_count(-100) == 2);
    CHECK(two_torsion_count(-243) == 1);
    for (i64 n = 3; n <= 4000; ++n) {
        if (!is_discriminant(-n)) continue;
        CHECK(two_torsion_genus(-n) == two_torsion_count(-n));
    }
    for (i64 dk : {-3, -4})
        for (i64 m = 1; m <= 200; ++m) CHECK(two_torsion_genus(dk, m) == two_torsion_genus(m * m * dk));
}
