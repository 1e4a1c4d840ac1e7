#include <doctest.h>

#include <limits>

#include "cmlocus/arith.hpp"

using namespace cmlocus;

TEST_CASE("checked arithmetic throws instead of wrapping") {
    const i64 big = std::numeric_limits<i64>::max();
    CHECK_THROWS_AS(checked_add(big, 1), std::overflow_error);
    CHECK_THROWS_AS(checked_mul(big / 2 + 1, 2), std::overflow_error);
    CHECK_THROWS_AS(ipow(10, 19), std::overflow_error);
    CHECK(ipow(13, 5) == 371293);
    CHECK(mod(-7, 5) == 3);
}

TEST_CASE("kronecker symbol") {
    CHECK(kronecker(-4, 2) == 0);
    CHECK(kronecker(-4, 5) == 1);
    CHECK(kronecker(-3, 2) == -1);
    CHECK(kronecker(-4, 3) == -1);
    CHECK(kronecker(-3, 7) == 1);
    CHECK(kronecker(-3, 3) == 0);
    // agrees with Euler's criterion at odd primes
    for (i64 p : {3, 5, 7, 11, 13, 101})
        for (i64 a : {-3, -4, -7, -20}) {
            if (a % p == 0) continue;
            i64 r = 1;
            for (i64 k = 0; k < (p - 1) / 2; ++k) r = mulmod(r, mod(a, p), p);
            CHECK(kronecker(a, p) == (r == 1 ? 1 : -1));
        }
}

TEST_CASE("psi, phi, divisors, factorization") {
    CHECK(psi(2) == 3);
    CHECK(psi(12) == 24);
    CHECK(phi(5) == 4);
    CHECK(phi(1) == 1);
    CHECK(divisors(12) == std::vector<i64>{1, 2, 3, 4, 6, 12});
    auto fs = factorize(360);
    REQUIRE(fs.size() == 3);
    CHECK(fs[0].p == 2);
    CHECK(fs[0].e == 3);
    CHECK(fs[2].p == 5);
    CHECK(is_prime(13));
    CHECK_FALSE(is_prime(1));
    CHECK(ord(200, 2) == 3);
    CHECK(prime_to_part(200, 2) == 25);
    CHECK_THROWS_AS(factorize(ipow(10, 13)), ValidationError);
}
