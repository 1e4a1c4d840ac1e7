#pragma once

#include <string>
#include <vector>

#include "tables.hpp"

namespace cmlocus {

struct PrimitiveLocal {
    std::vector<FieldSymbol> fields;  // one or two; the rational one first when there are two
    std::string case_id;

    bool two_fields() const { return fields.size() == 2; }
};

// Primitive residue fields of Delta-CM points on X0(ell^a', ell^a).
inline PrimitiveLocal primitive_prime_power(const OrderDisc& ord, i64 ell, int ap, int a) {
    if (!is_prime(ell)) throw ValidationError("primitive_prime_power: ell must be prime");
    if (a < 1 || ap < 0 || ap > a) throw ValidationError("primitive_prime_power: need 0 <= a' <= a and a >= 1");
    if (ord.delta_K != -3 && ord.delta_K != -4) throw ValidationError("primitive_prime_power: delta_K must be -3 or -4");
    const i64 f = ord.f, dk = ord.delta_K;
    const int L = ord.level(ell);
    const int chiD = kronecker(ord.delta, ell), chiK = kronecker(dk, ell);
    const int o2 = cmlocus::ord(-dk, 2);
    auto Q = [&](int j) { return Qf(checked_mul(ipow(ell, j), f), dk); };
    auto K = [&](int j) { return Kf(checked_mul(ipow(ell, j), f), dk); };
    auto one = [](FieldSymbol F, const char* id) { return PrimitiveLocal{{F}, id}; };
    auto two = [](FieldSymbol F, FieldSymbol G, const char* id) { return PrimitiveLocal{{F, G}, id}; };
    using std::max;

    if (ap == 0) {
        if (ell == 2 && a == 1) return one(chiD != -1 ? Q(0) : Q(1), "1.1");
        if (L == 0) {
            if (chiD == 1) return two(Q(a), K(0), "1.2");
            if (chiD == -1) return one(Q(a), "1.3");
            return one(Q(a - 1), "1.4");
        }
        if (ell > 2) {
            if (chiK == 1) return a <= 2 * L ? one(Q(0), "1.5") : two(Q(a - 2 * L), K(0), "1.5b");
            if (chiK == -1) return one(a <= 2 * L ? Q(0) : Q(a - 2 * L), "1.6");
            return one(a <= 2 * L + 1 ? Q(0) : Q(a - 2 * L - 1), "1.7");
        }
        if (chiK == 1) {
            if (L == 1) return two(Q(a), K(0), "1.8");
            if (a <= 2 * L - 2) return one(Q(0), "1.8");
            return two(Q(a - 2 * L + 2), K(0), "1.8");
        }
        if (chiK == -1) {
            if (L == 1) return two(Q(a), K(a - 2), "1.9");
            if (a <= 2 * L - 2) return one(Q(0), "1.9");
            return two(Q(a - 2 * L + 2), K(max(a - 2 * L, 0)), "1.9");
        }
        if (o2 == 2) return a <= 2 * L ? one(Q(0), "1.10") : two(Q(a - 2 * L), K(a - 2 * L - 1), "1.10");
        return one(a <= 2 * L + 1 ? Q(0) : Q(a - 2 * L - 1), "1.11");
    }

    if (ipow(ell, ap) >= 3) {
        if (chiK == 1) return one(K(ap), "2.1");
        if (chiK == -1) return one(K(max(ap, a - 2 * L)), "2.2");
        return one(K(max(ap, a - 2 * L - 1)), "2.3");
    }

    // ell^a' = 2
    if (ord.is_odd()) {
        if (a == 1) return one(K(1), "3.1");
        if (chiD == 1) return one(K(1), "3.2");
        return one(K(a), "3.3");
    }
    if (a == 1) return one(Q(1), "4.0");
    if (L == 0) return o2 == 2 ? two(Q(a), K(a - 1), "4.1") : one(Q(a - 1), "4.2");
    if (chiK == 1) {
        if (L == 1) return two(Q(a), K(1), "4.3");
        if (a <= 2 * L - 1) return one(Q(1), "4.4");
        return two(Q(a - 2 * L + 2), K(1), "4.5");
    }
    if (chiK == -1) {
        if (L == 1) return a == 2 ? two(Q(2), K(1), "4.6") : two(Q(a), K(a - 2), "4.7");
        if (a <= 2 * L - 1) return one(Q(1), "4.8");
        if (a == 2 * L) return two(Q(2), K(1), "4.9");
        return two(Q(a - 2 * L + 2), K(a - 2 * L), "4.10");
    }
    if (o2 == 2) return a <= 2 * L + 1 ? one(Q(1), "4.11") : two(Q(a - 2 * L), K(a - 2 * L - 1), "4.12");
    return one(a <= 2 * L + 1 ? Q(1) : Q(a - 2 * L - 1), a <= 2 * L + 1 ? "4.13" : "4.14");
}

// One prime's share of a point on X0(M,N): the prime, its exponents in M and N, and the class of the
// image on X0(ell^a).
struct PrimeLocalDatum {
    i64 ell;
    int a_prime;
    int a;
    ClosedPointClass down;

    int ascents() const { return std::get<0>(down.path); }
    int horizontals() const { return std::get<1>(down.path); }
    int descents() const { return std::get<2>(down.path); }
    bool contains_K() const { return down.field.contains_K(); }
    bool purely_descending() const { return ascents() == 0 && horizontals() == 0; }
    bool completely_horizontal() const { return ascents() == 0 && descents() == 0; }
};

namespace detail {

inline int conductor_exponent(const FieldSymbol& F, i64 ell, i64 f) {
    if (F.m % f != 0) throw ConsistencyError("field conductor not divisible by f");
    return cmlocus::ord(F.m / f, ell);
}

}  // namespace detail

// Field of a point of X0(ell^a', ell^a) above the class `datum.down` (a' >= 1).
inline FieldSymbol lift_residue_prime_power(const OrderDisc& ord, const PrimeLocalDatum& datum) {
    const i64 ell = datum.ell, f = ord.f, dk = ord.delta_K;
    const int ap = datum.a_prime, a = datum.a;
    if (ap < 1 || ap > a) throw ValidationError("lift_residue_prime_power: need 1 <= a' <= a");
    const bool small = ipow(ell, ap) == 2;
    if (f >= 2) {
        const int j = detail::conductor_exponent(datum.down.field, ell, f);
        if (!small || ord.is_odd()) return Kf(checked_mul(ipow(ell, std::max(ap, j)), f), dk);
        // the level-2 structure at the surface and a path leaving it horizontally are never real together
        if (ord.level(2) == 0 && a >= 2 && datum.horizontals() > 0) return Kf(checked_mul(ipow(2, std::max(1, j)), f), dk);
        return {datum.down.field.base, checked_mul(ipow(2, std::max(1, j)), f), dk};
    }
    const int d = datum.descents();
    if (!small || dk == -3) return Kf(ipow(ell, std::max(ap, d)), dk);
    if (a >= 2 && !datum.purely_descending()) return Kf(ipow(2, std::max(1, d)), dk);
    return Qf(ipow(2, a), dk);
}

}  // namespace cmlocus
