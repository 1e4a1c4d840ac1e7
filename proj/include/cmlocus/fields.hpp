#pragma once

#include <map>
#include <string>
#include <vector>

#include "forms.hpp"

namespace cmlocus {

enum class Base { Rational, RingClass };

// Q(m) = Q(j) for the order of conductor m, or K(m) = K(j); delta_K in {-3,-4}.
struct FieldSymbol {
    Base base;
    i64 m;
    i64 delta_K;

    bool operator==(const FieldSymbol&) const = default;
    bool contains_K() const { return base == Base::RingClass; }
};

inline FieldSymbol Qf(i64 m, i64 dk) { return {Base::Rational, m, dk}; }
inline FieldSymbol Kf(i64 m, i64 dk) { return {Base::RingClass, m, dk}; }

inline void check_symbol(const FieldSymbol& F) {
    if (F.delta_K != -3 && F.delta_K != -4) throw ValidationError("field symbol needs delta_K in {-3,-4}");
    if (F.m < 1) throw ValidationError("field symbol conductor must be positive");
}

inline std::string to_string(const FieldSymbol& F) {
    return std::string(F.base == Base::Rational ? "Q(" : "K(") + std::to_string(F.m) + ")";
}

// Degree over Q: h(m^2 delta_K) for Q(m), twice that for K(m).
inline i64 field_degree(const FieldSymbol& F) {
    check_symbol(F);
    i64 d = rcf_rel_degree(F.delta_K, F.m);
    return F.base == Base::RingClass ? 2 * d : d;
}

inline bool in_S(i64 f, i64 delta_K) {
    if (f < 1) throw ValidationError("in_S: conductor must be positive");
    if (delta_K == -3) return f <= 3;
    if (delta_K == -4) return f <= 2;
    throw ValidationError("in_S: delta_K must be -3 or -4");
}

// Smallest divisor of m generating the same field.
inline i64 canonical_conductor(i64 m, i64 delta_K) {
    i64 d = rcf_rel_degree(delta_K, m);
    for (i64 c : divisors(m))
        if (rcf_rel_degree(delta_K, c) == d) return c;
    return m;
}

inline FieldSymbol canonical(const FieldSymbol& F) { return {F.base, canonical_conductor(F.m, F.delta_K), F.delta_K}; }

// K(a) and K(b) meet in K(gcd(a,b)), so K(a) lies in K(b) iff d(gcd) = d(a).
inline bool embeds(const FieldSymbol& A, const FieldSymbol& B) {
    check_symbol(A);
    check_symbol(B);
    if (A.delta_K != B.delta_K) throw ValidationError("embeds: mixed delta_K");
    if (A.base == Base::RingClass && B.base == Base::Rational) return false;
    return rcf_rel_degree(A.delta_K, gcd(A.m, B.m)) == rcf_rel_degree(A.delta_K, A.m);
}

inline bool is_isomorphic(const FieldSymbol& A, const FieldSymbol& B) { return embeds(A, B) && embeds(B, A); }

inline bool properly_embeds(const FieldSymbol& A, const FieldSymbol& B) { return embeds(A, B) && !embeds(B, A); }

// Total order for sorting output: base, then conductor.
inline bool symbol_less(const FieldSymbol& A, const FieldSymbol& B) {
    if (A.base != B.base) return A.base == Base::Rational;
    return A.m < B.m;
}

struct CompositumResult {
    FieldSymbol closure;
    i64 index;
    bool operator==(const CompositumResult&) const = default;
};

inline CompositumResult compose_rcf(const std::vector<FieldSymbol>& factors) {
    if (factors.empty()) throw ValidationError("compose_rcf: no factors");
    const i64 dk = factors.front().delta_K;
    i64 closure_m = 1;
    std::vector<i64> live;
    for (const auto& F : factors) {
        check_symbol(F);
        if (F.delta_K != dk) throw ValidationError("compose_rcf: mixed delta_K values");
        if (F.base != Base::RingClass) throw ValidationError("compose_rcf: factors must be ring class fields");
        closure_m = lcm(closure_m, F.m);
        if (!in_S(F.m, dk)) live.push_back(F.m);
    }
    // merge conductors sharing a prime; components end up pairwise coprime
    std::vector<i64> groups;
    for (i64 m : live) {
        i64 acc = m;
        std::vector<i64> rest;
        for (i64 g : groups) {
            if (gcd(g, acc) > 1) acc = lcm(acc, g);
            else rest.push_back(g);
        }
        rest.push_back(acc);
        groups.swap(rest);
    }
    i64 comp_deg = 1;
    for (i64 g : groups) comp_deg = checked_mul(comp_deg, rcf_rel_degree(dk, g));
    i64 full = rcf_rel_degree(dk, closure_m);
    if (full % comp_deg != 0) throw ConsistencyError("compose_rcf: compositum degree does not divide closure degree");
    return {Kf(closure_m, dk), full / comp_deg};
}

// Decomposition of F1 (x) F2 over Q(m) into fields; each field is given as the compositum inside `closure`
// with the stated index (index 1 means the closure itself).
inline std::vector<CompositumResult> tensor_rcf(const FieldSymbol& F1, const FieldSymbol& F2, i64 m) {
    check_symbol(F1);
    check_symbol(F2);
    const i64 dk = F1.delta_K;
    if (F2.delta_K != dk) throw ValidationError("tensor_rcf: mixed delta_K values");
    if (m < 1 || F1.m % m != 0 || F2.m % m != 0)
        throw ValidationError("tensor_rcf: base conductor must divide both conductors");
    const i64 g = gcd(F1.m, F2.m);
    if (!is_isomorphic(Qf(m, dk), Qf(g, dk)))
        throw ValidationError("tensor_rcf: base field must be Q(gcd of the conductors)");

    const int ks = (F1.contains_K() ? 1 : 0) + (F2.contains_K() ? 1 : 0);
    const Base outer = ks > 0 ? Base::RingClass : Base::Rational;
    std::vector<CompositumResult> out;

    if (in_S(F1.m, dk) || in_S(F2.m, dk)) {
        const FieldSymbol& big = in_S(F1.m, dk) ? F2 : F1;
        const i64 copies = ks == 2 ? 2 : 1;
        for (i64 i = 0; i < copies; ++i) out.push_back({{outer, big.m, dk}, 1});
        return out;
    }
    const i64 L = lcm(F1.m, F2.m);
    if (g > 1) {
        const i64 copies = ks == 2 ? 2 : 1;
        for (i64 i = 0; i < copies; ++i) out.push_back({{outer, L, dk}, 1});
        return out;
    }
    const i64 copies = ks == 2 ? 2 : 1;
    const i64 idx = units_count(dk) / 2;
    for (i64 i = 0; i < copies; ++i) out.push_back({{outer, L, dk}, idx});
    return out;
}

inline i64 result_degree(const CompositumResult& r) { return field_degree(r.closure) / r.index; }

}  // namespace cmlocus
