#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "fields.hpp"

namespace cmlocus {

struct ClosedPointClass {
    FieldSymbol field;
    i64 d = 1;      // residual degree over Q(f)
    int e = 1;      // ramification over X(1)
    i64 count = 1;  // closed points with exactly this data
    std::string type;
    std::tuple<int, int, int> path{0, 0, 0};  // (ascending, horizontal, descending); prime-power fibers only
    int end_level = 0;
};

inline i64 residual_degree(const FieldSymbol& F, i64 f) {
    i64 top = field_degree(F), base = field_degree(Qf(f, F.delta_K));
    if (top % base != 0) throw ConsistencyError("residue field degree not divisible by [Q(f):Q]");
    return top / base;
}

inline i64 checked_total(const std::vector<ClosedPointClass>& cs) {
    i64 t = 0;
    for (const auto& c : cs) t = checked_add(t, checked_mul(checked_mul(c.e, c.d), c.count));
    return t;
}

namespace detail {

struct TableBuilder {
    const OrderDisc& ord;
    i64 ell;
    int L;
    std::vector<ClosedPointClass> out;

    void add(const char* type, int b, int h, int dd, Base base, int j, i64 count) {
        if (count == 0) return;
        if (count < 0 || j < 0) throw ConsistencyError(std::string("negative table entry in type ") + type);
        ClosedPointClass c;
        c.field = {base, checked_mul(ipow(ell, j), ord.f), ord.delta_K};
        c.d = residual_degree(c.field, ord.f);
        c.e = (ord.f == 1 && dd > 0) ? ord.w_K() / 2 : 1;
        c.count = count;
        c.type = type;
        c.path = {b, h, dd};
        c.end_level = L - b + dd;
        out.push_back(c);
    }
    void addQ(const char* t, int b, int h, int dd, int j, i64 n = 1) { add(t, b, h, dd, Base::Rational, j, n); }
    void addK(const char* t, int b, int h, int dd, int j, i64 n = 1) { add(t, b, h, dd, Base::RingClass, j, n); }
};

inline i64 half_exact(i64 v) {
    if (v % 2 != 0) throw ConsistencyError("odd count in a halved table entry");
    return v / 2;
}

}  // namespace detail

// Closed points of X0(ell^a) over J_Delta, sorted into path types.
inline std::vector<ClosedPointClass> closed_point_classes(const OrderDisc& ord, i64 ell, int a) {
    if (!is_prime(ell)) throw ValidationError("closed_point_classes: ell must be prime");
    if (a < 1) throw ValidationError("closed_point_classes: a must be at least 1");
    if (ord.delta_K != -3 && ord.delta_K != -4) throw ValidationError("closed_point_classes: delta_K must be -3 or -4");
    const int L = ord.level(ell);
    const int chi = L == 0 ? kronecker(ord.delta, ell) : kronecker(ord.delta_K, ell);
    const int o2 = cmlocus::ord(-ord.delta_K, 2);
    using std::max;
    using std::min;
    auto P = [&](int k) { return ipow(ell, k); };
    detail::TableBuilder T{ord, ell, L, {}};

    T.addQ("I", 0, 0, a, a);
    if (a <= L) T.addQ("II", a, 0, 0, 0);
    if (L == 0 && chi == 0) T.addQ("III", 0, 1, a - 1, a - 1);
    if (L == 0 && chi == 1)
        for (int h = 1; h <= a; ++h) T.addK("IV", 0, h, a - h, a - h);
    if (L >= 1 && a - L >= 1 && chi == 1) T.addK("X", L, a - L, 0, 0);

    if (ell > 2) {
        const i64 half = (ell - 1) / 2;
        if (L >= 2)
            for (int b = 1; b <= min(a - 1, L - 1); ++b)
                T.addK("V", b, 0, a - b, max(a - 2 * b, 0), checked_mul(half, P(min(b, a - b) - 1)));
        if (chi == -1 && a > L && L >= 1) {
            const int j = max(a - 2 * L, 0);
            T.addQ("VI", L, 0, a - L, j);
            T.addK("VI", L, 0, a - L, j, detail::half_exact(P(min(L, a - L)) - 1));
        }
        if (chi == 0 && L >= 1 && a >= L + 1)
            T.addK("VII", L, 0, a - L, max(a - 2 * L, 0), checked_mul(half, P(min(L, a - L) - 1)));
        if (chi == 0 && L >= 1 && a >= L + 1) {
            const int j = max(a - 2 * L - 1, 0);
            T.addQ("VIII", L, 1, a - L - 1, j);
            T.addK("VIII", L, 1, a - L - 1, j, detail::half_exact(P(min(L, a - L - 1)) - 1));
        }
        if (chi == 1 && L >= 1 && a >= L + 1) {
            const int j = max(a - 2 * L, 0);
            T.addQ("IX", L, 0, a - L, j);
            T.addK("IX", L, 0, a - L, j, detail::half_exact(checked_mul(ell - 2, P(min(L, a - L) - 1)) - 1));
        }
        if (chi == 1 && L >= 1 && a - L >= 2)
            for (int h = 1; h <= a - L - 1; ++h)
                T.addK("XI", L, h, a - L - h, max(a - 2 * L - h, 0), checked_mul(ell - 1, P(min(L, a - L - h) - 1)));
        return T.out;
    }

    // ell = 2
    if (L >= 2 && a >= 2) T.addQ("V1", 1, 0, a - 1, a - 2);
    if (L >= a && a >= 3) T.addQ("V2", a - 1, 0, 1, 0);
    if (chi != 0) {
        if (a > L && L >= 3) {
            const int j = max(a - 2 * L + 2, 0);
            T.addQ("V3", L - 1, 0, a - L + 1, j, 2);
            T.addK("V3", L - 1, 0, a - L + 1, j, P(min(a - L + 1, L - 1) - 2) - 1);
        }
        for (int b = 2; b <= min(L - 2, a - 2); ++b)
            T.addK("V4", b, 0, a - b, max(a - 2 * b, 0), P(min(b, a - b) - 2));
        if (chi == -1 && a > L && L >= 1)
            T.addK("VI", L, 0, a - L, max(a - 2 * L, 0), P(min(L, a - L) - 1));
        if (chi == 1 && L >= 1 && a - L >= 2)
            for (int h = 1; h <= a - L - 1; ++h)
                T.addK("XI", L, h, a - L - h, max(a - 2 * L - h, 0), P(min(L, a - L - h) - 1));
        return T.out;
    }
    for (int b = 2; b <= min(L - 1, a - 2); ++b)
        T.addK("V3", b, 0, a - b, max(a - 2 * b, 0), P(min(b, a - b) - 2));
    if (L == 1 && a >= 2) T.addQ("VI1", L, 0, a - L, a - 2);
    if (a == L + 1 && a >= 3) T.addQ("VI2", L, 0, a - L, 0);
    if (a >= L + 2 && L + 2 >= 4) {
        const int j = max(a - 2 * L, 0);
        if (o2 == 2) {
            T.addQ("VI3", L, 0, a - L, j, 2);
            T.addK("VI3", L, 0, a - L, j, P(min(L, a - L) - 2) - 1);
        } else {
            T.addK("VI3", L, 0, a - L, j, P(min(L, a - L) - 2));
        }
    }
    if (L >= 1 && a == L + 1) T.addQ("VIII1", L, 1, 0, 0);
    if (L >= 1 && a >= L + 2) {
        const int j = max(a - 2 * L - 1, 0);
        if (o2 == 2) {
            T.addK("VIII2", L, 1, a - L - 1, j, P(min(L, a - 1 - L) - 1));
        } else {
            T.addQ("VIII2", L, 1, a - L - 1, j, 2);
            T.addK("VIII2", L, 1, a - L - 1, j, P(min(L, a - 1 - L) - 1) - 1);
        }
    }
    return T.out;
}

}  // namespace cmlocus
