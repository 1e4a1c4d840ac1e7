#pragma once

#include <tuple>

#include "arith.hpp"

namespace cmlocus {

inline bool is_discriminant(i64 d) { return d < 0 && (mod(d, 4) == 0 || mod(d, 4) == 1); }

inline bool is_squarefree(i64 n) {
    for (auto [p, e] : factorize(n < 0 ? -n : n))
        if (e > 1) return false;
    return true;
}

inline bool is_fundamental(i64 d) {
    if (!is_discriminant(d)) return false;
    if (mod(d, 4) == 1) return is_squarefree(d);
    i64 q = d / 4;
    i64 r = mod(q, 4);
    return (r == 2 || r == 3) && is_squarefree(q);
}

inline int units_count(i64 delta) {
    if (delta == -4) return 4;
    if (delta == -3) return 6;
    return 2;
}

struct OrderDisc {
    i64 delta;
    i64 delta_K;
    i64 f;

    int w_K() const { return units_count(delta_K); }
    int w() const { return units_count(delta); }
    int level(i64 ell) const { return ord(f, ell); }
    i64 f0(i64 ell) const { return prime_to_part(f, ell); }
    bool is_odd() const { return mod(delta, 2) != 0; }
    bool operator==(const OrderDisc&) const = default;
};

inline OrderDisc split_discriminant(i64 delta) {
    if (!is_discriminant(delta))
        throw ValidationError("not a negative discriminant congruent to 0 or 1 mod 4: " + std::to_string(delta));
    i64 f = 1;
    i64 dk = delta;
    for (auto [p, e] : factorize(-delta)) {
        for (int k = 0; k < e / 2; ++k) {
            i64 cand = dk / (p * p);
            if (dk % (p * p) == 0 && is_discriminant(cand)) {
                dk = cand;
                f *= p;
            }
        }
    }
    if (!is_fundamental(dk)) throw ConsistencyError("split_discriminant produced a non-fundamental part");
    return {delta, dk, f};
}

// Orders inside Q(i) or Q(sqrt(-3)); everything in the locus layer needs this.
inline OrderDisc make_order(i64 delta_K, i64 f) {
    if (delta_K != -3 && delta_K != -4)
        throw ValidationError("fundamental discriminant must be -3 or -4, got " + std::to_string(delta_K));
    if (f < 1) throw ValidationError("conductor must be positive");
    i64 delta = checked_mul(checked_mul(f, f), delta_K);
    factorize(f);  // bound check
    return {delta, delta_K, f};
}

inline OrderDisc order_from_delta(i64 delta) {
    OrderDisc o = split_discriminant(delta);
    if (o.delta_K != -3 && o.delta_K != -4)
        throw ValidationError("discriminant " + std::to_string(delta) + " does not lie in Q(i) or Q(sqrt(-3))");
    return o;
}

struct Form {
    i64 a, b, c;
    auto operator<=>(const Form&) const = default;
    i64 disc() const { return checked_sub(checked_mul(b, b), checked_mul(4 * a, c)); }
};

inline Form reduce(Form q) {
    for (;;) {
        // bring b into (-a, a]
        if (q.b > q.a || q.b <= -q.a) {
            i64 two_a = 2 * q.a;
            i64 t = checked_sub(q.a, q.b);
            i64 k = (t - mod(t, two_a)) / two_a;  // floor(t / 2a)
            i64 nb = q.b + two_a * k;
            // c' = a k^2 + b k + c
            q.c = checked_add(checked_add(checked_mul(checked_mul(q.a, k), k), checked_mul(q.b, k)), q.c);
            q.b = nb;
        }
        if (q.a > q.c) {
            std::swap(q.a, q.c);
            q.b = -q.b;
            continue;
        }
        if (q.a == q.c && q.b < 0) q.b = -q.b;
        return q;
    }
}

inline bool is_reduced(const Form& q) {
    if (!(-q.a < q.b && q.b <= q.a && q.a <= q.c)) return false;
    if (q.a == q.c && q.b < 0) return false;
    return true;
}

constexpr i64 kClassGroupCap = 10'000'000;

inline void check_class_group_input(i64 delta, i64 cap) {
    if (!is_discriminant(delta))
        throw ValidationError("not a negative discriminant congruent to 0 or 1 mod 4: " + std::to_string(delta));
    if (-delta > cap)
        throw ValidationError("|disc| = " + std::to_string(-delta) + " exceeds the class group cap " + std::to_string(cap));
}

// Calls fn(Form) for each reduced primitive form of discriminant delta.
template <class Fn>
void for_each_reduced_form(i64 delta, Fn&& fn, i64 cap = kClassGroupCap) {
    check_class_group_input(delta, cap);
    const i64 n = -delta;
    for (i64 a = 1; 3 * a * a <= n; ++a) {
        for (i64 b = -a + 1; b <= a; ++b) {
            if (mod(b - delta, 2) != 0) continue;
            i64 num = b * b - delta;
            if (num % (4 * a) != 0) continue;
            i64 c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            if (gcd(gcd(a, b < 0 ? -b : b), c) != 1) continue;
            fn(Form{a, b, c});
        }
    }
}

inline std::vector<Form> reduced_forms(i64 delta, i64 cap = kClassGroupCap) {
    std::vector<Form> out;
    for_each_reduced_form(delta, [&](const Form& q) { out.push_back(q); }, cap);
    return out;
}

inline i64 class_number(i64 delta, i64 cap = kClassGroupCap) {
    i64 h = 0;
    for_each_reduced_form(delta, [&](const Form&) { ++h; }, cap);
    return h;
}

inline bool is_ambiguous(const Form& q) { return q.b == 0 || q.b == q.a || q.a == q.c; }

inline i64 two_torsion_count(i64 delta, i64 cap = kClassGroupCap) {
    i64 t = 0;
    for_each_reduced_form(delta, [&](const Form& q) { t += is_ambiguous(q) ? 1 : 0; }, cap);
    return t;
}

// Same count from genus theory: 2^(mu-1) with mu the number of assigned characters. No class group needed.
inline i64 two_torsion_genus(i64 delta) {
    if (!is_discriminant(delta))
        throw ValidationError("not a negative discriminant congruent to 0 or 1 mod 4: " + std::to_string(delta));
    int r = 0;
    for (auto [p, e] : factorize(-delta))
        if (p != 2) ++r;
    int mu = r;
    if (mod(delta, 4) == 0) {
        const i64 n = -delta / 4;
        const i64 n8 = mod(n, 8);
        if (n8 == 0) mu = r + 2;
        else if (n8 == 3 || n8 == 7) mu = r;
        else mu = r + 1;
    }
    return ipow(2, mu - 1);
}

// Genus count for the order of conductor m in the field of discriminant delta_K, factoring only m.
inline i64 two_torsion_genus(i64 delta_K, i64 m) {
    if (!is_fundamental(delta_K)) throw ValidationError("two_torsion_genus: delta_K must be fundamental");
    if (m < 1) throw ValidationError("two_torsion_genus: conductor must be positive");
    std::vector<i64> odd;
    for (auto [p, e] : factorize(m))
        if (p != 2) odd.push_back(p);
    for (auto [p, e] : factorize(-delta_K))
        if (p != 2 && std::find(odd.begin(), odd.end(), p) == odd.end()) odd.push_back(p);
    const int r = static_cast<int>(odd.size());
    const i64 d32 = mod(mulmod(mulmod(m, m, 128), mod(delta_K, 128), 128), 128);  // delta mod 128
    int mu = r;
    if (d32 % 4 == 0) {
        const i64 n8 = mod(-d32 / 4, 8);
        if (n8 == 0) mu = r + 2;
        else if (n8 == 3 || n8 == 7) mu = r;
        else mu = r + 1;
    }
    return ipow(2, mu - 1);
}

inline Form principal_form(i64 delta) {
    check_class_group_input(delta, kFactorCap);
    i64 b = mod(delta, 2);
    return reduce(Form{1, b, (b * b - delta) / 4});
}

// Gaussian composition of primitive forms of one discriminant (Shanks' arrangement).
inline Form compose(Form f1, Form f2) {
    const i64 delta = f1.disc();
    if (f2.disc() != delta) throw ValidationError("compose: forms of different discriminants");
    if (f1.a > f2.a) std::swap(f1, f2);
    const i64 s = (f1.b + f2.b) / 2;
    const i64 n = f2.b - s;
    i64 y1, d;
    if (f2.a % f1.a == 0) {
        y1 = 0;
        d = f1.a;
    } else {
        i64 u, v;
        d = ext_gcd(f2.a, f1.a, u, v);
        y1 = u;
    }
    i64 x2, y2, d1;
    if (s % d == 0) {
        y2 = -1;
        x2 = 0;
        d1 = d;
    } else {
        i64 u, v;
        d1 = ext_gcd(s, d, u, v);
        x2 = u;
        y2 = -v;
    }
    const i64 v1 = f1.a / d1;
    const i64 v2 = f2.a / d1;
    __int128 rr = (static_cast<__int128>(y1) * y2 % v1) * n % v1 - static_cast<__int128>(x2) * f2.c % v1;
    i64 r = static_cast<i64>(((rr % v1) + v1) % v1);
    i64 b3 = checked_add(f2.b, checked_mul(2 * v2, r));
    i64 a3 = checked_mul(v1, v2);
    i64 num = checked_sub(checked_mul(b3, b3), delta);
    if (num % (4 * a3) != 0) throw ConsistencyError("composition produced a non-integral form");
    return reduce(Form{a3, b3, num / (4 * a3)});
}

inline Form form_inverse(const Form& q) { return reduce(Form{q.a, -q.b, q.c}); }

// Relative degree [K(f):K(1)].
inline i64 rcf_rel_degree(i64 delta_K, i64 f) {
    if (f <= 0) throw ValidationError("rcf_rel_degree: conductor must be positive");
    if (f == 1) return 1;
    i64 num = 2;
    for (auto [p, e] : factorize(f)) num = checked_mul(num, checked_mul(ipow(p, e - 1), p - kronecker(delta_K, p)));
    const i64 w = units_count(delta_K);
    if (num % w != 0) throw ConsistencyError("rcf_rel_degree: non-integral value");
    return num / w;
}

}  // namespace cmlocus
