#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmlocus {

using i64 = std::int64_t;

// Bad input from the caller (CLI exit code 2).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A computed invariant failed (CLI exit code 3).
struct ConsistencyError : std::logic_error {
    using std::logic_error::logic_error;
};

inline i64 checked_add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in addition");
    return r;
}

inline i64 checked_sub(i64 a, i64 b) {
    i64 r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("integer overflow in subtraction");
    return r;
}

inline i64 checked_mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in multiplication");
    return r;
}

inline i64 ipow(i64 base, int exp) {
    if (exp < 0) throw ValidationError("negative exponent");
    i64 r = 1;
    for (int i = 0; i < exp; ++i) r = checked_mul(r, base);
    return r;
}

// Least non-negative residue.
inline i64 mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline i64 mulmod(i64 a, i64 b, i64 m) {
    return static_cast<i64>((static_cast<__int128>(a) * b) % m);
}

inline i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

inline i64 lcm(i64 a, i64 b) {
    if (a == 0 || b == 0) return 0;
    return checked_mul(a / gcd(a, b), b);
}

// Returns g = gcd(a, b) and sets x, y with a*x + b*y = g.
inline i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
    i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        i64 q = a / b;
        i64 t = a - q * b; a = b; b = t;
        t = x0 - q * x1; x0 = x1; x1 = t;
        t = y0 - q * y1; y0 = y1; y1 = t;
    }
    if (a < 0) { a = -a; x0 = -x0; y0 = -y0; }
    x = x0;
    y = y0;
    return a;
}

inline i64 inverse_mod(i64 a, i64 m) {
    i64 x, y;
    if (ext_gcd(mod(a, m), m, x, y) != 1) throw std::domain_error("not invertible");
    return mod(x, m);
}

constexpr i64 kFactorCap = 1'000'000'000'000LL;

struct PrimePower {
    i64 p;
    int e;
    bool operator==(const PrimePower&) const = default;
};

inline std::vector<PrimePower> factorize(i64 n) {
    if (n <= 0) throw ValidationError("factorize: expected a positive integer, got " + std::to_string(n));
    if (n > kFactorCap) throw ValidationError("factorize: " + std::to_string(n) + " exceeds the supported bound 10^12");
    std::vector<PrimePower> out;
    for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.push_back({p, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

inline bool is_prime(i64 n) {
    if (n < 2) return false;
    if (n > kFactorCap) throw ValidationError("is_prime: input exceeds 10^12");
    for (i64 p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

inline int ord(i64 n, i64 p) {
    if (n == 0) throw ValidationError("ord of zero");
    int e = 0;
    while (n % p == 0) { n /= p; ++e; }
    return e;
}

// Largest divisor of n prime to p.
inline i64 prime_to_part(i64 n, i64 p) {
    while (n % p == 0) n /= p;
    return n;
}

// Full Kronecker symbol (a/n).
inline int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    int twos = 0;
    while (n % 2 == 0) { n /= 2; ++twos; }
    if (twos > 0) {
        if (a % 2 == 0) return 0;
        i64 a8 = mod(a, 8);
        if ((twos & 1) && (a8 == 3 || a8 == 5)) result = -result;
    }
    // Jacobi symbol (a/n) for odd n > 0.
    a = mod(a, n);
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 n8 = n % 8;
            if (n8 == 3 || n8 == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

inline i64 psi(i64 n) {
    if (n < 1) throw ValidationError("psi: expected N >= 1");
    i64 r = 1;
    for (auto [p, e] : factorize(n)) r = checked_mul(r, checked_mul(ipow(p, e - 1), p + 1));
    return r;
}

inline i64 phi(i64 n) {
    if (n < 1) throw ValidationError("phi: expected N >= 1");
    i64 r = 1;
    for (auto [p, e] : factorize(n)) r = checked_mul(r, checked_mul(ipow(p, e - 1), p - 1));
    return r;
}

inline std::vector<i64> divisors(i64 n) {
    std::vector<i64> ds{1};
    for (auto [p, e] : factorize(n)) {
        std::size_t base = ds.size();
        i64 pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

}  // namespace cmlocus
