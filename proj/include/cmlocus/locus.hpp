#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "primitive.hpp"

namespace cmlocus {

struct FiberReport {
    i64 M = 1, N = 1;
    OrderDisc order{};
    std::vector<ClosedPointClass> classes;
    i64 check_total = 0;
    i64 expected_total = 0;  // psi(N) * M * phi(M)

    bool psi_check() const { return check_total == expected_total; }
};

inline void check_levels(i64 M, i64 N) {
    if (M < 1 || N < 1) throw ValidationError("levels must be positive");
    if (N % M != 0) throw ValidationError("M must divide N");
    factorize(N);
}

inline i64 covering_degree(i64 M, i64 N) {
    check_levels(M, N);
    return checked_mul(checked_mul(psi(N), M), phi(M));
}

// Residue field of a Delta-CM point on X(N) (full level structure up to sign).
inline FieldSymbol x_nn_residue(const OrderDisc& ord, i64 N) {
    if (N < 2) throw ValidationError("x_nn_residue: N must be at least 2");
    const i64 f = ord.f, dk = ord.delta_K;
    if (N >= 3) return Kf(checked_mul(N, f), dk);
    if (ord.delta == -4) return Qf(1, dk);
    if (ord.delta == -3) return Kf(1, dk);
    return ord.is_odd() ? Kf(2 * f, dk) : Qf(2 * f, dk);
}

namespace detail {

inline void check_data(const std::vector<PrimeLocalDatum>& data) {
    std::vector<i64> seen;
    for (const auto& p : data) {
        if (std::find(seen.begin(), seen.end(), p.ell) != seen.end())
            throw ValidationError("prime " + std::to_string(p.ell) + " appears twice");
        seen.push_back(p.ell);
        if (p.a < 1 || p.a_prime < 0 || p.a_prime > p.a) throw ValidationError("prime datum exponents out of range");
    }
}

inline void require_maximal(const OrderDisc& ord, const char* who) {
    if (ord.f != 1) throw ValidationError(std::string(who) + ": needs Delta in {-3,-4}");
}

inline i64 pow2(int k) { return k <= 0 ? 1 : ipow(2, k); }

}  // namespace detail

// Field of the point of X0(N) with the given prime-local classes, Delta in {-3,-4}.
inline FieldSymbol residue_X0N(const OrderDisc& ord, const std::vector<PrimeLocalDatum>& data) {
    detail::require_maximal(ord, "residue_X0N");
    detail::check_data(data);
    i64 m = 1;
    bool withK = false;
    for (const auto& p : data) {
        m = checked_mul(m, ipow(p.ell, p.descents()));
        if (kronecker(ord.delta_K, p.ell) == 1 && p.horizontals() > 0) withK = true;
    }
    return withK ? Kf(m, ord.delta_K) : Qf(m, ord.delta_K);
}

// Points of X0(N) above one tuple of prime-local classes: how many, and their common field.
inline std::pair<i64, FieldSymbol> count_fiber_X0N(const OrderDisc& ord, const std::vector<PrimeLocalDatum>& data) {
    detail::check_data(data);
    if (data.empty()) return {1, Qf(ord.f, ord.delta_K)};
    int s = 0;
    for (const auto& p : data) s += p.contains_K() ? 1 : 0;
    const i64 count = s == 0 ? 1 : detail::pow2(s - 1);
    if (ord.f == 1) return {count, residue_X0N(ord, data)};
    FieldSymbol acc = data.front().down.field;
    for (std::size_t i = 1; i < data.size(); ++i) {
        auto parts = tensor_rcf(acc, data[i].down.field, ord.f);
        for (const auto& r : parts)
            if (r.index != 1) throw ConsistencyError("tensor factor is not a ring class field");
        acc = parts.front().closure;
    }
    return {count, acc};
}

inline FieldSymbol residue_X0MN(const OrderDisc& ord, i64 M, i64 N, const std::vector<PrimeLocalDatum>& data) {
    check_levels(M, N);
    detail::check_data(data);
    const i64 dk = ord.delta_K;
    if (ord.f >= 2) {
        std::vector<PrimeLocalDatum> lifted = data;
        for (auto& p : lifted)
            if (p.a_prime > 0) p.down.field = lift_residue_prime_power(ord, p);
        return count_fiber_X0N(ord, lifted).second;
    }
    if (M == 1) return residue_X0N(ord, data);
    if (M >= 3 || ord.delta == -3) {
        i64 m = 1;
        for (const auto& p : data) m = checked_mul(m, ipow(p.ell, std::max(p.a_prime, p.descents())));
        return Kf(m, dk);
    }
    // M = 2, Delta = -4
    const PrimeLocalDatum* two = nullptr;
    for (const auto& p : data)
        if (p.ell == 2) two = &p;
    if (!two || two->a_prime != 1) throw ValidationError("residue_X0MN: M = 2 needs a datum at 2 with a' = 1");
    if (two->a >= 2 && !two->purely_descending()) {
        i64 m = 1;
        for (const auto& p : data) m = checked_mul(m, ipow(p.ell, std::max(p.a_prime, p.descents())));
        return Kf(m, dk);
    }
    i64 m = ipow(2, two->a);
    bool withK = false;
    for (const auto& p : data) {
        if (p.ell == 2) continue;
        m = checked_mul(m, ipow(p.ell, p.descents()));
        withK = withK || p.contains_K();
    }
    return withK ? Kf(m, dk) : Qf(m, dk);
}

// Number of points of X0(M,N) above a tuple of prime-local classes (Delta in {-3,-4}, M >= 2), by the
// closed count formula. The halving applies when no local field contains K but the upstairs one does.
inline i64 count_fiber_X0MN(const OrderDisc& ord, i64 M, i64 N, const std::vector<PrimeLocalDatum>& data) {
    detail::require_maximal(ord, "count_fiber_X0MN");
    check_levels(M, N);
    detail::check_data(data);
    int s = 0;
    for (const auto& p : data) s += p.contains_K() ? 1 : 0;
    i64 num = checked_mul(detail::pow2(s - 1), checked_mul(M, phi(M)));
    i64 den = 1;
    for (const auto& p : data) {
        const int d = p.descents();
        if (p.a_prime > d && d == 0)
            den = checked_mul(den, checked_mul(ipow(p.ell, p.a_prime - 1), p.ell - kronecker(ord.delta_K, p.ell)));
        else if (p.a_prime > d)
            den = checked_mul(den, ipow(p.ell, p.a_prime - d));
    }
    if (s == 0 && residue_X0MN(ord, M, N, data).contains_K()) den = checked_mul(den, 2);
    if (num % den != 0) throw ConsistencyError("count formula is not integral");
    const i64 c = num / den;
    if (c <= 0) throw ConsistencyError("count formula is not positive");
    return c;
}

inline std::pair<FieldSymbol, FieldSymbol> moduli_bounds(const OrderDisc& ord,
                                                         const std::vector<std::pair<i64, int>>& exponents) {
    i64 m = ord.f;
    for (auto [ell, b] : exponents) {
        if (!is_prime(ell) || b < 0) throw ValidationError("moduli_bounds: need primes with exponents >= 0");
        m = checked_mul(m, ipow(ell, b));
    }
    return {Qf(m, ord.delta_K), Kf(m, ord.delta_K)};
}

namespace detail {

struct LocalFactor {
    i64 ell;
    int a_prime, a;
    std::vector<ClosedPointClass> down;  // classes on X0(ell^a)
    std::vector<ClosedPointClass> up;    // the points above them on X0(ell^a', ell^a) when f >= 2
};

inline std::string join_type(const std::string& acc, const std::string& t, i64 ell) {
    std::string piece = t + "@" + std::to_string(ell);
    return acc.empty() ? piece : acc + "," + piece;
}

// Points of X0(ell^a', ell^a) above one class, for f >= 2 (all unramified over X0(ell^a)).
inline ClosedPointClass lift_class(const OrderDisc& ord, const LocalFactor& lf, const ClosedPointClass& y) {
    PrimeLocalDatum datum{lf.ell, lf.a_prime, lf.a, y};
    ClosedPointClass c = y;
    c.field = lift_residue_prime_power(ord, datum);
    if (!embeds(y.field, c.field)) throw ConsistencyError("lifted field does not contain the field below");
    const i64 rel = field_degree(c.field) / field_degree(y.field);
    const i64 deg = checked_mul(ipow(lf.ell, lf.a_prime), phi(ipow(lf.ell, lf.a_prime)));
    if (checked_mul(y.count, deg) % rel != 0) throw ConsistencyError("lifted point count is not integral");
    c.count = checked_mul(y.count, deg) / rel;
    c.d = residual_degree(c.field, ord.f);
    c.e = y.e;
    c.type = y.type + "'";
    return c;
}

inline void check_band(const OrderDisc& ord, const std::vector<std::pair<i64, int>>& exps, const FieldSymbol& F) {
    auto [lo, hi] = moduli_bounds(ord, exps);
    if (!embeds(lo, F) || !embeds(F, hi))
        throw ConsistencyError("residue field " + to_string(F) + " outside its field-of-moduli band");
}

// All classes for the combinations whose first-prime index lies in [lo, hi).
inline std::vector<ClosedPointClass> assemble(const OrderDisc& ord, i64 M, i64 N, const std::vector<LocalFactor>& lfs,
                                              std::size_t lo, std::size_t hi) {
    std::vector<ClosedPointClass> out;
    const std::size_t r = lfs.size();
    std::vector<std::size_t> idx(r, 0);
    const i64 w2 = ord.w_K() / 2;
    auto emit = [&]() {
        ClosedPointClass c;
        if (ord.f >= 2) {
            std::vector<PrimeLocalDatum> data;
            std::vector<std::pair<i64, int>> exps;
            for (std::size_t i = 0; i < r; ++i) {
                const auto& pick = lfs[i].a_prime > 0 ? lfs[i].up[idx[i]] : lfs[i].down[idx[i]];
                data.push_back({lfs[i].ell, lfs[i].a_prime, lfs[i].a, pick});
                c.type = join_type(c.type, pick.type, lfs[i].ell);
                exps.push_back({lfs[i].ell, detail::conductor_exponent(pick.field, lfs[i].ell, ord.f)});
            }
            auto [copies, F] = count_fiber_X0N(ord, data);
            check_band(ord, exps, F);
            c.field = F;
            c.count = copies;
            for (const auto& p : data) c.count = checked_mul(c.count, p.down.count);
            c.e = 1;
        } else {
            std::vector<PrimeLocalDatum> data;
            bool horizontal_only = true;
            for (std::size_t i = 0; i < r; ++i) {
                const auto& pick = lfs[i].down[idx[i]];
                data.push_back({lfs[i].ell, lfs[i].a_prime, lfs[i].a, pick});
                c.type = join_type(c.type, pick.type, lfs[i].ell);
                horizontal_only = horizontal_only && data.back().completely_horizontal();
            }
            auto [copies, Fdown] = count_fiber_X0N(ord, data);
            i64 count = copies;
            for (const auto& p : data) count = checked_mul(count, p.down.count);
            const int e_down = horizontal_only ? 1 : static_cast<int>(w2);
            if (M == 1) {
                c.field = Fdown;
                c.count = count;
                c.e = e_down;
            } else {
                FieldSymbol F = residue_X0MN(ord, M, N, data);
                std::vector<std::pair<i64, int>> exps;
                for (const auto& p : data) {
                    FieldSymbol local = p.a_prime > 0 ? lift_residue_prime_power(ord, p) : p.down.field;
                    exps.push_back({p.ell, cmlocus::ord(local.m, p.ell)});
                }
                check_band(ord, exps, F);
                if (!embeds(Fdown, F)) throw ConsistencyError("field upstairs does not contain the field below");
                const i64 rel = field_degree(F) / field_degree(Fdown);
                const i64 ram = w2 / e_down;
                const i64 per = checked_mul(M, phi(M));
                if (per % checked_mul(ram, rel) != 0) throw ConsistencyError("points above a point of X0(N) not integral");
                const i64 above = per / checked_mul(ram, rel);
                if (checked_mul(above, copies) != count_fiber_X0MN(ord, M, N, data))
                    throw ConsistencyError("point count disagrees with the count formula for " + c.type);
                c.field = F;
                c.count = checked_mul(count, above);
                c.e = static_cast<int>(w2);
            }
        }
        c.d = residual_degree(c.field, ord.f);
        c.path = {0, 0, 0};
        if (r == 1) {
            const auto& src = lfs[0].a_prime > 0 && ord.f >= 2 ? lfs[0].up[idx[0]] : lfs[0].down[idx[0]];
            c.path = src.path;
            c.end_level = src.end_level;
        }
        out.push_back(c);
    };
    if (r == 0) return out;
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == r) {
            emit();
            return;
        }
        const std::size_t n = lfs[i].down.size();
        const std::size_t from = i == 0 ? lo : 0, to = i == 0 ? std::min(hi, n) : n;
        for (std::size_t k = from; k < to; ++k) {
            idx[i] = k;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    return out;
}

inline bool class_less(const ClosedPointClass& x, const ClosedPointClass& y) {
    if (!(x.field == y.field)) return symbol_less(x.field, y.field);
    if (x.type != y.type) return x.type < y.type;
    if (x.d != y.d) return x.d < y.d;
    return x.e < y.e;
}

}  // namespace detail

// Delta-CM locus of X0(M,N): every closed point above J_Delta. `jobs` > 1 splits the combinations over
// threads; the result does not depend on it.
inline FiberReport fiber_X0MN(const OrderDisc& ord, i64 M, i64 N, int jobs = 1) {
    check_levels(M, N);
    if (ord.delta_K != -3 && ord.delta_K != -4) throw ValidationError("fiber_X0MN: delta_K must be -3 or -4");
    FiberReport rep;
    rep.M = M;
    rep.N = N;
    rep.order = ord;
    rep.expected_total = covering_degree(M, N);
    if (N == 1) {
        ClosedPointClass c;
        c.field = Qf(ord.f, ord.delta_K);
        c.type = "-";
        rep.classes.push_back(c);
        rep.check_total = checked_total(rep.classes);
        return rep;
    }
    std::vector<detail::LocalFactor> lfs;
    for (auto [ell, a] : factorize(N)) {
        detail::LocalFactor lf{ell, cmlocus::ord(M, ell), a, closed_point_classes(ord, ell, a), {}};
        if (lf.a_prime > 0 && ord.f >= 2)
            for (const auto& y : lf.down) lf.up.push_back(detail::lift_class(ord, lf, y));
        lfs.push_back(std::move(lf));
    }
    const std::size_t n0 = lfs.front().down.size();
    const std::size_t parts = static_cast<std::size_t>(std::clamp(jobs, 1, 64));
    std::vector<std::vector<ClosedPointClass>> chunks(std::min(parts, n0));
    if (chunks.size() <= 1) {
        chunks.assign(1, detail::assemble(ord, M, N, lfs, 0, n0));
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errs(chunks.size());
        for (std::size_t t = 0; t < chunks.size(); ++t) {
            const std::size_t lo = n0 * t / chunks.size(), hi = n0 * (t + 1) / chunks.size();
            pool.emplace_back([&, t, lo, hi] {
                try {
                    chunks[t] = detail::assemble(ord, M, N, lfs, lo, hi);
                } catch (...) {
                    errs[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errs)
            if (e) std::rethrow_exception(e);
    }
    // merge equal classes, then sort
    std::map<std::tuple<int, i64, std::string, i64, int>, ClosedPointClass> merged;
    for (auto& ch : chunks)
        for (auto& c : ch) {
            auto k = std::make_tuple(static_cast<int>(c.field.base), c.field.m, c.type, c.d, c.e);
            auto [it, fresh] = merged.try_emplace(k, c);
            if (!fresh) it->second.count = checked_add(it->second.count, c.count);
        }
    for (auto& [k, c] : merged) rep.classes.push_back(c);
    std::sort(rep.classes.begin(), rep.classes.end(), detail::class_less);
    rep.check_total = checked_total(rep.classes);
    return rep;
}

inline FiberReport fiber_X0N(const OrderDisc& ord, i64 N, int jobs = 1) { return fiber_X0MN(ord, 1, N, jobs); }

// Fields of the fiber with no other fiber field properly inside them, one per isomorphism class.
inline std::vector<FieldSymbol> minimal_fields(const std::vector<ClosedPointClass>& classes) {
    std::vector<FieldSymbol> uniq;
    for (const auto& c : classes) {
        FieldSymbol F = canonical(c.field);
        if (std::find(uniq.begin(), uniq.end(), F) == uniq.end()) uniq.push_back(F);
    }
    std::vector<FieldSymbol> out;
    for (const auto& F : uniq) {
        bool minimal = true;
        for (const auto& G : uniq)
            if (properly_embeds(G, F)) minimal = false;
        if (minimal) out.push_back(F);
    }
    std::sort(out.begin(), out.end(), symbol_less);
    return out;
}

// Degrees [Q(P):Q] occurring in the fiber with no proper divisor also occurring.
inline std::vector<i64> minimal_degrees(const std::vector<ClosedPointClass>& classes) {
    std::vector<i64> degs;
    for (const auto& c : classes) degs.push_back(field_degree(c.field));
    std::sort(degs.begin(), degs.end());
    degs.erase(std::unique(degs.begin(), degs.end()), degs.end());
    std::vector<i64> out;
    for (i64 x : degs) {
        bool minimal = true;
        for (i64 y : degs)
            if (y < x && x % y == 0) minimal = false;
        if (minimal) out.push_back(x);
    }
    return out;
}

struct PrimitiveReport {
    std::vector<FieldSymbol> fields;
    std::vector<i64> degrees;
    std::vector<std::pair<i64, PrimitiveLocal>> locals;
    int two_field_primes = 0;       // s
    bool all_two_field_1_5b = false;
    i64 rational_degree = 0;        // degree of Q(B f)
    i64 ring_class_degree = 0;      // degree of K(C f)
    bool rational_branch = false;   // M = 1, or M = 2 with Delta even
};

inline PrimitiveReport primitive_X0MN(const OrderDisc& ord, i64 M, i64 N) {
    check_levels(M, N);
    if (ord.delta_K != -3 && ord.delta_K != -4) throw ValidationError("primitive_X0MN: delta_K must be -3 or -4");
    const i64 f = ord.f, dk = ord.delta_K;
    PrimitiveReport rep;
    if (N == 1) {
        rep.fields = {Qf(f, dk)};
        rep.degrees = {field_degree(rep.fields[0])};
        rep.rational_branch = true;
        rep.rational_degree = rep.degrees[0];
        return rep;
    }
    i64 B = 1, C = 1;
    rep.rational_branch = M == 1 || (M == 2 && !ord.is_odd());
    bool all15b = true;
    for (auto [ell, a] : factorize(N)) {
        PrimitiveLocal loc = primitive_prime_power(ord, ell, cmlocus::ord(M, ell), a);
        const FieldSymbol& first = loc.fields.front();
        const FieldSymbol& kfield = loc.fields.back();
        if (rep.rational_branch && first.contains_K())
            throw ConsistencyError("case " + loc.case_id + " has no rational primitive field");
        B = checked_mul(B, ipow(ell, detail::conductor_exponent(first, ell, f)));
        C = checked_mul(C, ipow(ell, detail::conductor_exponent(kfield, ell, f)));
        if (loc.two_fields()) {
            ++rep.two_field_primes;
            all15b = all15b && loc.case_id == "1.5b";
        }
        rep.locals.push_back({ell, loc});
    }
    rep.all_two_field_1_5b = rep.two_field_primes > 0 && all15b;
    const FieldSymbol QB = Qf(checked_mul(B, f), dk), KC = Kf(checked_mul(C, f), dk);
    rep.rational_degree = field_degree(QB);
    rep.ring_class_degree = field_degree(KC);
    if (!rep.rational_branch) {
        rep.fields = {KC};
        rep.degrees = {rep.ring_class_degree};
    } else if (rep.two_field_primes == 0) {
        rep.fields = {QB};
        rep.degrees = {rep.rational_degree};
    } else {
        rep.fields = {QB, KC};
        if (rep.all_two_field_1_5b) rep.degrees = {std::min(rep.rational_degree, rep.ring_class_degree),
                                                   std::max(rep.rational_degree, rep.ring_class_degree)};
        else rep.degrees = {rep.ring_class_degree};
    }
    return rep;
}

struct X1Fiber {
    int e = 1;
    i64 f = 1;  // residue degree of the unique point above
    bool inert = true;
    i64 points = 1;
};

// Does X0(N) carry a completely horizontal Delta-CM point (every prime split, or ramified to the first power)?
inline bool has_elliptic_point(const OrderDisc& ord, i64 N) {
    for (auto [p, e] : factorize(N)) {
        const int chi = kronecker(ord.delta_K, p);
        if (!(chi == 1 || (chi == 0 && e == 1))) return false;
    }
    return true;
}

// Behaviour of X1(M,N) -> X0(M,N) above a Delta-CM point x.
inline X1Fiber x1_fiber(const OrderDisc& ord, i64 M, i64 N, bool elliptic) {
    check_levels(M, N);
    const i64 half = N <= 2 ? 1 : phi(N) / 2;
    if (!elliptic) return {1, half, true, 1};
    if (ord.f != 1) throw ValidationError("x1: elliptic points need Delta in {-3,-4}");
    if (M != 1) throw ValidationError("x1: elliptic points need M = 1");
    if (N < 4) throw ValidationError("x1: elliptic points need N >= 4");
    if (!has_elliptic_point(ord, N))
        throw ValidationError("x1: X0(" + std::to_string(N) + ") has no completely horizontal point for this Delta");
    const int e = ord.w_K() / 2;
    if (half % e != 0) throw ConsistencyError("x1: phi(N)/2 not divisible by the ramification index");
    return {e, half / e, false, 1};
}

}  // namespace cmlocus
