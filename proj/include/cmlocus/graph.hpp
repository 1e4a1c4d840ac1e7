#pragma once

#include <map>
#include <set>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "forms.hpp"

namespace cmlocus {

// x + y*omega in O_K / n, omega = i (delta_K = -4) or (1 + sqrt(-3))/2 (delta_K = -3).
struct Elt {
    i64 x = 0, y = 0;
    auto operator<=>(const Elt&) const = default;
};

struct QuadArith {
    i64 dk;

    Elt red(Elt a, i64 n) const {
        if (n == 1) return {1, 0};
        return {mod(a.x, n), mod(a.y, n)};
    }
    Elt mul(Elt a, Elt b, i64 n) const {
        if (n == 1) return {1, 0};
        i64 xx = mulmod(mod(a.x, n), mod(b.x, n), n);
        i64 yy = mulmod(mod(a.y, n), mod(b.y, n), n);
        i64 xy = mod(mulmod(mod(a.x, n), mod(b.y, n), n) + mulmod(mod(a.y, n), mod(b.x, n), n), n);
        if (dk == -4) return {mod(xx - yy, n), xy};
        return {mod(xx - yy, n), mod(xy + yy, n)};
    }
    Elt conj(Elt a, i64 n) const {
        if (dk == -4) return red({a.x, -a.y}, n);
        return red({a.x + a.y, -a.y}, n);
    }
    i64 norm(Elt a, i64 n) const {
        i64 x = mod(a.x, n), y = mod(a.y, n);
        i64 r = mulmod(x, x, n) + mulmod(y, y, n);
        if (dk == -3) r += mulmod(x, y, n);
        return mod(r, n);
    }
    // Representatives of mu_K / {+-1}.
    std::vector<Elt> mu_reps() const {
        if (dk == -4) return {{1, 0}, {0, 1}};
        return {{1, 0}, {0, 1}, {-1, 1}};
    }
};

enum class EdgeKind { Up, Horizontal, Down };

inline const char* kind_name(EdgeKind k) {
    switch (k) {
        case EdgeKind::Up: return "UP";
        case EdgeKind::Horizontal: return "HORIZONTAL";
        default: return "DOWN";
    }
}

struct Vertex {
    int level = 0;
    int copy = 0;
    Elt z;
    auto operator<=>(const Vertex&) const = default;
};

struct Edge {
    EdgeKind kind;
    Vertex src, dst;
    int label = 0;  // line code for surface descents, t for lower descents, 0/1 for pi/pibar
    int par = 0;    // position inside a bundle of parallel surface descents (0 = designated)
    bool real = false;
};

struct GraphSpec {
    i64 delta_K;
    i64 ell;
    i64 f0;
    int depth;
    bool doubled = false;
};

class IsogenyGraph {
public:
    explicit IsogenyGraph(GraphSpec s) : spec_(s), ar_{s.delta_K} {
        if (s.delta_K != -3 && s.delta_K != -4)
            throw ValidationError("graph: delta_K must be -3 or -4");
        if (!is_prime(s.ell)) throw ValidationError("graph: ell must be prime");
        if (s.f0 < 1 || gcd(s.f0, s.ell) != 1) throw ValidationError("graph: f0 must be positive and prime to ell");
        if (s.depth < 1) throw ValidationError("graph: depth must be at least 1");
        if (s.doubled && !double_cover_allowed(s.delta_K, s.ell, s.f0))
            throw ValidationError("double cover exists only for (-4,2,1) and (-3,3,1)");
        chi_ = kronecker(s.delta_K, s.ell);
        i64 n = s.f0;
        for (int L = 0; L <= s.depth; ++L) {
            if (L > 0) n = checked_mul(n, s.ell);
            if (n > 4'000'000'000LL) throw ValidationError("graph: modulus f0*ell^depth too large");
            levels_.push_back(make_level(n));
        }
        if (chi_ >= 0) {
            pi_ = find_prime_element();
            pibar_ = spec_.delta_K == -4 ? Elt{pi_.x, -pi_.y} : Elt{pi_.x + pi_.y, -pi_.y};
        }
    }

    static bool double_cover_allowed(i64 dk, i64 ell, i64 f0) {
        return f0 == 1 && ((dk == -4 && ell == 2) || (dk == -3 && ell == 3));
    }

    const GraphSpec& spec() const { return spec_; }
    const QuadArith& arith() const { return ar_; }
    int chi() const { return chi_; }
    i64 modulus(int L) const { return levels_.at(L).n; }
    int copies() const { return spec_.doubled ? 2 : 1; }
    Elt pi() const { return pi_; }

    Vertex marked(int L) const { return {L, 0, ar_.red({1, 0}, modulus(L))}; }

    bool same_class(Elt a, Elt b, i64 n) const {
        if (n == 1) return true;
        for (Elt u : ar_.mu_reps()) {
            Elt c = ar_.mul(u, b, n);
            if (mod(mulmod(a.x, c.y, n) - mulmod(a.y, c.x, n), n) == 0) return true;
        }
        return false;
    }
    bool same_vertex(const Vertex& a, const Vertex& b) const {
        return a.level == b.level && a.copy == b.copy && same_class(a.z, b.z, modulus(a.level));
    }
    bool vertex_real(const Vertex& v) const {
        i64 n = modulus(v.level);
        return same_class(ar_.conj(v.z, n), v.z, n);
    }

    // Canonical representative of the class of z in (O_K/n)^x / (Z/n)^x mu_K.
    Elt key(Elt z, int L) const {
        const auto& lv = levels_.at(L);
        if (lv.n == 1) return {1, 0};
        Elt best{};
        bool have = false;
        for (Elt u : ar_.mu_reps()) {
            Elt w = ar_.mul(u, z, lv.n);
            i64 X = 0, Y = 0;
            for (std::size_t i = 0; i < lv.q.size(); ++i) {
                i64 q = lv.q[i], p = lv.p[i];
                i64 x = mod(w.x, q), y = mod(w.y, q);
                i64 nx, ny;
                if (x % p != 0) {
                    i64 inv = inverse_mod(x, q);
                    nx = 1;
                    ny = mulmod(y, inv, q);
                } else {
                    i64 inv = inverse_mod(y, q);
                    nx = mulmod(x, inv, q);
                    ny = 1;
                }
                X = mod(X + mulmod(nx, lv.crt[i], lv.n), lv.n);
                Y = mod(Y + mulmod(ny, lv.crt[i], lv.n), lv.n);
            }
            Elt cand{X, Y};
            if (!have || std::tie(cand.y, cand.x) < std::tie(best.y, best.x)) {
                best = cand;
                have = true;
            }
        }
        return best;
    }
    Elt key(const Vertex& v) const { return key(v.z, v.level); }

    std::vector<Edge> out_edges(const Vertex& v) const {
        std::vector<Edge> out;
        const int L = v.level;
        const i64 n = modulus(L);
        const bool src_real = vertex_real(v);
        if (L >= 1) {
            Vertex t{L - 1, v.copy, ar_.red(v.z, modulus(L - 1))};
            out.push_back({EdgeKind::Up, v, t, 0, 0, src_real});
        }
        if (L == 0 && chi_ >= 0) {
            const int nlab = chi_ == 1 ? 2 : 1;
            for (int lab = 0; lab < nlab; ++lab) {
                Elt p = lab == 0 ? pi_ : pibar_;
                Vertex t{0, spec_.doubled ? 1 - v.copy : v.copy, ar_.mul(v.z, p, n)};
                bool real = chi_ == 0 && src_real;
                out.push_back({EdgeKind::Horizontal, v, t, lab, 0, real});
            }
        }
        if (L < spec_.depth) {
            const i64 nn = modulus(L + 1);
            if (L >= 1) {
                for (i64 t = 0; t < spec_.ell; ++t) {
                    Elt f{1, mod(checked_mul(t, n), nn)};
                    Vertex d{L + 1, v.copy, ar_.mul(v.z, f, nn)};
                    bool real = src_real && vertex_real(d);
                    out.push_back({EdgeKind::Down, v, d, static_cast<int>(t), 0, real});
                }
            } else {
                for (int code = 0; code <= spec_.ell; ++code) {
                    Elt line = line_of(code);
                    if (ar_.norm(line, spec_.ell) == 0) continue;
                    Vertex d{1, v.copy, crt_line(v.z, line)};
                    Edge e{EdgeKind::Down, v, d, code, 0, false};
                    if (spec_.f0 == 1) {
                        e.par = parallel_index(code);
                        e.real = surface_line_real(code, v.copy);
                    } else {
                        e.real = src_real && vertex_real(d);
                    }
                    out.push_back(e);
                }
            }
        }
        return out;
    }

    // True when `next` undoes `prev`.
    bool backtracks(const Edge& prev, const Edge& next) const {
        if (prev.kind == EdgeKind::Down && next.kind == EdgeKind::Up) return true;
        if (prev.kind == EdgeKind::Up && next.kind == EdgeKind::Down) {
            if (!same_vertex(next.dst, prev.src)) return false;
            if (next.src.level == 0 && spec_.f0 == 1) return next.label == line_code(key(prev.src));
            return true;
        }
        if (prev.kind == EdgeKind::Horizontal && next.kind == EdgeKind::Horizontal)
            return chi_ == 0 || next.label != prev.label;
        return false;
    }

    // Conjugate of an edge, as an edge of the same graph (labels normalized).
    Edge conj_edge(const Edge& e) const {
        Edge c = e;
        c.src = conj_vertex(e.src);
        c.dst = conj_vertex(e.dst);
        if (e.kind == EdgeKind::Horizontal) {
            if (chi_ == 1) c.label = 1 - e.label;
        } else if (e.kind == EdgeKind::Down && e.src.level == 0 && spec_.f0 == 1) {
            Elt l = ar_.conj(line_of(e.label), spec_.ell);
            if (e.src.copy == 1 && spec_.delta_K == -4) l = ar_.mul({0, 1}, l, spec_.ell);
            c.label = line_code(normalize_line(l));
            c.par = parallel_index(c.label);
        } else if (e.kind == EdgeKind::Down) {
            c.label = -1;  // single edges below the surface: identified by endpoints
        }
        return c;
    }

    Vertex conj_vertex(const Vertex& v) const {
        return {v.level, v.copy, ar_.conj(v.z, modulus(v.level))};
    }

    // Surface descent from an f0 = 1 surface: real when the real structure z -> twist * conj(z) fixes the
    // line. The second copy of the double cover carries the structure twisted by a unit of order w_K.
    bool surface_line_real(int code, int copy, Elt twist = {1, 0}) const {
        if (copy == 1) twist = ar_.mul(twist, spec_.delta_K == -4 ? Elt{0, 1} : Elt{-1, 0}, spec_.ell);
        Elt l = line_of(code);
        Elt c = ar_.mul(twist, ar_.conj(l, spec_.ell), spec_.ell);
        return mod(mulmod(l.x, c.y, spec_.ell) - mulmod(l.y, c.x, spec_.ell), spec_.ell) == 0;
    }

    // Real structure the surface inherits from the ascent out of the level-one vertex v: the unit u with
    // u * conj(line of v) on the line of v, so the ascent (dual of that descent) is real. Empty when v is
    // not real.
    std::optional<Elt> ascent_twist(const Vertex& v) const {
        if (v.level != 1) throw ValidationError("ascent_twist: vertex must lie on level one");
        Elt l = ar_.red(key(v), spec_.ell);
        for (Elt u : ar_.mu_reps()) {
            Elt c = ar_.mul(u, ar_.conj(l, spec_.ell), spec_.ell);
            if (mod(mulmod(l.x, c.y, spec_.ell) - mulmod(l.y, c.x, spec_.ell), spec_.ell) == 0) return u;
        }
        return std::nullopt;
    }

    // Realness of a surface descent taken right after ascending out of `prev`.
    Edge after_ascent(Edge e, const Edge& prev) const {
        if (spec_.f0 != 1 || e.kind != EdgeKind::Down || e.src.level != 0 || prev.kind != EdgeKind::Up) return e;
        auto tw = ascent_twist(prev.src);
        e.real = prev.real && tw && surface_line_real(e.label, e.src.copy, *tw);
        return e;
    }

    Elt line_of(int code) const {
        if (code == spec_.ell) return {0, 1};
        return {1, code};
    }
    int line_code(Elt l) const {
        l = normalize_line(l);
        if (l.x == 0) return static_cast<int>(spec_.ell);
        return static_cast<int>(l.y);
    }
    Elt normalize_line(Elt l) const {
        const i64 p = spec_.ell;
        i64 x = mod(l.x, p), y = mod(l.y, p);
        if (x != 0) return {1, mulmod(y, inverse_mod(x, p), p)};
        return {0, 1};
    }

    // 0 for the canonical line of a mu-orbit, 1.. for the others in code order.
    int parallel_index(int code) const {
        Elt l = line_of(code);
        int canon = line_code(key(l, 1));
        if (code == canon) return 0;
        int idx = 1;
        for (Elt u : ar_.mu_reps()) {
            int c = line_code(ar_.mul(u, l, spec_.ell));
            if (c != canon && c < code) ++idx;
        }
        return idx;
    }

private:
    struct LevelInfo {
        i64 n;
        std::vector<i64> q, p, crt;
    };

    LevelInfo make_level(i64 n) const {
        LevelInfo lv{n, {}, {}, {}};
        if (n == 1) return lv;
        for (auto [p, e] : factorize(n)) {
            i64 q = ipow(p, e);
            lv.q.push_back(q);
            lv.p.push_back(p);
            i64 rest = n / q;
            lv.crt.push_back(mulmod(rest, inverse_mod(rest % q, q), n));
        }
        return lv;
    }

    // Y = z mod f0 and Y = line mod ell: the ell-component of a surface class is a unit, so only the line
    // survives there.
    Elt crt_line(Elt z, Elt line) const {
        const i64 f0 = spec_.f0, p = spec_.ell, nn = f0 * p;
        i64 a = mulmod(f0, inverse_mod(f0 % p, p), nn);  // 1 mod ell, 0 mod f0
        i64 b = mod(1 - a, nn);                           // 0 mod ell, 1 mod f0
        return {mod(mulmod(line.x, a, nn) + mulmod(mod(z.x, nn), b, nn), nn),
                mod(mulmod(line.y, a, nn) + mulmod(mod(z.y, nn), b, nn), nn)};
    }

    Elt find_prime_element() const {
        const i64 p = spec_.ell;
        i64 B = 1;
        while (B * B <= 4 * p) ++B;
        for (i64 x = 0; x <= B; ++x)
            for (i64 y = -B; y <= B; ++y)
                if (x * x + y * y + (spec_.delta_K == -3 ? x * y : 0) == p) return {x, y};
        throw ConsistencyError("no element of norm ell in O_K");
    }

    GraphSpec spec_;
    QuadArith ar_;
    int chi_ = 0;
    Elt pi_{}, pibar_{};
    std::vector<LevelInfo> levels_;
};

inline IsogenyGraph build_graph(i64 delta_K, i64 ell, i64 f0, int depth) {
    return IsogenyGraph({delta_K, ell, f0, depth, false});
}

inline IsogenyGraph double_cover(const IsogenyGraph& g) {
    GraphSpec s = g.spec();
    if (!IsogenyGraph::double_cover_allowed(s.delta_K, s.ell, s.f0))
        throw ValidationError("double cover exists only for (-4,2,1) and (-3,3,1)");
    s.doubled = true;
    return IsogenyGraph(s);
}

// ---- explicit enumeration (small cases, tests, CLI) ----

struct GraphPath {
    std::vector<Edge> edges;
    int b = 0, h = 0, d = 0;
};

constexpr std::size_t kPathCap = 2'000'000;

inline std::vector<GraphPath> enumerate_paths(const IsogenyGraph& g, int L, int a, std::size_t cap = kPathCap) {
    if (L < 0 || a < 0) throw ValidationError("enumerate_paths: negative level or length");
    if (L + a > g.spec().depth) throw ValidationError("enumerate_paths: graph depth is smaller than L + a");
    std::vector<GraphPath> out;
    GraphPath cur;
    auto rec = [&](auto&& self, const Vertex& v, int left) -> void {
        if (left == 0) {
            if (out.size() >= cap) throw ValidationError("enumerate_paths: more than " + std::to_string(cap) + " paths");
            out.push_back(cur);
            return;
        }
        for (Edge e : g.out_edges(v)) {
            if (!cur.edges.empty() && g.backtracks(cur.edges.back(), e)) continue;
            if (!cur.edges.empty()) e = g.after_ascent(e, cur.edges.back());
            cur.edges.push_back(e);
            int& slot = e.kind == EdgeKind::Up ? cur.b : e.kind == EdgeKind::Horizontal ? cur.h : cur.d;
            ++slot;
            self(self, e.dst, left - 1);
            --slot;
            cur.edges.pop_back();
        }
    };
    rec(rec, g.marked(L), a);
    return out;
}

struct GeometricPoint {
    std::vector<std::size_t> members;  // indices into the path list
    int e = 1;
    bool real = false;
    int b = 0, h = 0, d = 0;
};

namespace detail {

// Identity of an edge up to the surface automorphisms; `drop_par` forgets which parallel descent was used.
inline std::tuple<int, int, i64, i64, int> edge_id(const IsogenyGraph& g, const Edge& e, bool drop_par) {
    Elt k = g.key(e.dst);
    int lab = 0;
    if (e.kind == EdgeKind::Horizontal) lab = e.label;
    if (e.kind == EdgeKind::Down && e.src.level == 0 && g.spec().f0 == 1) lab = drop_par ? -1 : e.label;
    return {static_cast<int>(e.kind), e.dst.copy, k.x, k.y, lab};
}

inline std::vector<std::tuple<int, int, i64, i64, int>> path_id(const IsogenyGraph& g, const std::vector<Edge>& es,
                                                                bool drop_par) {
    std::vector<std::tuple<int, int, i64, i64, int>> id;
    for (const Edge& e : es) id.push_back(edge_id(g, e, drop_par));
    return id;
}

}  // namespace detail

// Groups paths from the marked vertex into geometric points. Only an f0 = 1 surface start has
// automorphisms beyond +-1; they permute the parallel first descents.
inline std::vector<GeometricPoint> geometric_points(const IsogenyGraph& g, const std::vector<GraphPath>& paths) {
    std::map<std::vector<std::tuple<int, int, i64, i64, int>>, std::size_t> where;
    std::vector<GeometricPoint> pts;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const auto& P = paths[i];
        const bool orbit = g.spec().f0 == 1 && !P.edges.empty() && P.edges.front().src.level == 0 && P.d > 0;
        auto id = detail::path_id(g, P.edges, orbit);
        auto [it, fresh] = where.try_emplace(id, pts.size());
        if (fresh) pts.push_back({{}, 1, false, P.b, P.h, P.d});
        pts[it->second].members.push_back(i);
    }
    for (auto& pt : pts) {
        const auto& P = paths[pt.members.front()];
        pt.e = static_cast<int>(pt.members.size());
        const bool orbit = pt.e > 1 || (g.spec().f0 == 1 && P.edges.front().src.level == 0 && P.d > 0);
        std::vector<Edge> ce;
        for (const Edge& e : P.edges) ce.push_back(g.conj_edge(e));
        pt.real = detail::path_id(g, ce, orbit) == detail::path_id(g, P.edges, orbit);
    }
    return pts;
}

inline bool path_real(const GraphPath& P) {
    for (const Edge& e : P.edges)
        if (!e.real) return false;
    return true;
}

// ---- streaming census ----

struct CensusCell {
    i64 paths = 0, real_paths = 0, points = 0, real_points = 0;
    bool operator==(const CensusCell&) const = default;
};

using PathType = std::tuple<int, int, int>;  // (ascending, horizontal, descending)
using Census = std::map<PathType, CensusCell>;

// Counts nonbacktracking length-a paths from `start` by type. Subtrees that can no longer be real are
// counted in closed form (every vertex below the surface has ell descents).
inline Census path_census(const IsogenyGraph& g, const Vertex& start, int a) {
    const int L = start.level;
    if (L < 0 || a < 0) throw ValidationError("path_census: negative level or length");
    if (L + a > g.spec().depth) throw ValidationError("path_census: graph depth is smaller than L + a");
    const bool start_real = g.vertex_real(start);
    const i64 ell = g.spec().ell;
    Census out;

    struct State {
        bool preal, vreal, orbit, rep;
    };

    auto leaf = [&](CensusCell& c, const State& s, i64 mult) {
        c.paths += mult;
        if (s.preal) c.real_paths += mult;
        if (s.orbit) {
            if (s.rep) {
                c.points += mult;
                if (s.vreal) c.real_points += mult;
            }
        } else {
            c.points += mult;
            if (s.preal) c.real_points += mult;
        }
    };

    auto descend = [&](auto&& self, CensusCell& c, const Vertex& v, const std::optional<Edge>& prev, int left,
                       State s) -> void {
        if (left == 0) {
            leaf(c, s, 1);
            return;
        }
        for (Edge e : g.out_edges(v)) {
            if (e.kind != EdgeKind::Down) continue;
            if (prev && g.backtracks(*prev, e)) continue;
            if (prev) e = g.after_ascent(e, *prev);
            State t = s;
            if (t.orbit && e.src.level == 0) t.rep = e.par == 0;
            t.preal = s.preal && e.real;
            const bool alive_v = t.orbit && t.rep && s.vreal;
            if (alive_v) t.vreal = g.vertex_real(e.dst);
            else t.vreal = false;
            if (!t.preal && !(t.orbit && t.rep && t.vreal)) {
                i64 mult = ipow(ell, left - 1);
                State dead = t;
                dead.preal = false;
                dead.vreal = false;
                leaf(c, dead, mult);
                continue;
            }
            self(self, c, e.dst, e, left - 1, t);
        }
    };

    for (int b = 0; b <= std::min(a, L); ++b) {
        const auto& ar = g.arith();
        Vertex top{L - b, start.copy, ar.red(start.z, g.modulus(L - b))};
        std::optional<Edge> up;
        if (b > 0)
            up = Edge{EdgeKind::Up, {L - b + 1, start.copy, ar.red(start.z, g.modulus(L - b + 1))}, top, 0, 0, start_real};
        const int rem = a - b;
        const bool at_surface = top.level == 0;
        const int hmax = !at_surface || g.chi() < 0 ? 0 : g.chi() == 0 ? std::min(rem, 1) : rem;
        for (int h = 0; h <= hmax; ++h) {
            const int nlab = h == 0 ? 1 : g.chi() == 1 ? 2 : 1;
            for (int lab = 0; lab < nlab; ++lab) {
                Vertex v = top;
                std::optional<Edge> prev = up;
                State s{start_real, start_real, false, true};
                for (int k = 0; k < h; ++k) {
                    Edge he{};
                    for (const Edge& e : g.out_edges(v))
                        if (e.kind == EdgeKind::Horizontal && e.label == lab) he = e;
                    s.preal = s.preal && he.real;
                    s.vreal = s.vreal && he.real && g.vertex_real(he.dst);
                    v = he.dst;
                    prev = he;
                }
                const int d = rem - h;
                s.orbit = L == 0 && g.spec().f0 == 1 && d > 0;
                CensusCell& c = out[{b, h, d}];
                descend(descend, c, v, prev, d, s);
            }
        }
    }
    return out;
}

inline Census path_census(const IsogenyGraph& g, int L, int a) { return path_census(g, g.marked(L), a); }

// Conjugation-fixed vertices of level L in copy 0, found by walking real descents from the real surface
// vertices (the parent of a real vertex is real).
inline std::vector<Vertex> real_vertices(const IsogenyGraph& g, int L) {
    if (L < 0 || L > g.spec().depth) throw ValidationError("real_vertices: level outside the graph");
    const auto& ar = g.arith();
    const i64 n0 = g.modulus(0);
    std::vector<Vertex> cur;
    std::set<std::pair<i64, i64>> seen;
    for (i64 x = 0; x < n0; ++x)
        for (i64 y = 0; y < n0; ++y) {
            Elt z = ar.red({x, y}, n0);
            if (gcd(ar.norm(z, n0), n0) != 1) continue;
            Vertex v{0, 0, z};
            Elt k = g.key(v);
            if (!g.vertex_real(v) || !seen.insert({k.x, k.y}).second) continue;
            cur.push_back(v);
        }
    for (int lv = 1; lv <= L; ++lv) {
        std::vector<Vertex> next;
        seen.clear();
        for (const Vertex& v : cur)
            for (const Edge& e : g.out_edges(v)) {
                if (e.kind != EdgeKind::Down || !g.vertex_real(e.dst)) continue;
                Elt k = g.key(e.dst);
                if (seen.insert({k.x, k.y}).second) next.push_back(e.dst);
            }
        cur.swap(next);
    }
    return cur;
}

// ---- materialized graph (small depths) ----

struct MaterializedGraph {
    std::vector<std::vector<Vertex>> levels;  // per level, copies interleaved
    std::vector<std::vector<bool>> real;
    std::vector<std::vector<std::size_t>> conj;  // involution per level
    struct E {
        int level;
        std::size_t from;
        int to_level;
        std::size_t to;
        EdgeKind kind;
        int label, par;
        bool real;
    };
    std::vector<E> edges;
};

constexpr i64 kMaterializeCap = 20'000;

inline MaterializedGraph materialize(const IsogenyGraph& g, i64 cap = kMaterializeCap) {
    const auto& s = g.spec();
    if (g.modulus(s.depth) > cap)
        throw ValidationError("materialize: modulus " + std::to_string(g.modulus(s.depth)) + " exceeds cap");
    MaterializedGraph m;
    std::vector<std::map<std::tuple<int, i64, i64>, std::size_t>> index(s.depth + 1);
    const auto& ar = g.arith();
    for (int L = 0; L <= s.depth; ++L) {
        const i64 n = g.modulus(L);
        std::vector<Vertex> vs;
        std::vector<bool> rs;
        std::map<std::pair<i64, i64>, bool> seen;
        auto add = [&](Elt z) {
            Elt k = g.key(z, L);
            if (seen.count({k.x, k.y})) return;
            seen[{k.x, k.y}] = true;
            for (int c = 0; c < g.copies(); ++c) {
                Vertex v{L, c, k};
                index[L][{c, k.x, k.y}] = vs.size();
                vs.push_back(v);
                rs.push_back(g.vertex_real(v));
            }
        };
        add(ar.red({1, 0}, n));
        for (i64 x = 0; x < n; ++x)
            for (i64 y = 0; y < n; ++y)
                if (gcd(ar.norm({x, y}, n), n) == 1) add({x, y});
        m.levels.push_back(vs);
        m.real.push_back(rs);
        std::vector<std::size_t> cj(vs.size());
        for (std::size_t i = 0; i < vs.size(); ++i) {
            Elt k = g.key(g.conj_vertex(vs[i]));
            cj[i] = index[L].at({vs[i].copy, k.x, k.y});
        }
        m.conj.push_back(cj);
    }
    for (int L = 0; L <= s.depth; ++L)
        for (std::size_t i = 0; i < m.levels[L].size(); ++i)
            for (const Edge& e : g.out_edges(m.levels[L][i])) {
                Elt k = g.key(e.dst);
                std::size_t to = index[e.dst.level].at({e.dst.copy, k.x, k.y});
                m.edges.push_back({L, i, e.dst.level, to, e.kind, e.label, e.par, e.real});
            }
    return m;
}

inline std::string to_dot(const IsogenyGraph& g, const MaterializedGraph& m) {
    std::ostringstream os;
    const auto& s = g.spec();
    os << "digraph volcano {\n  // delta_K=" << s.delta_K << " ell=" << s.ell << " f0=" << s.f0
       << (s.doubled ? " doubled" : "") << "\n  rankdir=TB;\n";
    auto name = [](int L, std::size_t i) { return "v" + std::to_string(L) + "_" + std::to_string(i); };
    for (std::size_t L = 0; L < m.levels.size(); ++L) {
        os << "  { rank=same;";
        for (std::size_t i = 0; i < m.levels[L].size(); ++i) os << ' ' << name(static_cast<int>(L), i) << ';';
        os << " }\n";
        for (std::size_t i = 0; i < m.levels[L].size(); ++i) {
            const Vertex& v = m.levels[L][i];
            os << "  " << name(static_cast<int>(L), i) << " [label=\"L" << L << (v.copy ? "'" : "") << ":" << v.z.x
               << "+" << v.z.y << "w\"" << (m.real[L][i] ? ", color=orange, style=filled" : "") << "];\n";
        }
    }
    for (const auto& e : m.edges) {
        if (e.kind == EdgeKind::Up) continue;  // drawn once, as the descent
        os << "  " << name(e.level, e.from) << " -> " << name(e.to_level, e.to) << " [";
        if (e.real) os << "color=orange, ";
        os << "label=\"" << (e.kind == EdgeKind::Horizontal ? "h" : "d") << e.label << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace cmlocus
