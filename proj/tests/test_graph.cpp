#include <doctest.h>

#include "cmlocus/graph.hpp"
#include "cmlocus/tables.hpp"

using namespace cmlocus;

namespace {

std::vector<std::size_t> level_sizes(const MaterializedGraph& m) {
    std::vector<std::size_t> out;
    for (const auto& l : m.levels) out.push_back(l.size());
    return out;
}

std::vector<std::size_t> real_sizes(const MaterializedGraph& m) {
    std::vector<std::size_t> out;
    for (const auto& l : m.real) out.push_back(static_cast<std::size_t>(std::count(l.begin(), l.end(), true)));
    return out;
}

// Real geometric points per type: graph (summed over the real vertices of level L) and tables.
std::pair<Census, Census> real_census(const IsogenyGraph& g, i64 dk, i64 f, int L, int a) {
    Census graph;
    for (const Vertex& v : real_vertices(g, L))
        for (const auto& [k, cell] : path_census(g, v, a)) graph[k].real_points += cell.real_points;
    Census tab;
    for (const auto& c : closed_point_classes(make_order(dk, f), g.spec().ell, a))
        if (!c.field.contains_K()) tab[c.path].real_points += c.count * two_torsion_genus(dk, c.field.m);
    for (auto* C : {&graph, &tab})
        for (auto it = C->begin(); it != C->end();) it = it->second.real_points == 0 ? C->erase(it) : std::next(it);
    return {graph, tab};
}

}  // namespace

TEST_CASE("volcano shapes") {
    auto m = materialize(build_graph(-4, 2, 1, 2));
    CHECK(level_sizes(m) == std::vector<std::size_t>{1, 1, 2});
    for (std::size_t L = 0; L < m.levels.size(); ++L)
        CHECK(m.levels[L].size() == static_cast<std::size_t>(class_number(ipow(2, 2 * static_cast<int>(L)) * -4)));

    auto three = materialize(build_graph(-3, 3, 1, 2));
    int out0 = 0;
    for (const auto& e : three.edges) out0 += e.level == 0 ? 1 : 0;
    CHECK(out0 == 4);

    auto five = materialize(build_graph(-4, 5, 1, 1));
    int loops = 0, down = 0;
    for (const auto& e : five.edges)
        if (e.level == 0) (e.kind == EdgeKind::Horizontal ? loops : down) += 1;
    CHECK(level_sizes(five) == std::vector<std::size_t>{1, 2});
    CHECK(loops == 2);
    CHECK(down == 4);
}

TEST_CASE("below the surface: one ascent and ell descents") {
    auto g = build_graph(-4, 3, 2, 3);
    auto m = materialize(g);
    for (int L = 1; L < 3; ++L)
        for (const auto& v : m.levels[L]) {
            int up = 0, down = 0;
            for (const auto& e : g.out_edges(v)) {
                if (e.kind == EdgeKind::Up) ++up;
                if (e.kind == EdgeKind::Down) ++down;
            }
            CHECK(up == 1);
            CHECK(down == 3);
        }
}

TEST_CASE("real vertices follow genus theory") {
    CHECK(real_sizes(materialize(build_graph(-3, 2, 1, 3))) == std::vector<std::size_t>{1, 1, 2, 4});
    for (i64 dk : {-3, -4})
        for (i64 ell : {2, 3, 5, 7})
            for (i64 f0 : {1, 2, 3, 5}) {
                if (gcd(f0, ell) != 1) continue;
                auto g = build_graph(dk, ell, f0, 3);
                for (int L = 0; L <= 3; ++L)
                    CHECK(static_cast<i64>(real_vertices(g, L).size()) == two_torsion_genus(dk, f0 * ipow(ell, L)));
            }
}

TEST_CASE("conjugation on surface edges") {
    auto five = materialize(build_graph(-4, 5, 1, 1));
    for (const auto& e : five.edges)
        if (e.level == 0 && e.kind == EdgeKind::Horizontal) CHECK_FALSE(e.real);
    auto seven = materialize(build_graph(-3, 7, 1, 1));
    int real_down = 0;
    for (const auto& e : seven.edges) real_down += (e.level == 0 && e.kind == EdgeKind::Down && e.real) ? 1 : 0;
    CHECK(real_down == 2);
}

TEST_CASE("double cover of the (-4,2,1) volcano") {
    auto g = double_cover(build_graph(-4, 2, 1, 2));
    auto m = materialize(g);
    CHECK(m.levels[0].size() == 2);
    for (const auto& e : m.edges) {
        if (e.level != 0) continue;
        if (e.kind == EdgeKind::Horizontal) CHECK(e.real);
        if (e.kind == EdgeKind::Down) CHECK(e.real == (m.levels[0][e.from].copy == 0));
    }
    CHECK_THROWS_AS(double_cover(build_graph(-4, 5, 1, 1)), ValidationError);
}

TEST_CASE("paths and geometric points from the surface") {
    struct Ex {
        i64 dk, ell;
        std::size_t paths, points;
        std::vector<int> e;
    };
    for (const Ex& x : {Ex{-4, 2, 3, 2, {1, 2}}, Ex{-3, 3, 4, 2, {1, 3}}, Ex{-4, 5, 6, 4, {1, 1, 2, 2}}}) {
        auto g = build_graph(x.dk, x.ell, 1, 1);
        auto ps = enumerate_paths(g, 0, 1);
        auto pts = geometric_points(g, ps);
        CHECK(ps.size() == x.paths);
        CHECK(pts.size() == x.points);
        std::vector<int> es;
        for (const auto& p : pts) es.push_back(p.e);
        std::sort(es.begin(), es.end());
        CHECK(es == x.e);
    }
}

TEST_CASE("census agrees with explicit enumeration") {
    for (i64 dk : {-3, -4})
        for (i64 ell : {2, 3, 5})
            for (i64 f0 : {1, 2}) {
                if (gcd(f0, ell) != 1) continue;
                for (int L = 0; L <= 2; ++L)
                    for (int a = 1; a <= 3; ++a) {
                        auto g = build_graph(dk, ell, f0, L + a);
                        auto ps = enumerate_paths(g, L, a);
                        auto pts = geometric_points(g, ps);
                        Census c = path_census(g, L, a);
                        i64 np = 0, npts = 0;
                        for (const auto& [k, cell] : c) {
                            np += cell.paths;
                            npts += cell.points;
                        }
                        CHECK(np == static_cast<i64>(ps.size()));
                        CHECK(npts == static_cast<i64>(pts.size()));
                        CHECK(np == psi(ipow(ell, a)));
                    }
            }
}

TEST_CASE("(-3,3,1): the double cover does not change the real census") {
    for (int L = 0; L <= 2; ++L)
        for (int a = 1; a + L <= 4; ++a) {
            auto g = build_graph(-3, 3, 1, L + a);
            CHECK(path_census(g, L, a) == path_census(double_cover(g), L, a));
        }
}

TEST_CASE("(-4,2,1): plain graph disagrees with the tables on real points, the double cover agrees") {
    // ascending then crossing the surface loop: the loop swaps the real structures, which only the cover sees
    for (auto [L, a] : std::vector<std::pair<int, int>>{{1, 3}, {1, 4}, {1, 5}, {2, 4}}) {
        auto g = build_graph(-4, 2, 1, L + a);
        auto plain = real_census(g, -4, ipow(2, L), L, a);
        auto cover = real_census(double_cover(g), -4, ipow(2, L), L, a);
        CHECK(plain.first != plain.second);
        CHECK(cover.first == cover.second);
    }
}
