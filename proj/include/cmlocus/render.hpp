#pragma once

#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "graph.hpp"
#include "locus.hpp"

namespace cmlocus {

enum class Format { Table, Json, Csv };

using Json = nlohmann::json;  // std::map objects, so keys come out sorted

inline Json field_json(const FieldSymbol& F) {
    return Json{{"base", F.base == Base::Rational ? "Q" : "K"}, {"m", F.m}, {"canonicalM", canonical_conductor(F.m, F.delta_K)}};
}

inline Json fiber_json(const FiberReport& r) {
    Json classes = Json::array();
    for (const auto& c : r.classes)
        classes.push_back({{"field", field_json(c.field)}, {"d", c.d}, {"e", c.e}, {"count", c.count}, {"type", c.type}});
    return Json{{"curve", {{"M", r.M}, {"N", r.N}}},
                {"order", {{"deltaK", r.order.delta_K}, {"f", r.order.f}}},
                {"classes", classes},
                {"checkTotal", r.check_total},
                {"psiCheck", r.psi_check()}};
}

inline Json primitive_json(const OrderDisc& ord, i64 M, i64 N, const PrimitiveReport& p) {
    Json fields = Json::array(), locals = Json::array();
    for (const auto& F : p.fields) fields.push_back(field_json(F));
    for (const auto& [ell, loc] : p.locals) {
        Json fs = Json::array();
        for (const auto& F : loc.fields) fs.push_back(field_json(F));
        locals.push_back({{"ell", ell}, {"case", loc.case_id}, {"fields", fs}});
    }
    return Json{{"curve", {{"M", M}, {"N", N}}},
                {"order", {{"deltaK", ord.delta_K}, {"f", ord.f}}},
                {"fields", fields},
                {"degrees", p.degrees},
                {"locals", locals},
                {"twoFieldPrimes", p.two_field_primes}};
}

// Plain aligned table: header row, then one row per record.
inline std::string table(const std::vector<std::string>& head, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> w(head.size());
    for (std::size_t i = 0; i < head.size(); ++i) w[i] = head[i].size();
    for (const auto& r : rows)
        for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "  " : "") << std::left << std::setw(static_cast<int>(w[i])) << r[i];
        os << '\n';
    };
    line(head);
    for (const auto& r : rows) line(r);
    return os.str();
}

inline std::string render_fiber(const FiberReport& r, Format fmt) {
    if (fmt == Format::Json) return fiber_json(r).dump() + "\n";
    std::ostringstream os;
    if (fmt == Format::Csv) {
        os << "base,m,degree,d,e,count\n";
        for (const auto& c : r.classes)
            os << (c.field.base == Base::Rational ? "Q" : "K") << ',' << c.field.m << ',' << field_degree(c.field) << ','
               << c.d << ',' << c.e << ',' << c.count << '\n';
        return os.str();
    }
    os << "X0(" << r.M << "," << r.N << ") over J_Delta, Delta = " << r.order.delta << " (deltaK " << r.order.delta_K
       << ", f " << r.order.f << ")\n";
    std::vector<std::vector<std::string>> rows;
    for (const auto& c : r.classes) {
        std::string fld = to_string(c.field);
        const i64 cm = canonical_conductor(c.field.m, c.field.delta_K);
        if (cm != c.field.m) fld += " = " + to_string(FieldSymbol{c.field.base, cm, c.field.delta_K});
        rows.push_back({fld, std::to_string(field_degree(c.field)), std::to_string(c.d), std::to_string(c.e),
                        std::to_string(c.count), c.type});
    }
    os << table({"field", "degree", "d", "e", "count", "type"}, rows);
    os << "total " << r.check_total << " (expected " << r.expected_total << ", " << (r.psi_check() ? "ok" : "MISMATCH")
       << ")\n";
    return os.str();
}

inline std::string render_primitive(const OrderDisc& ord, i64 M, i64 N, const PrimitiveReport& p, Format fmt) {
    if (fmt == Format::Json) return primitive_json(ord, M, N, p).dump() + "\n";
    std::ostringstream os;
    if (fmt == Format::Csv) {
        os << "base,m,degree\n";
        for (const auto& F : p.fields)
            os << (F.base == Base::Rational ? "Q" : "K") << ',' << F.m << ',' << field_degree(F) << '\n';
        return os.str();
    }
    std::vector<std::vector<std::string>> rows;
    for (const auto& [ell, loc] : p.locals) {
        std::string fs;
        for (const auto& F : loc.fields) fs += (fs.empty() ? "" : " ") + to_string(F);
        rows.push_back({std::to_string(ell), loc.case_id, fs});
    }
    os << table({"ell", "case", "primitive fields"}, rows);
    os << "primitive fields:";
    for (const auto& F : p.fields) os << ' ' << to_string(F) << " [" << field_degree(F) << "]";
    os << "\nprimitive degrees:";
    for (i64 d : p.degrees) os << ' ' << d;
    os << '\n';
    return os.str();
}

inline std::string render_x1(const OrderDisc& ord, i64 M, i64 N, const X1Fiber& x, Format fmt) {
    if (fmt == Format::Json)
        return Json{{"curve", {{"M", M}, {"N", N}}},
                    {"order", {{"deltaK", ord.delta_K}, {"f", ord.f}}},
                    {"e", x.e},
                    {"f", x.f},
                    {"inert", x.inert},
                    {"points", x.points}}
                   .dump() +
               "\n";
    std::ostringstream os;
    if (fmt == Format::Csv) {
        os << "e,f,inert,points\n" << x.e << ',' << x.f << ',' << (x.inert ? 1 : 0) << ',' << x.points << '\n';
        return os.str();
    }
    os << "e=" << x.e << " f=" << x.f << (x.inert ? " (inert)" : "") << " points=" << x.points << '\n';
    return os.str();
}

inline std::string render_classgroup(i64 delta, const std::vector<Form>& forms, i64 two_torsion, Format fmt) {
    if (fmt == Format::Json) {
        Json fs = Json::array();
        for (const auto& q : forms) fs.push_back(Json::array({q.a, q.b, q.c}));
        return Json{{"disc", delta}, {"h", forms.size()}, {"twoTorsion", two_torsion}, {"forms", fs}}.dump() + "\n";
    }
    std::ostringstream os;
    if (fmt == Format::Csv) {
        os << "a,b,c\n";
        for (const auto& q : forms) os << q.a << ',' << q.b << ',' << q.c << '\n';
        return os.str();
    }
    os << "disc " << delta << ": h = " << forms.size() << ", #Cl[2] = " << two_torsion << '\n';
    std::vector<std::vector<std::string>> rows;
    for (const auto& q : forms) rows.push_back({std::to_string(q.a), std::to_string(q.b), std::to_string(q.c)});
    os << table({"a", "b", "c"}, rows);
    return os.str();
}

inline std::string render_composita(const std::vector<CompositumResult>& rs, Format fmt) {
    if (fmt == Format::Json) {
        Json arr = Json::array();
        for (const auto& r : rs)
            arr.push_back({{"closure", field_json(r.closure)}, {"index", r.index}, {"degree", result_degree(r)}});
        return Json{{"fields", arr}}.dump() + "\n";
    }
    std::ostringstream os;
    if (fmt == Format::Csv) {
        os << "base,m,index,degree\n";
        for (const auto& r : rs)
            os << (r.closure.base == Base::Rational ? "Q" : "K") << ',' << r.closure.m << ',' << r.index << ','
               << result_degree(r) << '\n';
        return os.str();
    }
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : rs)
        rows.push_back({to_string(r.closure), std::to_string(r.index), std::to_string(result_degree(r))});
    os << table({"closure", "index", "degree"}, rows);
    return os.str();
}

inline std::string render_graph(const IsogenyGraph& g, const MaterializedGraph& m, Format fmt) {
    if (fmt == Format::Json) {
        Json levels = Json::array(), edges = Json::array();
        for (std::size_t L = 0; L < m.levels.size(); ++L) {
            Json vs = Json::array();
            for (std::size_t i = 0; i < m.levels[L].size(); ++i) {
                const Vertex& v = m.levels[L][i];
                vs.push_back({{"copy", v.copy}, {"x", v.z.x}, {"y", v.z.y}, {"real", static_cast<bool>(m.real[L][i])}});
            }
            levels.push_back(vs);
        }
        for (const auto& e : m.edges)
            edges.push_back({{"from", Json::array({e.level, e.from})},
                             {"to", Json::array({e.to_level, e.to})},
                             {"kind", kind_name(e.kind)},
                             {"real", e.real}});
        const auto& s = g.spec();
        return Json{{"deltaK", s.delta_K}, {"ell", s.ell}, {"f0", s.f0}, {"doubled", s.doubled}, {"levels", levels},
                    {"edges", edges}}
                   .dump() +
               "\n";
    }
    std::ostringstream os;
    if (fmt == Format::Csv) {
        os << "from_level,from,to_level,to,kind,real\n";
        for (const auto& e : m.edges)
            os << e.level << ',' << e.from << ',' << e.to_level << ',' << e.to << ',' << kind_name(e.kind) << ','
               << (e.real ? 1 : 0) << '\n';
        return os.str();
    }
    std::vector<std::vector<std::string>> rows;
    for (std::size_t L = 0; L < m.levels.size(); ++L) {
        std::size_t nreal = 0;
        for (bool b : m.real[L]) nreal += b ? 1 : 0;
        rows.push_back({std::to_string(L), std::to_string(m.levels[L].size()), std::to_string(nreal)});
    }
    os << table({"level", "vertices", "real"}, rows);
    os << "edges " << m.edges.size() << '\n';
    return os.str();
}

}  // namespace cmlocus
