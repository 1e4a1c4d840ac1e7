#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cmlocus/checks.hpp"
#include "cmlocus/render.hpp"

using namespace cmlocus;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInvalid = 2, kInconsistent = 3 };

struct OrderOpts {
    std::optional<i64> disc, dk, f;

    void add(CLI::App* sub) {
        sub->add_option("--disc", disc, "discriminant Delta = f^2 deltaK");
        sub->add_option("--dk", dk, "fundamental discriminant, -3 or -4");
        sub->add_option("--f", f, "conductor");
    }
    OrderDisc get() const {
        if (disc && (dk || f)) throw ValidationError("give either --disc or --dk/--f, not both");
        if (disc) return order_from_delta(*disc);
        if (!dk) throw ValidationError("missing --dk (or --disc)");
        return make_order(*dk, f.value_or(1));
    }
};

FieldSymbol parse_field(const std::string& s, i64 dk) {
    // "K:12", "Q:5", "K(12)" or "Q(5)"
    if (s.size() < 3 || (s[0] != 'K' && s[0] != 'Q') || (s[1] != ':' && s[1] != '('))
        throw ValidationError("field must look like K:m or Q:m, got '" + s + "'");
    std::string digits = s.substr(2);
    if (s[1] == '(') {
        if (digits.empty() || digits.back() != ')') throw ValidationError("unbalanced parenthesis in '" + s + "'");
        digits.pop_back();
    }
    std::size_t used = 0;
    i64 m = 0;
    try {
        m = std::stoll(digits, &used);
    } catch (const std::exception&) {
        throw ValidationError("bad conductor in '" + s + "'");
    }
    if (used != digits.size()) throw ValidationError("bad conductor in '" + s + "'");
    FieldSymbol F{s[0] == 'K' ? Base::RingClass : Base::Rational, m, dk};
    check_symbol(F);
    return F;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Delta-CM loci on X0(M,N) for orders in Q(i) and Q(sqrt(-3))"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    Format fmt = Format::Table;
    const std::map<std::string, Format> fmts{{"table", Format::Table}, {"json", Format::Json}, {"csv", Format::Csv}};
    app.add_option("--format", fmt, "table, json or csv")->transform(CLI::CheckedTransformer(fmts))->capture_default_str();
    int jobs = 1;
    app.add_option("--jobs", jobs, "worker threads for fiber assembly")->check(CLI::Range(1, 64));

    i64 M = 1, N = 1;
    auto levels = [&](CLI::App* sub) {
        sub->add_option("--M", M, "level M (divides N)")->capture_default_str();
        sub->add_option("--N", N, "level N")->required();
    };

    OrderOpts fo;
    auto* fiber = app.add_subcommand("fiber", "closed points of X0(M,N) above J_Delta");
    fo.add(fiber);
    levels(fiber);

    OrderOpts po;
    auto* prim = app.add_subcommand("primitive", "primitive residue fields and degrees");
    po.add(prim);
    levels(prim);

    OrderOpts xo;
    bool elliptic = false;
    auto* x1 = app.add_subcommand("x1", "behaviour of X1(M,N) -> X0(M,N) above a Delta-CM point");
    xo.add(x1);
    levels(x1);
    x1->add_flag("--elliptic", elliptic, "the point below is completely horizontal (Delta in {-3,-4})");

    i64 cg_disc = 0;
    auto* cg = app.add_subcommand("classgroup", "class number, 2-torsion and reduced forms");
    cg->add_option("--disc", cg_disc, "negative discriminant")->required();

    auto* rcf = app.add_subcommand("rcf", "ring class field composita");
    rcf->require_subcommand(1);
    rcf->fallthrough();
    i64 rdk = 0, base = 1;
    std::vector<std::string> rfields;
    auto* comp = rcf->add_subcommand("compose", "compositum of ring class fields K(m_i)");
    comp->add_option("--dk", rdk, "-3 or -4")->required();
    comp->add_option("fields", rfields, "fields as K:m")->required();
    auto* tens = rcf->add_subcommand("tensor", "F1 (x) F2 over Q(base)");
    tens->add_option("--dk", rdk, "-3 or -4")->required();
    tens->add_option("--base", base, "conductor of the base field")->capture_default_str();
    tens->add_option("fields", rfields, "two fields as K:m or Q:m")->required()->expected(2);

    i64 gdk = 0, gl = 0, gf0 = 1;
    int depth = 1;
    bool dot = false, dbl = false;
    auto* graph = app.add_subcommand("graph", "ell-isogeny volcano of Delta_K-orders");
    graph->add_option("--dk", gdk, "-3 or -4")->required();
    graph->add_option("--l", gl, "prime ell")->required();
    graph->add_option("--f0", gf0, "conductor part prime to ell")->capture_default_str();
    graph->add_option("--depth", depth, "deepest level")->capture_default_str();
    graph->add_flag("--dot", dot, "Graphviz output");
    graph->add_flag("--double", dbl, "unwrap the surface loop (only (-4,2,1), (-3,3,1))");

    bool sweep = false;
    std::vector<int> only;
    auto* check = app.add_subcommand("check", "self-check suites");
    check->add_flag("--sweep", sweep, "run every sweep")->required();
    check->add_option("--only", only, "restrict to these criterion ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e, std::cerr, std::cerr);
        return kUsage;
    }

    try {
        if (*fiber) {
            auto rep = fiber_X0MN(fo.get(), M, N, jobs);
            std::cout << render_fiber(rep, fmt);
            return rep.psi_check() ? kOk : kInconsistent;
        }
        if (*prim) {
            OrderDisc ord = po.get();
            std::cout << render_primitive(ord, M, N, primitive_X0MN(ord, M, N), fmt);
            return kOk;
        }
        if (*x1) {
            OrderDisc ord = xo.get();
            std::cout << render_x1(ord, M, N, x1_fiber(ord, M, N, elliptic), fmt);
            return kOk;
        }
        if (*cg) {
            std::cout << render_classgroup(cg_disc, reduced_forms(cg_disc), two_torsion_count(cg_disc), fmt);
            return kOk;
        }
        if (*comp) {
            std::vector<FieldSymbol> fs;
            for (const auto& s : rfields) fs.push_back(parse_field(s, rdk));
            std::cout << render_composita({compose_rcf(fs)}, fmt);
            return kOk;
        }
        if (*tens) {
            auto parts = tensor_rcf(parse_field(rfields.at(0), rdk), parse_field(rfields.at(1), rdk), base);
            std::cout << render_composita(parts, fmt);
            return kOk;
        }
        if (*graph) {
            IsogenyGraph g = build_graph(gdk, gl, gf0, depth);
            if (dbl) g = double_cover(g);
            auto m = materialize(g);
            std::cout << (dot ? to_dot(g, m) : render_graph(g, m, fmt));
            return kOk;
        }
        if (*check) {
            bool all = true;
            const auto checks = all_checks();
            for (std::size_t i = 0; i < checks.size(); ++i) {
                if (!only.empty() && std::find(only.begin(), only.end(), static_cast<int>(i + 1)) == only.end()) continue;
                CheckResult r = checks[i]();
                std::cout << (r.pass ? "PASS" : "FAIL") << " " << r.id << " " << r.name << " (" << r.cases << " cases)\n";
                for (const auto& f : r.failures) std::cout << "    " << f << '\n';
                all = all && r.pass;
            }
            return all ? kOk : kInconsistent;
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::overflow_error& e) {
        std::cerr << "error: " << e.what() << " (input too large)\n";
        return kInvalid;
    } catch (const ConsistencyError& e) {
        std::cerr << "internal consistency failure: " << e.what() << '\n';
        return kInconsistent;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInconsistent;
    }
    return kUsage;
}
