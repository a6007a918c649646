#include "hcm/barpage.hpp"
#include "hcm/bounds.hpp"
#include "hcm/builtins.hpp"
#include "hcm/chart_io.hpp"
#include "hcm/classify.hpp"
#include "hcm/extpower.hpp"
#include "hcm/resolution.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using namespace hcm;
using nlohmann::json;

namespace {

struct Globals {
    bool json = false;
    std::string out;
    std::string stems;
};

void emit(const Globals& g, const std::string& text)
{
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out);
    if (!f)
        throw InputError("cannot write " + g.out);
    f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

const StemsDatabase& stems_db(const Globals& g)
{
    static std::optional<StemsDatabase> custom;
    if (g.stems.empty())
        return bundled_stems();
    if (!custom)
        custom = load_stems(g.stems);
    return *custom;
}

// ---- ext

struct ExtArgs {
    std::string module = "builtin:sphere";
    std::optional<int> n;
    int max_s = 8;
    std::optional<int> max_t;
    std::string format = "ascii";
};

GradedModule build_module(const ExtArgs& a, int& max_t)
{
    const std::string pre = "builtin:";
    if (a.module.rfind(pre, 0) != 0) {
        auto m = load_module(a.module);
        max_t = a.max_t.value_or(m.truncated ? m.hi() + a.max_s : m.hi() + 20);
        return m;
    }
    auto name = a.module.substr(pre.size());
    if (name == "sphere" || name == "Z") {
        max_t = a.max_t.value_or(20);
        return builtin_module(name, a.n, max_t);
    }
    auto m = builtin_module(name, a.n);
    max_t = a.max_t.value_or(m.hi() + a.max_s);
    return m;
}

std::string cache_key(const ExtArgs& a, int max_t)
{
    std::string k = a.module + "_n" + (a.n ? std::to_string(*a.n) : "x") + "_s" + std::to_string(a.max_s) + "_t" +
                    std::to_string(max_t);
    for (auto& ch : k)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-')
            ch = '_';
    return k;
}

ExtChart compute_chart(const ExtArgs& a, int& stem_lo, int& stem_hi)
{
    if (a.max_s < 0)
        throw RangeError("--max-s must be non-negative");
    int max_t = 0;
    auto m = build_module(a, max_t);
    stem_lo = m.bottom_degree();
    const char* dir = std::getenv("HCM_CACHE_DIR");
    std::filesystem::path cached;
    ExtChart c;
    bool hit = false;
    if (dir && *dir && a.module.rfind("builtin:", 0) == 0) {
        cached = std::filesystem::path(dir) / ("ext_" + cache_key(a, max_t) + ".json");
        std::ifstream in(cached);
        if (in) {
            try {
                c = chart_from_json(json::parse(in));
                hit = true;
            } catch (const std::exception&) {
                std::cerr << "warning: ignoring unreadable cache entry " << cached << "\n";
            }
        }
    }
    if (!hit) {
        c = ext_chart(minimal_resolution(m, a.max_s, max_t));
        if (!cached.empty()) {
            std::error_code ec;
            std::filesystem::create_directories(cached.parent_path(), ec);
            std::ofstream(cached) << chart_to_json(c).dump();
        }
    }
    for (const auto& w : m.warnings)
        std::cerr << "warning: " << w << "\n";
    stem_hi = std::min(c.valid_stem_max, max_t);
    return c;
}

int cmd_ext(const Globals& g, const ExtArgs& a)
{
    int lo = 0, hi = 0;
    auto c = compute_chart(a, lo, hi);
    std::string fmt = g.json ? "json" : a.format;
    if (fmt == "json")
        emit(g, dump(chart_to_json(c)));
    else if (fmt == "svg")
        emit(g, chart_svg(c, lo, hi));
    else if (fmt == "ascii")
        emit(g, chart_ascii(c, lo, hi));
    else
        throw InputError("unknown format '" + fmt + "'");
    return 0;
}

// ---- d2

int cmd_d2(const Globals& g, const std::string& input, std::optional<int> n, std::optional<int> lo,
           std::optional<int> hi)
{
    std::optional<GradedModule> x;
    if (input == "builtin:o") {
        if (!n)
            throw InputError("builtin:o needs --n");
        x = o_module(*n);
    } else if (input == "builtin:sphere") {
        if (!n)
            throw InputError("builtin:sphere needs --n (cell degree)");
        x = shift(sphere_module(0), *n, [](const std::string&) { return std::string("i"); });
        x->truncated = false;
    } else {
        x = load_module(input);
    }
    int c = x->bottom_degree();
    int wlo = lo.value_or(2 * c), whi = hi.value_or(std::min(2 * c + 3, 3 * c - 1));
    auto m = d2_homology(*x, wlo, whi);
    if (g.json) {
        auto j = module_to_json(m);
        j["schema"] = 1;
        emit(g, dump(j));
        return 0;
    }
    std::ostringstream os;
    for (int d = m.lo(); d <= m.hi(); ++d)
        for (std::size_t i = 0; i < m.dim(d); ++i)
            os << d << "  " << m.label(d, i) << "\n";
    for (int d = m.lo(); d <= m.hi(); ++d)
        for (int a = 1; d + a <= m.hi(); ++a) {
            auto op = m.homology_op(a, d + a);
            for (std::size_t src = 0; src < m.dim(d + a); ++src)
                for (std::size_t dst = 0; dst < m.dim(d); ++dst)
                    if (op.get(dst, src))
                        os << "Sq" << a << "_*: " << m.label(d + a, src) << " -> " << m.label(d, dst) << "\n";
        }
    emit(g, os.str());
    return 0;
}

// ---- bar-e1

int cmd_bar_e1(const Globals& g, int n)
{
    auto p = e1_page(n);
    if (!g.json) {
        emit(g, e1_ascii(p));
        return 0;
    }
    json j{{"schema", 1}, {"n", p.n}, {"residue", p.residue}, {"entries", json::array()}};
    for (const auto& e : p.entries) {
        json sj = json::array();
        for (const auto& x : e.summands)
            sj.push_back({{"group", e.s == 0 ? "pi_" + std::to_string(e.total) + "(S)" : x.group.str()},
                          {"source", x.source}});
        j["entries"].push_back({{"s", e.s}, {"t_plus_s", e.total}, {"display", e.str()}, {"summands", sj}});
    }
    emit(g, dump(j));
    return 0;
}

// ---- bounds

int cmd_bounds_table(const Globals& g, long long from, long long to)
{
    auto rows = table1(from, to);
    if (!g.json) {
        emit(g, table1_csv(rows));
        return 0;
    }
    json j{{"schema", 1}, {"rows", json::array()}};
    for (const auto& r : rows) {
        json row{{"n", r.n},
                 {"lhs", r.lhs},
                 {"rhs", to_fraction(r.rhs)},
                 {"rhs_decimal", to_decimal(r.rhs)},
                 {"verdict", r.verdict}};
        if (r.printed_lhs) {
            row["printed_lhs"] = *r.printed_lhs;
            row["printed_rhs"] = r.printed_rhs;
        }
        row["discrepancy"] = r.discrepancy;
        j["rows"].push_back(row);
    }
    emit(g, dump(j));
    return 0;
}

int cmd_bounds_scan(const Globals& g, const std::string& which, long long horizon)
{
    auto c = parse_scan_case(which);
    if (!c)
        throw InputError("unknown scan case '" + which + "' (expected d1, d2_mod0, d2_mod1)");
    auto r = threshold_scan(*c, horizon);
    if (g.json) {
        emit(g, dump({{"schema", 1},
                      {"case", scan_case_name(r.which)},
                      {"horizon", r.horizon},
                      {"N", r.N},
                      {"first_admissible", r.first_admissible},
                      {"monotone", r.monotone},
                      {"certificate", r.certificate},
                      {"certificate_detail", r.certificate_detail}}));
        return 0;
    }
    std::ostringstream os;
    os << "N = " << r.N << "\n";
    os << "first admissible n = " << r.first_admissible << "\n";
    os << "horizon " << r.horizon << ", certificate " << (r.certificate ? "passes" : "FAILS") << ": "
       << r.certificate_detail << "\n";
    emit(g, os.str());
    return r.certificate ? 0 : 4;
}

int cmd_bounds_check(const Globals& g, long long k, long long s, int l)
{
    auto r = check_af_j(k, s, l);
    auto b = condition3_bound(l);
    if (g.json) {
        auto cj = [](const Condition& c) { return json{{"holds", c.holds}, {"margin", to_fraction(c.margin)}}; };
        emit(g, dump({{"schema", 1},
                      {"k", k},
                      {"s", s},
                      {"l", l},
                      {"c1", cj(r.c1)},
                      {"c2", cj(r.c2)},
                      {"c3", cj(r.c3)},
                      {"all", r.all()},
                      {"condition3_stated_bound", b.stated},
                      {"condition3_true_min", b.true_min}}));
        return 0;
    }
    std::ostringstream os;
    auto line = [&](const char* name, const Condition& c) {
        os << name << ": " << (c.holds ? "holds" : "fails") << " (margin " << to_fraction(c.margin) << ")\n";
    };
    line("condition 1", r.c1);
    line("condition 2", r.c2);
    line("condition 3", r.c3);
    os << "all: " << (r.all() ? "holds" : "fails") << "\n";
    os << "condition 3 holds for all k >= " << b.true_min << " (stated bound " << b.stated << ")\n";
    emit(g, os.str());
    return 0;
}

// ---- classify / stems

int cmd_classify(const Globals& g, int n, std::optional<long long> p1, std::optional<long long> p2,
                 std::optional<int> normal_h)
{
    Invariant inv{p1, p2, normal_h};
    if (normal_h && *normal_h != 0 && *normal_h != 1)
        throw InputError("--normal-h must be 0 or 1");
    auto r = classify(n, inv);
    if (n == 4 || n == 8 || n == 9)
        for (const auto& x : r.kernel.extra)
            if (!stems_db(g).resolve(x))
                std::cerr << "warning: kernel generator " << x << " missing from the stems database\n";
    emit(g, g.json ? dump(classification_json(r)) : classification_text(r));
    return 0;
}

int cmd_stems_query(const Globals& g, std::optional<int> k, const std::string& a, const std::string& b)
{
    const auto& db = stems_db(g);
    if (k) {
        const auto& r = db.query_stem(*k);
        if (g.json) {
            auto j = stem_to_json(r);
            j["schema"] = 1;
            emit(g, dump(j));
            return 0;
        }
        std::ostringstream os;
        os << "pi_" << r.k << " S = " << r.group.str() << "\n";
        for (const auto& gen : r.generators)
            os << "  " << gen.label << " (order " << gen.order << (gen.im_j ? ", im J" : "")
               << (gen.mu_family ? ", mu-family" : "") << ")\n";
        for (const auto& rel : r.relations) {
            os << "  " << rel.label << " =";
            for (std::size_t i = 0; i < rel.equals.size(); ++i)
                os << (i ? " + " : " ") << rel.equals[i];
            os << "\n";
        }
        os << "  im J order " << r.im_j_order << "\n";
        for (const auto& n : r.notes)
            os << "  note: " << n << "\n";
        emit(g, os.str());
        return 0;
    }
    if (a.empty() || b.empty())
        throw InputError("stems query needs --k or both --a and --b");
    auto p = db.query_product(a, b);
    if (!p.note.empty() && p.note.find("two bases") != std::string::npos)
        std::cerr << "warning: pi_8 labeling; eta sigma = nu-bar + epsilon\n";
    if (g.json) {
        emit(g, dump({{"schema", 1}, {"a", p.a}, {"b", p.b}, {"result", p.result}, {"note", p.note}}));
        return 0;
    }
    emit(g, p.a + " * " + p.b + " = " + p.result + (p.note.empty() ? "" : "  (" + p.note + ")") + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"hcm: Steenrod modules, Adams charts, and classification data"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_flag("--json", g.json, "Machine-readable output");
    app.add_option("--out", g.out, "Write output to a file");
    app.add_option("--stems", g.stems, "Stems data file");

    ExtArgs ea;
    auto* ext = app.add_subcommand("ext", "Adams chart of a module");
    ext->add_option("--module", ea.module, "builtin:sphere|Z|o|o:0|o:1|o:4|d2-o|tensor-o|d2-sphere|d2-z or a JSON file");
    ext->add_option("--n", ea.n, "Parameter for builtin modules");
    ext->add_option("--max-s", ea.max_s, "Largest Adams filtration");
    ext->add_option("--max-t", ea.max_t, "Largest internal degree");
    ext->add_option("--format", ea.format, "ascii, json or svg");

    std::string d2_input = "builtin:o";
    std::optional<int> d2_n, d2_lo, d2_hi;
    auto* d2 = app.add_subcommand("d2", "Homology of the quadratic extended power");
    d2->add_option("--input", d2_input, "builtin:o, builtin:sphere or a module JSON file");
    d2->add_option("--n", d2_n);
    d2->add_option("--lo", d2_lo);
    d2->add_option("--hi", d2_hi);

    int bar_n = 0;
    auto* bar = app.add_subcommand("bar-e1", "E1 page of the bar spectral sequence near pi_2n");
    bar->add_option("--n", bar_n)->required();

    auto* bounds = app.add_subcommand("bounds", "Filtration inequalities");
    bounds->require_subcommand(1);
    bounds->fallthrough();
    long long tfrom = 25, tto = 32;
    auto* btable = bounds->add_subcommand("table", "Inequality table");
    btable->add_option("--from", tfrom);
    btable->add_option("--to", tto);
    std::string scase;
    long long horizon = 4096;
    auto* bscan = bounds->add_subcommand("scan", "Threshold scan");
    bscan->add_option("--case", scase)->required();
    bscan->add_option("--horizon", horizon);
    long long ck = 0, cs = 0;
    int cl = 1;
    auto* bcheck = bounds->add_subcommand("check", "Check the three filtration conditions");
    bcheck->add_option("--k", ck)->required();
    bcheck->add_option("--s", cs)->required();
    bcheck->add_option("--l", cl);

    int cn = 0;
    std::optional<long long> p1, p2;
    std::optional<int> normal_h;
    auto* cls = app.add_subcommand("classify", "Inertia groups and related answers");
    cls->add_option("--n", cn)->required();
    cls->add_option("--p1", p1);
    cls->add_option("--p2", p2);
    cls->add_option("--normal-h", normal_h);

    auto* stems = app.add_subcommand("stems", "Stable stems data");
    stems->require_subcommand(1);
    stems->fallthrough();
    std::optional<int> sk;
    std::string sa, sb;
    auto* squery = stems->add_subcommand("query", "Query a stem or a product");
    squery->add_option("--k", sk);
    squery->add_option("--a", sa);
    squery->add_option("--b", sb);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e, std::cerr, std::cerr);
        return 2;
    }

    try {
        if (*ext)
            return cmd_ext(g, ea);
        if (*d2)
            return cmd_d2(g, d2_input, d2_n, d2_lo, d2_hi);
        if (*bar)
            return cmd_bar_e1(g, bar_n);
        if (*btable)
            return cmd_bounds_table(g, tfrom, tto);
        if (*bscan)
            return cmd_bounds_scan(g, scase, horizon);
        if (*bcheck)
            return cmd_bounds_check(g, ck, cs, cl);
        if (*cls)
            return cmd_classify(g, cn, p1, p2, normal_h);
        if (*squery)
            return cmd_stems_query(g, sk, sa, sb);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return 0;
}
