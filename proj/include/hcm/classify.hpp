#pragma once

#include "hcm/errors.hpp"
#include "hcm/resolution.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hcm {

// ---------------------------------------------------------------- stems database

struct StemGenerator {
    std::string label;
    std::vector<std::string> aliases;
    long order = 2;
    bool im_j = false;
    bool mu_family = false;
};

struct ProductFact {
    std::string a, b, result;
    int stem_a = 0, stem_b = 0;
    std::string note;
};

struct StemRelation {
    std::string label;
    std::vector<std::string> equals;  // sum of generator labels
};

struct StemRecord {
    int k = 0;
    AbelianGroup group;
    std::vector<StemGenerator> generators;
    std::vector<ProductFact> products;
    std::vector<StemRelation> relations;
    long im_j_order = 1;
    std::vector<std::string> notes;
};

inline const char* bundled_stems_json()
{
    return R"JSON({
 "schema": 1,
 "stems": [
  {"k": 1, "cyclic_orders": [2], "generators": [{"label": "eta", "aliases": ["η", "h1"], "im_j": true, "mu_family": false}]},
  {"k": 2, "cyclic_orders": [2], "generators": [{"label": "eta^2", "aliases": ["η²", "eta2"], "im_j": false, "mu_family": true}],
   "products": [{"a": "eta", "b": "eta", "result": "eta^2"}]},
  {"k": 3, "cyclic_orders": [8], "generators": [{"label": "nu", "aliases": ["ν", "h2"], "order": 8, "im_j": true, "mu_family": false}],
   "products": [{"a": "eta", "b": "eta^2", "result": "4nu"}]},
  {"k": 4, "cyclic_orders": [], "generators": []},
  {"k": 5, "cyclic_orders": [], "generators": []},
  {"k": 6, "cyclic_orders": [2], "generators": [{"label": "nu^2", "aliases": ["ν²", "h2^2"], "im_j": false, "mu_family": false}],
   "products": [{"a": "nu", "b": "nu", "result": "nu^2"}],
   "notes": ["Kervaire invariant one class"]},
  {"k": 7, "cyclic_orders": [16], "generators": [{"label": "sigma", "aliases": ["σ", "h3"], "order": 16, "im_j": true, "mu_family": false}]},
  {"k": 8, "cyclic_orders": [2, 2],
   "generators": [{"label": "nu-bar", "aliases": ["ν̄", "nubar"], "im_j": false, "mu_family": false},
                  {"label": "epsilon", "aliases": ["ε", "eps"], "im_j": false, "mu_family": false}],
   "relations": [{"label": "eta sigma", "aliases": ["ησ", "etasigma"], "equals": ["nu-bar", "epsilon"]}],
   "im_j_order": 2,
   "products": [{"a": "eta", "b": "sigma", "result": "eta sigma"}],
   "notes": ["im J is generated by eta sigma = nu-bar + epsilon",
             "the basis {eta sigma, epsilon} is also in use; both describe the same group"]},
  {"k": 9, "cyclic_orders": [2, 2, 2],
   "generators": [{"label": "nu^3", "aliases": ["ν³"], "im_j": false, "mu_family": false},
                  {"label": "mu", "aliases": ["μ", "mu9"], "im_j": false, "mu_family": true},
                  {"label": "eta epsilon", "aliases": ["ηε", "etaepsilon"], "im_j": false, "mu_family": false}],
   "relations": [{"label": "eta^2 sigma", "aliases": ["η²σ"], "equals": ["nu^3", "eta epsilon"]}],
   "im_j_order": 2,
   "products": [{"a": "eta", "b": "epsilon", "result": "eta epsilon"}, {"a": "eta", "b": "nu-bar", "result": "nu^3"}]},
  {"k": 10, "cyclic_orders": [2], "generators": [{"label": "eta mu", "aliases": ["ημ", "etamu"], "im_j": false, "mu_family": true}],
   "products": [{"a": "eta", "b": "mu", "result": "eta mu"}]},
  {"k": 11, "cyclic_orders": [8], "generators": [{"label": "zeta", "aliases": ["ζ"], "order": 8, "im_j": true, "mu_family": false}]},
  {"k": 12, "cyclic_orders": [], "generators": []},
  {"k": 13, "cyclic_orders": [], "generators": []},
  {"k": 14, "cyclic_orders": [2, 2],
   "generators": [{"label": "sigma^2", "aliases": ["σ²", "h3^2"], "im_j": false, "mu_family": false},
                  {"label": "kappa", "aliases": ["κ", "d0"], "im_j": false, "mu_family": false}],
   "products": [{"a": "sigma", "b": "sigma", "result": "sigma^2"}],
   "notes": ["Kervaire invariant one class sigma^2"]},
  {"k": 15, "cyclic_orders": [2, 32],
   "generators": [{"label": "eta kappa", "aliases": ["ηκ"], "im_j": false, "mu_family": false},
                  {"label": "rho", "aliases": ["ρ"], "order": 32, "im_j": true, "mu_family": false}]},
  {"k": 16, "cyclic_orders": [2, 2],
   "generators": [{"label": "eta4", "aliases": ["η₄", "eta_4", "[h1h4]"], "im_j": false, "mu_family": false},
                  {"label": "eta rho", "aliases": ["ηρ", "Pc0", "etarho"], "im_j": true, "mu_family": false}],
   "products": [{"a": "sigma", "b": "mu", "result": "eta rho"}, {"a": "eta", "b": "rho", "result": "eta rho"},
                {"a": "sigma", "b": "nu^3", "result": "0"}, {"a": "sigma", "b": "eta epsilon", "result": "0"}]},
  {"k": 17, "cyclic_orders": [2, 2, 2, 2],
   "generators": [{"label": "eta eta4", "aliases": ["ηη₄"], "im_j": false, "mu_family": false},
                  {"label": "nu kappa", "aliases": ["νκ"], "im_j": false, "mu_family": false},
                  {"label": "eta^2 rho", "aliases": ["η²ρ"], "im_j": true, "mu_family": false},
                  {"label": "mu-bar", "aliases": ["μ̄", "mubar", "mu17"], "im_j": false, "mu_family": true}],
   "products": [{"a": "eta", "b": "eta4", "result": "eta eta4"}, {"a": "nu", "b": "kappa", "result": "nu kappa"}]},
  {"k": 18, "cyclic_orders": [2, 8],
   "generators": [{"label": "eta mu-bar", "aliases": ["ημ̄"], "im_j": false, "mu_family": true},
                  {"label": "[h2h4]", "aliases": ["nu*", "ν*", "h2h4"], "order": 8, "im_j": false, "mu_family": false}],
   "products": [{"a": "nu-bar", "b": "eta mu", "result": "0"}, {"a": "epsilon", "b": "eta mu", "result": "0"}],
   "notes": ["[h2h4] is fixed up to a 2-adic unit as a generator of the kernel of pi_18 S -> pi_18 ko, which is Z/8"]},
  {"k": 19, "cyclic_orders": [2, 8],
   "generators": [{"label": "sigma-bar", "aliases": ["σ̄"], "im_j": false, "mu_family": false},
                  {"label": "zeta-bar", "aliases": ["ζ̄"], "order": 8, "im_j": true, "mu_family": false}]},
  {"k": 20, "cyclic_orders": [8], "generators": [{"label": "kappa-bar", "aliases": ["κ̄", "g"], "order": 8, "im_j": false, "mu_family": false}]}
 ]
})JSON";
}

class StemsDatabase {
public:
    std::map<int, StemRecord> records;
    std::vector<std::string> warnings;

    const StemRecord& query_stem(int k) const
    {
        auto it = records.find(k);
        if (it == records.end())
            throw InputError("stem " + std::to_string(k) + " not found in the stems database");
        return it->second;
    }

    // Canonical label and stem for a generator, relation or product name.
    std::optional<std::pair<std::string, int>> resolve(const std::string& name) const
    {
        for (const auto& [k, r] : records) {
            for (const auto& g : r.generators) {
                if (g.label == name)
                    return std::pair{g.label, k};
                for (const auto& a : g.aliases)
                    if (a == name)
                        return std::pair{g.label, k};
            }
            for (const auto& rel : r.relations)
                if (rel.label == name)
                    return std::pair{rel.label, k};
        }
        for (const auto& [k, r] : records)
            for (const auto& rel : r.relations)
                for (const auto& a : relation_aliases_.count(rel.label) ? relation_aliases_.at(rel.label)
                                                                         : std::vector<std::string>{})
                    if (a == name)
                        return std::pair{rel.label, k};
        return std::nullopt;
    }

    ProductFact query_product(const std::string& a, const std::string& b) const
    {
        auto ra = resolve(a), rb = resolve(b);
        if (!ra)
            throw InputError("unknown stem element '" + a + "'");
        if (!rb)
            throw InputError("unknown stem element '" + b + "'");
        int k = ra->second + rb->second;
        auto it = records.find(k);
        if (it != records.end())
            for (auto p : it->second.products) {
                bool hit = (p.a == ra->first && p.b == rb->first) || (p.a == rb->first && p.b == ra->first);
                if (!hit)
                    continue;
                p.a = ra->first;
                p.b = rb->first;
                p.stem_a = ra->second;
                p.stem_b = rb->second;
                annotate(p, it->second);
                return p;
            }
        throw InputError("product " + ra->first + " * " + rb->first + " not recorded");
    }

    void set_relation_aliases(const std::string& label, std::vector<std::string> al)
    {
        relation_aliases_[label] = std::move(al);
    }

private:
    std::map<std::string, std::vector<std::string>> relation_aliases_;

    static void annotate(ProductFact& p, const StemRecord& r)
    {
        std::vector<std::string> notes;
        for (const auto& g : r.generators)
            if (g.label == p.result && g.im_j)
                notes.push_back("image of J");
        if (r.k == 8 || p.stem_a == 8 || p.stem_b == 8)
            notes.push_back("pi_8 has two bases in use: {nu-bar, epsilon} and {eta sigma, epsilon}, "
                            "related by eta sigma = nu-bar + epsilon");
        for (const auto& rel : r.relations)
            if (rel.label == p.result && r.im_j_order > 1)
                notes.push_back("image of J");
        for (std::size_t i = 0; i < notes.size(); ++i)
            p.note += (i ? "; " : "") + notes[i];
    }
};

namespace detail {

inline std::string stems_path(const std::string& where, const std::string& field) { return where + "." + field; }

template <class T>
T stems_get(const nlohmann::json& j, const std::string& where, const std::string& field)
{
    if (!j.is_object() || !j.contains(field))
        throw InputError("stems data error at " + stems_path(where, field) + ": missing field");
    try {
        return j.at(field).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InputError("stems data error at " + stems_path(where, field) + ": wrong type");
    }
}

}  // namespace detail

inline StemsDatabase parse_stems(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("stems data parse error: ") + e.what());
    }
    StemsDatabase db;
    if (detail::stems_get<int>(j, "$", "schema") != 1)
        throw InputError("stems data error at $.schema: unsupported version");
    if (!j.contains("stems") || !j["stems"].is_array())
        throw InputError("stems data error at $.stems: missing array");
    for (std::size_t i = 0; i < j["stems"].size(); ++i) {
        const auto& s = j["stems"][i];
        std::string w = "$.stems[" + std::to_string(i) + "]";
        StemRecord r;
        r.k = detail::stems_get<int>(s, w, "k");
        if (r.k < 1)
            throw InputError("stems data error at " + w + ".k: stem must be positive");
        auto orders = detail::stems_get<std::vector<long>>(s, w, "cyclic_orders");
        for (long o : orders) {
            if (o < 2 || (o & (o - 1)))
                throw InputError("stems data error at " + w + ".cyclic_orders: orders must be powers of 2");
            r.group += AbelianGroup::cyclic(o);
        }
        if (!s.contains("generators") || !s["generators"].is_array())
            throw InputError("stems data error at " + w + ".generators: missing array");
        long ij = 1;
        for (std::size_t g = 0; g < s["generators"].size(); ++g) {
            const auto& gj = s["generators"][g];
            std::string gw = w + ".generators[" + std::to_string(g) + "]";
            StemGenerator gen;
            gen.label = detail::stems_get<std::string>(gj, gw, "label");
            gen.aliases = detail::stems_get<std::vector<std::string>>(gj, gw, "aliases");
            gen.im_j = detail::stems_get<bool>(gj, gw, "im_j");
            gen.mu_family = detail::stems_get<bool>(gj, gw, "mu_family");
            gen.order = gj.contains("order") ? detail::stems_get<long>(gj, gw, "order") : 2;
            if (gen.im_j)
                ij *= gen.order;
            r.generators.push_back(gen);
        }
        r.im_j_order = s.contains("im_j_order") ? detail::stems_get<long>(s, w, "im_j_order") : ij;
        long ord = r.group.order();
        if (r.im_j_order < 1 || ord % r.im_j_order != 0)
            throw InputError("stems data error at " + w + ".im_j_order: must divide the group order");
        if (s.contains("relations"))
            for (std::size_t q = 0; q < s["relations"].size(); ++q) {
                const auto& rj = s["relations"][q];
                std::string rw = w + ".relations[" + std::to_string(q) + "]";
                StemRelation rel{detail::stems_get<std::string>(rj, rw, "label"),
                                 detail::stems_get<std::vector<std::string>>(rj, rw, "equals")};
                if (rj.contains("aliases"))
                    db.set_relation_aliases(rel.label, detail::stems_get<std::vector<std::string>>(rj, rw, "aliases"));
                r.relations.push_back(rel);
            }
        if (s.contains("products"))
            for (std::size_t q = 0; q < s["products"].size(); ++q) {
                const auto& pj = s["products"][q];
                std::string pw = w + ".products[" + std::to_string(q) + "]";
                r.products.push_back({detail::stems_get<std::string>(pj, pw, "a"),
                                      detail::stems_get<std::string>(pj, pw, "b"),
                                      detail::stems_get<std::string>(pj, pw, "result"), 0, 0, ""});
            }
        if (s.contains("notes"))
            r.notes = detail::stems_get<std::vector<std::string>>(s, w, "notes");
        if (db.records.count(r.k))
            throw InputError("stems data error at " + w + ".k: duplicate stem " + std::to_string(r.k));
        db.records[r.k] = r;
    }
    // Stems must add up in every product.
    for (const auto& [k, r] : db.records)
        for (const auto& p : r.products) {
            auto a = db.resolve(p.a), b = db.resolve(p.b);
            if (!a || !b)
                throw InputError("stems data error in stem " + std::to_string(k) + ": product operand not found");
            if (a->second + b->second != k)
                throw InputError("stems data error in stem " + std::to_string(k) + ": stems of " + p.a + " and " +
                                 p.b + " do not add up");
        }
    return db;
}

inline StemsDatabase load_stems(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open stems file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_stems(ss.str());
}

inline const StemsDatabase& bundled_stems()
{
    static const StemsDatabase db = parse_stems(bundled_stems_json());
    return db;
}

inline nlohmann::json stem_to_json(const StemRecord& r)
{
    using nlohmann::json;
    json j{{"k", r.k}, {"group", r.group.str()}, {"cyclic_orders", r.group.torsion}, {"im_j_order", r.im_j_order}};
    j["generators"] = json::array();
    for (const auto& g : r.generators)
        j["generators"].push_back(
            {{"label", g.label}, {"aliases", g.aliases}, {"order", g.order}, {"im_j", g.im_j}, {"mu_family", g.mu_family}});
    j["relations"] = json::array();
    for (const auto& rel : r.relations)
        j["relations"].push_back({{"label", rel.label}, {"equals", rel.equals}});
    j["notes"] = r.notes;
    return j;
}

// ---------------------------------------------------------------- classification

struct InertiaAnswer {
    std::string group;                                          // resolved value or "conditional"
    std::vector<std::pair<std::string, std::string>> branches;  // condition -> group
    std::string citation;
    std::string str() const
    {
        std::string out = "I(M) = " + group;
        if (!branches.empty()) {
            out = "I(M) =";
            for (std::size_t i = 0; i < branches.size(); ++i)
                out += (i ? ";" : "") + std::string(" ") + branches[i].second + " if " + branches[i].first;
        }
        return out + " " + citation;
    }
};

struct Invariant {
    std::optional<long long> p1, p2;
    std::optional<int> normal_h;  // H(M) = 0 or Z/2
};

inline void require_n3(int n)
{
    if (n < 3)
        throw InputError("n must be at least 3");
}

inline InertiaAnswer inertia_group(int n, const Invariant& inv = {})
{
    require_n3(n);
    const std::string cite = "[Thm 1.2]";
    if (n == 4) {
        if (inv.p1)
            return {*inv.p1 % 8 == 0 ? "0" : "Theta_8 = Z/2", {}, cite};
        return {"conditional", {{"8 | p1", "0"}, {"8 does not divide p1", "Theta_8 = Z/2"}}, cite};
    }
    if (n == 8) {
        if (inv.p2)
            return {*inv.p2 % 24 == 0 ? "0" : "Theta_16 = Z/2", {}, cite};
        return {"conditional", {{"24 | p2", "0"}, {"24 does not divide p2", "Theta_16 = Z/2"}}, cite};
    }
    if (n == 9) {
        if (inv.normal_h)
            return {*inv.normal_h == 0 ? "0" : "Z/8 = bSpin_19", {}, cite};
        return {"conditional", {{"H(M) = 0", "0"}, {"H(M) = Z/2", "Z/8 = bSpin_19"}}, cite};
    }
    return {"0", {}, cite};
}

struct HcInertia {
    AbelianGroup homotopy, concordance;
    std::string citation;
};

inline HcInertia h_c_inertia(int n)
{
    require_n3(n);
    return {AbelianGroup::zero(), AbelianGroup::zero(), "[Thm 1.4]"};
}

struct KernelAnswer {
    std::vector<std::string> extra;  // generators beyond im J, as stem labels
    int stem = 0;
    std::string footnote;
    std::string citation;
    std::string str() const
    {
        std::string out = "im J";
        for (const auto& e : extra)
            out += " + " + e;
        return out;
    }
};

inline KernelAnswer kernel_unit_map(int n)
{
    if (n < 1)
        throw InputError("n must be positive");
    static const std::map<int, std::string> extra{{1, "eta^2"}, {3, "nu^2"},  {4, "epsilon"},
                                                  {7, "sigma^2"}, {8, "eta4"}, {9, "[h2h4]"}};
    KernelAnswer k;
    k.stem = 2 * n;
    k.citation = "[Thm 1.3]";
    if (auto it = extra.find(n); it != extra.end())
        k.extra.push_back(it->second);
    if (n == 9)
        k.footnote = "[h2h4] is chosen in the kernel of pi_18 S -> pi_18 ko, which is isomorphic to Z/8; "
                     "this fixes it up to multiplication by a 2-adic unit";
    return k;
}

inline AbelianGroup a_group(int n)
{
    require_n3(n);
    auto z2 = AbelianGroup::cyclic(2);
    switch (n % 8) {
    case 0: return z2 + z2;
    case 1: return AbelianGroup::cyclic(8);
    case 2: return z2;
    case 4: return n == 4 ? z2 + z2 : z2;
    default: return AbelianGroup::zero();
    }
}

struct BoundaryAnswer {
    std::string summary;
    std::string detail;
    AbelianGroup image;  // spheres that bound, as a subgroup of Theta_2n
    std::vector<std::string> citations;
};

inline BoundaryAnswer boundary_info(int n)
{
    require_n3(n);
    if (n == 4)
        return {"every homotopy 8-sphere bounds",
                "the boundary of a 3-connected 9-manifold M is standard iff Psi_{-L_H}(M) in {1, [nu4 o eta7]}, "
                "otherwise [epsilon] in coker(J)_8 = Theta_8",
                AbelianGroup::cyclic(2),
                {"[Thm 1.5(i)]", "[Thm 1.6]"}};
    if (n == 8)
        return {"every homotopy 16-sphere bounds",
                "the boundary of a 7-connected 17-manifold M is standard iff Psi_{L_O}(M) in {1, [sigma8 o eta15]}, "
                "otherwise [eta4] in coker(J)_16 = Theta_16",
                AbelianGroup::cyclic(2),
                {"[Thm 1.5(ii)]", "[Thm 1.6]"}};
    if (n == 9)
        return {"omega(f)[h2h4]; a homotopy 18-sphere bounds iff it bounds a spin 19-manifold",
                "the boundary of an 8-connected 19-manifold is omega(f)[h2h4], omega(f) in Z/8, "
                "up to multiplication by a 2-adic unit",
                AbelianGroup::cyclic(8),
                {"[Thm 1.5(iii)]", "[Thm 1.6]"}};
    return {"only the standard sphere bounds",
            "every (n-1)-connected almost closed (2n+1)-manifold can be closed up with a disk",
            AbelianGroup::zero(),
            {"[Thm 1.6]"}};
}

struct ClassificationResult {
    int n = 0;
    std::string status;
    InertiaAnswer inertia;
    HcInertia hc;
    AbelianGroup a;
    KernelAnswer kernel;
    BoundaryAnswer boundary;
    std::vector<std::string> citations;
};

inline ClassificationResult classify(int n, const Invariant& inv = {})
{
    require_n3(n);
    ClassificationResult r;
    r.n = n;
    r.status = n == 63 ? "open (Kervaire invariant one in dim 126)" : "complete";
    r.inertia = inertia_group(n, inv);
    r.hc = h_c_inertia(n);
    r.a = a_group(n);
    r.kernel = kernel_unit_map(n);
    r.boundary = boundary_info(n);
    r.citations = {r.inertia.citation, r.hc.citation, "[Thm 2.2]", r.kernel.citation};
    for (const auto& c : r.boundary.citations)
        r.citations.push_back(c);
    if (n == 63)
        r.citations.push_back("[Intro]");
    return r;
}

inline std::string classification_text(const ClassificationResult& r)
{
    std::ostringstream os;
    os << "n = " << r.n << " (dimension " << 2 * r.n << ")\n";
    if (r.n == 63)
        os << "classification: " << r.status << " [Intro]\n";
    os << r.inertia.str() << "\n";
    os << "I_h(M) = " << r.hc.homotopy.str() << ", I_c(M) = " << r.hc.concordance.str() << " " << r.hc.citation << "\n";
    os << "A_" << 2 * r.n + 1 << " = " << r.a.str() << " [Thm 2.2]\n";
    os << "ker(pi_" << 2 * r.n << " S -> pi_" << 2 * r.n << " MO<" << r.n << ">) generated by " << r.kernel.str()
       << " " << r.kernel.citation << "\n";
    if (!r.kernel.footnote.empty())
        os << "  note: " << r.kernel.footnote << "\n";
    os << "boundary: " << r.boundary.summary;
    for (const auto& c : r.boundary.citations)
        os << " " << c;
    os << "\n  " << r.boundary.detail << "\n";
    return os.str();
}

inline nlohmann::json classification_json(const ClassificationResult& r)
{
    using nlohmann::json;
    json br = json::array();
    for (auto& [c, g] : r.inertia.branches)
        br.push_back({{"condition", c}, {"group", g}});
    return {{"schema", 1},
            {"n", r.n},
            {"dimension", 2 * r.n},
            {"status", r.status},
            {"inertia", {{"group", r.inertia.group}, {"branches", br}, {"citation", r.inertia.citation}}},
            {"homotopy_inertia", r.hc.homotopy.str()},
            {"concordance_inertia", r.hc.concordance.str()},
            {"a_group", r.a.str()},
            {"kernel_generators", r.kernel.extra},
            {"kernel", r.kernel.str()},
            {"kernel_footnote", r.kernel.footnote},
            {"boundary", {{"summary", r.boundary.summary}, {"detail", r.boundary.detail}, {"image", r.boundary.image.str()}}},
            {"citations", r.citations}};
}

}  // namespace hcm
