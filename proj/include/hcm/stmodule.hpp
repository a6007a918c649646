#pragma once

#include "hcm/errors.hpp"
#include "hcm/f2linalg.hpp"
#include "hcm/steenrod.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <tuple>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace hcm {

struct Cell {
    std::string label;
    int degree = 0;
    bool operator==(const Cell&) const = default;
};

// Homology edge: Sq_k carries `from` (upper cell) to `to` (lower cell).
struct Edge {
    std::string from, to;
    int sq = 0;
    bool operator==(const Edge&) const = default;
    bool operator<(const Edge& o) const { return std::tie(sq, from, to) < std::tie(o.sq, o.from, o.to); }
};

struct CellDiagram {
    std::vector<Cell> cells;
    std::vector<Edge> edges;
};

inline bool is_pow2(int a) { return a > 0 && (a & (a - 1)) == 0; }

// Left module over the Steenrod algebra in degrees [lo, hi]; Sq^a raises degree by a.
class GradedModule {
public:
    GradedModule() = default;
    GradedModule(int lo, int hi) : lo_(lo), hi_(hi), labels_(hi >= lo ? hi - lo + 1 : 0)
    {
        if (hi < lo)
            throw RangeError("empty module window");
        act_.resize(span() + 1);
        for (int a = 1; a <= span(); ++a)
            act_[a].resize(span() + 1 - a);
    }

    int lo() const { return lo_; }
    int hi() const { return hi_; }
    int span() const { return hi_ - lo_; }
    bool in_window(int d) const { return d >= lo_ && d <= hi_; }

    bool unstable = true;   // Sq^a x = 0 for a > |x| is expected
    bool truncated = true;  // true module may continue above hi
    std::vector<std::string> warnings;

    std::size_t dim(int d) const { return in_window(d) ? labels_[d - lo_].size() : 0; }
    std::size_t total_dim() const
    {
        std::size_t n = 0;
        for (auto& l : labels_)
            n += l.size();
        return n;
    }
    const std::vector<std::string>& labels(int d) const { return labels_.at(d - lo_); }
    const std::string& label(int d, std::size_t i) const { return labels_.at(d - lo_).at(i); }

    void set_basis(int d, std::vector<std::string> labels)
    {
        labels_.at(d - lo_) = std::move(labels);
        for (int a = 1; a <= span(); ++a) {
            if (d + a <= hi_)
                act_[a][d - lo_] = F2Matrix(dim(d + a), dim(d));
            if (d - a >= lo_)
                act_[a][d - a - lo_] = F2Matrix(dim(d), dim(d - a));
        }
    }

    // Matrix of Sq^a : M_d -> M_{d+a}; zero-sized outside the window.
    const F2Matrix& act(int a, int d) const
    {
        static const F2Matrix empty;
        if (a < 1 || a > span() || d < lo_ || d + a > hi_)
            return empty;
        return act_[a][d - lo_];
    }
    F2Matrix& act_mut(int a, int d) { return act_.at(a).at(d - lo_); }

    BitVec apply(int a, int d, const BitVec& v) const
    {
        if (a == 0)
            return v;
        if (d + a > hi_)
            return BitVec(0);
        return act(a, d) * v;
    }
    // Apply an admissible monomial (rightmost factor first).
    BitVec apply(const SqMonomial& m, int d, BitVec v) const
    {
        for (auto it = m.rbegin(); it != m.rend(); ++it) {
            if (d + *it > hi_)
                return BitVec(0);
            v = act(*it, d) * v;
            d += *it;
        }
        return v;
    }
    F2Matrix monomial_matrix(const SqMonomial& m, int d) const
    {
        int top = d + degree(m);
        F2Matrix r = F2Matrix::identity(dim(d));
        if (top > hi_)
            return F2Matrix(0, dim(d));
        for (auto it = m.rbegin(); it != m.rend(); ++it) {
            r = act(*it, d) * r;
            d += *it;
        }
        return r;
    }
    // Dual (homology) operation Sq^a_* : H_d -> H_{d-a}.
    F2Matrix homology_op(int a, int d) const
    {
        if (a == 0)
            return F2Matrix::identity(dim(d));
        if (d - a < lo_ || d > hi_)
            return F2Matrix(dim(d - a), dim(d));
        return act(a, d - a).transpose();
    }

    std::pair<int, std::size_t> find(const std::string& name) const
    {
        for (int d = lo_; d <= hi_; ++d)
            for (std::size_t i = 0; i < dim(d); ++i)
                if (label(d, i) == name)
                    return {d, i};
        throw InputError("unknown basis label '" + name + "'");
    }

    int bottom_degree() const
    {
        for (int d = lo_; d <= hi_; ++d)
            if (dim(d))
                return d;
        return hi_ + 1;
    }

private:
    int lo_ = 0, hi_ = -1;
    std::vector<std::vector<std::string>> labels_;
    std::vector<std::vector<F2Matrix>> act_;
};

struct Violation {
    std::string relation;
    int degree;
    std::string detail;
};

inline std::vector<Violation> validate(const GradedModule& m)
{
    std::vector<Violation> out;
    for (int d = m.lo(); d <= m.hi(); ++d)
        for (int a = 1; d + a <= m.hi(); ++a) {
            const auto& A = m.act(a, d);
            if (A.rows() != m.dim(d + a) || A.cols() != m.dim(d))
                out.push_back({"grading", d, "Sq^" + std::to_string(a) + " has wrong shape"});
            else if (m.unstable && a > d && !A.is_zero())
                out.push_back({"unstable", d, "Sq^" + std::to_string(a) + " nonzero below excess"});
        }
    for (int d = m.lo(); d <= m.hi(); ++d)
        for (int b = 1; d + b <= m.hi(); ++b)
            for (int a = 1; a < 2 * b && d + a + b <= m.hi(); ++a) {
                F2Matrix lhs = m.act(a, d + b) * m.act(b, d);
                F2Matrix rhs(m.dim(d + a + b), m.dim(d));
                for (const auto& mono : adem_reduce({a, b}))
                    rhs += m.monomial_matrix(mono, d);
                if (!(lhs == rhs))
                    out.push_back({"(" + std::to_string(a) + "," + std::to_string(b) + ")", d,
                        "Sq" + std::to_string(a) + "Sq" + std::to_string(b) + " != " + to_string(adem_reduce({a, b}))});
            }
    return out;
}

namespace detail {

// Forced value of Sq^a for a not a power of two, from Sq^b Sq^{2^j} with a = 2^j + b.
inline void complete_from_adem(GradedModule& m)
{
    for (int a = 3; a <= m.span(); ++a) {
        if (is_pow2(a))
            continue;
        int p = 1;
        while (p * 2 < a)
            p *= 2;
        int b = a - p;
        for (int d = m.lo(); d + a <= m.hi(); ++d) {
            F2Matrix r = m.act(b, d + p) * m.act(p, d);
            for (int k = 1; 2 * k <= b; ++k)
                if (binom2(p - 1 - k, b - 2 * k))
                    r += m.act(a - k, d + k) * m.act(k, d);
            m.act_mut(a, d) = r;
        }
    }
}

}  // namespace detail

inline GradedModule from_cells(const CellDiagram& dg, int lo, int hi, bool unstable = true)
{
    std::map<std::string, int> deg;
    for (const auto& c : dg.cells)
        if (!deg.emplace(c.label, c.degree).second)
            throw InputError("diagram error: duplicate label '" + c.label + "'");
    for (const auto& e : dg.edges) {
        if (!deg.count(e.from) || !deg.count(e.to))
            throw InputError("diagram error: edge references unknown cell");
        if (e.sq < 1 || std::abs(deg[e.from] - deg[e.to]) != e.sq)
            throw InputError("diagram error: edge " + e.from + "-" + e.to + " has length " + std::to_string(e.sq) +
                             " but degrees differ by " + std::to_string(std::abs(deg[e.from] - deg[e.to])));
    }
    GradedModule m(lo, hi);
    m.unstable = unstable;
    for (int d = lo; d <= hi; ++d) {
        std::vector<std::string> ls;
        for (const auto& c : dg.cells)
            if (c.degree == d)
                ls.push_back(c.label);
        m.set_basis(d, ls);
    }
    std::set<std::pair<std::string, int>> has_edge;
    std::vector<Edge> explicit_nonpow2;
    for (const auto& e : dg.edges) {
        Edge o = e;
        if (deg[o.from] < deg[o.to])
            std::swap(o.from, o.to);
        if (!m.in_window(deg[o.from]) || !m.in_window(deg[o.to]))
            continue;
        if (!is_pow2(o.sq)) {
            explicit_nonpow2.push_back(o);
            continue;
        }
        auto [dt, it] = m.find(o.to);
        auto [df, jf] = m.find(o.from);
        m.act_mut(o.sq, dt).set(jf, it);
        has_edge.insert({o.to, o.sq});
    }
    detail::complete_from_adem(m);
    for (const auto& e : explicit_nonpow2) {
        auto [dt, it] = m.find(e.to);
        auto [df, jf] = m.find(e.from);
        if (!m.act(e.sq, dt).get(jf, it))
            throw InputError("construction error: edge " + e.from + "-" + e.to + " (Sq_" + std::to_string(e.sq) +
                             ") contradicts the Adem-forced value");
    }
    for (int d = lo; d <= hi; ++d)
        for (std::size_t i = 0; i < m.dim(d); ++i)
            for (int a = 1; d + a <= hi; a *= 2)
                if (m.dim(d + a) && !has_edge.count({m.label(d, i), a}))
                    m.warnings.push_back("Sq^" + std::to_string(a) + "(" + m.label(d, i) + ") unconstrained, set to 0");
    auto bad = validate(m);
    if (!bad.empty())
        throw InputError("construction error: relation " + bad.front().relation + " violated in degree " +
                         std::to_string(bad.front().degree) + ": " + bad.front().detail);
    return m;
}

// Homology cell diagram carrying the Sq_{2^k} edges of m.
inline CellDiagram to_cells(const GradedModule& m)
{
    CellDiagram dg;
    for (int d = m.lo(); d <= m.hi(); ++d)
        for (std::size_t i = 0; i < m.dim(d); ++i)
            dg.cells.push_back({m.label(d, i), d});
    for (int a = 1; a <= m.span(); a *= 2)
        for (int d = m.lo(); d + a <= m.hi(); ++d) {
            const auto& A = m.act(a, d);
            for (std::size_t r = 0; r < A.rows(); ++r)
                for (std::size_t c = 0; c < A.cols(); ++c)
                    if (A.get(r, c))
                        dg.edges.push_back({m.label(d + a, r), m.label(d, c), a});
        }
    return dg;
}

inline GradedModule tensor(const GradedModule& m1, const GradedModule& m2, int lo, int hi)
{
    if ((m1.truncated && hi > m1.hi() + m2.bottom_degree()) || (m2.truncated && hi > m2.hi() + m1.bottom_degree()))
        throw RangeError("tensor window exceeds the factor windows");
    struct Key {
        int p;
        std::size_t i, j;
    };
    GradedModule t(lo, hi);
    t.unstable = m1.unstable && m2.unstable;
    t.truncated = m1.truncated || m2.truncated;
    std::vector<std::vector<Key>> keys(hi - lo + 1);
    for (int d = lo; d <= hi; ++d) {
        std::vector<std::string> ls;
        for (int p = m1.lo(); p <= m1.hi(); ++p) {
            int q = d - p;
            for (std::size_t i = 0; i < m1.dim(p); ++i)
                for (std::size_t j = 0; j < m2.dim(q); ++j) {
                    keys[d - lo].push_back({p, i, j});
                    ls.push_back(m1.label(p, i) + "(x)" + m2.label(q, j));
                }
        }
        t.set_basis(d, ls);
    }
    auto index = [&](int d, int p, std::size_t i, std::size_t j) {
        const auto& ks = keys[d - lo];
        for (std::size_t k = 0; k < ks.size(); ++k)
            if (ks[k].p == p && ks[k].i == i && ks[k].j == j)
                return k;
        throw ContractError("tensor basis lookup failed");
    };
    for (int d = lo; d <= hi; ++d)
        for (int a = 1; d + a <= hi; ++a) {
            F2Matrix& A = t.act_mut(a, d);
            for (std::size_t k = 0; k < keys[d - lo].size(); ++k) {
                auto [p, i, j] = keys[d - lo][k];
                int q = d - p;
                for (int s = 0; s <= a; ++s) {
                    if (p + s > m1.hi() || q + a - s > m2.hi())
                        continue;
                    BitVec ex(m1.dim(p)), ey(m2.dim(q));
                    ex.set(i);
                    ey.set(j);
                    BitVec x = m1.apply(s, p, ex), y = m2.apply(a - s, q, ey);
                    for (auto u : x.support())
                        for (auto v : y.support())
                            A.flip(index(d + a, p + s, u, v), k);
                }
            }
        }
    return t;
}

inline GradedModule shift(const GradedModule& m, int k, const std::function<std::string(const std::string&)>& rename = {})
{
    GradedModule r(m.lo() + k, m.hi() + k);
    r.truncated = m.truncated;
    for (int d = m.lo(); d <= m.hi(); ++d) {
        auto ls = m.labels(d);
        if (rename)
            for (auto& l : ls)
                l = rename(l);
        r.set_basis(d + k, ls);
    }
    for (int d = m.lo(); d <= m.hi(); ++d)
        for (int a = 1; d + a <= m.hi(); ++a)
            r.act_mut(a, d + k) = m.act(a, d);
    r.unstable = true;
    for (int d = r.lo(); d <= r.hi() && r.unstable; ++d)
        for (int a = d + 1; d + a <= r.hi(); ++a)
            if (a >= 1 && !r.act(a, d).is_zero()) {
                r.unstable = false;
                break;
            }
    return r;
}

// ---- builtin modules ----

inline GradedModule sphere_module(int hi = 0)
{
    GradedModule m(0, std::max(hi, 0));
    m.set_basis(0, {"1"});
    m.truncated = false;
    return m;
}

// Homology cells of o<n-1> through degree n+2, for n = 0, 1, 4 mod 8.
inline CellDiagram o_diagram(int n)
{
    int r = ((n % 8) + 8) % 8;
    CellDiagram dg;
    dg.cells.push_back({"y_{n-1}", n - 1});
    if (r == 0)
        return dg;
    if (r == 1) {
        dg.cells.push_back({"y_n", n});
        dg.cells.push_back({"y_{n+2}", n + 2});
        dg.edges.push_back({"y_n", "y_{n-1}", 1});
        dg.edges.push_back({"y_{n+2}", "y_n", 2});
        return dg;
    }
    if (r == 4) {
        dg.cells.push_back({"y_{n+1}", n + 1});
        dg.cells.push_back({"y_{n+2}", n + 2});
        dg.edges.push_back({"y_{n+1}", "y_{n-1}", 2});
        dg.edges.push_back({"y_{n+2}", "y_{n+1}", 1});
        return dg;
    }
    throw InputError("o<n-1> is only tabulated for n = 0, 1, 4 mod 8");
}

inline GradedModule o_module(int n)
{
    if (n < 3)
        throw RangeError("o<n-1> requires n >= 3");
    return from_cells(o_diagram(n), n - 1, n + 2);
}

namespace detail {

// Monomials of F2[z1^2, z2, z3, ...]; exps[0] counts z1^2, exps[k-1] counts z_k for k >= 2.
using ZMono = std::vector<int>;

inline int zgen_degree(std::size_t idx) { return idx == 0 ? 2 : (1 << (idx + 1)) - 1; }

inline int zdegree(const ZMono& e)
{
    int d = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
        d += e[i] * zgen_degree(i);
    return d;
}

inline std::string zlabel(const ZMono& e)
{
    std::string s;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!e[i])
            continue;
        if (!s.empty())
            s += " ";
        if (i == 0)
            s += "z1^" + std::to_string(2 * e[i]);
        else
            s += "z" + std::to_string(i + 1) + (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
    }
    return s.empty() ? "1" : s;
}

using ZPoly = std::map<ZMono, bool>;

inline void zadd(ZPoly& p, const ZMono& m)
{
    auto [it, fresh] = p.emplace(m, true);
    if (!fresh)
        p.erase(it);
}

inline ZPoly zmul(const ZPoly& a, const ZPoly& b, int max_deg)
{
    ZPoly r;
    for (auto& [x, _] : a)
        for (auto& [y, __] : b) {
            ZMono z(std::max(x.size(), y.size()), 0);
            for (std::size_t i = 0; i < x.size(); ++i)
                z[i] += x[i];
            for (std::size_t i = 0; i < y.size(); ++i)
                z[i] += y[i];
            if (zdegree(z) <= max_deg)
                zadd(r, z);
        }
    return r;
}

}  // namespace detail

// H_*(HZ; F2) = F2[z1^2, z2, z3, ...] truncated to [0, hi], with the dual Steenrod action.
inline GradedModule z_module(int hi)
{
    using namespace detail;
    std::size_t ngen = 1;
    while (zgen_degree(ngen) <= hi)
        ++ngen;
    std::vector<std::vector<ZMono>> basis(hi + 1);
    std::function<void(std::size_t, ZMono&)> rec = [&](std::size_t i, ZMono& e) {
        if (i == ngen) {
            int d = zdegree(e);
            if (d <= hi)
                basis[d].push_back(e);
            return;
        }
        int base = zdegree(e);
        for (int k = 0; base + k * zgen_degree(i) <= hi; ++k) {
            e[i] = k;
            rec(i + 1, e);
        }
        e[i] = 0;
    };
    ZMono e(ngen, 0);
    rec(0, e);
    for (auto& b : basis)
        std::sort(b.begin(), b.end(), [](const ZMono& x, const ZMono& y) {
            return std::lexicographical_compare(y.begin(), y.end(), x.begin(), x.end());
        });

    // Total dual square on generators: z1^2 -> z1^2 + 1, z_k -> sum_j z_{k-j}^{2^j}.
    auto unit = ZMono(ngen, 0);
    std::vector<ZPoly> total(ngen);
    {
        ZMono g = unit;
        g[0] = 1;
        zadd(total[0], g);
        zadd(total[0], unit);
        for (std::size_t i = 1; i < ngen; ++i) {
            int k = int(i) + 1;
            for (int j = 0; j <= k; ++j) {
                int base = k - j;
                ZMono t = unit;
                if (base == 0) {
                } else if (base == 1) {
                    t[0] = 1 << (j - 1);
                } else {
                    t[base - 1] = 1 << j;
                }
                if (zdegree(t) <= hi)
                    zadd(total[i], t);
            }
        }
    }
    GradedModule m(0, hi);
    m.unstable = false;
    for (int d = 0; d <= hi; ++d) {
        std::vector<std::string> ls;
        for (auto& x : basis[d])
            ls.push_back(zlabel(x));
        m.set_basis(d, ls);
    }
    auto index_of = [&](const ZMono& x) {
        int d = zdegree(x);
        for (std::size_t i = 0; i < basis[d].size(); ++i)
            if (basis[d][i] == x)
                return std::pair<int, std::size_t>{d, i};
        throw ContractError("z-module lookup failed");
    };
    for (int d = 0; d <= hi; ++d)
        for (std::size_t i = 0; i < basis[d].size(); ++i) {
            ZPoly img;
            zadd(img, unit);
            for (std::size_t g = 0; g < ngen; ++g)
                for (int k = 0; k < basis[d][i][g]; ++k)
                    img = zmul(img, total[g], hi);
            for (auto& [x, _] : img) {
                auto [dx, ix] = index_of(x);
                int a = d - dx;
                if (a > 0)
                    m.act_mut(a, dx).flip(i, ix);
            }
        }
    return m;
}

// ---- structured text format ----

inline GradedModule module_from_json(const nlohmann::json& j)
{
    try {
        auto w = j.at("window");
        int lo = w.at(0).get<int>(), hi = w.at(1).get<int>();
        CellDiagram dg;
        for (auto& c : j.at("cells"))
            dg.cells.push_back({c.at("label").get<std::string>(), c.at("degree").get<int>()});
        if (j.contains("edges"))
            for (auto& e : j.at("edges"))
                dg.edges.push_back({e.at("from").get<std::string>(), e.at("to").get<std::string>(), e.at("sq").get<int>()});
        bool unstable = j.value("unstable", true);
        auto m = from_cells(dg, lo, hi, unstable);
        m.truncated = j.value("truncated", true);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("module format error: ") + e.what());
    }
}

inline nlohmann::json module_to_json(const GradedModule& m)
{
    nlohmann::json j;
    j["window"] = {m.lo(), m.hi()};
    auto dg = to_cells(m);
    j["cells"] = nlohmann::json::array();
    for (auto& c : dg.cells)
        j["cells"].push_back({{"label", c.label}, {"degree", c.degree}});
    j["edges"] = nlohmann::json::array();
    for (auto& e : dg.edges)
        j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"sq", e.sq}});
    j["unstable"] = m.unstable;
    j["truncated"] = m.truncated;
    return j;
}

inline GradedModule load_module(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open module file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("module parse error: ") + e.what());
    }
    return module_from_json(j);
}

}  // namespace hcm
