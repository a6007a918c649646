#pragma once

#include "hcm/errors.hpp"
#include "hcm/f2linalg.hpp"
#include "hcm/steenrod.hpp"
#include "hcm/stmodule.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace hcm {

// ---------------------------------------------------------------- groups

struct AbelianGroup {
    int free_rank = 0;
    std::vector<long> torsion;  // cyclic orders, ascending

    static AbelianGroup zero() { return {}; }
    static AbelianGroup z() { return {1, {}}; }
    static AbelianGroup cyclic(long order) { return {0, {order}}; }

    AbelianGroup& operator+=(const AbelianGroup& o)
    {
        free_rank += o.free_rank;
        torsion.insert(torsion.end(), o.torsion.begin(), o.torsion.end());
        std::sort(torsion.begin(), torsion.end());
        return *this;
    }
    friend AbelianGroup operator+(AbelianGroup a, const AbelianGroup& b) { return a += b; }
    bool operator==(const AbelianGroup&) const = default;
    bool is_zero() const { return free_rank == 0 && torsion.empty(); }
    long order() const
    {
        long o = 1;
        for (long t : torsion)
            o *= t;
        return free_rank ? 0 : o;
    }
    bool simple_2_torsion() const
    {
        return free_rank == 0 && std::all_of(torsion.begin(), torsion.end(), [](long t) { return t == 2; });
    }
    std::string str() const
    {
        if (is_zero())
            return "0";
        std::string s;
        for (int i = 0; i < free_rank; ++i)
            s += (s.empty() ? "" : " + ") + std::string("Z");
        for (long t : torsion)
            s += (s.empty() ? "" : " + ") + std::string("Z/") + std::to_string(t);
        return s;
    }
};

// ---------------------------------------------------------------- resolution

struct ResTerm {
    std::size_t gen;    // generator of the previous stage
    int a;              // degree of the Steenrod coefficient
    std::size_t theta;  // index in basis(a)
};

struct ResGen {
    int degree = 0;
    BitVec d;                    // d(g) in (F_{s-1})_degree, or in M_degree when s = 0
    std::vector<ResTerm> terms;  // decoded d(g), s >= 1
};

class FreeResolution {
public:
    FreeResolution(GradedModule m, int max_s, int max_t)
        : m_(std::move(m)), max_s_(max_s), max_t_(max_t), t0_(m_.bottom_degree()),
          tables_(std::make_shared<SteenrodTables>(std::max(0, max_t - m_.bottom_degree())))
    {
        gens_.resize(max_s_ + 1);
        offsets_.resize(max_s_ + 1);
    }

    const GradedModule& module() const { return m_; }
    int max_s() const { return max_s_; }
    int max_t() const { return max_t_; }
    int min_t() const { return t0_; }
    const std::vector<ResGen>& gens(int s) const { return gens_.at(s); }
    const SteenrodTables& tables() const { return *tables_; }

    // Block offsets of the generators inside (F_s)_t; the last entry is the total dimension.
    const std::vector<std::size_t>& offsets(int s, int t) const
    {
        static const std::vector<std::size_t> none{0};
        if (t < t0_)
            return none;
        auto& row = offsets_[s];
        if (row.size() <= std::size_t(t - t0_))
            row.resize(t - t0_ + 1);
        auto& o = row[t - t0_];
        if (o.empty() || o.size() != count_upto(s, t) + 1) {
            o.assign(1, 0);
            for (const auto& g : gens_[s]) {
                if (g.degree > t)
                    break;
                o.push_back(o.back() + tables_->dim(t - g.degree));
            }
        }
        return o;
    }
    std::size_t dim(int s, int t) const { return offsets(s, t).back(); }
    std::size_t target_dim(int s, int t) const { return s == 0 ? m_.dim(t) : dim(s - 1, t); }

    // theta * d(g) for g in stage s, theta = basis(a)[idx].
    BitVec apply_d(int s, std::size_t g, int a, std::size_t idx) const
    {
        const auto& G = gens_[s][g];
        int t = G.degree + a;
        if (s == 0) {
            if (t > m_.hi())
                return BitVec(0);
            const auto& mono = tables_->basis_of(a)[idx];
            BitVec v = m_.apply(mono, G.degree, G.d);
            return v.size() ? v : BitVec(m_.dim(t));
        }
        BitVec out(dim(s - 1, t));
        const auto& off = offsets(s - 1, t);
        for (const auto& term : G.terms)
            xor_at(out, tables_->mul(a, idx, term.a, term.theta), off[term.gen]);
        return out;
    }

    // Image under d_s of every basis element of (F_s)_t, generators with degree < t only when old_only.
    std::vector<BitVec> d_columns(int s, int t, bool old_only) const
    {
        std::vector<BitVec> cols;
        for (std::size_t g = 0; g < gens_[s].size(); ++g) {
            int a = t - gens_[s][g].degree;
            if (a < 0 || (old_only && a == 0))
                break;
            for (std::size_t i = 0; i < tables_->dim(a); ++i)
                cols.push_back(apply_d(s, g, a, i));
        }
        return cols;
    }

    // d_s applied to an arbitrary element of (F_s)_t.
    BitVec d_of(int s, int t, const BitVec& x) const
    {
        BitVec out(target_dim(s, t));
        const auto& off = offsets(s, t);
        for (auto b : x.support()) {
            std::size_t g = std::upper_bound(off.begin(), off.end(), b) - off.begin() - 1;
            int a = t - gens_[s][g].degree;
            out ^= apply_d(s, g, a, b - off[g]);
        }
        return out;
    }

    void add_gen(int s, int t, BitVec d)
    {
        ResGen g;
        g.degree = t;
        if (s > 0) {
            const auto& off = offsets(s - 1, t);
            for (auto b : d.support()) {
                std::size_t h = std::upper_bound(off.begin(), off.end(), b) - off.begin() - 1;
                g.terms.push_back({h, t - gens_[s - 1][h].degree, b - off[h]});
            }
        }
        g.d = std::move(d);
        gens_[s].push_back(std::move(g));
    }

private:
    std::size_t count_upto(int s, int t) const
    {
        std::size_t c = 0;
        for (const auto& g : gens_[s])
            if (g.degree <= t)
                ++c;
        return c;
    }

    GradedModule m_;
    int max_s_, max_t_, t0_;
    std::shared_ptr<SteenrodTables> tables_;
    std::vector<std::vector<ResGen>> gens_;
    mutable std::vector<std::vector<std::vector<std::size_t>>> offsets_;
};

inline FreeResolution minimal_resolution(const GradedModule& m, int max_s, int max_t)
{
    if (max_s < 0)
        throw RangeError("max_s must be non-negative");
    if (m.truncated && max_t > m.hi() + max_s)
        throw RangeError("module window [" + std::to_string(m.lo()) + "," + std::to_string(m.hi()) +
                         "] too small for max_t " + std::to_string(max_t));
    FreeResolution r(m, max_s, max_t);
    int t0 = r.min_t();
    for (int t = t0; t <= max_t; ++t) {
        // Columns of d_{s-1} in degree t, all generators included.
        std::vector<BitVec> prev;
        std::size_t prev_rank = 0;
        for (int s = 0; s <= max_s; ++s) {
            std::size_t tdim = r.target_dim(s, t);
            auto cols = r.d_columns(s, t, true);
            Subspace image(tdim);
            for (const auto& c : cols)
                image.insert(c);
            std::size_t want = s == 0 ? tdim : r.dim(s - 1, t) - prev_rank;
            if (image.dim() < want) {
                if (s == 0) {
                    for (std::size_t i = 0; i < tdim && image.dim() < want; ++i) {
                        BitVec e(tdim);
                        e.set(i);
                        if (image.insert(e))
                            r.add_gen(s, t, e);
                    }
                } else {
                    auto ker = kernel_of_images(prev, r.target_dim(s - 1, t));
                    for (const auto& k : ker.basis()) {
                        if (image.dim() >= want)
                            break;
                        if (image.insert(k))
                            r.add_gen(s, t, k);
                    }
                }
            }
            if (image.dim() != want)
                throw ContractError("resolution failed to cover the kernel");
            if (s < max_s) {
                for (std::size_t g = 0; g < r.gens(s).size(); ++g)
                    if (r.gens(s)[g].degree == t)
                        cols.push_back(r.gens(s)[g].d);
                prev = std::move(cols);
                prev_rank = image.dim();
            }
        }
    }
    return r;
}

// Checks d o d = 0 and minimality; returns a list of problems.
inline std::vector<std::string> verify_resolution(const FreeResolution& r)
{
    std::vector<std::string> bad;
    for (int s = 1; s <= r.max_s(); ++s)
        for (std::size_t g = 0; g < r.gens(s).size(); ++g) {
            const auto& G = r.gens(s)[g];
            for (const auto& term : G.terms)
                if (term.a == 0)
                    bad.push_back("non-minimal generator " + std::to_string(g) + " at s=" + std::to_string(s));
            if (r.d_of(s - 1, G.degree, G.d).any())
                bad.push_back("d o d != 0 at s=" + std::to_string(s) + " t=" + std::to_string(G.degree));
        }
    for (std::size_t g = 0; g < r.gens(0).size(); ++g)
        if (!r.gens(0)[g].d.any())
            bad.push_back("zero module generator");
    return bad;
}

// ---------------------------------------------------------------- charts

struct ExtClass {
    int s = 0, t = 0;
    std::string label;
    int stem() const { return t - s; }
};

struct ExtEdge {
    int k = 0;  // h_k
    std::size_t from = 0, to = 0;
    bool operator==(const ExtEdge&) const = default;
};

struct ExtChart {
    int max_s = 0, max_t = 0;
    int valid_stem_max = INT_MAX;
    std::vector<ExtClass> classes;
    std::vector<ExtEdge> edges;
    std::set<int> torsion_free_top;
    std::vector<std::string> notes;

    std::vector<std::size_t> at(int s, int t) const
    {
        std::vector<std::size_t> r;
        for (std::size_t i = 0; i < classes.size(); ++i)
            if (classes[i].s == s && classes[i].t == t)
                r.push_back(i);
        return r;
    }
    std::size_t dim(int s, int t) const { return at(s, t).size(); }
    std::vector<std::size_t> at_stem(int s, int stem) const { return at(s, stem + s); }
    // Highest s for which the column of this stem is fully computed.
    int cap(int stem) const { return std::min(max_s, max_t - stem); }
    std::size_t find(const std::string& label) const
    {
        for (std::size_t i = 0; i < classes.size(); ++i)
            if (classes[i].label == label)
                return i;
        return classes.size();
    }
    // Matrix of h_k from (s, t) to (s+1, t+2^k) in the class bases.
    F2Matrix h_matrix(int k, int s, int t) const
    {
        auto src = at(s, t), dst = at(s + 1, t + (1 << k));
        F2Matrix m(dst.size(), src.size());
        for (const auto& e : edges)
            if (e.k == k) {
                auto i = std::find(src.begin(), src.end(), e.from);
                auto j = std::find(dst.begin(), dst.end(), e.to);
                if (i != src.end() && j != dst.end())
                    m.set(j - dst.begin(), i - src.begin());
            }
        return m;
    }
};

namespace detail {

inline std::string h_prefix(int k, const std::string& x)
{
    std::string hk = "h" + std::to_string(k);
    if (x.rfind(hk + " ", 0) == 0)
        return hk + "^2" + x.substr(hk.size());
    if (x.rfind(hk + "^", 0) == 0) {
        std::size_t sp = x.find(' ');
        int e = std::stoi(x.substr(hk.size() + 1, sp - hk.size() - 1));
        return hk + "^" + std::to_string(e + 1) + x.substr(sp);
    }
    bool compound = x.find(" + ") != std::string::npos;
    return hk + " " + (compound ? "(" + x + ")" : x);
}

inline std::string join_labels(const GradedModule& m, int d, const BitVec& v)
{
    std::string s;
    for (auto i : v.support())
        s += (s.empty() ? "" : " + ") + m.label(d, i);
    return s;
}

}  // namespace detail

inline ExtChart ext_chart(const FreeResolution& r, int max_k = 3)
{
    const auto& M = r.module();
    const auto& T = r.tables();
    ExtChart c;
    c.max_s = r.max_s();
    c.max_t = r.max_t();
    if (M.truncated)
        c.valid_stem_max = M.hi() - 1;
    std::vector<std::vector<std::size_t>> id(r.max_s() + 1);
    for (int s = 0; s <= r.max_s(); ++s)
        for (const auto& g : r.gens(s)) {
            id[s].push_back(c.classes.size());
            c.classes.push_back({s, g.degree, ""});
        }
    // h_k edges: coefficient of Sq^{2^k} g in d(g').
    for (int s = 1; s <= r.max_s(); ++s)
        for (std::size_t g2 = 0; g2 < r.gens(s).size(); ++g2)
            for (const auto& term : r.gens(s)[g2].terms)
                for (int k = 0; k <= max_k; ++k)
                    if (term.a == (1 << k) && T.basis_of(term.a)[term.theta] == SqMonomial{1 << k})
                        c.edges.push_back({k, id[s - 1][term.gen], id[s][g2]});

    // s = 0: dual basis to the generators modulo decomposables.
    for (int t = r.min_t(); t <= std::min(r.max_t(), M.hi()); ++t) {
        std::vector<std::size_t> here;
        for (std::size_t g = 0; g < r.gens(0).size(); ++g)
            if (r.gens(0)[g].degree == t)
                here.push_back(g);
        if (here.empty())
            continue;
        Subspace dec(M.dim(t));
        for (const auto& col : r.d_columns(0, t, true))
            dec.insert(col);
        std::vector<BitVec> rows = dec.basis();
        for (auto g : here)
            rows.push_back(r.gens(0)[g].d);
        F2Matrix B = F2Matrix::from_rows(rows, M.dim(t));
        for (std::size_t j = 0; j < here.size(); ++j) {
            BitVec e(rows.size());
            e.set(dec.dim() + j);
            auto phi = solve(B, e);
            if (!phi)
                throw ContractError("generator pairing is singular");
            c.classes[id[0][here[j]]].label = detail::join_labels(M, t, *phi);
        }
    }
    // s >= 1: h_k multiples, then leading-term reading at s = 1, else generic.
    for (int s = 1; s <= r.max_s(); ++s)
        for (std::size_t g = 0; g < r.gens(s).size(); ++g) {
            std::size_t me = id[s][g];
            std::string lab;
            for (int k = max_k; k >= 0 && lab.empty(); --k)
                for (std::size_t x : id[s - 1]) {
                    int tx = c.classes[x].t;
                    if (tx + (1 << k) != c.classes[me].t)
                        continue;
                    std::vector<std::size_t> outs;
                    for (const auto& e : c.edges)
                        if (e.k == k && e.from == x)
                            outs.push_back(e.to);
                    if (outs.size() == 1 && outs[0] == me && !c.classes[x].label.empty()) {
                        lab = detail::h_prefix(k, c.classes[x].label);
                        break;
                    }
                }
            if (lab.empty() && s == 1) {
                const auto& G = r.gens(1)[g];
                for (const auto& term : G.terms) {
                    const auto& mono = T.basis_of(term.a)[term.theta];
                    if (mono.empty() || !is_pow2(mono[0]))
                        continue;
                    int k = std::countr_zero(unsigned(mono[0]));
                    if (k > max_k)
                        continue;
                    SqMonomial rest(mono.begin() + 1, mono.end());
                    const auto& base = r.gens(0)[term.gen];
                    BitVec v = M.apply(rest, base.degree, base.d);
                    if (v.count() == 1) {
                        lab = "h" + std::to_string(k) + " " + M.label(base.degree + degree(rest), v.first());
                        break;
                    }
                }
            }
            if (lab.empty())
                lab = "x_{" + std::to_string(s) + "," + std::to_string(c.classes[me].t) + "}";
            c.classes[me].label = lab;
        }
    // A stem at the bottom cell carries a Z tower for each Sq^1-cycle there.
    int b = M.bottom_degree();
    if (b <= M.hi()) {
        const auto& sq1 = M.act(1, b);
        std::size_t rk = b + 1 <= M.hi() ? rank(sq1) : 0;
        if (M.dim(b) > rk && (b + 1 <= M.hi() || !M.truncated))
            c.torsion_free_top.insert(b);
    }
    return c;
}

struct DiffArrow {
    int stem = 0, s = 0, r = 0;
    std::string describe() const
    {
        return "d" + std::to_string(r) + ": (" + std::to_string(stem) + "," + std::to_string(s) + ") -> (" +
               std::to_string(stem - 1) + "," + std::to_string(s + r) + ")";
    }
};

namespace detail {

// h0 acts by zero on every class at (stem, s), known inside the computed range.
inline bool h0_kills(const ExtChart& c, int stem, int s)
{
    if (s + 1 > c.cap(stem))
        return false;
    return c.h_matrix(0, s, stem + s).is_zero();
}

inline bool h0_injective(const ExtChart& c, int stem, int s)
{
    if (s + 1 > c.cap(stem))
        return c.torsion_free_top.count(stem) > 0;
    auto m = c.h_matrix(0, s, stem + s);
    return rank(m) == m.cols();
}

}  // namespace detail

// Possible Adams differentials with source and target stems in [lo, hi].
inline std::vector<DiffArrow> check_no_differentials(const ExtChart& c, int lo, int hi, bool prune = true)
{
    std::vector<DiffArrow> out;
    for (int k = lo + 1; k <= hi; ++k)
        for (int s = 0; s <= c.cap(k); ++s) {
            if (!c.dim(s, k + s))
                continue;
            for (int r = 2; s + r <= c.cap(k - 1); ++r) {
                int ts = s + r, tt = k - 1 + ts;
                if (!c.dim(ts, tt))
                    continue;
                if (prune && detail::h0_kills(c, k, s) && detail::h0_injective(c, k - 1, ts))
                    continue;
                out.push_back({k, s, r});
            }
        }
    return out;
}

// Reads the 2-complete group in one stem from h0-strings, refusing when it cannot certify collapse.
inline AbelianGroup homotopy_from_chart(const ExtChart& c, int stem)
{
    if (stem > c.valid_stem_max)
        throw RefusalError("stem " + std::to_string(stem) + " lies beyond the module's valid range");
    int cap = c.cap(stem);
    if (cap < 0)
        throw RefusalError("stem " + std::to_string(stem) + " not computed");
    auto arrows = check_no_differentials(c, stem, stem);
    if (stem - 1 >= 0) {
        auto out = check_no_differentials(c, stem - 1, stem);
        arrows.insert(arrows.end(), out.begin(), out.end());
    }
    bool high_classes = false;
    for (int s = 2; s <= cap; ++s)
        high_classes |= c.dim(s, stem + s) > 0;
    if (high_classes) {
        if (stem + 1 > c.valid_stem_max)
            throw RefusalError("cannot exclude differentials entering stem " + std::to_string(stem));
        auto in = check_no_differentials(c, stem, stem + 1);
        arrows.insert(arrows.end(), in.begin(), in.end());
    }
    for (const auto& a : arrows)
        if (a.stem == stem || a.stem == stem + 1)
            throw RefusalError("possible differential " + a.describe());

    // R(s, m) = rank of h0^m from filtration s.
    auto R = [&](int s, int m) -> long {
        if (s < 0 || s > cap || s + m > cap)
            return 0;
        F2Matrix p = F2Matrix::identity(c.dim(s, stem + s));
        for (int j = 0; j < m; ++j)
            p = c.h_matrix(0, s + j, stem + s + j) * p;
        return long(rank(p));
    };
    AbelianGroup g;
    for (int s = 0; s <= cap; ++s)
        for (int len = 1; s + len - 1 <= cap; ++len) {
            long born = (R(s, len - 1) - R(s - 1, len)) - (R(s, len) - R(s - 1, len + 1));
            if (s + len - 1 == cap) {
                // Strings reaching the top of the computed column.
                born = R(s, len - 1) - R(s - 1, len);
                if (born > 0 && !c.torsion_free_top.count(stem))
                    throw RefusalError("h0-string in stem " + std::to_string(stem) + " reaches the computed edge");
                g.free_rank += int(born);
                continue;
            }
            for (long i = 0; i < born; ++i)
                g += AbelianGroup::cyclic(1L << len);
        }
    return g;
}

}  // namespace hcm
