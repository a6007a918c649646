#pragma once

#include "hcm/errors.hpp"
#include "hcm/stmodule.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hcm {

// Basis class of H_*(D_2 X): Q_i(x), or x.y with x before y in X's basis order.
struct DLClass {
    enum Kind { Q, Product } kind = Q;
    int i = 0;
    std::pair<int, std::size_t> x{}, y{};
    int degree = 0;
};

namespace detail {

inline std::string product_label(const std::string& a, const std::string& b)
{
    auto wrap = [](const std::string& s) { return s.find(' ') == std::string::npos ? s : "(" + s + ")"; };
    return wrap(a) + "." + wrap(b);
}

inline bool basis_before(std::pair<int, std::size_t> a, std::pair<int, std::size_t> b) { return a < b; }

}  // namespace detail

// Homology of D_2 X in [lo, hi], returned as a cohomological module.
// Dual action from the Nishida relations
//   Sq^a_* Q^r x = sum_j C(r-a, a-2j) Q^{r-a+j} Sq^j_* x,  Q_i x = Q^{|x|+i} x,
// and the Cartan formula on products.
inline GradedModule d2_homology(const GradedModule& X, int lo, int hi, std::vector<DLClass>* classes_out = nullptr)
{
    int c = X.bottom_degree();
    if (c > X.hi())
        throw InputError("d2_homology of the zero module");
    if (!X.unstable)
        throw InputError("d2_homology needs a space-level (unstable) module");
    if (hi > 3 * c - 1)
        throw RangeError("window top " + std::to_string(hi) + " exceeds the stable range " + std::to_string(3 * c - 1));
    if (X.truncated && X.hi() < hi - c)
        throw RangeError("input module window too small for requested D2 window");
    if (lo < 2 * c)
        lo = 2 * c;
    if (hi < lo)
        throw RangeError("empty D2 window");

    using Elt = std::pair<int, std::size_t>;
    std::vector<std::vector<DLClass>> basis(hi - lo + 1);
    std::map<std::tuple<int, int, std::size_t>, std::size_t> q_index;
    std::map<std::pair<Elt, Elt>, std::size_t> p_index;
    for (int dx = c; 2 * dx <= hi && dx <= X.hi(); ++dx)
        for (std::size_t ix = 0; ix < X.dim(dx); ++ix)
            for (int i = std::max(0, lo - 2 * dx); 2 * dx + i <= hi; ++i) {
                auto& b = basis[2 * dx + i - lo];
                q_index[{i, dx, ix}] = b.size();
                b.push_back({DLClass::Q, i, {dx, ix}, {dx, ix}, 2 * dx + i});
            }
    for (int dx = c; dx <= X.hi(); ++dx)
        for (std::size_t ix = 0; ix < X.dim(dx); ++ix)
            for (int dy = dx; dy <= X.hi() && dx + dy <= hi; ++dy)
                for (std::size_t iy = (dy == dx ? ix + 1 : 0); iy < X.dim(dy); ++iy) {
                    if (dx + dy < lo)
                        continue;
                    auto& b = basis[dx + dy - lo];
                    p_index[{{dx, ix}, {dy, iy}}] = b.size();
                    b.push_back({DLClass::Product, 0, {dx, ix}, {dy, iy}, dx + dy});
                }

    GradedModule m(lo, hi);
    m.truncated = true;
    for (int d = lo; d <= hi; ++d) {
        std::vector<std::string> ls;
        for (const auto& k : basis[d - lo]) {
            if (k.kind == DLClass::Q)
                ls.push_back("Q" + std::to_string(k.i) + "(" + X.label(k.x.first, k.x.second) + ")");
            else
                ls.push_back(detail::product_label(X.label(k.x.first, k.x.second), X.label(k.y.first, k.y.second)));
        }
        m.set_basis(d, ls);
    }

    // Sq^j_* on X as a list of (degree, index) terms.
    auto dual_sq = [&](int j, Elt x) {
        std::vector<Elt> out;
        if (j == 0) {
            out.push_back(x);
            return out;
        }
        if (x.first - j < X.lo())
            return out;
        BitVec e(X.dim(x.first));
        e.set(x.second);
        BitVec v = X.homology_op(j, x.first) * e;
        for (auto k : v.support())
            out.push_back({x.first - j, k});
        return out;
    };
    // Accumulate Q^s y (upper index) into a homology vector of degree `deg`.
    auto add_upper_q = [&](BitVec& acc, int deg, int s, Elt y) {
        if (s < y.first)
            return;
        int i = s - y.first;
        if (2 * y.first + i != deg || deg < lo)
            return;
        acc.flip(q_index.at({i, y.first, y.second}));
    };
    auto add_product = [&](BitVec& acc, int deg, Elt u, Elt v) {
        if (deg < lo)
            return;
        if (u == v) {
            acc.flip(q_index.at({0, u.first, u.second}));
            return;
        }
        if (v < u)
            std::swap(u, v);
        acc.flip(p_index.at({u, v}));
    };

    for (int d = lo; d <= hi; ++d)
        for (std::size_t k = 0; k < basis[d - lo].size(); ++k) {
            const auto& cls = basis[d - lo][k];
            for (int a = 1; d - a >= lo; ++a) {
                BitVec img(m.dim(d - a));
                if (cls.kind == DLClass::Q) {
                    int r = cls.x.first + cls.i;
                    for (int j = 0; 2 * j <= a; ++j) {
                        if (!binom2(r - a, a - 2 * j))
                            continue;
                        for (Elt y : dual_sq(j, cls.x))
                            add_upper_q(img, d - a, r - a + j, y);
                    }
                } else {
                    for (int s = 0; s <= a; ++s)
                        for (Elt u : dual_sq(s, cls.x))
                            for (Elt v : dual_sq(a - s, cls.y))
                                add_product(img, d - a, u, v);
                }
                for (auto t : img.support())
                    m.act_mut(a, d - a).flip(k, t);
            }
        }

    m.unstable = true;
    for (int d = lo; d <= hi && m.unstable; ++d)
        for (int a = d + 1; d + a <= hi; ++a)
            if (!m.act(a, d).is_zero())
                m.unstable = false;
    auto bad = validate(m);
    if (!bad.empty())
        throw ContractError("D2 module fails relation " + bad.front().relation + " in degree " +
                            std::to_string(bad.front().degree));
    if (classes_out) {
        classes_out->clear();
        for (auto& b : basis)
            classes_out->insert(classes_out->end(), b.begin(), b.end());
    }
    return m;
}

// D_2 of a single cell in degree c.
inline GradedModule d2_sphere(int c, int lo, int hi)
{
    GradedModule s(c, c);
    s.set_basis(c, {"i"});
    s.truncated = false;
    return d2_homology(s, lo, hi);
}

// Suspension of H_*(HZ) by c, through the degrees that D_2 in [lo, hi] needs.
inline GradedModule sigma_z_module(int c, int top)
{
    auto z = z_module(std::max(top - c, 0));
    return shift(z, c, [](const std::string& l) { return l == "1" ? std::string("i") : l + " i"; });
}

inline GradedModule d2_sigma_z(int c, int lo, int hi)
{
    return d2_homology(sigma_z_module(c, hi - c), lo, hi);
}

struct D2Split {
    GradedModule bo_part;
    GradedModule d2_part;
};

inline D2Split d2_splitting_summands(int n, int residue)
{
    if (residue != 0 && residue != 1 && residue != 4)
        throw InputError("residue must be 0, 1 or 4");
    if (n < 3 || ((n % 8) + 8) % 8 != residue)
        throw InputError("n does not have residue " + std::to_string(residue) + " mod 8");
    auto o = o_module(n);
    return {o, d2_homology(o, 2 * n - 2, 2 * n + 1)};
}

}  // namespace hcm
