#pragma once

#include "hcm/errors.hpp"
#include "hcm/extpower.hpp"
#include "hcm/resolution.hpp"

#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace hcm {

// 2-complete homotopy of bo.
inline AbelianGroup pi_bo(int k)
{
    if (k < 0)
        return AbelianGroup::zero();
    switch (k % 8) {
        case 0:
        case 4: return AbelianGroup::z();
        case 1:
        case 2: return AbelianGroup::cyclic(2);
        default: return AbelianGroup::zero();
    }
}

struct Summand {
    AbelianGroup group;
    std::string source;  // "bo", "D2", "tensor", "pi_2n(S)"
};

struct E1Entry {
    int s = 0, total = 0;  // total degree t+s
    std::vector<Summand> summands;
    AbelianGroup total_group() const
    {
        AbelianGroup g;
        for (const auto& x : summands)
            g += x.group;
        return g;
    }
    std::string str() const
    {
        if (s == 0)
            return "pi_" + std::to_string(total) + "(S)";
        std::string out;
        for (const auto& x : summands) {
            auto g = x.group.str();
            if (x.source == "bo")
                g = "(" + g + ")";
            if (x.group.is_zero() && x.source != "bo")
                continue;
            out += (out.empty() ? "" : " + ") + g;
        }
        return out.empty() ? "0" : out;
    }
};

struct E1Page {
    int n = 0, residue = 0;
    std::vector<E1Entry> entries;
    const E1Entry& at(int s, int total) const
    {
        for (const auto& e : entries)
            if (e.s == s && e.total == total)
                return e;
        throw InputError("no E1 entry at s=" + std::to_string(s) + ", t+s=" + std::to_string(total));
    }
};

struct E1Charts {
    ExtChart d2, tensor;
};

namespace detail {

inline std::mutex& e1_cache_mutex()
{
    static std::mutex m;
    return m;
}

inline std::map<int, E1Charts>& e1_cache()
{
    static std::map<int, E1Charts> c;
    return c;
}

}  // namespace detail

// Adams charts of D2(o<n-1>) on [2n-2, 2n+1] and o<n-1>^{(x)2} on [2n-2, 2n].
inline E1Charts e1_charts(int n, int max_s = 8)
{
    {
        std::lock_guard<std::mutex> lk(detail::e1_cache_mutex());
        auto it = detail::e1_cache().find(n * 64 + max_s);
        if (it != detail::e1_cache().end())
            return it->second;
    }
    int residue = n % 8;
    auto split = d2_splitting_summands(n, residue);
    E1Charts out;
    out.d2 = ext_chart(minimal_resolution(split.d2_part, max_s, 2 * n + 1 + max_s));
    auto t = tensor(split.bo_part, split.bo_part, 2 * n - 2, 2 * n);
    out.tensor = ext_chart(minimal_resolution(t, max_s, 2 * n + max_s));
    std::lock_guard<std::mutex> lk(detail::e1_cache_mutex());
    detail::e1_cache()[n * 64 + max_s] = out;
    return out;
}

inline E1Page e1_page(int n)
{
    if (n < 16)
        throw InputError("e1_page needs n >= 16; smaller n are exceptional cases");
    int residue = n % 8;
    if (residue != 0 && residue != 1 && residue != 4)
        throw InputError("e1_page needs n = 0, 1 or 4 mod 8");
    auto ch = e1_charts(n);

    for (auto [lo, hi, c, name] : {std::tuple{2 * n - 2, 2 * n, &ch.d2, "D2"},
                                   std::tuple{2 * n - 2, 2 * n - 1, &ch.tensor, "tensor"}}) {
        auto arrows = check_no_differentials(*c, lo, hi);
        if (!arrows.empty())
            throw RefusalError(std::string(name) + " chart admits " + arrows.front().describe());
    }
    auto d2_odd = homotopy_from_chart(ch.d2, 2 * n - 1);
    auto d2_even = homotopy_from_chart(ch.d2, 2 * n);
    auto tens = homotopy_from_chart(ch.tensor, 2 * n - 1);

    if (!d2_even.simple_2_torsion() || !d2_odd.simple_2_torsion())
        throw ContractError("D2 summand is not simple 2-torsion");

    E1Page p;
    p.n = n;
    p.residue = residue;
    p.entries.push_back({0, 2 * n, {{AbelianGroup::zero(), "pi_2n(S)"}}});
    p.entries.push_back({1, 2 * n, {{d2_odd, "D2"}, {pi_bo(2 * n), "bo"}}});
    p.entries.push_back({1, 2 * n + 1, {{d2_even, "D2"}, {pi_bo(2 * n + 1), "bo"}}});
    p.entries.push_back({2, 2 * n + 1, {{tens, "tensor"}}});

    // Expected table shape.
    auto z2 = AbelianGroup::cyclic(2);
    AbelianGroup want_odd = residue == 1 ? z2 : AbelianGroup::zero();
    AbelianGroup want_even = residue == 4 ? z2 + z2 : z2;
    AbelianGroup want_tens = residue == 0 ? z2 : residue == 1 ? AbelianGroup::cyclic(4) : AbelianGroup::zero();
    if (d2_odd != want_odd || d2_even != want_even || tens != want_tens)
        throw ContractError("E1 page for n=" + std::to_string(n) + " disagrees with the expected table: " +
                            d2_odd.str() + " / " + d2_even.str() + " / " + tens.str());
    return p;
}

inline std::string e1_ascii(const E1Page& p)
{
    std::string out = "n = " + std::to_string(p.n) + " (n = " + std::to_string(p.residue) + " mod 8)\n";
    for (int s = 2; s >= 0; --s) {
        out += "s=" + std::to_string(s) + " |";
        for (int tot : {2 * p.n, 2 * p.n + 1}) {
            std::string cell;
            for (const auto& e : p.entries)
                if (e.s == s && e.total == tot)
                    cell = e.str();
            out += " " + cell + std::string(cell.size() < 24 ? 24 - cell.size() : 1, ' ');
        }
        out += "\n";
    }
    out += "t+s  | " + std::to_string(2 * p.n) + std::string(22, ' ') + "  " + std::to_string(2 * p.n + 1) + "\n";
    return out;
}

}  // namespace hcm
