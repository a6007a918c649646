#pragma once

#include "hcm/errors.hpp"
#include "hcm/f2linalg.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace hcm {

// Sq^{i_1} ... Sq^{i_k}; the empty sequence is the unit.
using SqMonomial = std::vector<int>;
// Canonical GF(2) sum of admissible monomials of one degree.
using SqSum = std::vector<SqMonomial>;

inline bool binom2(long n, long k)
{
    if (n < 0 || k < 0 || k > n)
        return false;
    return (n & k) == k;
}

inline int degree(const SqMonomial& m)
{
    int d = 0;
    for (int i : m)
        d += i;
    return d;
}

inline bool is_admissible(const SqMonomial& m)
{
    for (std::size_t j = 0; j + 1 < m.size(); ++j)
        if (m[j] < 2 * m[j + 1])
            return false;
    return std::all_of(m.begin(), m.end(), [](int i) { return i > 0; });
}

// Basis order: descending lexicographic (Sq^7 before Sq^6 Sq^1).
inline bool basis_less(const SqMonomial& a, const SqMonomial& b)
{
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

inline std::string to_string(const SqMonomial& m)
{
    if (m.empty())
        return "1";
    std::string s;
    for (int i : m)
        s += "Sq" + std::to_string(i);
    return s;
}

inline std::string to_string(const SqSum& s)
{
    if (s.empty())
        return "0";
    std::string r;
    for (std::size_t i = 0; i < s.size(); ++i)
        r += (i ? " + " : "") + to_string(s[i]);
    return r;
}

namespace detail {

inline void canonicalize(SqSum& s)
{
    std::sort(s.begin(), s.end(), basis_less);
    SqSum out;
    for (std::size_t i = 0; i < s.size();) {
        std::size_t j = i;
        while (j < s.size() && s[j] == s[i])
            ++j;
        if ((j - i) & 1)
            out.push_back(s[i]);
        i = j;
    }
    s.swap(out);
}

inline void admissible_rec(int d, int max_first, SqMonomial& prefix, std::vector<SqMonomial>& out)
{
    if (d == 0) {
        out.push_back(prefix);
        return;
    }
    for (int i = std::min(d, max_first); i >= 1; --i) {
        prefix.push_back(i);
        admissible_rec(d - i, i / 2, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace detail

inline std::vector<SqMonomial> basis(int d)
{
    std::vector<SqMonomial> out;
    if (d < 0)
        return out;
    SqMonomial prefix;
    detail::admissible_rec(d, d, prefix, out);
    return out;
}

inline SqSum adem_reduce(const SqMonomial& word)
{
    thread_local std::map<SqMonomial, SqSum> memo;
    for (int i : word)
        if (i <= 0)
            throw ContractError("adem_reduce: entries must be positive");
    auto it = memo.find(word);
    if (it != memo.end())
        return it->second;

    std::size_t j = 0;
    while (j + 1 < word.size() && word[j] >= 2 * word[j + 1])
        ++j;
    SqSum result;
    if (j + 1 >= word.size()) {
        result.push_back(word);
    } else {
        int a = word[j], b = word[j + 1];
        for (int k = 0; 2 * k <= a; ++k) {
            if (!binom2(b - 1 - k, a - 2 * k))
                continue;
            SqMonomial w(word.begin(), word.begin() + j);
            w.push_back(a + b - k);
            if (k > 0)
                w.push_back(k);
            w.insert(w.end(), word.begin() + j + 2, word.end());
            SqSum part = adem_reduce(w);
            result.insert(result.end(), part.begin(), part.end());
        }
        detail::canonicalize(result);
    }
    memo.emplace(word, result);
    return result;
}

inline SqSum product(const SqSum& a, const SqSum& b)
{
    SqSum r;
    for (const auto& x : a)
        for (const auto& y : b) {
            SqMonomial w = x;
            w.insert(w.end(), y.begin(), y.end());
            SqSum p = w.empty() ? SqSum{SqMonomial{}} : adem_reduce(w);
            r.insert(r.end(), p.begin(), p.end());
        }
    detail::canonicalize(r);
    return r;
}

inline SqSum sq(int i)
{
    if (i == 0)
        return {SqMonomial{}};
    return {SqMonomial{i}};
}

// Cached admissible bases and structure constants up to a fixed degree.
class SteenrodTables {
public:
    explicit SteenrodTables(int max_degree) : max_(max_degree)
    {
        bases_.resize(max_ + 1);
        index_.resize(max_ + 1);
        for (int d = 0; d <= max_; ++d) {
            bases_[d] = basis(d);
            for (std::size_t i = 0; i < bases_[d].size(); ++i)
                index_[d][bases_[d][i]] = i;
        }
        mul_.resize(max_ + 1);
        for (int a = 0; a <= max_; ++a)
            mul_[a].resize(max_ + 1 - a);
    }

    int max_degree() const { return max_; }
    std::size_t dim(int d) const { return (d < 0 || d > max_) ? 0 : bases_[d].size(); }
    const std::vector<SqMonomial>& basis_of(int d) const { return bases_.at(d); }
    std::size_t index_of(const SqMonomial& m) const { return index_.at(degree(m)).at(m); }

    // Sq^{basis(a)[i]} * Sq^{basis(b)[j]} as a vector over basis(a+b).
    const BitVec& mul(int a, std::size_t i, int b, std::size_t j)
    {
        auto& cell = mul_[a][b];
        if (cell.empty())
            cell.resize(dim(a) * dim(b));
        auto& slot = cell[i * dim(b) + j];
        if (!slot) {
            SqMonomial w = bases_[a][i];
            w.insert(w.end(), bases_[b][j].begin(), bases_[b][j].end());
            auto v = std::make_unique<BitVec>(dim(a + b));
            if (w.empty())
                v->set(0);
            else
                for (const auto& m : adem_reduce(w))
                    v->set(index_of(m));
            slot = std::move(v);
        }
        return *slot;
    }

    BitVec to_vector(const SqSum& s, int d) const
    {
        BitVec v(dim(d));
        for (const auto& m : s)
            v.set(index_.at(d).at(m));
        return v;
    }
    SqSum to_sum(const BitVec& v, int d) const
    {
        SqSum s;
        for (auto i : v.support())
            s.push_back(bases_[d][i]);
        return s;
    }

private:
    int max_;
    std::vector<std::vector<SqMonomial>> bases_;
    std::vector<std::map<SqMonomial, std::size_t>> index_;
    std::vector<std::vector<std::vector<std::unique_ptr<BitVec>>>> mul_;
};

}  // namespace hcm
