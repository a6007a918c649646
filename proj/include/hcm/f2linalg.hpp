#pragma once

#include "hcm/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace hcm {

using Word = std::uint64_t;
constexpr std::size_t WORD_BITS = 64;

inline std::size_t words_for(std::size_t bits) { return (bits + WORD_BITS - 1) / WORD_BITS; }

class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), w_(words_for(n), 0) {}

    std::size_t size() const { return n_; }
    bool get(std::size_t i) const { return (w_[i / WORD_BITS] >> (i % WORD_BITS)) & 1u; }
    void set(std::size_t i, bool v = true)
    {
        Word m = Word(1) << (i % WORD_BITS);
        if (v)
            w_[i / WORD_BITS] |= m;
        else
            w_[i / WORD_BITS] &= ~m;
    }
    void flip(std::size_t i) { w_[i / WORD_BITS] ^= Word(1) << (i % WORD_BITS); }

    BitVec& operator^=(const BitVec& o)
    {
        if (o.n_ != n_)
            throw ContractError("BitVec size mismatch");
        for (std::size_t k = 0; k < w_.size(); ++k)
            w_[k] ^= o.w_[k];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }
    bool operator==(const BitVec& o) const = default;

    bool any() const
    {
        for (Word x : w_)
            if (x)
                return true;
        return false;
    }
    std::size_t count() const
    {
        std::size_t c = 0;
        for (Word x : w_)
            c += std::popcount(x);
        return c;
    }
    // Index of lowest set bit, or size() if zero.
    std::size_t first() const
    {
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k])
                return k * WORD_BITS + std::countr_zero(w_[k]);
        return n_;
    }
    std::vector<std::size_t> support() const
    {
        std::vector<std::size_t> r;
        for (std::size_t k = 0; k < w_.size(); ++k) {
            Word x = w_[k];
            while (x) {
                r.push_back(k * WORD_BITS + std::countr_zero(x));
                x &= x - 1;
            }
        }
        return r;
    }
    bool dot(const BitVec& o) const
    {
        Word acc = 0;
        for (std::size_t k = 0; k < w_.size(); ++k)
            acc ^= w_[k] & o.w_[k];
        return std::popcount(acc) & 1;
    }

    Word* data() { return w_.data(); }
    const Word* data() const { return w_.data(); }

    std::string str() const
    {
        std::string s(n_, '0');
        for (std::size_t i = 0; i < n_; ++i)
            if (get(i))
                s[i] = '1';
        return s;
    }

private:
    std::size_t n_ = 0;
    std::vector<Word> w_;
};

// dst[offset + i] ^= src[i] for all i.
inline void xor_at(BitVec& dst, const BitVec& src, std::size_t offset)
{
    if (offset + src.size() > dst.size())
        throw ContractError("xor_at out of range");
    const Word* s = src.data();
    Word* d = dst.data();
    std::size_t nw = words_for(src.size());
    std::size_t w0 = offset / WORD_BITS, sh = offset % WORD_BITS;
    std::size_t dw = words_for(dst.size());
    for (std::size_t k = 0; k < nw; ++k) {
        Word x = s[k];
        if (!x)
            continue;
        d[w0 + k] ^= x << sh;
        if (sh && w0 + k + 1 < dw)
            d[w0 + k + 1] ^= x >> (WORD_BITS - sh);
    }
}

// Dense matrix over GF(2); rows are packed into 64-bit words.
class F2Matrix {
public:
    F2Matrix() = default;
    F2Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), stride_(words_for(cols)), data_(rows * stride_, 0) {}

    static F2Matrix identity(std::size_t n)
    {
        F2Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m.set(i, i);
        return m;
    }
    static F2Matrix from_rows(const std::vector<std::vector<int>>& rows)
    {
        std::size_t c = rows.empty() ? 0 : rows[0].size();
        F2Matrix m(rows.size(), c);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != c)
                throw ContractError("ragged matrix literal");
            for (std::size_t j = 0; j < c; ++j)
                m.set(i, j, rows[i][j] & 1);
        }
        return m;
    }
    static F2Matrix from_rows(const std::vector<BitVec>& rows, std::size_t cols)
    {
        F2Matrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i)
            m.set_row(i, rows[i]);
        return m;
    }
    template <class Rng>
    static F2Matrix random(std::size_t rows, std::size_t cols, Rng& rng)
    {
        F2Matrix m(rows, cols);
        std::uniform_int_distribution<Word> dist;
        for (auto& w : m.data_)
            w = dist(rng);
        m.clear_tails();
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const { return (row_ptr(r)[c / WORD_BITS] >> (c % WORD_BITS)) & 1u; }
    void set(std::size_t r, std::size_t c, bool v = true)
    {
        Word m = Word(1) << (c % WORD_BITS);
        if (v)
            row_ptr(r)[c / WORD_BITS] |= m;
        else
            row_ptr(r)[c / WORD_BITS] &= ~m;
    }
    void flip(std::size_t r, std::size_t c) { row_ptr(r)[c / WORD_BITS] ^= Word(1) << (c % WORD_BITS); }

    Word* row_ptr(std::size_t r) { return data_.data() + r * stride_; }
    const Word* row_ptr(std::size_t r) const { return data_.data() + r * stride_; }

    BitVec row(std::size_t r) const
    {
        BitVec v(cols_);
        std::copy(row_ptr(r), row_ptr(r) + stride_, v.data());
        return v;
    }
    void set_row(std::size_t r, const BitVec& v)
    {
        if (v.size() != cols_)
            throw ContractError("row length mismatch");
        std::copy(v.data(), v.data() + stride_, row_ptr(r));
    }
    BitVec col(std::size_t c) const
    {
        BitVec v(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            if (get(r, c))
                v.set(r);
        return v;
    }
    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a != b)
            std::swap_ranges(row_ptr(a), row_ptr(a) + stride_, row_ptr(b));
    }
    // row[dst] ^= row[src], touching words from `from_word` on.
    void add_row(std::size_t dst, std::size_t src, std::size_t from_word = 0)
    {
        Word* d = row_ptr(dst);
        const Word* s = row_ptr(src);
        for (std::size_t k = from_word; k < stride_; ++k)
            d[k] ^= s[k];
    }

    F2Matrix transpose() const
    {
        F2Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            const Word* p = row_ptr(r);
            for (std::size_t k = 0; k < stride_; ++k) {
                Word x = p[k];
                while (x) {
                    std::size_t c = k * WORD_BITS + std::countr_zero(x);
                    t.set(c, r);
                    x &= x - 1;
                }
            }
        }
        return t;
    }

    BitVec operator*(const BitVec& x) const
    {
        if (x.size() != cols_)
            throw ContractError("matrix-vector dimension mismatch");
        BitVec y(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            Word acc = 0;
            const Word* p = row_ptr(r);
            for (std::size_t k = 0; k < stride_; ++k)
                acc ^= p[k] & x.data()[k];
            if (std::popcount(acc) & 1)
                y.set(r);
        }
        return y;
    }
    F2Matrix operator*(const F2Matrix& b) const
    {
        if (cols_ != b.rows_)
            throw ContractError("matrix product dimension mismatch");
        F2Matrix c(rows_, b.cols_);
        for (std::size_t r = 0; r < rows_; ++r) {
            const Word* p = row_ptr(r);
            Word* out = c.row_ptr(r);
            for (std::size_t k = 0; k < stride_; ++k) {
                Word x = p[k];
                while (x) {
                    std::size_t i = k * WORD_BITS + std::countr_zero(x);
                    const Word* q = b.row_ptr(i);
                    for (std::size_t j = 0; j < c.stride_; ++j)
                        out[j] ^= q[j];
                    x &= x - 1;
                }
            }
        }
        return c;
    }
    F2Matrix& operator+=(const F2Matrix& o)
    {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw ContractError("matrix sum dimension mismatch");
        for (std::size_t k = 0; k < data_.size(); ++k)
            data_[k] ^= o.data_[k];
        return *this;
    }
    friend F2Matrix operator+(F2Matrix a, const F2Matrix& b) { return a += b; }

    bool operator==(const F2Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }
    bool is_zero() const
    {
        for (Word w : data_)
            if (w)
                return false;
        return true;
    }

    // Horizontal concatenation [this | o].
    F2Matrix hcat(const F2Matrix& o) const
    {
        if (rows_ != o.rows_)
            throw ContractError("hcat row mismatch");
        F2Matrix m(rows_, cols_ + o.cols_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c)
                if (get(r, c))
                    m.set(r, c);
            for (std::size_t c = 0; c < o.cols_; ++c)
                if (o.get(r, c))
                    m.set(r, cols_ + c);
        }
        return m;
    }

private:
    void clear_tails()
    {
        if (cols_ % WORD_BITS == 0 || stride_ == 0)
            return;
        Word mask = (Word(1) << (cols_ % WORD_BITS)) - 1;
        for (std::size_t r = 0; r < rows_; ++r)
            row_ptr(r)[stride_ - 1] &= mask;
    }

    std::size_t rows_ = 0, cols_ = 0, stride_ = 0;
    std::vector<Word> data_;
};

struct RrefResult {
    F2Matrix matrix;
    std::vector<std::size_t> pivots;
};

// In-place reduction; returns pivot columns. Only columns < col_limit are used as pivots.
inline std::vector<std::size_t> rref_inplace(F2Matrix& m, std::size_t col_limit)
{
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < col_limit && r < m.rows(); ++c) {
        std::size_t w = c / WORD_BITS;
        Word bit = Word(1) << (c % WORD_BITS);
        std::size_t p = r;
        while (p < m.rows() && !(m.row_ptr(p)[w] & bit))
            ++p;
        if (p == m.rows())
            continue;
        m.swap_rows(r, p);
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (i != r && (m.row_ptr(i)[w] & bit))
                m.add_row(i, r, w);
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline RrefResult rref(const F2Matrix& m)
{
    RrefResult res{m, {}};
    res.pivots = rref_inplace(res.matrix, m.cols());
    return res;
}

inline std::size_t rank(const F2Matrix& m) { return rref(m).pivots.size(); }

// Span of reduced echelon vectors, pivots strictly increasing.
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient) : ambient_(ambient) {}

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<BitVec>& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    BitVec reduce(BitVec v) const
    {
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (v.get(pivots_[i]))
                v ^= basis_[i];
        return v;
    }
    bool contains(const BitVec& v) const { return !reduce(v).any(); }

    // Adds v if independent; keeps the basis fully reduced.
    bool insert(const BitVec& v)
    {
        if (v.size() != ambient_)
            throw ContractError("subspace ambient mismatch");
        BitVec r = reduce(v);
        if (!r.any())
            return false;
        std::size_t p = r.first();
        for (auto& b : basis_)
            if (b.get(p))
                b ^= r;
        auto it = std::lower_bound(pivots_.begin(), pivots_.end(), p);
        auto pos = it - pivots_.begin();
        pivots_.insert(it, p);
        basis_.insert(basis_.begin() + pos, r);
        return true;
    }

private:
    std::size_t ambient_ = 0;
    std::vector<BitVec> basis_;
    std::vector<std::size_t> pivots_;
};

// Null space {x : m x = 0}.
inline Subspace kernel(const F2Matrix& m)
{
    RrefResult r = rref(m);
    Subspace k(m.cols());
    std::vector<char> is_pivot(m.cols(), 0);
    for (auto p : r.pivots)
        is_pivot[p] = 1;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f])
            continue;
        BitVec x(m.cols());
        x.set(f);
        for (std::size_t i = 0; i < r.pivots.size(); ++i)
            if (r.matrix.get(i, f))
                x.set(r.pivots[i]);
        k.insert(x);
    }
    return k;
}

// Kernel of the map whose images of the source basis are the given rows (i.e. the left null space).
inline Subspace kernel_of_images(const std::vector<BitVec>& images, std::size_t target_dim)
{
    std::size_t n = images.size();
    F2Matrix aug(n, target_dim + n);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto c : images[i].support())
            aug.set(i, c);
        aug.set(i, target_dim + i);
    }
    auto piv = rref_inplace(aug, target_dim);
    Subspace k(n);
    for (std::size_t i = piv.size(); i < n; ++i) {
        BitVec x(n);
        for (std::size_t c = 0; c < n; ++c)
            if (aug.get(i, target_dim + c))
                x.set(c);
        k.insert(x);
    }
    return k;
}

inline std::optional<BitVec> solve(const F2Matrix& m, const BitVec& b)
{
    if (b.size() != m.rows())
        throw ContractError("solve: right-hand side has wrong length");
    F2Matrix aug(m.rows(), m.cols() + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m.get(r, c))
                aug.set(r, c);
        if (b.get(r))
            aug.set(r, m.cols());
    }
    auto piv = rref_inplace(aug, m.cols() + 1);
    if (!piv.empty() && piv.back() == m.cols())
        return std::nullopt;
    BitVec x(m.cols());
    for (std::size_t i = 0; i < piv.size(); ++i)
        if (aug.get(i, m.cols()))
            x.set(piv[i]);
    return x;
}

}  // namespace hcm
