#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pir/errors.hpp"

namespace pir {

/// Fixed-width vector over GF(2), packed 64 bits per word.  Bits at
/// positions >= width() are kept zero at all times, so whole-word
/// operations (XOR, popcount, comparisons) never see stray state.
class BitVec {
public:
    BitVec() : width_(0) {}
    explicit BitVec(int width) : width_(check_width(width)), words_((width + 63) / 64, 0) {}

    /// Unit vector e_i (0-indexed coordinate).
    static BitVec unit(int width, int i) {
        BitVec v(width);
        v.set(i);
        return v;
    }

    int width() const { return width_; }

    bool test(int i) const {
        check_index(i);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(int i, bool value = true) {
        check_index(i);
        std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (value) words_[i >> 6] |= mask;
        else words_[i >> 6] &= ~mask;
    }

    void flip(int i) {
        check_index(i);
        words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
    }

    BitVec& operator^=(const BitVec& other) {
        if (other.width_ != width_)
            throw DimensionError("BitVec width mismatch: " + std::to_string(width_) +
                                 " vs " + std::to_string(other.width_));
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
        return *this;
    }

    friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

    bool is_zero() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    bool any() const { return !is_zero(); }

    int count() const {
        int c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }

    /// Index of the lowest set bit, or -1 if the vector is zero.
    int leading() const {
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w]) return static_cast<int>(w * 64) + std::countr_zero(words_[w]);
        return -1;
    }

    /// Sorted list of set coordinates.
    std::vector<int> ones() const {
        std::vector<int> out;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                out.push_back(static_cast<int>(w * 64) + std::countr_zero(bits));
                bits &= bits - 1;
            }
        }
        return out;
    }

    bool operator==(const BitVec& other) const {
        return width_ == other.width_ && words_ == other.words_;
    }
    bool operator!=(const BitVec& other) const { return !(*this == other); }

    /// Lexicographic-by-coordinate order; usable as a container key.
    bool operator<(const BitVec& other) const {
        if (width_ != other.width_) return width_ < other.width_;
        for (std::size_t w = words_.size(); w-- > 0;)
            if (words_[w] != other.words_[w]) return words_[w] < other.words_[w];
        return false;
    }

    /// Raw words, exposed so tests can check the trailing-bit invariant.
    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    static int check_width(int width) {
        if (width < 0) throw DimensionError("negative BitVec width");
        return width;
    }
    void check_index(int i) const {
        if (i < 0 || i >= width_)
            throw IndexError("bit index " + std::to_string(i) + " out of range [0, " +
                             std::to_string(width_) + ")");
    }

    int width_;
    std::vector<std::uint64_t> words_;
};

/// Basis of a GF(2) subspace held in reduced echelon form.  Each row's
/// leading coordinate is its lowest set bit; leading coordinates are
/// strictly increasing across rows and appear in no other row.  This makes
/// the row set a canonical function of the span, independent of insertion
/// order, so identical spans always compare equal.
class Gf2Basis {
public:
    explicit Gf2Basis(int width) : width_(width) {}

    int width() const { return width_; }
    int rank() const { return static_cast<int>(rows_.size()); }
    const std::vector<BitVec>& rows() const { return rows_; }

    /// Reduces v against the basis; the result is zero iff v is in the span.
    BitVec reduce(BitVec v) const {
        check_vec(v);
        for (const BitVec& row : rows_) {
            int lead = row.leading();
            if (v.test(lead)) v ^= row;
        }
        return v;
    }

    bool contains(const BitVec& v) const { return reduce(v).is_zero(); }

    bool spans_unit(int i) const { return contains(BitVec::unit(width_, i)); }

    /// Adds v to the span.  Returns true if the rank grew, false if v was
    /// already in the span (including v = 0).
    bool insert(const BitVec& v) {
        BitVec r = reduce(v);
        if (r.is_zero()) return false;
        int lead = r.leading();
        // back-substitute so no earlier row keeps a bit at the new leading column
        for (BitVec& row : rows_)
            if (row.test(lead)) row ^= r;
        auto pos = rows_.begin();
        while (pos != rows_.end() && pos->leading() < lead) ++pos;
        rows_.insert(pos, std::move(r));
        return true;
    }

    bool operator==(const Gf2Basis& other) const {
        return width_ == other.width_ && rows_ == other.rows_;
    }

private:
    void check_vec(const BitVec& v) const {
        if (v.width() != width_)
            throw DimensionError("vector width " + std::to_string(v.width()) +
                                 " does not match basis width " + std::to_string(width_));
    }

    int width_;
    std::vector<BitVec> rows_;
};

/// Rank of a set of vectors.  All vectors must share a width; an empty set
/// has rank 0.
inline int gf2_rank(std::span<const BitVec> vectors) {
    if (vectors.empty()) return 0;
    Gf2Basis basis(vectors.front().width());
    for (const BitVec& v : vectors) basis.insert(v);
    return basis.rank();
}

} // namespace pir
