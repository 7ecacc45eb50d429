#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hompart {

/**
 * Fixed-width dense bit vector. This is the adjacency-row workhorse: every
 * counting path in the library reduces to AND/ANDNOT/XOR popcounts over
 * these, so the word loop stays branch-free and all counts stay exact
 * integers.
 */
class Bits {
public:
    Bits() : n_(0) {}
    explicit Bits(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }

    void set(std::size_t i) { w_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
    void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    void assign(std::size_t i, bool v) { v ? set(i) : reset(i); }
    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

    void clear() { std::fill(w_.begin(), w_.end(), 0); }

    long long count() const {
        long long c = 0;
        for (std::uint64_t x : w_) c += std::popcount(x);
        return c;
    }

    bool any() const {
        for (std::uint64_t x : w_) if (x) return true;
        return false;
    }

    Bits& operator&=(const Bits& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }
    Bits& operator|=(const Bits& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }
    Bits& operator^=(const Bits& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
        return *this;
    }
    // this &= ~o
    Bits& and_not(const Bits& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
        return *this;
    }

    friend Bits operator&(Bits a, const Bits& b) { a &= b; return a; }
    friend Bits operator|(Bits a, const Bits& b) { a |= b; return a; }
    friend Bits operator^(Bits a, const Bits& b) { a ^= b; return a; }

    // Bits in [n, capacity) are invariantly zero; complement re-masks the tail.
    Bits complement() const {
        Bits r(n_);
        for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = ~w_[i];
        r.mask_tail();
        return r;
    }

    bool operator==(const Bits& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator<(const Bits& o) const { return n_ != o.n_ ? n_ < o.n_ : w_ < o.w_; }

    bool is_subset_of(const Bits& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }

    bool intersects(const Bits& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & o.w_[i]) return true;
        return false;
    }

    long long and_count(const Bits& o) const {
        long long c = 0;
        for (std::size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] & o.w_[i]);
        return c;
    }
    // |this \ o|
    long long and_not_count(const Bits& o) const {
        long long c = 0;
        for (std::size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] & ~o.w_[i]);
        return c;
    }
    // Hamming distance
    long long xor_count(const Bits& o) const {
        long long c = 0;
        for (std::size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] ^ o.w_[i]);
        return c;
    }

    // Lowest set index or size() when empty.
    std::size_t find_first() const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i]) return (i << 6) + std::countr_zero(w_[i]);
        return n_;
    }

    template <typename F>
    void for_each_set(F&& f) const {
        for (std::size_t i = 0; i < w_.size(); ++i) {
            std::uint64_t x = w_[i];
            while (x) {
                f((i << 6) + std::countr_zero(x));
                x &= x - 1;
            }
        }
    }

    std::vector<int> to_vector() const {
        std::vector<int> v;
        v.reserve(static_cast<std::size_t>(count()));
        for_each_set([&](std::size_t i) { v.push_back(static_cast<int>(i)); });
        return v;
    }

    static Bits from_indices(std::size_t n, const std::vector<int>& idx) {
        Bits b(n);
        for (int i : idx) {
            if (i < 0 || static_cast<std::size_t>(i) >= n)
                throw std::out_of_range("Bits::from_indices: index out of range");
            b.set(static_cast<std::size_t>(i));
        }
        return b;
    }

    static Bits full(std::size_t n) {
        Bits b(n);
        std::fill(b.w_.begin(), b.w_.end(), ~std::uint64_t{0});
        b.mask_tail();
        return b;
    }

    // Raw word access for flat-table interop. Writers must keep bits at and
    // above size() zero; all word sources in this library already do.
    std::size_t word_count() const { return w_.size(); }
    std::uint64_t word(std::size_t i) const { return w_[i]; }
    void set_word(std::size_t i, std::uint64_t v) { w_[i] = v; }
    void or_word(std::size_t i, std::uint64_t v) { w_[i] |= v; }
    void and_word(std::size_t i, std::uint64_t v) { w_[i] &= v; }

private:
    void mask_tail() {
        if (n_ & 63) w_.back() &= (std::uint64_t{1} << (n_ & 63)) - 1;
    }

    std::size_t n_;
    std::vector<std::uint64_t> w_;
};

} // namespace hompart
