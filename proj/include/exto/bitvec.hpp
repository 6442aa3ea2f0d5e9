#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "exto/errors.hpp"

namespace exto {

/// Packed bit vector with the lagged joint-count kernel that makes
/// permutation runs cheap: counting pairs (t, t+h) with both bits set costs
/// O(n/64) word operations per lag.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    explicit BitVec(const std::vector<bool>& bits) : BitVec(bits.size()) {
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (bits[i]) set(i);
    }

    std::size_t size() const noexcept { return n_; }

    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) {
        words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }
    bool test(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1;
    }
    void clear() { std::fill(words_.begin(), words_.end(), 0); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    std::vector<bool> to_bools() const {
        std::vector<bool> out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = test(i);
        return out;
    }

    /// Number of indices t in [0, n-h) with this[t] and other[t+h] both set.
    /// Streams other >> h against this word by word.
    std::size_t joint_count(const BitVec& other, std::size_t h) const {
        if (other.n_ != n_) throw data_error("bit vector length mismatch");
        if (h >= n_) return 0;
        const std::size_t nw = words_.size();
        const std::size_t wshift = h >> 6;
        const unsigned bshift = static_cast<unsigned>(h & 63);
        std::size_t c = 0;
        for (std::size_t i = 0; i + wshift < nw; ++i) {
            std::uint64_t shifted = other.words_[i + wshift] >> bshift;
            if (bshift != 0 && i + wshift + 1 < nw)
                shifted |= other.words_[i + wshift + 1] << (64 - bshift);
            c += static_cast<std::size_t>(std::popcount(words_[i] & shifted));
        }
        return c;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace exto
