#pragma once

// Philox4x32-10 counter-based generator. A stream is fixed by (seed, stream
// index); draws advance a 64-bit block counter, so any path can be replayed
// without touching the others.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace twodiv {

using Philox4x32Block = std::array<std::uint32_t, 4>;

inline Philox4x32Block philox4x32_10(Philox4x32Block ctr, std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

class PhiloxStream {
public:
    PhiloxStream(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() {
        if (pos_ >= 4) refill();
        const std::uint64_t hi = block_[pos_] >> 5;  // 27 bits
        const std::uint64_t lo = block_[pos_ + 1] >> 6;  // 26 bits
        pos_ += 2;
        return (static_cast<double>((hi << 26) | lo) + 0.5) * 0x1.0p-53;
    }

    /// Exponential with the given rate; +inf when rate <= 0.
    double exponential(double rate) {
        if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
        return -std::log1p(-uniform()) / rate;
    }

    std::uint64_t blocks_used() const { return counter_; }

private:
    void refill() {
        const Philox4x32Block ctr{static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32),
                                  static_cast<std::uint32_t>(counter_),
                                  static_cast<std::uint32_t>(counter_ >> 32)};
        block_ = philox4x32_10(ctr, key_);
        ++counter_;
        pos_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    Philox4x32Block block_{};
    int pos_ = 4;
};

}  // namespace twodiv
