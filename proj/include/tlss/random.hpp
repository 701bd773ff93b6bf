#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace tlss {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The 64-bit seed is the key; the 128-bit counter holds a 64-bit block index
/// and the 64-bit stream id, so every (seed, stream) pair owns an independent
/// sequence and needs no shared state. Satisfies UniformRandomBitGenerator.
class PhiloxEngine {
public:
    using result_type = std::uint64_t;

    explicit PhiloxEngine(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (position_ == 4) refill();
        const std::uint64_t lo = buffer_[position_++];
        const std::uint64_t hi = buffer_[position_++];
        return (hi << 32) | lo;
    }

    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Block bijection(Block counter, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * counter[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * counter[2];
            counter = {static_cast<std::uint32_t>(p1 >> 32) ^ counter[1] ^ key[0],
                       static_cast<std::uint32_t>(p1),
                       static_cast<std::uint32_t>(p0 >> 32) ^ counter[3] ^ key[1],
                       static_cast<std::uint32_t>(p0)};
        }
        return counter;
    }

private:
    void refill() noexcept {
        const Block counter{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                            static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
        buffer_ = bijection(counter, key_);
        ++block_;
        position_ = 0;
    }

    Key key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Block buffer_{};
    int position_ = 4;
};

/// Uniform variate on the open interval (0,1) with 53 random bits.
template <class Engine>
double uniform_open01(Engine& engine) {
    return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace tlss
