#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace mdcf::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32-10 block function (Salmon et al., Random123).
constexpr Counter philox4x32(Counter ctr, Key key) noexcept
{
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    for (int round = 0; round < 10; ++round)
    {
        if (round > 0)
        {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
               static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
               static_cast<std::uint32_t>(p0)};
    }
    return ctr;
}

constexpr Key key_from_seed(std::uint64_t seed) noexcept
{
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// Independent randomness consumers inside one replication. Each purpose
/// gets its own counter subspace so that changing how much one consumer
/// draws never shifts the numbers seen by another.
enum class Purpose : std::uint32_t
{
    theta = 1,
    base_wear = 2,
    rate_change_wear = 3,
    arrivals = 4,
    shock = 5,
    shock_count = 6,
};

/*!
 * Sequential 64-bit generator over one (seed, purpose, replication) subspace.
 *
 * The 256-bit state of a xoshiro256++ engine is taken from the Philox
 * blocks at counters {0|1, 0, purpose, replication}, so every stream is a
 * pure function of its coordinates while each draw costs only a few
 * cycles. Satisfies UniformRandomBitGenerator.
 */
class CounterStream
{
  public:
    using result_type = std::uint64_t;

    CounterStream(std::uint64_t seed, Purpose purpose, std::uint32_t replication) noexcept
    {
        const Key key = key_from_seed(seed);
        const auto word = static_cast<std::uint32_t>(purpose);
        const Counter lo = philox4x32({0, 0, word, replication}, key);
        const Counter hi = philox4x32({1, 0, word, replication}, key);
        state_ = {join(lo[0], lo[1]), join(lo[2], lo[3]), join(hi[0], hi[1]),
                  join(hi[2], hi[3])};
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0)
        {
            state_[0] = 1;  // all-zero state is the one fixed point
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept
    {
        auto& s = state_;
        const std::uint64_t out = rotl(s[0] + s[3], 23) + s[0];
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return out;
    }

  private:
    static constexpr std::uint64_t join(std::uint32_t hi, std::uint32_t lo) noexcept
    {
        return (std::uint64_t{hi} << 32) | lo;
    }
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
    {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

/*!
 * Generator addressed by an explicit (step, slot) coordinate instead of a
 * running position. Two runs that visit the same coordinate see the same
 * numbers no matter what else they drew. The purpose word is shifted left
 * by 16 bits so keyed counters never collide with CounterStream counters.
 */
class KeyedStream
{
  public:
    using result_type = std::uint64_t;

    KeyedStream(std::uint64_t seed, Purpose purpose, std::uint32_t replication,
                std::uint32_t step, std::uint32_t slot) noexcept
        : key_(key_from_seed(seed)),
          ctr_{slot, step, static_cast<std::uint32_t>(purpose) << 16, replication}
    {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept
    {
        if (cursor_ == 2)
        {
            const Counter out = philox4x32(ctr_, key_);
            buffer_[0] = (std::uint64_t{out[0]} << 32) | out[1];
            buffer_[1] = (std::uint64_t{out[2]} << 32) | out[3];
            // Overflow draws walk the high half of the purpose word.
            ctr_[2] += 1;
            cursor_ = 0;
        }
        return buffer_[cursor_++];
    }

  private:
    Key key_;
    Counter ctr_;
    std::array<std::uint64_t, 2> buffer_{};
    int cursor_ = 2;
};

}  // namespace mdcf::rng
