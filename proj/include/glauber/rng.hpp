#pragma once

// Counter-based random streams (Philox4x32-10).
//
// Every stochastic routine draws from a stream identified by
// (master seed, purpose tag, replica index).  The seed is the Philox key and
// (tag, replica) occupy the upper half of the 128-bit counter, so streams are
// independent of each other and of the order in which replicas are scheduled.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace glauber {

enum class stream_tag : std::uint32_t {
    graph = 1,
    dynamics = 2,
    start_state = 3,
    schedule = 4,
    branching = 5,
    order_statistics = 6,
    test_functions = 7,
    sampling_check = 8,
};

namespace detail {

inline constexpr std::uint32_t philox_m0 = 0xD2511F53u;
inline constexpr std::uint32_t philox_m1 = 0xCD9E8D57u;
inline constexpr std::uint32_t philox_w0 = 0x9E3779B9u;
inline constexpr std::uint32_t philox_w1 = 0xBB67AE85u;

} // namespace detail

using philox_counter = std::array<std::uint32_t, 4>;
using philox_key = std::array<std::uint32_t, 2>;

/// Ten-round Philox4x32 bijection of `counter` under `key`.
constexpr philox_counter philox4x32_10(philox_counter ctr, philox_key key) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += detail::philox_w0;
            key[1] += detail::philox_w1;
        }
        const std::uint64_t p0 = static_cast<std::uint64_t>(detail::philox_m0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(detail::philox_m1) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
               static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
               static_cast<std::uint32_t>(p0)};
    }
    return ctr;
}

/// A deterministic 64-bit random stream.  Satisfies UniformRandomBitGenerator so
/// it can drive <random> distributions, but the hot paths use the members below.
class philox_stream {
public:
    using result_type = std::uint64_t;

    philox_stream() : philox_stream(0, stream_tag::dynamics, 0) {}

    philox_stream(std::uint64_t seed, stream_tag tag, std::uint32_t replica)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          replica_(replica),
          tag_(static_cast<std::uint32_t>(tag)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (used_ == 2) refill();
        return buffer_[used_++];
    }

    /// Uniform double in the open interval (0, 1).
    double uniform() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound), bound > 0 (Lemire's multiply-and-reject).
    std::uint64_t below(std::uint64_t bound) noexcept {
        std::uint64_t x = (*this)();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                x = (*this)();
                m = static_cast<__uint128_t>(x) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    double exponential(double rate) noexcept { return -std::log(uniform()) / rate; }

    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        std::poisson_distribution<std::uint64_t> dist(mean);
        return dist(*this);
    }

    std::uint64_t blocks_consumed() const noexcept { return block_; }

private:
    void refill() noexcept {
        const philox_counter out = philox4x32_10(
            {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32), replica_, tag_},
            key_);
        ++block_;
        buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
        buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
        used_ = 0;
    }

    philox_key key_;
    std::uint32_t replica_;
    std::uint32_t tag_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int used_ = 2;
};

} // namespace glauber
