#pragma once

#include <cstdint>
#include <limits>

namespace labmkt {

/// Which part of a simulated year a random stream feeds.
enum class StreamDomain : std::uint64_t { posting = 1, lottery = 2 };

/// SplitMix64 generator whose starting state is derived from
/// (seed, year, domain, index). Every student's postings and every company's
/// lottery get an independent stream, so results do not depend on the order in
/// which students or companies are processed.
class StreamRng {
public:
    using result_type = std::uint64_t;

    StreamRng(std::uint64_t seed, std::uint64_t year, StreamDomain domain, std::uint64_t index)
    {
        std::uint64_t s = mix(seed ^ 0x243f6a8885a308d3ULL);
        s = mix(s ^ (year + 0x13198a2e03707344ULL));
        s = mix(s ^ (static_cast<std::uint64_t>(domain) * 0xa4093822299f31d0ULL));
        state_ = mix(s ^ (index + 0x082efa98ec4e6c89ULL));
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Unbiased integer in [0, n), n > 0.
    std::uint64_t below(std::uint64_t n)
    {
        const std::uint64_t limit = max() - max() % n;
        std::uint64_t x = (*this)();
        while (x >= limit) {
            x = (*this)();
        }
        return x % n;
    }

private:
    static constexpr std::uint64_t mix(std::uint64_t z)
    {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_ = 0;
};

}  // namespace labmkt
