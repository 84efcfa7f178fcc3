#pragma once

#include <cstdint>

namespace ruin::detail {

// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ (Blackman & Vigna). Satisfies UniformRandomBitGenerator.
// The state is derived from (seed, stream) alone, which makes every stream
// addressable without advancing a shared generator.
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    Xoshiro256pp(std::uint64_t seed, std::uint64_t stream)
    {
        std::uint64_t z = mix64(seed + 0x9e3779b97f4a7c15ULL) ^ mix64(stream ^ 0xd1b54a32d192ed03ULL);
        for (auto& word : s_) {
            z += 0x9e3779b97f4a7c15ULL;
            word = mix64(z);
        }
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()()
    {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
};

}  // namespace ruin::detail
