#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace orgsel {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
}

}  // namespace detail

/// xoshiro256** generator with the handful of variates the model needs.
///
/// Satisfies UniformRandomBitGenerator. All derived variates go through Boost
/// distributions or hand-written transforms, so draw sequences are identical
/// across standard library implementations.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed = 0) noexcept {
        std::uint64_t x = seed;
        for (auto& word : state_) {
            word = detail::splitmix64(x);
            x += 0x9e3779b97f4a7c15ULL;
        }
    }

    explicit RandomStream(const std::array<std::uint64_t, 4>& state) noexcept : state_(state) {
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        const std::uint64_t result = detail::rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform01() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        return normal_(*this);
    }

    /// Uniform integer in [0, bound).
    std::size_t index(std::size_t bound) {
        boost::random::uniform_int_distribution<std::size_t> dist(0, bound - 1);
        return dist(*this);
    }

    bool bernoulli(double p) noexcept { return uniform01() < p; }

    const std::array<std::uint64_t, 4>& state() const noexcept { return state_; }

private:
    std::array<std::uint64_t, 4> state_{};
    boost::random::normal_distribution<double> normal_{};
};

/// Independent substream for one replication of an ensemble.
///
/// The state is a pure function of (master_seed, replication_index). Two of the
/// four state words are bijective mixes of the index, so distinct indices under
/// one seed never share a state.
inline RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t replication_index) noexcept {
    const std::uint64_t s = detail::splitmix64(master_seed ^ 0x6a09e667f3bcc909ULL);
    std::array<std::uint64_t, 4> state{
        detail::splitmix64(s),
        detail::splitmix64(replication_index ^ 0xbb67ae8584caa73bULL),
        detail::splitmix64(s + 0x3c6ef372fe94f82bULL),
        detail::splitmix64(replication_index + 0xa54ff53a5f1d36f1ULL) ^ s,
    };
    RandomStream stream(state);
    for (int i = 0; i < 8; ++i) stream();
    return stream;
}

/// Fisher-Yates shuffle driven by RandomStream (std::shuffle is not portable).
template <typename It>
void shuffle(It first, It last, RandomStream& rng) {
    const auto count = static_cast<std::size_t>(last - first);
    for (std::size_t i = count; i > 1; --i) {
        const std::size_t j = rng.index(i);
        using std::swap;
        swap(first[i - 1], first[j]);
    }
}

}  // namespace orgsel
