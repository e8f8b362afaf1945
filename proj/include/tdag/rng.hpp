#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/math/distributions/normal.hpp>

namespace tdag {

/// SplitMix64 finalizer. Used to derive stream ids.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Philox4x32-10 counter-based generator.
///
/// The 64-bit seed is the key. The 128-bit counter is (position, stream): the
/// low 64 bits count blocks, the high 64 bits select the stream. Streams never
/// overlap, so one stream per graph (or per task) gives results that do not
/// depend on scheduling. `substream(tag)` derives a child stream id by mixing
/// the parent stream with the tag through SplitMix64.
///
/// Satisfies UniformRandomBitGenerator with 32-bit outputs.
class Philox {
public:
    using result_type = std::uint32_t;

    explicit Philox(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (used_ == 4) {
            block_ = generate(counter(), key_);
            ++position_;
            used_ = 0;
        }
        return block_[used_++];
    }

    std::uint64_t seed() const noexcept { return std::uint64_t{key_[1]} << 32 | key_[0]; }
    std::uint64_t stream() const noexcept { return stream_; }

    Philox substream(std::uint64_t tag) const noexcept {
        return Philox(seed(), splitmix64(stream_ ^ splitmix64(tag + 1)));
    }

    std::uint64_t next_u64() noexcept {
        std::uint64_t hi = (*this)();
        return hi << 32 | (*this)();
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    /// Uniform on the open interval (0, 1).
    double uniform_open() noexcept { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("below(0)");
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do x = next_u64();
        while (x >= limit);
        return x % n;
    }

    /// Standard normal by inversion of the CDF.
    double normal() {
        static const boost::math::normal_distribution<double> standard;
        return boost::math::quantile(standard, uniform_open());
    }

    /// Index drawn from `probs` by inverse CDF. The last index absorbs rounding.
    template <class Probs>
    int categorical(const Probs& probs) {
        const double u = uniform();
        double acc = 0.0;
        const int k = static_cast<int>(probs.size());
        for (int i = 0; i + 1 < k; ++i) {
            acc += probs[i];
            if (u < acc) return i;
        }
        return k - 1;
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

    /// One Philox4x32-10 block. Exposed for known-answer tests.
    static std::array<std::uint32_t, 4> generate(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) noexcept {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
        }
        return ctr;
    }

private:
    std::array<std::uint32_t, 4> counter() const noexcept {
        return {static_cast<std::uint32_t>(position_), static_cast<std::uint32_t>(position_ >> 32),
                static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t position_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;
};

}  // namespace tdag
