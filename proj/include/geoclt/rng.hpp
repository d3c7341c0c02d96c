#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <string>
#include <vector>

namespace geoclt {

/// SplitMix64 finalizer; used to derive Philox keys from (seed, path).
constexpr std::uint64_t splitmix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Philox4x32-10 block function (Salmon et al., Random123).
/// Maps a 128-bit counter and 64-bit key to 128 random bits.
constexpr std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key)
{
    constexpr std::uint32_t kMulA = 0xD2511F53u;
    constexpr std::uint32_t kMulB = 0xCD9E8D57u;
    constexpr std::uint32_t kWeylA = 0x9E3779B9u;
    constexpr std::uint32_t kWeylB = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeylA;
        key[1] += kWeylB;
    }
    return ctr;
}

/**
 * Counter-based random stream addressed by (master_seed, path).
 *
 * The key is a hash of the master seed and every path component, the
 * counter starts at zero. Two streams with equal (seed, path) produce
 * bit-identical sequences; streams with different paths use different
 * Philox keys. Streams are plain values: copy one to fork a replay.
 */
class SeedStream {
  public:
    explicit SeedStream(std::uint64_t master_seed, std::vector<std::uint64_t> path = {})
        : master_seed_(master_seed), path_(std::move(path))
    {
        rekey();
    }

    std::uint64_t master_seed() const { return master_seed_; }
    const std::vector<std::uint64_t>& path() const { return path_; }

    /// Independent stream whose path extends this one by `index`.
    SeedStream child(std::uint64_t index) const
    {
        auto p = path_;
        p.push_back(index);
        return SeedStream(master_seed_, std::move(p));
    }

    SeedStream child(std::initializer_list<std::uint64_t> indices) const
    {
        auto p = path_;
        p.insert(p.end(), indices.begin(), indices.end());
        return SeedStream(master_seed_, std::move(p));
    }

    /// Path rendered as "a/b/c" (empty path renders as "-").
    std::string path_string() const;

    std::uint64_t next_u64()
    {
        if (buffered_ == 0) {
            const std::array<std::uint32_t, 4> ctr = {
                static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32), 0u,
                0u};
            block_ = philox4x32(ctr, key_);
            ++counter_;
            buffered_ = 2;
        }
        const int slot = 2 - buffered_;
        --buffered_;
        return (static_cast<std::uint64_t>(block_[2 * slot + 1]) << 32) | block_[2 * slot];
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Standard normal via Box-Muller (platform-independent, unlike std::normal_distribution).
    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double a = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    /// Standard exponential variate.
    double exponential() { return -std::log(uniform_pos()); }

  private:
    void rekey()
    {
        std::uint64_t h = splitmix64(master_seed_);
        for (std::uint64_t p : path_)
            h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ull));
        key_ = {static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    }

    std::uint64_t master_seed_;
    std::vector<std::uint64_t> path_;
    std::array<std::uint32_t, 2> key_{};
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int buffered_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

inline std::string SeedStream::path_string() const
{
    if (path_.empty())
        return "-";
    std::string s;
    for (std::size_t i = 0; i < path_.size(); ++i) {
        if (i)
            s += '/';
        s += std::to_string(path_[i]);
    }
    return s;
}

} // namespace geoclt
