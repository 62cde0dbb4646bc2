#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace divgame {

// splitmix64, used only to expand seeds into generator state.
struct SplitMix64 {
    std::uint64_t x;

    std::uint64_t next() {
        std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

// xoshiro256** (Blackman/Vigna).  One independent instance per stream, so
// every path's randomness is a pure function of (seed, stream index).
class Xoshiro256 {
  public:
    Xoshiro256(std::uint64_t seed, std::uint64_t stream) {
        SplitMix64 sm{seed ^ (0x632BE59BD9B4E019ull * (stream + 1))};
        for (auto& w : s_) w = sm.next();
        s_[0] |= 1;  // keep the state away from all-zero
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t s_[4];
};

// Normal + uniform draws for one simulated path.  Antithetic partners share a
// stream and negate the normals; the raw uniforms (used for the in-step ruin
// bridge) are never negated.
class PathRng {
  public:
    PathRng(std::uint64_t seed, std::uint64_t stream, bool negate)
        : gen_(seed, stream), negate_(negate) {}

    double normal() {
        double z;
        if (has_cached_) {
            has_cached_ = false;
            z = cached_;
        } else {
            // Box-Muller; u1 in (0, 1] keeps the log finite.
            const double u1 = 1.0 - gen_.uniform01();
            const double u2 = gen_.uniform01();
            const double r = std::sqrt(-2.0 * std::log(u1));
            const double a = 2.0 * std::numbers::pi * u2;
            z = r * std::cos(a);
            cached_ = r * std::sin(a);
            has_cached_ = true;
        }
        return negate_ ? -z : z;
    }

    double uniform() { return gen_.uniform01(); }

  private:
    Xoshiro256 gen_;
    bool negate_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace divgame
