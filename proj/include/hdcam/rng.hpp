#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace hdcam {

// Philox4x32-10 block cipher (Salmon et al., SC'11). Counter-based: each
// 128-bit output block is a pure function of (key, counter), so any trial,
// read, or cell can be given its own stream and evaluated in any order or
// on any thread with identical results.
struct Philox4x32 {
    using block = std::array<std::uint32_t, 4>;

    static block round10(block ctr, std::uint32_t k0, std::uint32_t k1) {
        for (int r = 0; r < 10; ++r) {
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k0,
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k1,
                   static_cast<std::uint32_t>(p0)};
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        return ctr;
    }
};

// One independent draw stream addressed by (seed, domain, index, tag).
// Within the stream, successive draws advance a 32-bit block counter.
// Intended addressing: domain distinguishes the consumer (MC trial vs read
// simulation vs analog classify), index is the trial/read number, tag is
// the Hamming distance or a secondary subscript.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint32_t domain, std::uint64_t index, std::uint32_t tag)
        : k0_(static_cast<std::uint32_t>(seed)),
          k1_(static_cast<std::uint32_t>(seed >> 32)),
          c1_(domain ^ static_cast<std::uint32_t>(index >> 32)),
          c2_(static_cast<std::uint32_t>(index)),
          c3_(tag) {}

    std::uint64_t next_u64() {
        if (!have_hi_) {
            blk_ = Philox4x32::round10({block_++, c1_, c2_, c3_}, k0_, k1_);
            have_hi_ = true;
            return (std::uint64_t{blk_[1]} << 32) | blk_[0];
        }
        have_hi_ = false;
        return (std::uint64_t{blk_[3]} << 32) | blk_[2];
    }

    // Uniform on [0, 1), 53-bit resolution.
    double next_u01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; one pair per two uniforms.
    double next_normal() {
        if (have_z_) {
            have_z_ = false;
            return z1_;
        }
        // u1 in (0, 1] so the log is finite.
        const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = next_u01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        z1_ = r * std::sin(a);
        have_z_ = true;
        return r * std::cos(a);
    }

    // exp(sigma_log * Z): lognormal with unit median, always positive.
    double next_lognormal(double sigma_log) {
        return std::exp(sigma_log * next_normal());
    }

    // Base in {0,1,2,3} (A,C,G,T).
    int next_base() { return static_cast<int>(next_u64() % 4); }

private:
    std::uint32_t k0_, k1_;
    std::uint32_t c1_, c2_, c3_;
    std::uint32_t block_ = 0;
    Philox4x32::block blk_{};
    bool have_hi_ = false;
    bool have_z_ = false;
    double z1_ = 0.0;
};

} // namespace hdcam
