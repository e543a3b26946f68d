// rng.hpp
// Counter-based random number generation (Philox4x32-10).  A single 64-bit
// seed plus a 64-bit stream id (path index) determines every draw, so runs
// are bit-reproducible regardless of thread count or evaluation order.
#pragma once

#include <cmath>
#include <cstdint>

namespace slegf {

namespace detail {

inline void philox_round(uint32_t ctr[4], const uint32_t key[2]) {
    constexpr uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    const uint64_t p0 = static_cast<uint64_t>(M0) * ctr[0];
    const uint64_t p1 = static_cast<uint64_t>(M1) * ctr[2];
    const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
    const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
    uint32_t out[4];
    out[0] = hi1 ^ ctr[1] ^ key[0];
    out[1] = lo1;
    out[2] = hi0 ^ ctr[3] ^ key[1];
    out[3] = lo0;
    ctr[0] = out[0];
    ctr[1] = out[1];
    ctr[2] = out[2];
    ctr[3] = out[3];
}

inline void philox4x32_10(uint32_t ctr[4], uint32_t k0, uint32_t k1) {
    constexpr uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    uint32_t key[2] = {k0, k1};
    for (int r = 0; r < 10; ++r) {
        philox_round(ctr, key);
        key[0] += W0;
        key[1] += W1;
    }
}

} // namespace detail

// One independent stream of uniforms/normals, identified by (seed, stream).
class CounterRng {
  public:
    CounterRng(uint64_t seed, uint64_t stream)
        : k0_(static_cast<uint32_t>(seed)), k1_(static_cast<uint32_t>(seed >> 32)),
          s0_(static_cast<uint32_t>(stream)), s1_(static_cast<uint32_t>(stream >> 32)) {}

    // Uniform on (0, 1): never returns 0 or 1.
    double uniform() {
        if (have_ == 0) refill();
        uint64_t u = buf_[--have_];
        return (static_cast<double>(u >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller.
    double normal() {
        if (have_normal_) {
            have_normal_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double c = std::cos(6.283185307179586477 * u2);
        const double s = std::sin(6.283185307179586477 * u2);
        spare_ = r * s;
        have_normal_ = true;
        return r * c;
    }

  private:
    void refill() {
        uint32_t ctr[4] = {static_cast<uint32_t>(n_), static_cast<uint32_t>(n_ >> 32), s0_, s1_};
        detail::philox4x32_10(ctr, k0_, k1_);
        buf_[0] = (static_cast<uint64_t>(ctr[0]) << 32) | ctr[1];
        buf_[1] = (static_cast<uint64_t>(ctr[2]) << 32) | ctr[3];
        have_ = 2;
        ++n_;
    }

    uint32_t k0_, k1_, s0_, s1_;
    uint64_t n_ = 0;
    uint64_t buf_[2] = {0, 0};
    int have_ = 0;
    bool have_normal_ = false;
    double spare_ = 0.0;
};

} // namespace slegf
