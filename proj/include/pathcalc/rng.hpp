#pragma once

#include <array>
#include <cstdint>

namespace pathcalc {

inline constexpr const char* kRngAlgorithm = "philox4x32-10";

/// Philox4x32 with 10 rounds (Salmon et al. counter-based generator).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

/// Stream of draws for one (seed, stream) pair. The seed is the key, counter
/// words 2-3 hold the stream index and words 0-1 count blocks, so draw k of
/// stream s never depends on how other streams were consumed.
class PhiloxStream {
public:
    PhiloxStream(std::uint64_t seed, std::uint64_t stream);

    std::uint32_t next_u32();
    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }
    /// Standard normal by Box-Muller (both outputs used).
    double normal();
    /// Poisson by inversion; fine for the small means used in simulation.
    std::uint32_t poisson(double mean);

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int used_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace pathcalc
