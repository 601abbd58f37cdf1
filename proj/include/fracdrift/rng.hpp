#pragma once
#include <cstdint>

namespace fracdrift {

/// Seed for a deterministic Gaussian stream. Substreams are derived by
/// mixing tags into the master seed, so replicate r of a study draws from
/// derive(master, r) independently of every other replicate.
struct RngSeed {
    std::uint64_t value = 0;
};

/// splitmix64 step; also used to expand a seed into generator state.
std::uint64_t splitmix64(std::uint64_t& state);

/// Derive a child seed from (seed, tag). Distinct tags give decorrelated streams.
RngSeed derive_seed(RngSeed seed, std::uint64_t tag);

/// xoshiro256** with splitmix64 seeding; Gaussians by Box-Muller.
/// Fixed algorithm, so a seed pins the stream bit-for-bit.
class GaussianStream {
  public:
    explicit GaussianStream(RngSeed seed);

    std::uint64_t next_u64();
    double uniform01();  // (0, 1]
    double gaussian();   // N(0, 1)

  private:
    std::uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace fracdrift
