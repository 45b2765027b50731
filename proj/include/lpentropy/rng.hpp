#pragma once

#include <cstdint>
#include <random>

namespace lpe {

//! Reproducible random stream keyed by a (seed, stream) pair.
//!
//! The engine is std::mt19937_64 seeded through std::seed_seq, both of which
//! are fully specified by the standard, so a given key produces the same bits
//! on every conforming platform. Distinct stream indices give unrelated
//! engine states, which lets Monte Carlo replicates run in any order.
class RandomStream
{
public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }

  //! Uniform draw on the open interval (0, 1) with 53 random bits.
  double uniform_open();

private:
  std::mt19937_64 engine_;
};

//! Stream index for cell (sample size, replicate) of an experiment grid.
constexpr std::uint64_t
cell_stream(std::uint64_t sample_size, std::uint64_t replicate)
{
  return (sample_size << 32) ^ replicate;
}

} // namespace lpe
