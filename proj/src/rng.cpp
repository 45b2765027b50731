#include "lpentropy/rng.hpp"

namespace lpe {

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
{
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{ lo(seed), hi(seed), lo(stream), hi(stream), 0x6c706531u };
  engine_.seed(seq);
}

double
RandomStream::uniform_open()
{
  // (k + 0.5) / 2^53 for k in [0, 2^53) never hits 0 or 1
  const std::uint64_t k = engine_() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

} // namespace lpe
