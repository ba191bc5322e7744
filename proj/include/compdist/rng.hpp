#pragma once

#include <cstdint>
#include <random>

namespace compdist {

/// A reproducible random stream. Distinct stream ids under one seed give
/// statistically independent engines, so parallel work split by stream id
/// is identical to the sequential run.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  std::mt19937_64 engine() const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32), 0x5eedu};
    return std::mt19937_64(seq);
  }

  RngStream substream(std::uint64_t child) const {
    return {seed ^ (0x9e3779b97f4a7c15ull * (stream_id + 1)), child};
  }
};

}  // namespace compdist
