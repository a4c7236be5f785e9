#pragma once

#include <cstdint>
#include <initializer_list>

namespace semcoop {

// Deterministic counter-based generator (splitmix64 core). Every consumer of
// randomness derives its own stream from (master seed, purpose tag, indices),
// so results do not depend on the order in which pairs/classes are evaluated.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // uniform in [0,1)
  double next_double();

  // standard normal via Box-Muller, one value per call (no cached spare,
  // keeps the stream position a pure function of the call count)
  double next_gaussian();

 private:
  std::uint64_t state_;
};

// Collapse (seed, tag, indices...) into a well-mixed 64-bit stream seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose,
                          std::initializer_list<std::uint64_t> indices = {});

// Stream purpose tags.
namespace streams {
inline constexpr std::uint64_t kGroundTruth = 0x67726f756e645452;  // "groundTR"
inline constexpr std::uint64_t kInitSkb = 0x696e6974534b4221;      // "initSKB!"
inline constexpr std::uint64_t kPredict = 0x7072656469637431;      // "predict1"
}  // namespace streams

}  // namespace semcoop
