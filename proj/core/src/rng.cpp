#include "semcoop/rng.hpp"

#include <cmath>
#include <numbers>

namespace semcoop {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t RngStream::next_u64() { return splitmix64(state_); }

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_gaussian() {
  // u1 must be strictly positive for the log
  double u1 = 0.0;
  do {
    u1 = next_double();
  } while (u1 <= 0.0);
  const double u2 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose,
                          std::initializer_list<std::uint64_t> indices) {
  std::uint64_t s = master;
  splitmix64(s);
  s ^= purpose;
  splitmix64(s);
  for (std::uint64_t idx : indices) {
    s ^= 0x100000001b3ULL * (idx + 1);
    splitmix64(s);
  }
  return splitmix64(s);
}

}  // namespace semcoop
