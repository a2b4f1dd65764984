#include "stratspace/random.hpp"

#include <utility>

namespace stratspace {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RandomStream::RandomStream(std::uint64_t root_seed,
                           std::initializer_list<std::uint64_t> path)
    : root_seed_(root_seed), path_(path) {
  reseed();
}

RandomStream::RandomStream(std::uint64_t root_seed,
                           std::vector<std::uint64_t> path)
    : root_seed_(root_seed), path_(std::move(path)) {
  reseed();
}

RandomStream RandomStream::child(std::uint64_t index) const {
  auto path = path_;
  path.push_back(index);
  return RandomStream(root_seed_, std::move(path));
}

void RandomStream::reseed() {
  // Hash the identity; depth is folded in so {a} and {a, 0} differ.
  std::uint64_t h = mix64(root_seed_ + kGolden);
  std::uint64_t depth = 0;
  for (std::uint64_t idx : path_) {
    ++depth;
    h = mix64(h ^ mix64(idx + depth * kGolden));
  }
  std::uint64_t sm = h;
  for (auto& word : s_) {
    sm += kGolden;
    word = mix64(sm);
  }
}

std::uint64_t RandomStream::next_u64() {
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

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::below(std::uint64_t bound) {
  if (bound == 0) return 0;
  // Reject the short tail so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace stratspace
