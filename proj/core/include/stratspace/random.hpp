#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace stratspace {

// Counter-addressed random substreams.
//
// A stream is identified by (root seed, path). Its state is a pure function
// of that identity, so child(i) never depends on how many draws the parent
// has consumed, and streams for different replications/strata can be drawn
// in any order or on any thread with identical results. Output is
// xoshiro256** seeded through SplitMix64; both are fully specified integer
// algorithms, so draws are bit-identical across platforms.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t root_seed,
                        std::initializer_list<std::uint64_t> path = {});
  RandomStream(std::uint64_t root_seed, std::vector<std::uint64_t> path);

  // Independent substream with `index` appended to the path.
  [[nodiscard]] RandomStream child(std::uint64_t index) const;

  std::uint64_t operator()() { return next_u64(); }
  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  [[nodiscard]] std::uint64_t root_seed() const { return root_seed_; }
  [[nodiscard]] std::span<const std::uint64_t> path() const { return path_; }

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() {
    return std::numeric_limits<std::uint64_t>::max();
  }

 private:
  void reseed();

  std::uint64_t root_seed_;
  std::vector<std::uint64_t> path_;
  std::uint64_t s_[4]{};
};

// SplitMix64 finalizer; exposed for hashing stream identities.
std::uint64_t mix64(std::uint64_t z);

}  // namespace stratspace
