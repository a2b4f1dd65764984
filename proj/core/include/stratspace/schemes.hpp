#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "stratspace/geometry.hpp"
#include "stratspace/random.hpp"
#include "stratspace/stratify.hpp"

namespace stratspace {

enum class Scheme { urs, ss1, ss2, tss, sgs };

std::string_view to_string(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);

class SchemeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Site {
  Point location;
  int unit = -1;  // stratum (SS) or tessellation cell (TSS/SGS); -1 for URS
  bool in_domain = true;

  bool operator==(const Site&) const = default;
};

// Regular k x k tessellation used by TSS and SGS. With a random shift the
// lattice is offset and (k+1)^2 cells cover the frame.
struct Tessellation {
  Point origin;
  double cell_w = 0.0;
  double cell_h = 0.0;
  int cells_x = 0;
  int cells_y = 0;

  [[nodiscard]] double cell_area() const { return cell_w * cell_h; }
  [[nodiscard]] Rect cell(int index) const;

  bool operator==(const Tessellation&) const = default;
};

struct SamplePlan {
  Scheme scheme = Scheme::urs;
  std::vector<Site> sites;
  int nominal_n = 0;
  int realized_in_domain = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> path;
  std::optional<Tessellation> tessellation;  // TSS/SGS only

  bool operator==(const SamplePlan&) const = default;
};

// n i.i.d. uniform sites on A; site i uses stream.child(i).
SamplePlan draw_urs(const Region& a, int n, const RandomStream& stream);
// One uniform site per stratum; stratum i uses stream.child(i).
SamplePlan draw_ss1(const Stratification& s, const RandomStream& stream);
// Two independent uniform sites per stratum, stored consecutively.
SamplePlan draw_ss2(const Stratification& s, const RandomStream& stream);
// One uniform site per cell of a k x k tessellation of `frame` (frame ⊇ A).
SamplePlan draw_tss(const Region& a, const Rect& frame, int k, const RandomStream& stream,
                    bool random_shift = false);
// One uniform offset in the reference cell repeated in every cell.
SamplePlan draw_sgs(const Region& a, const Rect& frame, int k, const RandomStream& stream);

}  // namespace stratspace
