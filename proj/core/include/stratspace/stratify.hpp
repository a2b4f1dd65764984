#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "stratspace/geometry.hpp"
#include "stratspace/random.hpp"

namespace stratspace {

// Regular grid over a frame; each cell carries the fraction of its area
// lying inside the region. Cells are indexed row-major from the origin.
struct Raster {
  Point origin;
  double cell_w = 0.0;
  double cell_h = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<double> fraction;

  [[nodiscard]] std::size_t size() const { return fraction.size(); }
  [[nodiscard]] int col(std::size_t idx) const { return static_cast<int>(idx % nx); }
  [[nodiscard]] int row(std::size_t idx) const { return static_cast<int>(idx / nx); }
  [[nodiscard]] double cell_area() const { return cell_w * cell_h; }
  [[nodiscard]] double inside_area(std::size_t idx) const {
    return fraction[idx] * cell_area();
  }
  [[nodiscard]] Rect cell_rect(std::size_t idx) const;
  [[nodiscard]] Point cell_center(std::size_t idx) const;
  [[nodiscard]] double total_area() const;
  [[nodiscard]] std::size_t inside_count() const;
};

class StratifyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Square cells; `resolution` cells along the longer bounding-box side.
Raster rasterize(const Region& region, int resolution);
// nx * ny cells exactly covering `frame`.
Raster rasterize_frame(const Region& region, const Rect& frame, int nx, int ny);

struct Diagnostics {
  double d_n = 0.0;      // max stratum diameter
  double big_d_n = 0.0;  // max sup distance between consecutive strata
  double a_min = 0.0;
  double a_max = 0.0;
  double b_hat = 0.0;  // n d_n^2
  double c_hat = 0.0;  // n a_min
  double k_hat = 0.0;  // n D_n^2
  std::optional<int> boundary_stratum_count;
};

// Partition of a region into strata made of raster cells. Immutable; the
// sequential index is carried as `order()` and replaced with with_order().
class Stratification {
 public:
  Stratification(Region region, std::shared_ptr<const Raster> raster,
                 std::vector<int> assignment, int strata);

  [[nodiscard]] int size() const;
  [[nodiscard]] const Region& region() const;
  [[nodiscard]] const Raster& raster() const;
  [[nodiscard]] std::span<const int> assignment() const;
  [[nodiscard]] std::span<const std::size_t> cells(int s) const;
  [[nodiscard]] double area(int s) const;
  [[nodiscard]] std::span<const double> areas() const;
  [[nodiscard]] Point centroid(int s) const;
  [[nodiscard]] std::span<const Point> hull(int s) const;
  [[nodiscard]] double diameter(int s) const;
  [[nodiscard]] const std::vector<std::vector<int>>& adjacency() const;
  [[nodiscard]] bool adjacent(int s, int t) const;
  [[nodiscard]] std::span<const int> order() const;
  [[nodiscard]] Stratification with_order(std::vector<int> order) const;

  // Uniform point in stratum s.
  Point sample(int s, RandomStream& stream) const;
  // Mean squared distance of cell centers to their stratum centroid,
  // weighted by inside area.
  [[nodiscard]] double objective() const;
  // True when every stratum is 4-connected.
  [[nodiscard]] bool connected() const;
  // Relative spread (max - min) / mean of stratum areas.
  [[nodiscard]] double area_imbalance() const;
  // Number of consecutive pairs in order() that share a cell side.
  [[nodiscard]] int adjacent_consecutive_pairs() const;

  struct Data;

 private:
  explicit Stratification(std::shared_ptr<const Data> data,
                          std::vector<int> order);
  std::shared_ptr<const Data> data_;
  std::vector<int> order_;
};

// kx * ky congruent cells of the bounding box clipped to the region; cells
// missing the region are dropped. Order is boustrophedon.
Stratification grid_partition(const Region& region, int kx, int ky);
inline Stratification grid_partition(const Region& region, int k) {
  return grid_partition(region, k, k);
}

struct PartitionParams {
  int resolution = 128;
  int max_iter = 30;
  int restarts = 1;
  std::uint64_t seed = 1;
};

struct PartitionTrace {
  std::vector<double> objective_history;  // one entry per accepted iteration
  int local_moves = 0;
};

// Thrown when connectivity cannot be restored; carries the best partition.
class PartitionError : public StratifyError {
 public:
  PartitionError(const std::string& what, Stratification best)
      : StratifyError(what), best_(std::move(best)) {}
  [[nodiscard]] const Stratification& best() const { return best_; }

 private:
  Stratification best_;
};

// Equal-area compact strata by balanced k-means on raster cells.
Stratification equal_area_compact_partition(const Region& region, int n,
                                            const PartitionParams& params,
                                            PartitionTrace* trace = nullptr);

// Ordering of strata with consecutive strata sharing a side where possible.
std::vector<int> sequential_index(const Stratification& s);

// Largest sup-distance between consecutive strata under `order`.
double consecutive_distance(const Stratification& s, std::span<const int> order);

Diagnostics diagnostics(const Stratification& s,
                        const std::optional<Region>& discontinuity = std::nullopt);

}  // namespace stratspace
