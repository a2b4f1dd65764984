#include "stratspace/stratify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>

namespace stratspace {

// ---------------------------------------------------------------------------
// Raster

Rect Raster::cell_rect(std::size_t idx) const {
  const double x0 = origin.x + col(idx) * cell_w;
  const double y0 = origin.y + row(idx) * cell_h;
  return {x0, y0, x0 + cell_w, y0 + cell_h};
}

Point Raster::cell_center(std::size_t idx) const {
  return {origin.x + (col(idx) + 0.5) * cell_w,
          origin.y + (row(idx) + 0.5) * cell_h};
}

double Raster::total_area() const {
  // Pairwise-style accumulation by rows keeps the sum stable.
  double total = 0.0;
  for (int j = 0; j < ny; ++j) {
    double row_sum = 0.0;
    for (int i = 0; i < nx; ++i) row_sum += fraction[static_cast<std::size_t>(j) * nx + i];
    total += row_sum;
  }
  return total * cell_area();
}

std::size_t Raster::inside_count() const {
  return static_cast<std::size_t>(
      std::count_if(fraction.begin(), fraction.end(), [](double f) { return f > 0.0; }));
}

namespace {

// Boundary samples spaced at most `spacing` apart.
void boundary_samples(const Region& r, double spacing, std::vector<Point>& out) {
  switch (r.kind()) {
    case Region::Kind::polygonal:
      for (const auto& part : r.polygon_parts()) {
        auto walk = [&](const Ring& ring) {
          for (std::size_t i = 0; i < ring.size(); ++i) {
            const Point a = ring[i], b = ring[(i + 1) % ring.size()];
            const int steps = std::max(1, static_cast<int>(std::ceil(distance(a, b) / spacing)));
            for (int k = 0; k <= steps; ++k) out.push_back(a + (double(k) / steps) * (b - a));
          }
        };
        walk(part.outer);
        for (const auto& h : part.holes) walk(h);
      }
      break;
    case Region::Kind::disk:
    case Region::Kind::ellipse: {
      Ellipse e;
      if (r.kind() == Region::Kind::disk) {
        e = {r.as_disk().center, r.as_disk().radius, r.as_disk().radius, 0.0};
      } else {
        e = r.as_ellipse();
      }
      const double perim = 2.0 * std::numbers::pi * std::max(e.semi_a, e.semi_b);
      const int steps = std::max(64, static_cast<int>(std::ceil(perim / spacing)));
      const double c = std::cos(e.rotation), s = std::sin(e.rotation);
      for (int k = 0; k < steps; ++k) {
        const double th = 2.0 * std::numbers::pi * k / steps;
        const double lx = e.semi_a * std::cos(th), ly = e.semi_b * std::sin(th);
        out.push_back({e.center.x + c * lx - s * ly, e.center.y + s * lx + c * ly});
      }
      break;
    }
    case Region::Kind::disjoint_union:
      for (const auto& m : r.members()) boundary_samples(m, spacing, out);
      break;
  }
}

double snap_fraction(double f) {
  if (f > 1.0 - 1e-12) return 1.0;
  if (f < 1e-12) return 0.0;
  return f;
}

}  // namespace

Raster rasterize_frame(const Region& region, const Rect& frame, int nx, int ny) {
  if (nx < 1 || ny < 1) throw StratifyError("raster needs at least one cell");
  Raster r;
  r.origin = {frame.xmin, frame.ymin};
  r.nx = nx;
  r.ny = ny;
  r.cell_w = frame.width() / nx;
  r.cell_h = frame.height() / ny;
  r.fraction.assign(static_cast<std::size_t>(nx) * ny, 0.0);

  // Cells near the boundary get exact clipping; the rest are classified by
  // their center.
  std::vector<char> near(r.fraction.size(), 0);
  std::vector<Point> pts;
  boundary_samples(region, 0.25 * std::min(r.cell_w, r.cell_h), pts);
  for (const Point& p : pts) {
    const int ci = static_cast<int>(std::floor((p.x - r.origin.x) / r.cell_w));
    const int cj = static_cast<int>(std::floor((p.y - r.origin.y) / r.cell_h));
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        const int i = ci + di, j = cj + dj;
        if (i >= 0 && i < nx && j >= 0 && j < ny) {
          near[static_cast<std::size_t>(j) * nx + i] = 1;
        }
      }
    }
  }
  for (std::size_t idx = 0; idx < r.fraction.size(); ++idx) {
    if (near[idx]) {
      r.fraction[idx] = snap_fraction(clipped_area(region, r.cell_rect(idx)) / r.cell_area());
    } else {
      r.fraction[idx] = contains(region, r.cell_center(idx)) ? 1.0 : 0.0;
    }
  }
  if (r.inside_count() == 0) throw StratifyError("raster has no cells inside the region");
  return r;
}

Raster rasterize(const Region& region, int resolution) {
  if (resolution < 64) throw StratifyError("raster resolution must be at least 64");
  const Rect& b = region.bounding_box();
  const double side = std::max(b.width(), b.height());
  const double cell = side / resolution;
  const int nx = std::max(1, static_cast<int>(std::ceil(b.width() / cell - 1e-9)));
  const int ny = std::max(1, static_cast<int>(std::ceil(b.height() / cell - 1e-9)));
  return rasterize_frame(region, {b.xmin, b.ymin, b.xmin + nx * cell, b.ymin + ny * cell},
                         nx, ny);
}

// ---------------------------------------------------------------------------
// Stratification

struct Stratification::Data {
  Region region;
  std::shared_ptr<const Raster> raster;
  std::vector<int> assignment;
  int n = 0;
  std::vector<std::vector<std::size_t>> cells;
  std::vector<std::vector<double>> cumulative;
  std::vector<double> areas;
  std::vector<Point> centroids;
  std::vector<std::vector<Point>> hulls;
  std::vector<double> diameters;
  std::vector<std::vector<int>> adjacency;
};

namespace {

std::shared_ptr<const Stratification::Data> build_data(
    Region region, std::shared_ptr<const Raster> raster,
    std::vector<int> assignment, int n) {
  if (!raster) throw StratifyError("stratification needs a raster");
  if (assignment.size() != raster->size()) {
    throw StratifyError("assignment size does not match raster");
  }
  if (n < 1) throw StratifyError("stratification needs at least one stratum");
  auto d = std::make_shared<Stratification::Data>(Stratification::Data{
      std::move(region), std::move(raster), std::move(assignment), n, {}, {}, {}, {}, {}, {}, {}});
  const Raster& r = *d->raster;
  d->cells.resize(n);
  d->cumulative.resize(n);
  d->areas.assign(n, 0.0);
  d->centroids.assign(n, {});
  d->hulls.resize(n);
  d->diameters.assign(n, 0.0);
  d->adjacency.resize(n);

  std::vector<double> sx(n, 0.0), sy(n, 0.0);
  for (std::size_t idx = 0; idx < r.size(); ++idx) {
    int& lab = d->assignment[idx];
    if (r.fraction[idx] <= 0.0) {
      lab = -1;
      continue;
    }
    if (lab < 0 || lab >= n) throw StratifyError("inside cell without a valid stratum");
    const double w = r.inside_area(idx);
    d->cells[lab].push_back(idx);
    d->areas[lab] += w;
    d->cumulative[lab].push_back(d->areas[lab]);
    const Point c = r.cell_center(idx);
    sx[lab] += w * c.x;
    sy[lab] += w * c.y;
  }
  for (int s = 0; s < n; ++s) {
    if (d->cells[s].empty()) {
      throw StratifyError("stratum " + std::to_string(s) + " is empty");
    }
    d->centroids[s] = {sx[s] / d->areas[s], sy[s] / d->areas[s]};
  }

  auto label_at = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= r.nx || j >= r.ny) return -1;
    return d->assignment[static_cast<std::size_t>(j) * r.nx + i];
  };
  std::vector<std::vector<Point>> support(n);
  for (std::size_t idx = 0; idx < r.size(); ++idx) {
    const int lab = d->assignment[idx];
    if (lab < 0) continue;
    const int i = r.col(idx), j = r.row(idx);
    const int right = label_at(i + 1, j), up = label_at(i, j + 1);
    for (int other : {right, up}) {
      if (other >= 0 && other != lab) {
        d->adjacency[lab].push_back(other);
        d->adjacency[other].push_back(lab);
      }
    }
    const bool interior = label_at(i + 1, j) == lab && label_at(i - 1, j) == lab &&
                          label_at(i, j + 1) == lab && label_at(i, j - 1) == lab;
    if (interior) continue;
    const Rect rect = r.cell_rect(idx);
    if (r.fraction[idx] >= 1.0) {
      for (const Point& p : rect.corners()) support[lab].push_back(p);
    } else {
      auto pts = clipped_support_points(d->region, rect);
      support[lab].insert(support[lab].end(), pts.begin(), pts.end());
    }
  }
  for (int s = 0; s < n; ++s) {
    auto& a = d->adjacency[s];
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    d->hulls[s] = convex_hull(std::move(support[s]));
    d->diameters[s] = hull_diameter(d->hulls[s]);
  }
  return d;
}

}  // namespace

Stratification::Stratification(Region region, std::shared_ptr<const Raster> raster,
                               std::vector<int> assignment, int strata)
    : data_(build_data(std::move(region), std::move(raster), std::move(assignment), strata)) {
  order_.resize(static_cast<std::size_t>(data_->n));
  std::iota(order_.begin(), order_.end(), 0);
}

Stratification::Stratification(std::shared_ptr<const Data> data, std::vector<int> order)
    : data_(std::move(data)), order_(std::move(order)) {}

int Stratification::size() const { return data_->n; }
const Region& Stratification::region() const { return data_->region; }
const Raster& Stratification::raster() const { return *data_->raster; }
std::span<const int> Stratification::assignment() const { return data_->assignment; }
std::span<const std::size_t> Stratification::cells(int s) const { return data_->cells.at(s); }
double Stratification::area(int s) const { return data_->areas.at(s); }
std::span<const double> Stratification::areas() const { return data_->areas; }
Point Stratification::centroid(int s) const { return data_->centroids.at(s); }
std::span<const Point> Stratification::hull(int s) const { return data_->hulls.at(s); }
double Stratification::diameter(int s) const { return data_->diameters.at(s); }
const std::vector<std::vector<int>>& Stratification::adjacency() const {
  return data_->adjacency;
}
bool Stratification::adjacent(int s, int t) const {
  const auto& a = data_->adjacency.at(s);
  return std::binary_search(a.begin(), a.end(), t);
}
std::span<const int> Stratification::order() const { return order_; }

Stratification Stratification::with_order(std::vector<int> order) const {
  if (order.size() != static_cast<std::size_t>(data_->n)) {
    throw StratifyError("order must list every stratum once");
  }
  std::vector<char> seen(order.size(), 0);
  for (int s : order) {
    if (s < 0 || s >= data_->n || seen[s]) {
      throw StratifyError("order must be a permutation of the strata");
    }
    seen[s] = 1;
  }
  return Stratification(data_, std::move(order));
}

Point Stratification::sample(int s, RandomStream& stream) const {
  const auto& cum = data_->cumulative.at(s);
  const auto& cells = data_->cells[s];
  const double u = stream.uniform() * cum.back();
  auto it = std::upper_bound(cum.begin(), cum.end(), u);
  const std::size_t k = std::min<std::size_t>(
      static_cast<std::size_t>(it - cum.begin()), cells.size() - 1);
  const std::size_t idx = cells[k];
  const Rect rect = data_->raster->cell_rect(idx);
  const bool full = data_->raster->fraction[idx] >= 1.0;
  for (;;) {
    const Point p{rect.xmin + rect.width() * stream.uniform(),
                  rect.ymin + rect.height() * stream.uniform()};
    if (full || contains(data_->region, p)) return p;
  }
}

double Stratification::objective() const {
  const Raster& r = *data_->raster;
  double sse = 0.0, total = 0.0;
  for (int s = 0; s < data_->n; ++s) {
    const Point c = data_->centroids[s];
    for (std::size_t idx : data_->cells[s]) {
      const double w = r.inside_area(idx);
      const Point d = r.cell_center(idx) - c;
      sse += w * dot(d, d);
      total += w;
    }
  }
  return sse / total;
}

bool Stratification::connected() const {
  const Raster& r = *data_->raster;
  std::vector<char> seen(r.size(), 0);
  for (int s = 0; s < data_->n; ++s) {
    const auto& cells = data_->cells[s];
    std::vector<std::size_t> stack{cells.front()};
    seen[cells.front()] = 1;
    std::size_t reached = 0;
    while (!stack.empty()) {
      const std::size_t idx = stack.back();
      stack.pop_back();
      ++reached;
      const int i = r.col(idx), j = r.row(idx);
      const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        const int ni = i + di[k], nj = j + dj[k];
        if (ni < 0 || nj < 0 || ni >= r.nx || nj >= r.ny) continue;
        const std::size_t nidx = static_cast<std::size_t>(nj) * r.nx + ni;
        if (!seen[nidx] && data_->assignment[nidx] == s) {
          seen[nidx] = 1;
          stack.push_back(nidx);
        }
      }
    }
    if (reached != cells.size()) return false;
  }
  return true;
}

double Stratification::area_imbalance() const {
  const auto [lo, hi] = std::minmax_element(data_->areas.begin(), data_->areas.end());
  const double mean = std::accumulate(data_->areas.begin(), data_->areas.end(), 0.0) / data_->n;
  return (*hi - *lo) / mean;
}

int Stratification::adjacent_consecutive_pairs() const {
  int count = 0;
  for (std::size_t i = 0; i + 1 < order_.size(); ++i) {
    if (adjacent(order_[i], order_[i + 1])) ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Grid partition

Stratification grid_partition(const Region& region, int kx, int ky) {
  if (kx < 1 || ky < 1) throw StratifyError("grid needs at least one cell per side");
  const int m = std::max(1, (64 + std::max(kx, ky) - 1) / std::max(kx, ky));
  const Rect frame = region.bounding_box();
  auto raster = std::make_shared<Raster>(rasterize_frame(region, frame, kx * m, ky * m));
  std::vector<int> block(raster->size(), -1);
  std::vector<double> block_area(static_cast<std::size_t>(kx) * ky, 0.0);
  for (std::size_t idx = 0; idx < raster->size(); ++idx) {
    if (raster->fraction[idx] <= 0.0) continue;
    const int b = raster->col(idx) / m + kx * (raster->row(idx) / m);
    block[idx] = b;
    block_area[b] += raster->inside_area(idx);
  }
  // Drop blocks missing the region and renumber.
  std::vector<int> remap(block_area.size(), -1);
  int n = 0;
  for (std::size_t b = 0; b < block_area.size(); ++b) {
    if (block_area[b] > 0.0) remap[b] = n++;
  }
  for (int& lab : block) {
    if (lab >= 0) lab = remap[lab];
  }
  std::vector<int> order;
  for (int j = 0; j < ky; ++j) {
    for (int t = 0; t < kx; ++t) {
      const int i = (j % 2 == 0) ? t : kx - 1 - t;
      const int b = remap[static_cast<std::size_t>(i + kx * j)];
      if (b >= 0) order.push_back(b);
    }
  }
  Stratification s(region, std::move(raster), std::move(block), n);
  return s.with_order(std::move(order));
}

// ---------------------------------------------------------------------------
// Equal-area compact partition

namespace {

// Working state for balanced k-means on raster cells.
class CellClustering {
 public:
  CellClustering(const Raster& raster, int n) : r_(raster), n_(n) {
    local_.assign(r_.size(), -1);
    for (std::size_t idx = 0; idx < r_.size(); ++idx) {
      if (r_.fraction[idx] > 0.0) {
        local_[idx] = static_cast<int>(idx_.size());
        idx_.push_back(idx);
        pos_.push_back(r_.cell_center(idx));
        w_.push_back(r_.inside_area(idx));
      }
    }
    total_ = std::accumulate(w_.begin(), w_.end(), 0.0);
    cap_ = total_ / n_;
    full_w_ = r_.cell_area();
    label_.assign(idx_.size(), -1);
  }

  [[nodiscard]] std::size_t cells() const { return idx_.size(); }
  [[nodiscard]] const std::vector<int>& labels() const { return label_; }
  void set_labels(std::vector<int> l) {
    label_ = std::move(l);
    recompute_sums();
  }

  std::vector<int> global_assignment() const {
    std::vector<int> a(r_.size(), -1);
    for (std::size_t k = 0; k < idx_.size(); ++k) a[idx_[k]] = label_[k];
    return a;
  }

  std::vector<Point> kmeanspp(RandomStream stream) const {
    std::vector<Point> centers;
    std::vector<double> d2(idx_.size(), std::numeric_limits<double>::infinity());
    auto pick = [&](const std::vector<double>& weights) {
      const double tot = std::accumulate(weights.begin(), weights.end(), 0.0);
      double u = stream.uniform() * tot;
      for (std::size_t k = 0; k < weights.size(); ++k) {
        u -= weights[k];
        if (u < 0.0) return k;
      }
      return weights.size() - 1;
    };
    centers.push_back(pos_[pick(w_)]);
    std::vector<double> wt(idx_.size());
    while (static_cast<int>(centers.size()) < n_) {
      const Point c = centers.back();
      for (std::size_t k = 0; k < idx_.size(); ++k) {
        const Point d = pos_[k] - c;
        d2[k] = std::min(d2[k], dot(d, d));
        wt[k] = w_[k] * d2[k];
      }
      centers.push_back(pos_[pick(wt)]);
    }
    return centers;
  }

  // Capacity-constrained power assignment: cell k goes to the stratum
  // minimizing |p_k - c_s|^2 - psi_s, with the offsets psi adjusted until
  // every stratum holds its share of area. Offsets carry over between calls.
  void power_assign(const std::vector<Point>& centers) {
    psi_.resize(n_, 0.0);
    // Only the nearest few centers can win a cell for moderate offsets.
    const int kc = std::min(n_, 12);
    std::vector<int> near(idx_.size() * kc);
    std::vector<std::pair<double, int>> dist(n_);
    for (std::size_t k = 0; k < idx_.size(); ++k) {
      for (int s = 0; s < n_; ++s) {
        const Point d = pos_[k] - centers[s];
        dist[s] = {dot(d, d), s};
      }
      std::partial_sort(dist.begin(), dist.begin() + kc, dist.end());
      for (int q = 0; q < kc; ++q) near[k * kc + q] = dist[q].second;
    }
    std::vector<double> filled(n_);
    const double tol = std::max(0.5 * full_w_, 0.002 * cap_);
    for (int it = 0; it < 60; ++it) {
      std::fill(filled.begin(), filled.end(), 0.0);
      for (std::size_t k = 0; k < idx_.size(); ++k) {
        double best = std::numeric_limits<double>::infinity();
        int pick = 0;
        for (int q = 0; q < kc; ++q) {
          const int s = near[k * kc + q];
          const Point d = pos_[k] - centers[s];
          const double v = dot(d, d) - psi_[s];
          if (v < best) {
            best = v;
            pick = s;
          }
        }
        label_[k] = pick;
        filled[pick] += w_[k];
      }
      double worst = 0.0;
      for (int s = 0; s < n_; ++s) worst = std::max(worst, std::abs(filled[s] - cap_));
      if (worst <= tol) break;
      // Moving one offset by delta changes that stratum's area by about
      // 2 delta; damp to avoid oscillation between neighbors.
      for (int s = 0; s < n_; ++s) psi_[s] += 0.3 * (cap_ - filled[s]);
    }
    recompute_sums();
    // Seed any stratum left empty with the free cell nearest its center.
    std::vector<int> count(n_, 0);
    for (int l : label_) ++count[l];
    for (int s = 0; s < n_; ++s) {
      if (count[s] > 0) continue;
      double best = std::numeric_limits<double>::infinity();
      int pick = -1;
      for (std::size_t k = 0; k < idx_.size(); ++k) {
        if (count[label_[k]] < 2) continue;
        const Point d = pos_[k] - centers[s];
        if (dot(d, d) < best) {
          best = dot(d, d);
          pick = static_cast<int>(k);
        }
      }
      if (pick < 0) continue;
      --count[label_[pick]];
      ++count[s];
      move(static_cast<std::size_t>(pick), s);
    }
  }

  // Reassign non-largest components of each stratum to the stratum whose
  // main component they border most.
  bool repair_connectivity() {
    for (int round = 0; round < 200; ++round) {
      std::vector<int> comp(idx_.size(), -1);
      std::vector<double> comp_w;
      std::vector<int> comp_label;
      for (std::size_t k = 0; k < idx_.size(); ++k) {
        if (comp[k] >= 0) continue;
        const int c = static_cast<int>(comp_w.size());
        comp_w.push_back(0.0);
        comp_label.push_back(label_[k]);
        std::vector<std::size_t> stack{k};
        comp[k] = c;
        while (!stack.empty()) {
          const std::size_t q = stack.back();
          stack.pop_back();
          comp_w[c] += w_[q];
          for (int nb : neighbors4(q)) {
            if (nb >= 0 && comp[nb] < 0 && label_[nb] == label_[q]) {
              comp[nb] = c;
              stack.push_back(static_cast<std::size_t>(nb));
            }
          }
        }
      }
      std::vector<int> main(n_, -1);
      for (std::size_t c = 0; c < comp_w.size(); ++c) {
        const int s = comp_label[c];
        if (main[s] < 0 || comp_w[c] > comp_w[main[s]]) main[s] = static_cast<int>(c);
      }
      bool orphan = false;
      bool changed = false;
      std::vector<std::map<int, int>> border(comp_w.size());
      for (std::size_t k = 0; k < idx_.size(); ++k) {
        const int c = comp[k];
        if (main[comp_label[c]] == c) continue;
        orphan = true;
        for (int nb : neighbors4(k)) {
          if (nb >= 0 && label_[nb] != label_[k] && main[label_[nb]] == comp[nb]) {
            ++border[c][label_[nb]];
          }
        }
      }
      if (!orphan) return true;
      std::vector<int> target(comp_w.size(), -1);
      for (std::size_t c = 0; c < comp_w.size(); ++c) {
        int best = -1, best_count = 0;
        for (const auto& [lab, count] : border[c]) {
          if (count > best_count) {
            best = lab;
            best_count = count;
          }
        }
        target[c] = best;
      }
      for (std::size_t k = 0; k < idx_.size(); ++k) {
        const int t = target[comp[k]];
        if (main[comp_label[comp[k]]] != comp[k] && t >= 0) {
          label_[k] = t;
          changed = true;
        }
      }
      recompute_sums();
      if (!changed) return false;
    }
    return false;
  }

  // Shift cells along stratum-adjacency paths until areas agree within one
  // cell.
  void rebalance() {
    const double tol = full_w_ * (1.0 + 1e-9);
    std::set<std::pair<int, int>> blocked;
    int stalls = 0;
    for (std::size_t iter = 0; iter < 40 * idx_.size(); ++iter) {
      const auto [lo, hi] = std::minmax_element(area_.begin(), area_.end());
      if (*hi - *lo <= tol) return;
      const int s = static_cast<int>(hi - area_.begin());
      const int t = static_cast<int>(lo - area_.begin());
      const auto path = stratum_path(s, t, blocked);
      if (path.size() < 2) {
        if (blocked.empty() || ++stalls > n_) return;
        blocked.clear();
        continue;
      }
      for (std::size_t h = 0; h + 1 < path.size(); ++h) {
        if (!move_one(path[h], path[h + 1], h + 2 < path.size())) {
          blocked.insert({path[h], path[h + 1]});
          break;
        }
      }
    }
  }

  // Objective-reducing swaps across stratum borders; keeps balance and
  // connectivity. Returns the number of accepted swaps.
  int local_improve(int max_passes, std::vector<double>* history) {
    const double tol = full_w_ * (1.0 + 1e-9);
    int accepted = 0;
    for (int pass = 0; pass < max_passes; ++pass) {
      const auto cen = centroids();
      std::map<std::pair<int, int>, std::vector<std::pair<double, int>>> cand;
      for (std::size_t k = 0; k < idx_.size(); ++k) {
        const int s = label_[k];
        for (int nb : neighbors4(k)) {
          if (nb < 0 || label_[nb] == s) continue;
          const int t = label_[nb];
          const Point ds = pos_[k] - cen[s], dt = pos_[k] - cen[t];
          cand[{s, t}].push_back({w_[k] * (dot(dt, dt) - dot(ds, ds)), static_cast<int>(k)});
        }
      }
      for (auto& [key, v] : cand) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        if (v.size() > 6) v.resize(6);
      }
      int pass_accepted = 0;
      for (const auto& [key, fwd] : cand) {
        const auto [s, t] = key;
        if (s > t) continue;
        auto it = cand.find({t, s});
        if (it == cand.end()) continue;
        const auto& back = it->second;
        bool done = false;
        for (const auto& [da, a] : fwd) {
          if (done) break;
          if (da >= 0.0) break;
          for (const auto& [db, b] : back) {
            if (label_[a] != s || label_[b] != t) continue;
            if (da + db >= 0.0) break;
            if (try_swap(a, b, tol)) {
              ++pass_accepted;
              done = true;
              break;
            }
          }
        }
      }
      accepted += pass_accepted;
      if (history) history->push_back(objective());
      if (pass_accepted == 0) break;
    }
    return accepted;
  }

  [[nodiscard]] double objective() const {
    double sse = 0.0;
    for (int s = 0; s < n_; ++s) sse += stratum_sse(s, area_[s], sx_[s], sy_[s], sq_[s]);
    return sse / total_;
  }

  [[nodiscard]] std::vector<Point> centroids() const {
    std::vector<Point> c(n_);
    for (int s = 0; s < n_; ++s) {
      c[s] = area_[s] > 0.0 ? Point{sx_[s] / area_[s], sy_[s] / area_[s]} : Point{};
    }
    return c;
  }

  [[nodiscard]] bool all_nonempty() const {
    return std::all_of(area_.begin(), area_.end(), [](double a) { return a > 0.0; });
  }

 private:
  static double stratum_sse(int, double w, double sx, double sy, double sq) {
    if (w <= 0.0) return 0.0;
    return std::max(0.0, sq - (sx * sx + sy * sy) / w);
  }

  void recompute_sums() {
    area_.assign(n_, 0.0);
    sx_.assign(n_, 0.0);
    sy_.assign(n_, 0.0);
    sq_.assign(n_, 0.0);
    for (std::size_t k = 0; k < idx_.size(); ++k) add(k, label_[k], 1.0);
  }

  void add(std::size_t k, int s, double sign) {
    const double w = sign * w_[k];
    area_[s] += w;
    sx_[s] += w * pos_[k].x;
    sy_[s] += w * pos_[k].y;
    sq_[s] += w * dot(pos_[k], pos_[k]);
  }

  void move(std::size_t k, int to) {
    add(k, label_[k], -1.0);
    label_[k] = to;
    add(k, to, 1.0);
  }

  // 4-neighbors in local indices (N, E, S, W); -1 outside.
  [[nodiscard]] std::array<int, 4> neighbors4(std::size_t k) const {
    const std::size_t idx = idx_[k];
    const int i = r_.col(idx), j = r_.row(idx);
    return {local_at(i, j + 1), local_at(i + 1, j), local_at(i, j - 1), local_at(i - 1, j)};
  }

  [[nodiscard]] int local_at(int i, int j) const {
    if (i < 0 || j < 0 || i >= r_.nx || j >= r_.ny) return -1;
    return local_[static_cast<std::size_t>(j) * r_.nx + i];
  }

  [[nodiscard]] bool borders(std::size_t k, int t) const {
    for (int nb : neighbors4(k)) {
      if (nb >= 0 && label_[nb] == t) return true;
    }
    return false;
  }

  // Removing cell k keeps its stratum locally 4-connected.
  [[nodiscard]] bool removable(std::size_t k) const {
    const int s = label_[k];
    const std::size_t idx = idx_[k];
    const int i = r_.col(idx), j = r_.row(idx);
    static constexpr int ring_di[8] = {0, 1, 1, 1, 0, -1, -1, -1};
    static constexpr int ring_dj[8] = {1, 1, 0, -1, -1, -1, 0, 1};
    bool in[8];
    int members = 0;
    for (int q = 0; q < 8; ++q) {
      const int l = local_at(i + ring_di[q], j + ring_dj[q]);
      in[q] = l >= 0 && label_[l] == s;
    }
    for (int q = 0; q < 8; q += 2) members += in[q];
    if (members == 0) return false;  // k is the whole stratum
    // Count runs around the ring that touch an edge neighbor.
    int runs = 0;
    for (int q = 0; q < 8; ++q) {
      if (!in[q] || in[(q + 7) % 8]) continue;
      bool touches = false;
      for (int p = q; in[p % 8] && p < q + 8; ++p) touches = touches || (p % 2 == 0);
      runs += touches;
    }
    if (runs == 0 && members > 0) runs = 1;  // full ring
    return runs == 1;
  }

  std::vector<int> stratum_path(int s, int t,
                                const std::set<std::pair<int, int>>& blocked) const {
    std::vector<std::vector<char>> adj(n_, std::vector<char>(n_, 0));
    for (std::size_t k = 0; k < idx_.size(); ++k) {
      for (int nb : neighbors4(k)) {
        if (nb >= 0 && label_[nb] != label_[k]) adj[label_[k]][label_[nb]] = 1;
      }
    }
    for (const auto& [a, b] : blocked) adj[a][b] = 0;
    std::vector<int> prev(n_, -2);
    std::queue<int> q;
    q.push(s);
    prev[s] = -1;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      if (u == t) break;
      for (int v = 0; v < n_; ++v) {
        if (adj[u][v] && prev[v] == -2) {
          prev[v] = u;
          q.push(v);
        }
      }
    }
    if (prev[t] == -2) return {};
    std::vector<int> path;
    for (int v = t; v != -1; v = prev[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;
  }

  bool move_one(int from, int to, bool prefer_full) {
    const auto cen = centroids();
    double best = std::numeric_limits<double>::infinity();
    int pick = -1;
    for (std::size_t k = 0; k < idx_.size(); ++k) {
      if (label_[k] != from || !borders(k, to) || !removable(k)) continue;
      const Point df = pos_[k] - cen[from], dt = pos_[k] - cen[to];
      double cost = w_[k] * (dot(dt, dt) - dot(df, df));
      if (prefer_full && w_[k] < full_w_) cost += 1e6 * full_w_ * full_w_;
      if (cost < best) {
        best = cost;
        pick = static_cast<int>(k);
      }
    }
    if (pick < 0) return false;
    move(static_cast<std::size_t>(pick), to);
    return true;
  }

  bool try_swap(int a, int b, double tol) {
    const int s = label_[a], t = label_[b];
    const double before = objective();
    if (!borders(a, t) || !removable(a)) return false;
    move(a, t);
    if (!borders(b, s) || !removable(b)) {
      move(a, s);
      return false;
    }
    move(b, s);
    const auto [lo, hi] = std::minmax_element(area_.begin(), area_.end());
    if (objective() < before * (1.0 - 1e-12) && *hi - *lo <= tol) return true;
    move(b, t);
    move(a, s);
    return false;
  }

  const Raster& r_;
  int n_;
  std::vector<int> local_;
  std::vector<std::size_t> idx_;
  std::vector<Point> pos_;
  std::vector<double> w_;
  std::vector<int> label_;
  std::vector<double> area_, sx_, sy_, sq_;
  double total_ = 0.0;
  double cap_ = 0.0;
  double full_w_ = 0.0;
  std::vector<double> psi_;
};

}  // namespace

Stratification equal_area_compact_partition(const Region& region, int n,
                                            const PartitionParams& params,
                                            PartitionTrace* trace) {
  if (n < 1) throw StratifyError("number of strata must be positive");
  auto raster = std::make_shared<Raster>(rasterize(region, params.resolution));
  if (n == 1) {
    std::vector<int> all(raster->size(), 0);
    Stratification s(region, std::move(raster), std::move(all), 1);
    if (trace) trace->objective_history = {s.objective()};
    return s;
  }
  CellClustering work(*raster, n);
  if (work.cells() < static_cast<std::size_t>(20 * n)) {
    throw StratifyError("raster has fewer than 20 inside cells per stratum; raise resolution");
  }

  std::vector<int> best_labels;
  double best_obj = std::numeric_limits<double>::infinity();
  bool best_connected = false;
  PartitionTrace best_trace;
  const RandomStream root(params.seed, {0x5354524154ULL});
  for (int restart = 0; restart < std::max(1, params.restarts); ++restart) {
    PartitionTrace tr;
    auto centers = work.kmeanspp(root.child(static_cast<std::uint64_t>(restart)));
    std::vector<int> prev_labels;
    double prev_obj = std::numeric_limits<double>::infinity();
    for (int it = 0; it < std::max(1, params.max_iter); ++it) {
      work.power_assign(centers);
      work.repair_connectivity();
      work.rebalance();
      const double obj = work.objective();
      if (!work.all_nonempty() || obj >= prev_obj) {
        if (!prev_labels.empty()) work.set_labels(prev_labels);
        break;
      }
      tr.objective_history.push_back(obj);
      prev_obj = obj;
      prev_labels = work.labels();
      centers = work.centroids();
    }
    tr.local_moves = work.local_improve(50, &tr.objective_history);
    const bool ok = work.repair_connectivity();
    work.rebalance();
    const double obj = work.objective();
    if ((ok && !best_connected) || (ok == best_connected && obj < best_obj)) {
      best_obj = obj;
      best_labels = work.labels();
      best_connected = ok;
      best_trace = tr;
    }
  }
  work.set_labels(best_labels);
  if (trace) *trace = best_trace;
  Stratification s(region, raster, work.global_assignment(), n);
  if (!s.connected()) {
    throw PartitionError("could not make every stratum connected", s);
  }
  return s.with_order(sequential_index(s));
}

// ---------------------------------------------------------------------------
// Sequential index

namespace {

class PairDistance {
 public:
  explicit PairDistance(const Stratification& s) : s_(s) {}
  double operator()(int a, int b) {
    if (a > b) std::swap(a, b);
    const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const double d = max_hull_distance(s_.hull(a), s_.hull(b));
    memo_.emplace(key, d);
    return d;
  }

 private:
  const Stratification& s_;
  std::unordered_map<std::uint64_t, double> memo_;
};

struct PathScore {
  int adjacent = 0;
  double bottleneck = 0.0;
};

PathScore score(const Stratification& s, const std::vector<int>& order, PairDistance& dist) {
  PathScore sc;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    sc.adjacent += s.adjacent(order[i], order[i + 1]);
    sc.bottleneck = std::max(sc.bottleneck, dist(order[i], order[i + 1]));
  }
  return sc;
}

bool better(const PathScore& a, const PathScore& b) {
  if (a.adjacent != b.adjacent) return a.adjacent > b.adjacent;
  return a.bottleneck < b.bottleneck - 1e-12 * (1.0 + b.bottleneck);
}

// Warnsdorff-ordered depth-first search for a Hamiltonian path.
bool hamiltonian_from(const Stratification& s, int start, long& budget, std::vector<int>& path) {
  const int n = s.size();
  const auto& adj = s.adjacency();
  std::vector<char> used(n, 0);
  path.assign(1, start);
  used[start] = 1;
  std::vector<std::vector<int>> choices(1);
  auto options = [&](int u) {
    std::vector<int> opts;
    for (int v : adj[u]) {
      if (!used[v]) opts.push_back(v);
    }
    auto onward = [&](int v) {
      int c = 0;
      for (int w : adj[v]) c += !used[w];
      return c;
    };
    const Point cu = s.centroid(u);
    std::sort(opts.begin(), opts.end(), [&](int a, int b) {
      const int oa = onward(a), ob = onward(b);
      if (oa != ob) return oa > ob;  // popped from the back: fewest first
      const double da = distance(cu, s.centroid(a)), db = distance(cu, s.centroid(b));
      if (da != db) return da > db;
      return a > b;
    });
    return opts;
  };
  choices[0] = options(start);
  while (!path.empty()) {
    if (static_cast<int>(path.size()) == n) return true;
    if (--budget < 0) return false;
    auto& ch = choices.back();
    if (ch.empty()) {
      used[path.back()] = 0;
      path.pop_back();
      choices.pop_back();
      continue;
    }
    const int v = ch.back();
    ch.pop_back();
    path.push_back(v);
    used[v] = 1;
    choices.push_back(options(v));
  }
  return false;
}

// Greedy walk preferring adjacent strata, jumping to the nearest unvisited
// centroid when stuck.
std::vector<int> greedy_walk(const Stratification& s, int start) {
  const int n = s.size();
  const auto& adj = s.adjacency();
  std::vector<char> used(n, 0);
  std::vector<int> path{start};
  used[start] = 1;
  while (static_cast<int>(path.size()) < n) {
    const int u = path.back();
    int pick = -1, pick_onward = std::numeric_limits<int>::max();
    for (int v : adj[u]) {
      if (used[v]) continue;
      int onward = 0;
      for (int w : adj[v]) onward += !used[w];
      if (onward < pick_onward) {
        pick = v;
        pick_onward = onward;
      }
    }
    if (pick < 0) {
      double best = std::numeric_limits<double>::infinity();
      for (int v = 0; v < n; ++v) {
        if (used[v]) continue;
        const double d = distance(s.centroid(u), s.centroid(v));
        if (d < best) {
          best = d;
          pick = v;
        }
      }
    }
    path.push_back(pick);
    used[pick] = 1;
  }
  return path;
}

void two_opt(const Stratification& s, std::vector<int>& order, PairDistance& dist) {
  const std::size_t n = order.size();
  if (n < 4 || n > 400) return;
  for (int pass = 0; pass < 20; ++pass) {
    bool improved = false;
    for (std::size_t i = 0; i + 2 < n; ++i) {
      for (std::size_t j = i + 2; j < n; ++j) {
        const int a = order[i], b = order[i + 1], c = order[j];
        const bool has_d = j + 1 < n;
        const int d = has_d ? order[j + 1] : -1;
        const int adj_old = s.adjacent(a, b) + (has_d ? s.adjacent(c, d) : 0);
        const int adj_new = s.adjacent(a, c) + (has_d ? s.adjacent(b, d) : 0);
        if (adj_new < adj_old) continue;
        const double old_max = std::max(dist(a, b), has_d ? dist(c, d) : 0.0);
        const double new_max = std::max(dist(a, c), has_d ? dist(b, d) : 0.0);
        if (adj_new > adj_old || new_max < old_max * (1.0 - 1e-12)) {
          std::reverse(order.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                       order.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          improved = true;
        }
      }
    }
    if (!improved) break;
  }
}

}  // namespace

double consecutive_distance(const Stratification& s, std::span<const int> order) {
  double d = 0.0;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    d = std::max(d, max_hull_distance(s.hull(order[i]), s.hull(order[i + 1])));
  }
  return d;
}

std::vector<int> sequential_index(const Stratification& s) {
  const int n = s.size();
  std::vector<int> current(s.order().begin(), s.order().end());
  if (n <= 1) return current;
  if (s.adjacent_consecutive_pairs() == n - 1) return current;

  PairDistance dist(s);
  std::vector<int> best = current;
  PathScore best_score = score(s, best, dist);
  long budget = 200000;
  const int starts = std::min(n, 64);
  bool found = false;
  for (int k = 0; k < starts && budget > 0; ++k) {
    const int start = static_cast<int>((static_cast<long>(k) * n) / starts);
    std::vector<int> path;
    long local = std::min<long>(budget, 20000);
    const long before = local;
    const bool ok = hamiltonian_from(s, start, local, path);
    budget -= before - local;
    if (!ok) continue;
    found = true;
    const PathScore sc = score(s, path, dist);
    if (better(sc, best_score)) {
      best = path;
      best_score = sc;
    }
  }
  if (!found) {
    for (int k = 0; k < starts; ++k) {
      const int start = static_cast<int>((static_cast<long>(k) * n) / starts);
      auto path = greedy_walk(s, start);
      const PathScore sc = score(s, path, dist);
      if (better(sc, best_score)) {
        best = std::move(path);
        best_score = sc;
      }
    }
  }
  two_opt(s, best, dist);
  return best;
}

// ---------------------------------------------------------------------------
// Diagnostics

Diagnostics diagnostics(const Stratification& s, const std::optional<Region>& discontinuity) {
  Diagnostics d;
  const int n = s.size();
  const auto areas = s.areas();
  d.a_min = *std::min_element(areas.begin(), areas.end());
  d.a_max = *std::max_element(areas.begin(), areas.end());
  for (int i = 0; i < n; ++i) d.d_n = std::max(d.d_n, s.diameter(i));
  d.big_d_n = n > 1 ? consecutive_distance(s, s.order()) : 0.0;
  d.b_hat = n * d.d_n * d.d_n;
  d.c_hat = n * d.a_min;
  d.k_hat = n * d.big_d_n * d.big_d_n;
  if (discontinuity) {
    const Raster& r = s.raster();
    int count = 0;
    for (int i = 0; i < n; ++i) {
      for (std::size_t idx : s.cells(i)) {
        const Rect rect = r.cell_rect(idx);
        const double a = clipped_area(*discontinuity, rect);
        const double full = rect.area();
        if (a > 1e-12 * full && a < full * (1.0 - 1e-12)) {
          ++count;
          break;
        }
      }
    }
    d.boundary_stratum_count = count;
  }
  return d;
}

}  // namespace stratspace
