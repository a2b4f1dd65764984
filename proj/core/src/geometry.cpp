#include "stratspace/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <limits>
#include <numeric>
#include <variant>

namespace stratspace {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kConicSamples = 2048;
constexpr int kOverlapGrid = 256;

double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }

bool on_segment(Point p, Point a, Point b, double tol) {
  const Point ab = b - a;
  const double len = norm(ab);
  if (len == 0.0) return distance(p, a) <= tol;
  if (std::abs(cross(ab, p - a)) > tol * len) return false;
  const double t = dot(p - a, ab);
  return t >= -tol * len && t <= len * len + tol * len;
}

// Closed-segment intersection test.
bool segments_touch(Point a, Point b, Point c, Point d) {
  const double o1 = orient(a, b, c);
  const double o2 = orient(a, b, d);
  const double o3 = orient(c, d, a);
  const double o4 = orient(c, d, b);
  auto sgn = [](double v) { return (v > 0) - (v < 0); };
  if (sgn(o1) * sgn(o2) < 0 && sgn(o3) * sgn(o4) < 0) return true;
  if (o1 == 0 && on_segment(c, a, b, 0.0)) return true;
  if (o2 == 0 && on_segment(d, a, b, 0.0)) return true;
  if (o3 == 0 && on_segment(a, c, d, 0.0)) return true;
  if (o4 == 0 && on_segment(b, c, d, 0.0)) return true;
  return false;
}

Ring normalize_ring(Ring ring, bool ccw) {
  if (ring.size() >= 2 && ring.front() == ring.back()) ring.pop_back();
  Ring out;
  out.reserve(ring.size());
  for (const Point& p : ring) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw GeometryError("ring has a non-finite coordinate");
    }
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  while (out.size() >= 2 && out.front() == out.back()) out.pop_back();
  if (out.size() < 3) throw GeometryError("ring needs at least 3 vertices");
  const double a = signed_area(out);
  if (a == 0.0) throw GeometryError("ring has zero area");
  if ((a > 0) != ccw) std::reverse(out.begin(), out.end());
  return out;
}

struct EdgeRef {
  Point a, b;
  std::size_t ring;  // global ring id
  std::size_t idx;   // edge index within ring
  std::size_t ring_size;
};

void check_simple(const std::vector<Polygon>& parts) {
  std::vector<EdgeRef> edges;
  std::size_t ring_id = 0;
  auto add = [&](const Ring& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      edges.push_back({r[i], r[(i + 1) % r.size()], ring_id, i, r.size()});
    }
    ++ring_id;
  };
  for (const auto& p : parts) {
    add(p.outer);
    for (const auto& h : p.holes) add(h);
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    const double exmin = std::min(e.a.x, e.b.x), exmax = std::max(e.a.x, e.b.x);
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const auto& f = edges[j];
      if (std::max(f.a.x, f.b.x) < exmin || std::min(f.a.x, f.b.x) > exmax) {
        continue;
      }
      if (e.ring == f.ring) {
        const std::size_t n = e.ring_size;
        if (f.idx == e.idx + 1 || (e.idx == 0 && f.idx == n - 1)) continue;
      }
      if (segments_touch(e.a, e.b, f.a, f.b)) {
        throw GeometryError("polygon rings intersect or self-intersect");
      }
    }
  }
}

bool ring_contains_strict(const Ring& ring, Point p) {
  bool inside = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const Point a = ring[i], b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

Rect ring_bbox(const Ring& r) {
  Rect b{r[0].x, r[0].y, r[0].x, r[0].y};
  for (const Point& p : r) {
    b.xmin = std::min(b.xmin, p.x);
    b.ymin = std::min(b.ymin, p.y);
    b.xmax = std::max(b.xmax, p.x);
    b.ymax = std::max(b.ymax, p.y);
  }
  return b;
}

Rect merge(const Rect& a, const Rect& b) {
  return {std::min(a.xmin, b.xmin), std::min(a.ymin, b.ymin),
          std::max(a.xmax, b.xmax), std::max(a.ymax, b.ymax)};
}

// Local frame of a conic: unit-disk coordinates.
struct ConicMap {
  Point center;
  double a, b, c, s;
  [[nodiscard]] Point to_unit(Point p) const {
    const Point d = p - center;
    return {(c * d.x + s * d.y) / a, (-s * d.x + c * d.y) / b};
  }
  [[nodiscard]] Point from_unit(Point q) const {
    const double lx = q.x * a, ly = q.y * b;
    return {center.x + c * lx - s * ly, center.y + s * lx + c * ly};
  }
};

ConicMap conic_map(const Ellipse& e) {
  return {e.center, e.semi_a, e.semi_b, std::cos(e.rotation),
          std::sin(e.rotation)};
}

// Parameter interval of the line a + t(b - a) inside the unit circle.
bool unit_circle_interval(Point a, Point b, double& t0, double& t1) {
  const Point d = b - a;
  const double qa = dot(d, d);
  const double qb = 2.0 * dot(a, d);
  const double qc = dot(a, a) - 1.0;
  if (qa == 0.0) return false;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc <= 0.0) return false;
  const double sq = std::sqrt(disc);
  // Numerically stable roots.
  const double q = -0.5 * (qb + std::copysign(sq, qb));
  double r0 = q / qa;
  double r1 = (q != 0.0) ? qc / q : -r0;
  if (r0 > r1) std::swap(r0, r1);
  t0 = r0;
  t1 = r1;
  return true;
}

// Signed area of (unit circle) intersected with triangle (origin, p, q).
double circle_triangle_area(Point p, Point q) {
  std::vector<double> ts{0.0};
  double t0, t1;
  if (unit_circle_interval(p, q, t0, t1)) {
    if (t0 > 0.0 && t0 < 1.0) ts.push_back(t0);
    if (t1 > 0.0 && t1 < 1.0) ts.push_back(t1);
  }
  ts.push_back(1.0);
  double total = 0.0;
  const Point d = q - p;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const Point u = p + ts[i] * d;
    const Point v = p + ts[i + 1] * d;
    const Point m = 0.5 * (u + v);
    if (dot(m, m) <= 1.0) {
      total += 0.5 * cross(u, v);
    } else {
      total += 0.5 * std::atan2(cross(u, v), dot(u, v));
    }
  }
  return total;
}

// Area of unit disk intersected with a polygon given in unit coordinates.
double unit_disk_polygon_area(std::span<const Point> poly) {
  double total = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    total += circle_triangle_area(poly[i], poly[(i + 1) % poly.size()]);
  }
  return total;
}

// Sutherland-Hodgman clip of a ring against a rectangle.
Ring clip_ring(const Ring& ring, const Rect& r) {
  Ring cur = ring;
  auto clip = [&](auto inside, auto intersect) {
    Ring out;
    if (cur.empty()) return;
    out.reserve(cur.size() + 4);
    Point prev = cur.back();
    bool prev_in = inside(prev);
    for (const Point& p : cur) {
      const bool in = inside(p);
      if (in) {
        if (!prev_in) out.push_back(intersect(prev, p));
        out.push_back(p);
      } else if (prev_in) {
        out.push_back(intersect(prev, p));
      }
      prev = p;
      prev_in = in;
    }
    cur = std::move(out);
  };
  auto at_x = [](Point a, Point b, double x) {
    const double t = (x - a.x) / (b.x - a.x);
    return Point{x, a.y + t * (b.y - a.y)};
  };
  auto at_y = [](Point a, Point b, double y) {
    const double t = (y - a.y) / (b.y - a.y);
    return Point{a.x + t * (b.x - a.x), y};
  };
  clip([&](Point p) { return p.x >= r.xmin; },
       [&](Point a, Point b) { return at_x(a, b, r.xmin); });
  clip([&](Point p) { return p.x <= r.xmax; },
       [&](Point a, Point b) { return at_x(a, b, r.xmax); });
  clip([&](Point p) { return p.y >= r.ymin; },
       [&](Point a, Point b) { return at_y(a, b, r.ymin); });
  clip([&](Point p) { return p.y <= r.ymax; },
       [&](Point a, Point b) { return at_y(a, b, r.ymax); });
  return cur;
}

Point triangle_point(const std::array<Point, 3>& t, RandomStream& s) {
  double u = s.uniform();
  double v = s.uniform();
  if (u + v > 1.0) {
    u = 1.0 - u;
    v = 1.0 - v;
  }
  return t[0] + u * (t[1] - t[0]) + v * (t[2] - t[0]);
}

std::vector<Point> conic_boundary(const Ellipse& e, int samples) {
  const ConicMap m = conic_map(e);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double th = 2.0 * kPi * i / samples;
    pts.push_back(m.from_unit({std::cos(th), std::sin(th)}));
  }
  return pts;
}

Ellipse as_conic(const Disk& d) { return {d.center, d.radius, d.radius, 0.0}; }

Rect conic_bbox(const Ellipse& e) {
  const double c = std::cos(e.rotation), s = std::sin(e.rotation);
  const double hx = std::hypot(e.semi_a * c, e.semi_b * s);
  const double hy = std::hypot(e.semi_a * s, e.semi_b * c);
  return {e.center.x - hx, e.center.y - hy, e.center.x + hx, e.center.y + hy};
}

bool conic_contains(const Ellipse& e, Point p) {
  const Point q = conic_map(e).to_unit(p);
  return dot(q, q) <= 1.0 + 1e-12;
}

double conic_clipped_area(const Ellipse& e, const Rect& rect) {
  const ConicMap m = conic_map(e);
  std::array<Point, 4> poly;
  const auto corners = rect.corners();
  for (std::size_t i = 0; i < 4; ++i) poly[i] = m.to_unit(corners[i]);
  return std::abs(unit_disk_polygon_area(poly)) * e.semi_a * e.semi_b;
}

std::vector<Point> conic_clipped_support(const Ellipse& e, const Rect& rect) {
  std::vector<Point> pts;
  const ConicMap m = conic_map(e);
  const auto corners = rect.corners();
  for (std::size_t i = 0; i < 4; ++i) {
    const Point a = corners[i], b = corners[(i + 1) % 4];
    if (conic_contains(e, a)) pts.push_back(a);
    double t0, t1;
    if (unit_circle_interval(m.to_unit(a), m.to_unit(b), t0, t1)) {
      for (double t : {t0, t1}) {
        if (t >= 0.0 && t <= 1.0) pts.push_back(a + t * (b - a));
      }
    }
  }
  for (const Point& p : conic_boundary(e, kConicSamples)) {
    if (rect.contains(p)) pts.push_back(p);
  }
  return pts;
}

double conic_chord(const Ellipse& e, Point a, Point b) {
  const ConicMap m = conic_map(e);
  double t0, t1;
  if (!unit_circle_interval(m.to_unit(a), m.to_unit(b), t0, t1)) return 0.0;
  t0 = std::max(t0, 0.0);
  t1 = std::min(t1, 1.0);
  return t1 > t0 ? (t1 - t0) * distance(a, b) : 0.0;
}

}  // namespace

struct Region::Impl {
  Kind kind = Kind::polygonal;
  std::vector<Polygon> parts;
  Disk disk;
  Ellipse ellipse;
  std::vector<Region> members;
  double area = 0.0;
  Rect bbox;
  double tol = 0.0;
  std::vector<std::array<Point, 3>> triangles;
  std::vector<double> cumulative;  // over triangles or members
};

double signed_area(std::span<const Point> ring) {
  double s = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    s += cross(ring[i], ring[(i + 1) % ring.size()]);
  }
  return 0.5 * s;
}

Region Region::polygons(std::vector<Polygon> parts) {
  if (parts.empty()) throw GeometryError("polygonal region has no parts");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::polygonal;
  for (auto& p : parts) {
    Polygon q;
    q.outer = normalize_ring(std::move(p.outer), true);
    for (auto& h : p.holes) q.holes.push_back(normalize_ring(std::move(h), false));
    impl->parts.push_back(std::move(q));
  }
  check_simple(impl->parts);
  for (std::size_t i = 0; i < impl->parts.size(); ++i) {
    const auto& part = impl->parts[i];
    for (const auto& h : part.holes) {
      if (!ring_contains_strict(part.outer, h[0])) {
        throw GeometryError("hole ring is not inside its outer ring");
      }
    }
    for (std::size_t j = 0; j < impl->parts.size(); ++j) {
      if (i != j && ring_contains_strict(impl->parts[j].outer, part.outer[0])) {
        bool in_hole = false;
        for (const auto& h : impl->parts[j].holes) {
          in_hole = in_hole || ring_contains_strict(h, part.outer[0]);
        }
        if (!in_hole) throw GeometryError("polygon parts overlap");
      }
    }
  }
  impl->bbox = ring_bbox(impl->parts[0].outer);
  double a = 0.0;
  for (const auto& part : impl->parts) {
    impl->bbox = merge(impl->bbox, ring_bbox(part.outer));
    a += signed_area(part.outer);
    for (const auto& h : part.holes) a += signed_area(h);
    for (auto& t : triangulate(part)) impl->triangles.push_back(t);
  }
  if (!(a > 0.0)) throw GeometryError("polygonal region has zero area");
  impl->area = a;
  double acc = 0.0;
  for (const auto& t : impl->triangles) {
    acc += std::abs(0.5 * orient(t[0], t[1], t[2]));
    impl->cumulative.push_back(acc);
  }
  impl->tol = 1e-12 * std::max(impl->bbox.width(), impl->bbox.height());
  return Region(std::move(impl));
}

Region Region::polygon(Polygon part) {
  std::vector<Polygon> parts;
  parts.push_back(std::move(part));
  return polygons(std::move(parts));
}

Region Region::rectangle(const Rect& r) {
  if (!(r.width() > 0.0) || !(r.height() > 0.0)) {
    throw GeometryError("rectangle has zero area");
  }
  auto c = r.corners();
  return polygon(Polygon{Ring(c.begin(), c.end()), {}});
}

Region Region::disk(Point center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw GeometryError("disk radius must be positive");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::disk;
  impl->disk = {center, radius};
  impl->area = kPi * radius * radius;
  impl->bbox = {center.x - radius, center.y - radius, center.x + radius,
                center.y + radius};
  return Region(std::move(impl));
}

Region Region::ellipse(Point center, double semi_a, double semi_b,
                       double rotation) {
  if (!(semi_a > 0.0) || !(semi_b > 0.0)) {
    throw GeometryError("ellipse semi-axes must be positive");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::ellipse;
  impl->ellipse = {center, semi_a, semi_b, rotation};
  impl->area = kPi * semi_a * semi_b;
  impl->bbox = conic_bbox(impl->ellipse);
  return Region(std::move(impl));
}

Region Region::disjoint_union(std::vector<Region> members) {
  if (members.empty()) throw GeometryError("disjoint union has no members");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::disjoint_union;
  impl->bbox = members[0].bounding_box();
  double acc = 0.0;
  for (const auto& m : members) {
    impl->bbox = merge(impl->bbox, m.bounding_box());
    acc += m.area();
    impl->cumulative.push_back(acc);
  }
  impl->area = acc;
  // Coarse double-coverage check on cell centers.
  const Rect& b = impl->bbox;
  for (int j = 0; j < kOverlapGrid; ++j) {
    const double y = b.ymin + (j + 0.5) * b.height() / kOverlapGrid;
    for (int i = 0; i < kOverlapGrid; ++i) {
      const Point p{b.xmin + (i + 0.5) * b.width() / kOverlapGrid, y};
      int hits = 0;
      for (const auto& m : members) {
        if (m.bounding_box().contains(p) && contains(m, p)) ++hits;
      }
      if (hits > 1) throw GeometryError("disjoint union members overlap");
    }
  }
  impl->members = std::move(members);
  return Region(std::move(impl));
}

Region::Kind Region::kind() const { return impl_->kind; }
double Region::area() const { return impl_->area; }
const Rect& Region::bounding_box() const { return impl_->bbox; }

const std::vector<Polygon>& Region::polygon_parts() const {
  if (impl_->kind != Kind::polygonal) throw GeometryError("not polygonal");
  return impl_->parts;
}
const Disk& Region::as_disk() const {
  if (impl_->kind != Kind::disk) throw GeometryError("not a disk");
  return impl_->disk;
}
const Ellipse& Region::as_ellipse() const {
  if (impl_->kind != Kind::ellipse) throw GeometryError("not an ellipse");
  return impl_->ellipse;
}
std::span<const Region> Region::members() const {
  if (impl_->kind != Kind::disjoint_union) {
    throw GeometryError("not a disjoint union");
  }
  return impl_->members;
}
std::span<const std::array<Point, 3>> Region::triangles() const {
  return impl_->triangles;
}

std::span<const double> Region::cumulative_areas() const {
  return impl_->cumulative;
}
double Region::tolerance() const { return impl_->tol; }

double area(const Region& r) { return r.area(); }

std::vector<Point> support_points(const Region& r) {
  switch (r.kind()) {
    case Region::Kind::polygonal: {
      std::vector<Point> pts;
      for (const auto& part : r.polygon_parts()) {
        pts.insert(pts.end(), part.outer.begin(), part.outer.end());
      }
      return pts;
    }
    case Region::Kind::disk:
      return conic_boundary(as_conic(r.as_disk()), kConicSamples);
    case Region::Kind::ellipse:
      return conic_boundary(r.as_ellipse(), kConicSamples);
    case Region::Kind::disjoint_union: {
      std::vector<Point> pts;
      for (const auto& m : r.members()) {
        auto sub = support_points(m);
        pts.insert(pts.end(), sub.begin(), sub.end());
      }
      return pts;
    }
  }
  return {};
}

double diameter(const Region& r) {
  switch (r.kind()) {
    case Region::Kind::disk:
      return 2.0 * r.as_disk().radius;
    case Region::Kind::ellipse:
      return 2.0 * std::max(r.as_ellipse().semi_a, r.as_ellipse().semi_b);
    default: {
      auto hull = convex_hull(support_points(r));
      return hull_diameter(hull);
    }
  }
}

bool contains(const Region& r, Point p) {
  const Rect& b = r.bounding_box();
  if (p.x < b.xmin - 1e-12 * (1 + std::abs(b.xmin)) ||
      p.x > b.xmax + 1e-12 * (1 + std::abs(b.xmax)) ||
      p.y < b.ymin - 1e-12 * (1 + std::abs(b.ymin)) ||
      p.y > b.ymax + 1e-12 * (1 + std::abs(b.ymax))) {
    return false;
  }
  switch (r.kind()) {
    case Region::Kind::polygonal: {
      const double tol = r.tolerance();
      bool inside = false;
      for (const auto& part : r.polygon_parts()) {
        auto test = [&](const Ring& ring) {
          for (std::size_t i = 0; i < ring.size(); ++i) {
            if (on_segment(p, ring[i], ring[(i + 1) % ring.size()], tol)) {
              return true;
            }
          }
          if (ring_contains_strict(ring, p)) inside = !inside;
          return false;
        };
        if (test(part.outer)) return true;
        for (const auto& h : part.holes) {
          if (test(h)) return true;
        }
      }
      return inside;
    }
    case Region::Kind::disk: {
      const Disk& d = r.as_disk();
      const Point q = p - d.center;
      return dot(q, q) <= d.radius * d.radius * (1.0 + 1e-12);
    }
    case Region::Kind::ellipse:
      return conic_contains(r.as_ellipse(), p);
    case Region::Kind::disjoint_union:
      for (const auto& m : r.members()) {
        if (contains(m, p)) return true;
      }
      return false;
  }
  return false;
}

Point uniform_point(const Region& r, RandomStream& stream) {
  if (!(r.area() > 0.0)) throw GeometryError("cannot sample a zero-area region");
  switch (r.kind()) {
    case Region::Kind::polygonal: {
      const auto tris = r.triangles();
      const auto cum = r.cumulative_areas();
      const double u = stream.uniform() * cum.back();
      auto it = std::upper_bound(cum.begin(), cum.end(), u);
      const std::size_t k = std::min<std::size_t>(
          static_cast<std::size_t>(it - cum.begin()), tris.size() - 1);
      return triangle_point(tris[k], stream);
    }
    case Region::Kind::disk:
    case Region::Kind::ellipse: {
      const Ellipse e = r.kind() == Region::Kind::disk ? as_conic(r.as_disk())
                                                      : r.as_ellipse();
      const double rad = std::sqrt(stream.uniform());
      const double th = 2.0 * kPi * stream.uniform();
      return conic_map(e).from_unit({rad * std::cos(th), rad * std::sin(th)});
    }
    case Region::Kind::disjoint_union: {
      const auto cum = r.cumulative_areas();
      const double u = stream.uniform() * cum.back();
      auto it = std::upper_bound(cum.begin(), cum.end(), u);
      const std::size_t k = std::min<std::size_t>(
          static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
      return uniform_point(r.members()[k], stream);
    }
  }
  return {};
}

double intersection_length(const Segment& s, const Region& r) {
  const Point a = s.start();
  const Point b = s.end();
  switch (r.kind()) {
    case Region::Kind::polygonal: {
      const Point d = b - a;
      std::vector<double> ts{0.0, 1.0};
      for (const auto& part : r.polygon_parts()) {
        auto scan = [&](const Ring& ring) {
          for (std::size_t i = 0; i < ring.size(); ++i) {
            const Point p = ring[i];
            const Point e = ring[(i + 1) % ring.size()] - p;
            const double denom = cross(d, e);
            if (denom == 0.0) continue;
            const double t = cross(p - a, e) / denom;
            const double u = cross(p - a, d) / denom;
            if (t > 0.0 && t < 1.0 && u >= 0.0 && u <= 1.0) ts.push_back(t);
          }
        };
        scan(part.outer);
        for (const auto& h : part.holes) scan(h);
      }
      std::sort(ts.begin(), ts.end());
      double len = 0.0;
      for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        if (ts[i + 1] <= ts[i]) continue;
        const Point m = a + (0.5 * (ts[i] + ts[i + 1])) * d;
        if (contains(r, m)) len += ts[i + 1] - ts[i];
      }
      return len * s.length;
    }
    case Region::Kind::disk:
      return conic_chord(as_conic(r.as_disk()), a, b);
    case Region::Kind::ellipse:
      return conic_chord(r.as_ellipse(), a, b);
    case Region::Kind::disjoint_union: {
      double len = 0.0;
      for (const auto& m : r.members()) len += intersection_length(s, m);
      return len;
    }
  }
  return 0.0;
}

double clipped_area(const Region& r, const Rect& rect) {
  const Rect& b = r.bounding_box();
  if (rect.xmax <= b.xmin || rect.xmin >= b.xmax || rect.ymax <= b.ymin ||
      rect.ymin >= b.ymax) {
    return 0.0;
  }
  switch (r.kind()) {
    case Region::Kind::polygonal: {
      double a = 0.0;
      for (const auto& part : r.polygon_parts()) {
        a += signed_area(clip_ring(part.outer, rect));
        for (const auto& h : part.holes) a += signed_area(clip_ring(h, rect));
      }
      return std::max(a, 0.0);
    }
    case Region::Kind::disk:
      return conic_clipped_area(as_conic(r.as_disk()), rect);
    case Region::Kind::ellipse:
      return conic_clipped_area(r.as_ellipse(), rect);
    case Region::Kind::disjoint_union: {
      double a = 0.0;
      for (const auto& m : r.members()) a += clipped_area(m, rect);
      return a;
    }
  }
  return 0.0;
}

std::vector<Point> clipped_support_points(const Region& r, const Rect& rect) {
  switch (r.kind()) {
    case Region::Kind::polygonal: {
      std::vector<Point> pts;
      for (const auto& part : r.polygon_parts()) {
        auto c = clip_ring(part.outer, rect);
        pts.insert(pts.end(), c.begin(), c.end());
      }
      return pts;
    }
    case Region::Kind::disk:
      return conic_clipped_support(as_conic(r.as_disk()), rect);
    case Region::Kind::ellipse:
      return conic_clipped_support(r.as_ellipse(), rect);
    case Region::Kind::disjoint_union: {
      std::vector<Point> pts;
      for (const auto& m : r.members()) {
        auto sub = clipped_support_points(m, rect);
        pts.insert(pts.end(), sub.begin(), sub.end());
      }
      return pts;
    }
  }
  return {};
}

Region transformed(const Region& r, double angle, Point shift) {
  const double c = std::cos(angle), s = std::sin(angle);
  auto map = [&](Point p) {
    return Point{c * p.x - s * p.y + shift.x, s * p.x + c * p.y + shift.y};
  };
  switch (r.kind()) {
    case Region::Kind::polygonal: {
      std::vector<Polygon> parts;
      for (const auto& part : r.polygon_parts()) {
        Polygon q;
        for (Point p : part.outer) q.outer.push_back(map(p));
        for (const auto& h : part.holes) {
          Ring ring;
          for (Point p : h) ring.push_back(map(p));
          q.holes.push_back(std::move(ring));
        }
        parts.push_back(std::move(q));
      }
      return Region::polygons(std::move(parts));
    }
    case Region::Kind::disk:
      return Region::disk(map(r.as_disk().center), r.as_disk().radius);
    case Region::Kind::ellipse: {
      const Ellipse& e = r.as_ellipse();
      return Region::ellipse(map(e.center), e.semi_a, e.semi_b,
                             e.rotation + angle);
    }
    case Region::Kind::disjoint_union: {
      std::vector<Region> members;
      for (const auto& m : r.members()) {
        members.push_back(transformed(m, angle, shift));
      }
      return Region::disjoint_union(std::move(members));
    }
  }
  return r;
}

Segment transformed(const Segment& s, double angle, Point shift) {
  const double c = std::cos(angle), sn = std::sin(angle);
  const Point m = s.midpoint;
  return {Point{c * m.x - sn * m.y + shift.x, sn * m.x + c * m.y + shift.y},
          s.length, s.orientation + angle};
}

std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point& p : pts) {
    while (k >= 2 && orient(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    const Point p = pts[i];
    while (k >= t && orient(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

double hull_diameter(std::span<const Point> h) {
  const std::size_t n = h.size();
  if (n == 0) return 0.0;
  if (n == 1) return 0.0;
  if (n == 2) return distance(h[0], h[1]);
  double best = 0.0;
  std::size_t j = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ni = (i + 1) % n;
    while (std::abs(orient(h[i], h[ni], h[(j + 1) % n])) >
           std::abs(orient(h[i], h[ni], h[j]))) {
      j = (j + 1) % n;
    }
    best = std::max({best, distance(h[i], h[j]), distance(h[ni], h[j])});
  }
  return best;
}

double max_hull_distance(std::span<const Point> a, std::span<const Point> b) {
  double best = 0.0;
  for (const Point& p : a) {
    for (const Point& q : b) best = std::max(best, distance(p, q));
  }
  return best;
}

namespace {

bool point_in_triangle(Point p, Point a, Point b, Point c) {
  return orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0;
}

// Direction from ring vertex a1 towards b lies inside the polygon angle at a1.
bool in_cone(Point a0, Point a1, Point a2, Point b) {
  if (orient(a1, a2, a0) >= 0) {
    return orient(a1, b, a0) > 0 && orient(b, a1, a2) > 0;
  }
  return !(orient(a1, b, a2) >= 0 && orient(b, a1, a0) >= 0);
}

bool on_segment(Point p, Point a, Point b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Segment (m, v) meets edge (a, b) anywhere other than at m or v.
bool blocks(Point m, Point v, Point a, Point b) {
  const bool share_a = a == m || a == v, share_b = b == m || b == v;
  if (share_a && share_b) return false;
  const double o1 = orient(m, v, a), o2 = orient(m, v, b);
  const double o3 = orient(a, b, m), o4 = orient(a, b, v);
  if (!share_a && o1 == 0 && on_segment(a, m, v)) return true;
  if (!share_b && o2 == 0 && on_segment(b, m, v)) return true;
  if (share_a || share_b) return false;
  if (o3 == 0 && on_segment(m, a, b)) return true;
  if (o4 == 0 && on_segment(v, a, b)) return true;
  return ((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) &&
         ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0));
}

// Splice CW holes into the CCW outer ring with bridge edges, rightmost hole
// first; each bridge joins the hole's rightmost vertex to the nearest visible
// ring vertex.
Ring bridge_holes(const Polygon& poly) {
  Ring outer = poly.outer;
  std::vector<const Ring*> holes;
  for (const auto& h : poly.holes) holes.push_back(&h);
  auto max_x = [](const Ring* r) {
    return std::max_element(r->begin(), r->end(), [](Point a, Point b) {
      return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
  };
  std::sort(holes.begin(), holes.end(), [&](const Ring* a, const Ring* b) {
    return max_x(a)->x > max_x(b)->x;
  });
  for (std::size_t hi = 0; hi < holes.size(); ++hi) {
    const Ring* hole = holes[hi];
    const std::size_t mi = static_cast<std::size_t>(max_x(hole) - hole->begin());
    const Point m = (*hole)[mi];
    const std::size_t n = outer.size();
    std::vector<std::size_t> cand(n);
    std::iota(cand.begin(), cand.end(), std::size_t{0});
    std::stable_sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) {
      return distance(outer[a], m) < distance(outer[b], m);
    });
    auto visible = [&](std::size_t k) {
      const Point v = outer[k];
      if (!in_cone(outer[(k + n - 1) % n], v, outer[(k + 1) % n], m)) return false;
      for (std::size_t i = 0; i < n; ++i) {
        if (blocks(m, v, outer[i], outer[(i + 1) % n])) return false;
      }
      for (std::size_t h = hi; h < holes.size(); ++h) {
        const Ring& r = *holes[h];
        for (std::size_t i = 0; i < r.size(); ++i) {
          if (blocks(m, v, r[i], r[(i + 1) % r.size()])) return false;
        }
      }
      return true;
    };
    std::size_t pi = cand.front();
    for (std::size_t k : cand) {
      if (visible(k)) {
        pi = k;
        break;
      }
    }
    const Point p = outer[pi];
    Ring merged;
    merged.reserve(outer.size() + hole->size() + 2);
    merged.insert(merged.end(), outer.begin(),
                  outer.begin() + static_cast<std::ptrdiff_t>(pi) + 1);
    for (std::size_t k = 0; k <= hole->size(); ++k) {
      merged.push_back((*hole)[(mi + k) % hole->size()]);
    }
    merged.push_back(p);
    merged.insert(merged.end(),
                  outer.begin() + static_cast<std::ptrdiff_t>(pi) + 1,
                  outer.end());
    outer = std::move(merged);
  }
  return outer;
}

}  // namespace

std::vector<std::array<Point, 3>> triangulate(const Polygon& input) {
  Polygon poly = input;
  if (signed_area(poly.outer) < 0) std::reverse(poly.outer.begin(), poly.outer.end());
  for (auto& h : poly.holes) {
    if (signed_area(h) > 0) std::reverse(h.begin(), h.end());
  }
  Ring ring = bridge_holes(poly);
  std::vector<std::array<Point, 3>> tris;
  std::vector<std::size_t> idx(ring.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const Rect b = ring_bbox(ring);
  const double eps = 1e-14 * std::max(b.width(), b.height()) *
                     std::max(b.width(), b.height());
  std::size_t guard = 0;
  std::size_t i = 0;
  while (idx.size() > 3) {
    const std::size_t n = idx.size();
    const std::size_t ip = (i + n - 1) % n, in = (i + 1) % n;
    const Point a = ring[idx[ip]], c = ring[idx[i]], d = ring[idx[in]];
    const double o = orient(a, c, d);
    bool ear = false;
    if (std::abs(o) <= eps) {
      // Collinear vertex: drop without emitting a triangle.
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(i));
      guard = 0;
      if (i >= idx.size()) i = 0;
      continue;
    }
    if (o > 0) {
      ear = true;
      for (std::size_t k = 0; k < n && ear; ++k) {
        if (k == ip || k == i || k == in) continue;
        const Point v = ring[idx[k]];
        if (v == a || v == c || v == d) continue;
        const Point vp = ring[idx[(k + n - 1) % n]];
        const Point vn = ring[idx[(k + 1) % n]];
        if (orient(vp, v, vn) > 0) continue;  // only reflex vertices block
        if (point_in_triangle(v, a, c, d)) ear = false;
      }
    }
    if (ear || guard > 2 * n) {
      if (guard > 2 * n && !ear) {
        // No ear found in a full sweep (numerically degenerate input):
        // clip the most convex vertex to guarantee progress.
        double best = -std::numeric_limits<double>::infinity();
        std::size_t bi = 0;
        for (std::size_t k = 0; k < n; ++k) {
          const double ok = orient(ring[idx[(k + n - 1) % n]], ring[idx[k]],
                                   ring[idx[(k + 1) % n]]);
          if (ok > best) {
            best = ok;
            bi = k;
          }
        }
        i = bi;
      }
      const std::size_t jp = (i + n - 1) % n, jn = (i + 1) % n;
      tris.push_back({ring[idx[jp]], ring[idx[i]], ring[idx[jn]]});
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(i));
      guard = 0;
      if (i >= idx.size()) i = 0;
    } else {
      ++guard;
      i = (i + 1) % n;
    }
  }
  if (idx.size() == 3) {
    const Point a = ring[idx[0]], c = ring[idx[1]], d = ring[idx[2]];
    if (std::abs(orient(a, c, d)) > eps) tris.push_back({a, c, d});
  }
  return tris;
}

}  // namespace stratspace
