#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stratspace/random.hpp"

namespace stratspace {

// Planar coordinates in meters.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

// Axis-aligned rectangle.
struct Rect {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  [[nodiscard]] double width() const { return xmax - xmin; }
  [[nodiscard]] double height() const { return ymax - ymin; }
  [[nodiscard]] double area() const { return width() * height(); }
  [[nodiscard]] bool contains(Point p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
  [[nodiscard]] std::array<Point, 4> corners() const {
    return {Point{xmin, ymin}, Point{xmax, ymin}, Point{xmax, ymax},
            Point{xmin, ymax}};
  }
};

// Open ring: the closing vertex is not repeated.
using Ring = std::vector<Point>;

struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
};

struct Disk {
  Point center;
  double radius = 0.0;
};

struct Ellipse {
  Point center;
  double semi_a = 0.0;  // along the rotated x axis
  double semi_b = 0.0;
  double rotation = 0.0;  // radians
};

// Transect: a segment given by midpoint, length and orientation.
struct Segment {
  Point midpoint;
  double length = 0.0;
  double orientation = 0.0;  // radians from the x axis

  [[nodiscard]] Point start() const {
    return midpoint - 0.5 * length * Point{std::cos(orientation),
                                           std::sin(orientation)};
  }
  [[nodiscard]] Point end() const {
    return midpoint + 0.5 * length * Point{std::cos(orientation),
                                           std::sin(orientation)};
  }
};

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Immutable planar region: polygons with holes, a disk, an ellipse, or a
// disjoint union of regions. Construction validates and caches area,
// bounding box and (for polygons) a triangulation used for sampling.
class Region {
 public:
  enum class Kind { polygonal, disk, ellipse, disjoint_union };

  static Region polygons(std::vector<Polygon> parts);
  static Region polygon(Polygon part);
  static Region rectangle(const Rect& r);
  static Region disk(Point center, double radius);
  static Region ellipse(Point center, double semi_a, double semi_b,
                        double rotation);
  static Region disjoint_union(std::vector<Region> members);

  [[nodiscard]] Kind kind() const;
  [[nodiscard]] double area() const;
  [[nodiscard]] const Rect& bounding_box() const;

  // Accessors; each throws if kind() does not match.
  [[nodiscard]] const std::vector<Polygon>& polygon_parts() const;
  [[nodiscard]] const Disk& as_disk() const;
  [[nodiscard]] const Ellipse& as_ellipse() const;
  [[nodiscard]] std::span<const Region> members() const;

  // Ear-clipped triangles of a polygonal region (CCW).
  [[nodiscard]] std::span<const std::array<Point, 3>> triangles() const;
  // Running area totals over triangles (polygonal) or members (union).
  [[nodiscard]] std::span<const double> cumulative_areas() const;
  // Absolute tolerance for boundary tests, scaled to the region size.
  [[nodiscard]] double tolerance() const;

  struct Impl;

 private:
  explicit Region(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

double area(const Region& r);
double diameter(const Region& r);
// Boundary points count as inside.
bool contains(const Region& r, Point p);
Point uniform_point(const Region& r, RandomStream& stream);
double intersection_length(const Segment& s, const Region& r);

// Area of r intersected with an axis-aligned rectangle.
double clipped_area(const Region& r, const Rect& rect);
// Points whose convex hull is (to sampling accuracy for curved boundaries)
// the hull of r intersected with rect. Empty if they do not meet.
std::vector<Point> clipped_support_points(const Region& r, const Rect& rect);
// Points whose convex hull approximates the hull of r.
std::vector<Point> support_points(const Region& r);

// Rigid motion: rotate by `angle` about the origin, then translate.
Region transformed(const Region& r, double angle, Point shift);
Segment transformed(const Segment& s, double angle, Point shift);

// Computational-geometry helpers.
double signed_area(std::span<const Point> ring);
std::vector<Point> convex_hull(std::vector<Point> pts);
// Largest pairwise distance of a convex polygon (rotating calipers).
double hull_diameter(std::span<const Point> hull);
// Largest distance between a point of hull a and a point of hull b.
double max_hull_distance(std::span<const Point> a, std::span<const Point> b);
// Triangulate a simple polygon with holes by ear clipping.
std::vector<std::array<Point, 3>> triangulate(const Polygon& poly);

}  // namespace stratspace
