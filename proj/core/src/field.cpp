#include "stratspace/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace stratspace {

namespace {

double max_abs_x(const Rect& b) {
  return std::max(std::abs(b.xmin), std::abs(b.xmax));
}

double max_corner_distance(const Rect& b, Point c) {
  double best = 0.0;
  for (const Point& p : b.corners()) best = std::max(best, distance(p, c));
  return best;
}

Ring default_indicator_polygon() {
  // Irregular pentagon inside the unit square.
  return {{0.2, 0.15}, {0.8, 0.25}, {0.85, 0.7}, {0.45, 0.9}, {0.15, 0.55}};
}

}  // namespace

std::string_view to_string(SmoothnessClass c) {
  switch (c) {
    case SmoothnessClass::holder: return "holder";
    case SmoothnessClass::lipschitz: return "lipschitz";
    case SmoothnessClass::piecewise_holder: return "piecewise_holder";
    case SmoothnessClass::indicator: return "indicator";
    case SmoothnessClass::line_intercept: return "line_intercept";
  }
  return "unknown";
}

AttributeField::AttributeField(Region domain, Evaluator eval, FieldMetadata meta)
    : domain_(std::move(domain)),
      eval_(std::make_shared<const Evaluator>(std::move(eval))),
      meta_(std::make_shared<const FieldMetadata>(std::move(meta))) {}

AttributeField builtin_field(std::string_view id, const FieldParams& params,
                             const Region& domain) {
  const Rect& box = domain.bounding_box();
  FieldMetadata meta;
  meta.id = std::string(id);

  if (id == "constant") {
    const double v = params.value;
    meta.smoothness = SmoothnessClass::lipschitz;
    meta.alpha = 1.0;
    meta.holder_h = 0.0;
    meta.sup_bound = std::abs(v);
    return {domain, [v](Point) { return v; }, std::move(meta)};
  }
  if (id == "linear") {
    meta.smoothness = SmoothnessClass::lipschitz;
    meta.alpha = 1.0;
    meta.holder_h = 1.0;
    meta.sup_bound = max_abs_x(box);
    return {domain, [](Point p) { return p.x; }, std::move(meta)};
  }
  if (id == "smooth_sine") {
    const double w = 2.0 * std::numbers::pi * params.frequency;
    if (!(params.frequency > 0.0)) throw FieldError("frequency must be > 0");
    meta.smoothness = SmoothnessClass::lipschitz;
    meta.alpha = 1.0;
    meta.holder_h = w;  // |grad| <= w
    meta.sup_bound = 2.0;
    return {domain,
            [w](Point p) { return 1.0 + std::sin(w * p.x) * std::cos(w * p.y); },
            std::move(meta)};
  }
  if (id == "holder_cusp") {
    const double a = params.alpha;
    if (!(a > 0.0 && a <= 1.0)) {
      throw FieldError("holder_cusp alpha must lie in (0, 1]");
    }
    const Point c = params.center;
    meta.smoothness = a == 1.0 ? SmoothnessClass::lipschitz
                               : SmoothnessClass::holder;
    meta.alpha = a;
    meta.holder_h = 1.0;
    meta.sup_bound = std::pow(max_corner_distance(box, c), a);
    return {domain, [c, a](Point p) { return std::pow(distance(p, c), a); },
            std::move(meta)};
  }
  if (id == "disk_indicator" || id == "polygon_indicator") {
    Region ind = id == "disk_indicator"
                     ? Region::disk(params.center, params.radius)
                     : Region::polygon(Polygon{
                           params.polygon.empty() ? default_indicator_polygon()
                                                  : params.polygon,
                           {}});
    meta.smoothness = SmoothnessClass::piecewise_holder;
    meta.alpha = 1.0;
    meta.holder_h = 0.0;  // constant on each piece
    meta.sup_bound = 1.0;
    meta.indicator = ind;
    return {domain,
            [ind](Point p) { return contains(ind, p) ? 1.0 : 0.0; },
            std::move(meta)};
  }
  throw FieldError("unknown field id '" + std::string(id) + "'");
}

double extended_eval(const AttributeField& f, Point p) {
  return contains(f.domain(), p) ? f(p) : 0.0;
}

AttributeField extended_field(const AttributeField& f, const Region& frame) {
  FieldMetadata meta = f.metadata();
  meta.id = f.id() + "_extended";
  // The zero extension is generally discontinuous on the domain boundary.
  if (meta.smoothness == SmoothnessClass::holder ||
      meta.smoothness == SmoothnessClass::lipschitz) {
    meta.smoothness = SmoothnessClass::piecewise_holder;
  }
  meta.holder_h.reset();
  meta.indicator.reset();
  return {frame, [f](Point p) { return extended_eval(f, p); }, std::move(meta)};
}

AttributeField line_intercept_field(const CoverSpec& spec, const Region& domain) {
  if (!(spec.transect_length > 0.0)) {
    throw FieldError("transect length must be positive");
  }
  FieldMetadata meta;
  meta.id = "line_intercept";
  meta.smoothness = SmoothnessClass::line_intercept;
  meta.alpha = 1.0;
  meta.sup_bound = 1.0;
  meta.cover = spec;
  const Region cover = spec.cover;
  const double len = spec.transect_length;
  const double theta = spec.orientation;
  return {domain,
          [cover, len, theta](Point p) {
            return intersection_length(Segment{p, len, theta}, cover) / len;
          },
          std::move(meta)};
}

AttributeField linear_combination(double c1, const AttributeField& f1,
                                  double c2, const AttributeField& f2) {
  FieldMetadata meta;
  meta.id = "combination";
  meta.smoothness = SmoothnessClass::holder;
  meta.alpha = std::min(f1.metadata().alpha, f2.metadata().alpha);
  meta.sup_bound = std::abs(c1) * f1.metadata().sup_bound +
                   std::abs(c2) * f2.metadata().sup_bound;
  return {f1.domain(),
          [=](Point p) { return c1 * f1(p) + c2 * f2(p); }, std::move(meta)};
}

SpotCheck holder_spot_check(const AttributeField& f, std::size_t pairs,
                            RandomStream stream) {
  SpotCheck out;
  const auto& m = f.metadata();
  if (!m.holder_h) return out;
  const double h = *m.holder_h;
  for (std::size_t i = 0; i < pairs; ++i) {
    const Point u = uniform_point(f.domain(), stream);
    const Point v = uniform_point(f.domain(), stream);
    const double lhs = std::abs(f(u) - f(v));
    const double rhs = h * std::pow(distance(u, v), m.alpha);
    ++out.samples;
    if (lhs > rhs * (1.0 + 1e-9) + 1e-12) ++out.violations;
    if (rhs > 0.0) out.worst_ratio = std::max(out.worst_ratio, lhs / rhs);
  }
  return out;
}

SpotCheck sup_spot_check(const AttributeField& f, std::size_t points,
                         RandomStream stream) {
  SpotCheck out;
  const double bound = f.metadata().sup_bound;
  for (std::size_t i = 0; i < points; ++i) {
    const double v = std::abs(f(uniform_point(f.domain(), stream)));
    ++out.samples;
    if (v > bound * (1.0 + 1e-12) + 1e-12) ++out.violations;
    if (bound > 0.0) out.worst_ratio = std::max(out.worst_ratio, v / bound);
  }
  return out;
}

}  // namespace stratspace
