#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "stratspace/geometry.hpp"
#include "stratspace/random.hpp"

namespace stratspace {

enum class SmoothnessClass {
  holder,
  lipschitz,
  piecewise_holder,
  indicator,
  line_intercept,
};

std::string_view to_string(SmoothnessClass c);

// Line-intercept survey geometry: cover region C and the shared transect
// length / orientation.
struct CoverSpec {
  Region cover;
  double transect_length = 0.0;  // meters
  double orientation = 0.0;      // radians
};

// Smoothness metadata of an attribute field.
struct FieldMetadata {
  std::string id;
  SmoothnessClass smoothness = SmoothnessClass::lipschitz;
  double alpha = 1.0;
  std::optional<double> holder_h;  // unset when unknown
  double sup_bound = 0.0;
  // For piecewise-constant fields: y = indicator_value on this region and 0
  // elsewhere. Enables exact quadrature and the boundary-crossing count.
  std::optional<Region> indicator;
  double indicator_value = 1.0;
  std::optional<CoverSpec> cover;
};

// The fixed attribute y on a domain A. Immutable; copies share state.
class AttributeField {
 public:
  using Evaluator = std::function<double(Point)>;

  AttributeField(Region domain, Evaluator eval, FieldMetadata meta);

  // y(p); the caller guarantees p lies in the domain.
  double operator()(Point p) const { return (*eval_)(p); }
  [[nodiscard]] const Region& domain() const { return domain_; }
  [[nodiscard]] const FieldMetadata& metadata() const { return *meta_; }
  [[nodiscard]] const std::string& id() const { return meta_->id; }

 private:
  Region domain_;
  std::shared_ptr<const Evaluator> eval_;
  std::shared_ptr<const FieldMetadata> meta_;
};

// Parameters for the built-in catalog. Unused members are ignored.
struct FieldParams {
  double value = 1.0;        // constant
  Point center{0.5, 0.5};    // holder_cusp, disk_indicator
  double alpha = 0.5;        // holder_cusp
  double radius = 0.3;       // disk_indicator
  double frequency = 1.0;    // smooth_sine
  Ring polygon;              // polygon_indicator; empty selects a default
};

class FieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Catalog ids: constant, linear, smooth_sine, holder_cusp, disk_indicator,
// polygon_indicator.
AttributeField builtin_field(std::string_view id, const FieldParams& params,
                             const Region& domain);

// y_e: y(p) inside the domain, 0 outside.
double extended_eval(const AttributeField& f, Point p);

// y_e viewed as a field on a superset R of the domain.
AttributeField extended_field(const AttributeField& f, const Region& frame);

// y(u) = l(C ∩ t(u)) / L with t(u) the transect centered at u.
AttributeField line_intercept_field(const CoverSpec& spec, const Region& domain);

// c1*f1 + c2*f2 on f1's domain. Metadata is that of a generic Hölder field
// with unknown constant.
AttributeField linear_combination(double c1, const AttributeField& f1,
                                  double c2, const AttributeField& f2);

struct SpotCheck {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // max |y(u)-y(v)| / (H |u-v|^α), or max |y|/M
};

// Hölder condition on random pairs from the domain. Skips (samples = 0)
// when H is unset.
SpotCheck holder_spot_check(const AttributeField& f, std::size_t pairs,
                            RandomStream stream);
// |y(u)| <= M on random points.
SpotCheck sup_spot_check(const AttributeField& f, std::size_t points,
                         RandomStream stream);

}  // namespace stratspace
