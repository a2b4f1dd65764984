#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "stratspace/field.hpp"
#include "stratspace/stratify.hpp"

namespace stratspace {

class OracleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Quadrature moments of y over A and over each stratum.
struct MomentTable {
  double t = 0.0;  // ∫_A y
  double s = 0.0;  // ∫_A y^2
  std::vector<double> area_i;
  std::vector<double> t_i;
  std::vector<double> s_i;
  std::vector<double> var_i;  // Var[y(V_i)], computed centered
  std::vector<double> m3_i;   // E|y(V_i) - E y(V_i)|^3
  int resolution = 0;
  double error_estimate = 0.0;  // relative, from the two quadrature levels
  double tolerance = 0.0;
  bool flagged = false;         // error_estimate > tolerance
  bool exact_indicator = false;

  [[nodiscard]] int size() const { return static_cast<int>(t_i.size()); }
  [[nodiscard]] double domain_area() const;
  // Var[y(U)] for U uniform on A.
  [[nodiscard]] double domain_variance() const;
};

// Midpoint rule on each raster cell subdivided so that roughly `resolution`
// points span the longer side, at that level and twice it, combined by
// Richardson extrapolation. Piecewise-constant fields use exact clipped
// areas instead.
MomentTable moments(const AttributeField& f, const Stratification& s, int resolution = 512);

// (a(A) S - T^2) / n, evaluated in centered form.
double exact_var_urs(const MomentTable& m, int n);
// sum a_i^2 Var[y(V_i)] = sum a_i S_i - sum T_i^2.
double exact_var_ss(const MomentTable& m);
// Two sites per stratum of the table's stratification: exact_var_ss / 2.
double exact_var_ss2(const MomentTable& m);
// n/(n-1) sum (T_i - T/n)^2.
double bias_naive(const MomentTable& m);
// (1/2)(T_1^2 + sum (T_i - T_{i+1})^2 + T_n^2) along `order`.
double bias_neighbor(const MomentTable& m, std::span<const int> order);

struct HolderBound {
  double bound = 0.0;  // H^2 d_n^{2+2α} a(A)
  double sigma2 = 0.0;
  bool satisfied = false;
};

// Empty when the field declares no Hölder constant.
std::optional<HolderBound> holder_bound_check(const AttributeField& f, const Stratification& s,
                                              const MomentTable& m);

// v_n / σ_n^3 with v_n = sum a_i^3 E|y - E y|^3; empty when σ_n = 0.
std::optional<double> lyapunov_ratio(const MomentTable& m);

// Variance of the systematic-grid estimator on a k x k tessellation of
// `frame`, by quadrature over the random offset (q and 2q points per side,
// Richardson-combined). `f` is evaluated through its zero extension.
double sgs_variance(const AttributeField& f, const Rect& frame, int k, int q = 64);

}  // namespace stratspace
