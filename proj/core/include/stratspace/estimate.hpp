#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stratspace/field.hpp"
#include "stratspace/schemes.hpp"
#include "stratspace/stratify.hpp"

namespace stratspace {

class EstimateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Point estimators of T. The domain area a(A) is taken from f.domain().
double est_urs(const SamplePlan& plan, const AttributeField& f);
double est_ss1(const SamplePlan& plan, const Stratification& s, const AttributeField& f);
double est_ss2(const SamplePlan& plan, const Stratification& s, const AttributeField& f);
// Sum of cell area times y_e(site) over the tessellation (TSS or SGS).
double est_tss(const SamplePlan& plan, const AttributeField& f);

// n/(n-1) sum (a_i y_i - T/n)^2 over the sites of an SS1, TSS or SGS plan.
double var_naive(const SamplePlan& plan, const Stratification* s, const AttributeField& f);
// (a(A)^2 / 2n^2)(y_1^2 + sum (y_i - y_{i+1})^2 + y_n^2) along s.order().
// Requires strata of equal area within 1%.
double var_neighbor(const SamplePlan& plan, const Stratification& s, const AttributeField& f);
// (1/4) sum a_j^2 (y_1j - y_2j)^2.
double var_ss2(const SamplePlan& plan, const Stratification& s, const AttributeField& f);
// a(A)^2 times the sample variance of y, over n.
double var_urs_sample(const SamplePlan& plan, const AttributeField& f);

// Same estimators on precomputed values; used by the Monte Carlo harness.
double naive_from_terms(const std::vector<double>& weighted);
double neighbor_from_values(double domain_area, const std::vector<double>& ordered_y);

// Largest |a_i - mean| / mean over strata.
double relative_area_spread(const Stratification& s);

// Standard normal quantile, accurate to about 1e-15.
double normal_quantile(double p);
double normal_cdf(double x);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;
};

Interval confidence_interval(double t_hat, double var_est, double level);

struct EstimateReport {
  Scheme scheme = Scheme::urs;
  int n = 0;
  double t_hat = 0.0;
  double domain_area = 0.0;
  std::map<std::string, double> variance_estimates;
  std::string variance_used;
  double std_error = 0.0;
  Interval ci;
  std::optional<Diagnostics> diagnostics;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> path;
  std::string units;  // "m2" enables hectare and percent reporting
  std::vector<std::string> warnings;
};

// Point estimate plus every applicable variance estimate. The CI uses the
// neighbor estimator for SS1 on equal strata, the naive one otherwise, the
// two-per-stratum estimator for SS2 and the sample variance for URS.
EstimateReport make_report(const SamplePlan& plan, const Stratification* s,
                           const AttributeField& f, double level = 0.95);

}  // namespace stratspace
