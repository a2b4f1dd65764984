#include "stratspace/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stratspace {

namespace {

void expect_scheme(const SamplePlan& plan, std::initializer_list<Scheme> ok, const char* what) {
  for (Scheme s : ok) {
    if (plan.scheme == s) return;
  }
  throw EstimateError(std::string(what) + ": plan scheme " + std::string(to_string(plan.scheme)) +
                      " is not supported");
}

void check_ss1(const SamplePlan& plan, const Stratification& s) {
  if (plan.sites.size() != static_cast<std::size_t>(s.size())) {
    throw EstimateError("SS1 plan must have one site per stratum");
  }
  for (std::size_t i = 0; i < plan.sites.size(); ++i) {
    if (plan.sites[i].unit != static_cast<int>(i)) {
      throw EstimateError("SS1 site " + std::to_string(i) + " is not in stratum " + std::to_string(i));
    }
  }
}

void check_ss2(const SamplePlan& plan, const Stratification& s) {
  if (plan.sites.size() != 2 * static_cast<std::size_t>(s.size())) {
    throw EstimateError("SS2 plan must have two sites per stratum");
  }
  for (std::size_t i = 0; i < plan.sites.size(); ++i) {
    if (plan.sites[i].unit != static_cast<int>(i / 2)) {
      throw EstimateError("SS2 sites must be stored in stratum pairs");
    }
  }
}

double domain_total_area(const Stratification* s, const AttributeField& f) {
  if (s) {
    double a = 0.0;
    for (double x : s->areas()) a += x;
    return a;
  }
  return area(f.domain());
}

// a_i y_i terms for the naive estimator.
std::vector<double> weighted_terms(const SamplePlan& plan, const Stratification* s,
                                   const AttributeField& f) {
  std::vector<double> w;
  w.reserve(plan.sites.size());
  if (plan.scheme == Scheme::ss1) {
    if (!s) throw EstimateError("SS1 variance needs the stratification");
    check_ss1(plan, *s);
    for (const Site& site : plan.sites) w.push_back(s->area(site.unit) * f(site.location));
  } else {
    const double ca = plan.tessellation->cell_area();
    for (const Site& site : plan.sites) w.push_back(ca * extended_eval(f, site.location));
  }
  return w;
}

}  // namespace

double est_urs(const SamplePlan& plan, const AttributeField& f) {
  expect_scheme(plan, {Scheme::urs}, "est_urs");
  double sum = 0.0;
  for (const Site& site : plan.sites) sum += f(site.location);
  return area(f.domain()) * sum / static_cast<double>(plan.sites.size());
}

double est_ss1(const SamplePlan& plan, const Stratification& s, const AttributeField& f) {
  expect_scheme(plan, {Scheme::ss1}, "est_ss1");
  check_ss1(plan, s);
  double t = 0.0;
  for (const Site& site : plan.sites) t += s.area(site.unit) * f(site.location);
  return t;
}

double est_ss2(const SamplePlan& plan, const Stratification& s, const AttributeField& f) {
  expect_scheme(plan, {Scheme::ss2}, "est_ss2");
  check_ss2(plan, s);
  double t = 0.0;
  for (std::size_t j = 0; j < plan.sites.size(); j += 2) {
    t += s.area(plan.sites[j].unit) * (f(plan.sites[j].location) + f(plan.sites[j + 1].location));
  }
  return 0.5 * t;
}

double est_tss(const SamplePlan& plan, const AttributeField& f) {
  expect_scheme(plan, {Scheme::tss, Scheme::sgs}, "est_tss");
  const double ca = plan.tessellation->cell_area();
  double t = 0.0;
  for (const Site& site : plan.sites) t += extended_eval(f, site.location);
  return ca * t;
}

double naive_from_terms(const std::vector<double>& w) {
  const std::size_t n = w.size();
  if (n < 2) throw EstimateError("naive variance needs n >= 2");
  double t = 0.0;
  for (double x : w) t += x;
  const double mean = t / static_cast<double>(n);
  double ss = 0.0;
  for (double x : w) ss += (x - mean) * (x - mean);
  return static_cast<double>(n) / static_cast<double>(n - 1) * ss;
}

double neighbor_from_values(double domain_area, const std::vector<double>& y) {
  const std::size_t n = y.size();
  if (n < 1) throw EstimateError("neighbor variance needs at least one site");
  double ss = y.front() * y.front() + y.back() * y.back();
  for (std::size_t i = 0; i + 1 < n; ++i) ss += (y[i] - y[i + 1]) * (y[i] - y[i + 1]);
  const double nn = static_cast<double>(n);
  return domain_area * domain_area / (2.0 * nn * nn) * ss;
}

double var_naive(const SamplePlan& plan, const Stratification* s, const AttributeField& f) {
  expect_scheme(plan, {Scheme::ss1, Scheme::tss, Scheme::sgs}, "var_naive");
  return naive_from_terms(weighted_terms(plan, s, f));
}

double relative_area_spread(const Stratification& s) {
  const auto a = s.areas();
  double mean = 0.0;
  for (double x : a) mean += x;
  mean /= static_cast<double>(a.size());
  double worst = 0.0;
  for (double x : a) worst = std::max(worst, std::abs(x - mean) / mean);
  return worst;
}

double var_neighbor(const SamplePlan& plan, const Stratification& s, const AttributeField& f) {
  expect_scheme(plan, {Scheme::ss1}, "var_neighbor");
  check_ss1(plan, s);
  if (relative_area_spread(s) > 0.01) {
    throw EstimateError("neighbor variance requires equal-size strata (within 1%)");
  }
  std::vector<double> y;
  y.reserve(plan.sites.size());
  for (int idx : s.order()) y.push_back(f(plan.sites[static_cast<std::size_t>(idx)].location));
  return neighbor_from_values(domain_total_area(&s, f), y);
}

double var_ss2(const SamplePlan& plan, const Stratification& s, const AttributeField& f) {
  expect_scheme(plan, {Scheme::ss2}, "var_ss2");
  check_ss2(plan, s);
  double v = 0.0;
  for (std::size_t j = 0; j < plan.sites.size(); j += 2) {
    const double a = s.area(plan.sites[j].unit);
    const double d = f(plan.sites[j].location) - f(plan.sites[j + 1].location);
    v += a * a * d * d;
  }
  return 0.25 * v;
}

double var_urs_sample(const SamplePlan& plan, const AttributeField& f) {
  expect_scheme(plan, {Scheme::urs}, "var_urs_sample");
  const std::size_t n = plan.sites.size();
  if (n < 2) throw EstimateError("sample variance needs n >= 2");
  double mean = 0.0;
  for (const Site& site : plan.sites) mean += f(site.location);
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (const Site& site : plan.sites) {
    const double d = f(site.location) - mean;
    ss += d * d;
  }
  const double a = area(f.domain());
  return a * a * (ss / static_cast<double>(n - 1)) / static_cast<double>(n);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw EstimateError("quantile probability must lie in [0, 1]");
  }
  // Acklam's rational approximation followed by one Halley step.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

Interval confidence_interval(double t_hat, double var_est, double level) {
  if (!(level > 0.0 && level < 1.0)) throw EstimateError("confidence level must lie in (0, 1)");
  if (var_est < 0.0) throw EstimateError("variance estimate must be nonnegative");
  const double half = normal_quantile(0.5 * (1.0 + level)) * std::sqrt(var_est);
  return {t_hat - half, t_hat + half, level};
}

EstimateReport make_report(const SamplePlan& plan, const Stratification* s,
                           const AttributeField& f, double level) {
  EstimateReport r;
  r.scheme = plan.scheme;
  r.n = plan.nominal_n;
  r.seed = plan.seed;
  r.path = plan.path;
  switch (plan.scheme) {
    case Scheme::urs:
      r.t_hat = est_urs(plan, f);
      r.domain_area = area(f.domain());
      if (plan.sites.size() >= 2) r.variance_estimates["urs_sample"] = var_urs_sample(plan, f);
      r.variance_used = "urs_sample";
      break;
    case Scheme::ss1:
      if (!s) throw EstimateError("SS1 report needs the stratification");
      r.t_hat = est_ss1(plan, *s, f);
      r.domain_area = domain_total_area(s, f);
      if (s->size() >= 2) r.variance_estimates["naive"] = var_naive(plan, s, f);
      if (relative_area_spread(*s) <= 0.01) {
        r.variance_estimates["neighbor"] = var_neighbor(plan, *s, f);
        r.variance_used = "neighbor";
      } else {
        r.variance_used = "naive";
      }
      r.diagnostics = diagnostics(*s);
      break;
    case Scheme::ss2:
      if (!s) throw EstimateError("SS2 report needs the stratification");
      r.t_hat = est_ss2(plan, *s, f);
      r.domain_area = domain_total_area(s, f);
      r.variance_estimates["two_per_stratum"] = var_ss2(plan, *s, f);
      r.variance_used = "two_per_stratum";
      r.diagnostics = diagnostics(*s);
      break;
    case Scheme::tss:
    case Scheme::sgs:
      r.t_hat = est_tss(plan, f);
      r.domain_area = area(f.domain());
      if (plan.sites.size() >= 2) r.variance_estimates["naive"] = var_naive(plan, nullptr, f);
      r.variance_used = "naive";
      break;
  }
  auto it = r.variance_estimates.find(r.variance_used);
  double v = 0.0;
  if (it == r.variance_estimates.end()) {
    r.warnings.push_back("no variance estimate for n = " + std::to_string(plan.nominal_n));
    r.variance_used.clear();
  } else {
    v = it->second;
  }
  r.std_error = std::sqrt(v);
  r.ci = confidence_interval(r.t_hat, v, level);
  return r;
}

}  // namespace stratspace
