#include "stratspace/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>
#include <thread>

#include "stratspace/oracle.hpp"

namespace stratspace {

namespace {

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

int exact_root(int n, const char* what) {
  const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (k < 1 || k * k != n) throw HarnessError(std::string(what) + " needs n to be a perfect square");
  return k;
}

// kx * ky = m with ky the largest divisor not above sqrt(m).
std::pair<int, int> near_square_factors(int m) {
  int ky = static_cast<int>(std::sqrt(static_cast<double>(m)));
  while (ky > 1 && m % ky != 0) --ky;
  return {m / ky, ky};
}

Rect design_frame(const AttributeField& f, const Design& d) {
  return d.frame ? *d.frame : f.domain().bounding_box();
}

// Field whose grid moments give the TSS variance on `frame`.
AttributeField tessellation_field(const AttributeField& f, const Region& frame) {
  if (std::abs(area(frame) - area(f.domain())) <= 1e-12 * area(frame)) return f;
  return extended_field(f, frame);
}

template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::clamp(threads, 1, std::max(1, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        const int lo = static_cast<int>(static_cast<long long>(count) * t / threads);
        const int hi = static_cast<int>(static_cast<long long>(count) * (t + 1) / threads);
        for (int i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

Design grid_design(Scheme scheme, const Region& a, int n) {
  if (n < 1) throw HarnessError("design needs n >= 1");
  Design d;
  d.scheme = scheme;
  d.n = n;
  switch (scheme) {
    case Scheme::urs:
      break;
    case Scheme::ss1: {
      d.strata = grid_partition(a, exact_root(n, "SS1 grid design"));
      d.n = d.strata->size();
      break;
    }
    case Scheme::ss2: {
      if (n % 2 != 0) throw HarnessError("SS2 needs an even n");
      const auto [kx, ky] = near_square_factors(n / 2);
      d.strata = grid_partition(a, kx, ky);
      d.n = 2 * d.strata->size();
      break;
    }
    case Scheme::tss:
    case Scheme::sgs:
      exact_root(n, "tessellation design");
      d.frame = a.bounding_box();
      break;
  }
  return d;
}

SampleSummary summarize(const std::vector<double>& x) {
  SampleSummary s;
  const std::size_t n = x.size();
  if (n == 0) return s;
  s.mean = pairwise_sum(x.data(), n) / static_cast<double>(n);
  if (n > 1) {
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (x[i] - s.mean) * (x[i] - s.mean);
    s.variance = pairwise_sum(sq.data(), n) / static_cast<double>(n - 1);
  }
  s.std_error = std::sqrt(s.variance / static_cast<double>(n));
  return s;
}

ReplicationResult replicate(const AttributeField& f, const Design& d, const ReplicationConfig& c) {
  if (c.replications < 1) throw HarnessError("replications must be >= 1");
  if (c.threads < 1) throw HarnessError("threads must be >= 1");
  if (c.oracle_sigma && !(*c.oracle_sigma > 0.0)) throw HarnessError("oracle sigma must be > 0");
  const bool stratified = d.scheme == Scheme::ss1 || d.scheme == Scheme::ss2;
  if (stratified && !d.strata) throw HarnessError("stratified design needs strata");
  const Region& a = f.domain();
  const Rect frame = design_frame(f, d);
  const int k = (d.scheme == Scheme::tss || d.scheme == Scheme::sgs) ? exact_root(d.n, "tessellation design") : 0;
  const bool equal = d.scheme == Scheme::ss1 && relative_area_spread(*d.strata) <= 0.01;

  std::vector<std::string> keys;
  switch (d.scheme) {
    case Scheme::urs:
      if (d.n >= 2) keys = {"urs_sample"};
      break;
    case Scheme::ss1:
      if (d.n >= 2) keys.push_back("naive");
      if (equal) keys.push_back("neighbor");
      break;
    case Scheme::ss2:
      keys = {"two_per_stratum"};
      break;
    case Scheme::tss:
    case Scheme::sgs:
      if (d.n >= 2) keys = {"naive"};
      break;
  }

  const std::size_t reps = static_cast<std::size_t>(c.replications);
  ReplicationResult r;
  r.scheme = d.scheme;
  r.n = d.n;
  r.estimates.assign(reps, 0.0);
  std::vector<std::vector<double>*> slots;
  for (const auto& key : keys) {
    auto& v = r.variance_estimates[key];
    v.assign(reps, 0.0);
  }
  for (const auto& key : keys) slots.push_back(&r.variance_estimates[key]);

  const RandomStream root(c.seed, c.path);
  parallel_for(c.replications, c.threads, [&](int rep) {
    const RandomStream stream = root.child(static_cast<std::uint64_t>(rep));
    const std::size_t i = static_cast<std::size_t>(rep);
    switch (d.scheme) {
      case Scheme::urs: {
        const auto plan = draw_urs(a, d.n, stream);
        r.estimates[i] = est_urs(plan, f);
        if (!slots.empty()) (*slots[0])[i] = var_urs_sample(plan, f);
        break;
      }
      case Scheme::ss1: {
        const auto plan = draw_ss1(*d.strata, stream);
        r.estimates[i] = est_ss1(plan, *d.strata, f);
        std::size_t slot = 0;
        if (d.n >= 2) (*slots[slot++])[i] = var_naive(plan, &*d.strata, f);
        if (equal) (*slots[slot])[i] = var_neighbor(plan, *d.strata, f);
        break;
      }
      case Scheme::ss2: {
        const auto plan = draw_ss2(*d.strata, stream);
        r.estimates[i] = est_ss2(plan, *d.strata, f);
        (*slots[0])[i] = var_ss2(plan, *d.strata, f);
        break;
      }
      case Scheme::tss:
      case Scheme::sgs: {
        const auto plan = d.scheme == Scheme::tss ? draw_tss(a, frame, k, stream, d.random_shift)
                                                  : draw_sgs(a, frame, k, stream);
        r.estimates[i] = est_tss(plan, f);
        if (!slots.empty()) (*slots[0])[i] = var_naive(plan, nullptr, f);
        break;
      }
    }
  });

  const SampleSummary s = summarize(r.estimates);
  r.mean = s.mean;
  r.variance = s.variance;
  r.mean_std_error = s.std_error;
  if (c.oracle_sigma) {
    const double centre = c.oracle_t.value_or(0.0);
    r.standardized.reserve(reps);
    for (double t : r.estimates) r.standardized.push_back((t - centre) / *c.oracle_sigma);
  }
  return r;
}

void write_replications_csv(std::ostream& out, const ReplicationResult& r) {
  out << "rep,estimate";
  for (const auto& [key, _] : r.variance_estimates) out << ',' << key;
  out << '\n';
  const auto old = out.precision(17);
  for (std::size_t i = 0; i < r.estimates.size(); ++i) {
    out << i << ',' << r.estimates[i];
    for (const auto& [_, v] : r.variance_estimates) out << ',' << v[i];
    out << '\n';
  }
  out.precision(old);
}

RateFit fit_rate(const std::vector<double>& n, const std::vector<double>& variance) {
  if (n.size() != variance.size()) throw HarnessError("rate fit needs matching n and variance lists");
  if (n.size() < 4) throw HarnessError("rate fit needs at least 4 points");
  RateFit fit{n, variance, 0.0, 0.0, 0.0};
  const std::size_t m = n.size();
  std::vector<double> x(m), y(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(n[i] > 0.0)) throw HarnessError("rate fit needs positive n");
    if (!(variance[i] > 0.0)) throw HarnessError("rate fit needs positive variances");
    x[i] = std::log(n[i]);
    y[i] = std::log(variance[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw HarnessError("rate fit needs distinct n values");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

CltCheck clt_check(std::vector<double> z) {
  if (z.size() < 10000) throw HarnessError("CLT check needs at least 10^4 draws");
  CltCheck c;
  c.draws = z.size();
  const double q = normal_quantile(0.975);
  std::size_t inside = 0;
  for (double v : z) inside += std::abs(v) <= q ? 1 : 0;
  const double n = static_cast<double>(z.size());
  c.coverage = static_cast<double>(inside) / n;
  std::sort(z.begin(), z.end());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double cdf = normal_cdf(z[i]);
    c.ks = std::max({c.ks, static_cast<double>(i + 1) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  return c;
}

RateTable oracle_rates(const AttributeField& f, const std::vector<int>& ns, int resolution) {
  RateTable t;
  std::vector<double> xs, ss, urs;
  for (int n : ns) {
    const auto g = grid_partition(f.domain(), exact_root(n, "rate table"));
    const MomentTable m = moments(f, g, resolution);
    RateRow row;
    row.n = g.size();
    row.var_ss = exact_var_ss(m);
    row.var_urs = exact_var_urs(m, row.n);
    if (row.var_ss > 0.0) {
      if (row.n >= 2) row.bias_naive_ratio = bias_naive(m) / row.var_ss;
      row.bias_neighbor_ratio = bias_neighbor(m, g.order()) / row.var_ss;
    }
    row.lyapunov = lyapunov_ratio(m);
    row.flagged = m.flagged;
    t.rows.push_back(row);
    xs.push_back(row.n);
    ss.push_back(row.var_ss);
    urs.push_back(row.var_urs);
  }
  const auto positive = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
  };
  if (xs.size() >= 4 && positive(ss)) t.ss = fit_rate(xs, ss);
  if (xs.size() >= 4 && positive(urs)) t.urs = fit_rate(xs, urs);
  return t;
}

CompareTable compare_schemes(const AttributeField& f, const std::vector<int>& ns,
                             const ReplicationConfig& c, int resolution) {
  CompareTable table;
  const Region& a = f.domain();
  const Rect box = a.bounding_box();
  const Region frame = Region::rectangle(box);
  const AttributeField tf = tessellation_field(f, frame);
  for (int n : ns) {
    const int k = exact_root(n, "scheme comparison");
    const auto g = grid_partition(a, k);
    const MomentTable m = moments(f, g, resolution);
    std::optional<double> urs_oracle = exact_var_urs(m, n), ss_oracle = exact_var_ss(m);
    std::optional<double> ss2_oracle;
    if (n % 2 == 0) {
      const auto [kx, ky] = near_square_factors(n / 2);
      ss2_oracle = exact_var_ss2(moments(f, grid_partition(a, kx, ky), resolution));
    }
    const double tss_oracle = exact_var_ss(moments(tf, grid_partition(frame, k), resolution));
    const double sgs_oracle = sgs_variance(f, box, k);
    if (*urs_oracle < *ss_oracle * (1.0 - 1e-12) - 1e-300) ++table.dominance_violations;

    const std::pair<Scheme, std::optional<double>> cols[] = {{Scheme::urs, urs_oracle},
                                                             {Scheme::ss1, ss_oracle},
                                                             {Scheme::ss2, ss2_oracle},
                                                             {Scheme::tss, tss_oracle},
                                                             {Scheme::sgs, sgs_oracle}};
    for (const auto& [scheme, oracle] : cols) {
      CompareRow row{n, scheme, oracle, std::nullopt};
      if (c.replications > 0 && !(scheme == Scheme::ss2 && n % 2 != 0)) {
        ReplicationConfig rc = c;
        rc.path.push_back(static_cast<std::uint64_t>(scheme));
        rc.path.push_back(static_cast<std::uint64_t>(n));
        row.empirical = replicate(f, grid_design(scheme, a, n), rc).variance;
      }
      table.rows.push_back(row);
    }
  }
  return table;
}

bool transects_clear(const Region& a, const Region& cover, double length, double orientation) {
  const Point e{std::cos(orientation), std::sin(orientation)};
  RandomStream stream(0x4C494E45, {});
  constexpr int kPoints = 4000, kSteps = 16;
  for (int i = 0; i < kPoints; ++i) {
    const Point p = uniform_point(cover, stream);
    for (int j = 0; j <= kSteps; ++j) {
      const double s = length * (static_cast<double>(j) / kSteps - 0.5);
      if (!contains(a, {p.x + s * e.x, p.y + s * e.y})) return false;
    }
  }
  return true;
}

CanopySurvey prepare_canopy(const Region& a, const Region& cover, int n, double length,
                            double orientation, const PartitionParams& params) {
  CanopySurvey s{equal_area_compact_partition(a, n, params),
                 line_intercept_field({cover, length, orientation}, a),
                 {}};
  if (!transects_clear(a, cover, length, orientation)) {
    s.warnings.push_back("some transects meeting the cover extend outside the domain; the estimate is biased low");
  }
  if (relative_area_spread(s.strata) > 0.01) {
    s.warnings.push_back("strata differ in area by more than 1%; using the naive variance estimator");
  }
  return s;
}

EstimateReport canopy_estimate(const CanopySurvey& survey, const RandomStream& stream, double level) {
  const auto plan = draw_ss1(survey.strata, stream);
  EstimateReport r = make_report(plan, &survey.strata, survey.field, level);
  r.units = "m2";
  r.warnings = survey.warnings;
  return r;
}

EstimateReport canopy_pipeline(const Region& a, const Region& cover, int n, double length,
                               double orientation, std::uint64_t seed, const PartitionParams& params) {
  PartitionParams p = params;
  p.seed = seed;
  const CanopySurvey survey = prepare_canopy(a, cover, n, length, orientation, p);
  return canopy_estimate(survey, RandomStream(seed, {0x43414E4F}));
}

}  // namespace stratspace
