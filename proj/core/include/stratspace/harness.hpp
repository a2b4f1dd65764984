#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stratspace/estimate.hpp"
#include "stratspace/field.hpp"
#include "stratspace/schemes.hpp"
#include "stratspace/stratify.hpp"

namespace stratspace {

class HarnessError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// One Monte Carlo design: a scheme with its sampling frame on a field.
struct Design {
  Scheme scheme = Scheme::ss1;
  int n = 0;  // sites; SS2 uses n/2 strata, TSS/SGS use sqrt(n) per side
  std::optional<Stratification> strata;  // SS1 (n strata) and SS2 (n/2 strata)
  std::optional<Rect> frame;             // TSS/SGS; defaults to the domain's bounding box
  bool random_shift = false;
};

// Builds the standard design on grid strata / tessellations for n sites.
// TSS and SGS require n to be a perfect square, SS2 an even n with n/2
// equal-area grid strata (k x k/2).
Design grid_design(Scheme scheme, const Region& a, int n);

struct ReplicationConfig {
  int replications = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> path;  // stream of replication r is (seed, path).child(r)
  int threads = 1;
  std::optional<double> oracle_t;      // standardization centre
  std::optional<double> oracle_sigma;  // standardization scale
};

struct ReplicationResult {
  Scheme scheme = Scheme::ss1;
  int n = 0;
  std::vector<double> estimates;
  std::map<std::string, std::vector<double>> variance_estimates;
  std::vector<double> standardized;  // filled when the oracle centre and scale are given
  double mean = 0.0;
  double variance = 0.0;       // unbiased sample variance of the estimates
  double mean_std_error = 0.0;  // sqrt(variance / reps)
};

// Deterministic for a given (config, seed, path) and any thread count.
ReplicationResult replicate(const AttributeField& f, const Design& d, const ReplicationConfig& c);

// Mean and its standard error of a sample, with pairwise summation.
struct SampleSummary {
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
};
SampleSummary summarize(const std::vector<double>& x);

// One row per replication: rep, estimate, then the variance estimates.
void write_replications_csv(std::ostream& out, const ReplicationResult& r);

struct RateFit {
  std::vector<double> n;
  std::vector<double> variance;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Least squares of log variance on log n; needs at least four positive pairs.
RateFit fit_rate(const std::vector<double>& n, const std::vector<double>& variance);

struct CltCheck {
  double coverage = 0.0;  // fraction within ±z_{0.975}
  double ks = 0.0;        // sup |F_emp - Φ|
  std::size_t draws = 0;
};

CltCheck clt_check(std::vector<double> standardized);

// Oracle variances on k x k grid strata for each n in `ns` (perfect squares).
struct RateRow {
  int n = 0;
  double var_ss = 0.0;
  double var_urs = 0.0;
  double bias_naive_ratio = 0.0;
  double bias_neighbor_ratio = 0.0;
  std::optional<double> lyapunov;
  bool flagged = false;
};

struct RateTable {
  std::vector<RateRow> rows;
  std::optional<RateFit> ss;  // empty when some variance is zero
  std::optional<RateFit> urs;
};

RateTable oracle_rates(const AttributeField& f, const std::vector<int>& ns, int resolution = 1024);

struct CompareRow {
  int n = 0;
  Scheme scheme = Scheme::urs;
  std::optional<double> oracle;
  std::optional<double> empirical;
};

struct CompareTable {
  std::vector<CompareRow> rows;
  int dominance_violations = 0;  // n with oracle URS < oracle SS1
};

// Columns URS, SS1, SS2, TSS, SGS on grid designs. Empirical variances are
// computed when replications > 0.
CompareTable compare_schemes(const AttributeField& f, const std::vector<int>& ns,
                             const ReplicationConfig& c, int resolution = 512);

// Line-intercept survey: equal-area strata, one transect midpoint each.
struct CanopySurvey {
  Stratification strata;
  AttributeField field;
  std::vector<std::string> warnings;
};

CanopySurvey prepare_canopy(const Region& a, const Region& cover, int n, double length,
                            double orientation, const PartitionParams& params);
EstimateReport canopy_estimate(const CanopySurvey& survey, const RandomStream& stream,
                               double level = 0.95);
EstimateReport canopy_pipeline(const Region& a, const Region& cover, int n, double length,
                               double orientation, std::uint64_t seed,
                               const PartitionParams& params = {});

// True when every transect meeting C has its midpoint in A, checked on a
// deterministic sample of C. Otherwise the estimator under-counts C.
bool transects_clear(const Region& a, const Region& cover, double length, double orientation);

}  // namespace stratspace
