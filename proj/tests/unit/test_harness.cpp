#include <stratspace/harness.hpp>
#include <stratspace/oracle.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace stratspace;

namespace {
const Region kSquare = Region::rectangle({0, 0, 1, 1});
AttributeField field(std::string_view id, const Region& d = kSquare) { return builtin_field(id, {}, d); }
}  // namespace

TEST(Replicate, LinearSs1MeanAndVariance) {
  const auto f = field("linear");
  ReplicationConfig c;
  c.replications = 100000;
  c.seed = 12;
  c.threads = 4;
  const auto r = replicate(f, grid_design(Scheme::ss1, kSquare, 4), c);
  EXPECT_NEAR(r.mean, 0.5, 3 * r.mean_std_error);
  EXPECT_NEAR(r.variance, 1.0 / 192, 0.03 / 192);
  EXPECT_EQ(r.variance_estimates.size(), 2u);
}

TEST(Replicate, ThreadCountInvariant) {
  const auto f = field("smooth_sine");
  ReplicationConfig c;
  c.replications = 2000;
  c.seed = 3;
  c.path = {7};
  for (Scheme s : {Scheme::urs, Scheme::ss1, Scheme::ss2, Scheme::tss, Scheme::sgs}) {
    const Design d = grid_design(s, kSquare, 16);
    c.threads = 1;
    const auto a = replicate(f, d, c);
    c.threads = 5;
    const auto b = replicate(f, d, c);
    EXPECT_EQ(a.estimates, b.estimates) << to_string(s);
    EXPECT_EQ(a.variance_estimates, b.variance_estimates) << to_string(s);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.variance, b.variance);
  }
}

TEST(Replicate, Errors) {
  ReplicationConfig c;
  c.replications = 0;
  EXPECT_THROW(replicate(field("linear"), grid_design(Scheme::ss1, kSquare, 4), c), HarnessError);
  EXPECT_THROW(grid_design(Scheme::tss, kSquare, 5), HarnessError);
  EXPECT_THROW(grid_design(Scheme::ss2, kSquare, 7), HarnessError);
}

TEST(Replicate, StandardizedAndCsv) {
  ReplicationConfig c;
  c.replications = 10;
  c.seed = 1;
  c.oracle_t = 0.5;
  c.oracle_sigma = std::sqrt(1.0 / 192);
  const auto r = replicate(field("linear"), grid_design(Scheme::ss1, kSquare, 4), c);
  ASSERT_EQ(r.standardized.size(), 10u);
  EXPECT_DOUBLE_EQ(r.standardized[3], (r.estimates[3] - 0.5) / *c.oracle_sigma);
  std::ostringstream os;
  write_replications_csv(os, r);
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "rep,estimate,naive,neighbor");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 11);
}

TEST(GridDesign, Ss2UsesHalfAsManyStrata) {
  const Design d = grid_design(Scheme::ss2, kSquare, 16);
  EXPECT_EQ(d.strata->size(), 8);
  EXPECT_EQ(d.n, 16);
  for (double a : d.strata->areas()) EXPECT_NEAR(a, 0.125, 1e-12);
}

TEST(FitRate, Examples) {
  const std::vector<double> ns{4, 16, 64, 256};
  std::vector<double> v2, v1;
  for (double n : ns) {
    v2.push_back(1.0 / (12 * n * n));
    v1.push_back(0.3 / n);
  }
  EXPECT_NEAR(fit_rate(ns, v2).slope, -2.0, 1e-12);
  EXPECT_NEAR(fit_rate(ns, v2).r2, 1.0, 1e-12);
  EXPECT_NEAR(fit_rate(ns, v1).slope, -1.0, 1e-12);
  EXPECT_THROW(fit_rate({4}, {1}), HarnessError);
  EXPECT_THROW(fit_rate(ns, {1, 0, 1, 1}), HarnessError);
}

TEST(CltCheck, NormalDraws) {
  RandomStream s(77);
  std::vector<double> z;
  for (int i = 0; i < 100000; ++i) z.push_back(normal_quantile(s.uniform()));
  const auto c = clt_check(z);
  EXPECT_GE(c.coverage, 0.945);
  EXPECT_LE(c.coverage, 0.955);
  EXPECT_LT(c.ks, 0.01);
}

TEST(CltCheck, Degenerate) {
  const auto c = clt_check(std::vector<double>(10000, 0.0));
  EXPECT_EQ(c.coverage, 1.0);
  EXPECT_DOUBLE_EQ(c.ks, 0.5);
  EXPECT_THROW(clt_check(std::vector<double>(10, 0.0)), HarnessError);
}

TEST(OracleRates, LinearSlopes) {
  const auto t = oracle_rates(field("linear"), {16, 64, 256, 1024}, 512);
  ASSERT_TRUE(t.ss && t.urs);
  EXPECT_NEAR(t.ss->slope, -2.0, 1e-6);
  EXPECT_NEAR(t.urs->slope, -1.0, 1e-6);
  for (const auto& row : t.rows) EXPECT_NEAR(row.bias_naive_ratio, row.n, 1e-6 * row.n);
}

TEST(CompareSchemes, LinearOracleColumns) {
  ReplicationConfig c;
  const auto t = compare_schemes(field("linear"), {4}, c);
  ASSERT_EQ(t.rows.size(), 5u);
  EXPECT_NEAR(*t.rows[0].oracle, 1.0 / 48, 1e-12);
  EXPECT_NEAR(*t.rows[1].oracle, 1.0 / 192, 1e-12);
  EXPECT_NEAR(*t.rows[0].oracle / *t.rows[1].oracle, 4.0, 1e-9);
  EXPECT_NEAR(*t.rows[2].oracle, 1.0 / 192, 1e-12);  // halves: sum a^2 (1/48) / 2
  EXPECT_NEAR(*t.rows[3].oracle, 1.0 / 192, 1e-12);
  EXPECT_NEAR(*t.rows[4].oracle, 1.0 / 48, 1e-8);  // Var of mean offset over 2 columns
  EXPECT_EQ(t.dominance_violations, 0);
}

TEST(CompareSchemes, ConstantAllZero) {
  ReplicationConfig c;
  c.replications = 200;
  c.seed = 4;
  FieldParams p;
  const auto t = compare_schemes(builtin_field("constant", p, kSquare), {4, 16}, c);
  for (const auto& row : t.rows) {
    EXPECT_NEAR(*row.oracle, 0.0, 1e-20);
    EXPECT_NEAR(*row.empirical, 0.0, 1e-20);
  }
}

TEST(CompareSchemes, DiskIndicatorSsRate) {
  ReplicationConfig c;
  const auto t = compare_schemes(field("disk_indicator"), {16, 64, 256, 1024}, c);
  std::vector<double> ns, v;
  for (const auto& row : t.rows) {
    if (row.scheme != Scheme::ss1) continue;
    if (!v.empty()) {
      EXPECT_LT(*row.oracle, v.back());
    }
    ns.push_back(row.n);
    v.push_back(*row.oracle);
  }
  EXPECT_NEAR(fit_rate(ns, v).slope, -1.5, 0.15);
}

TEST(Canopy, LineInterceptIdentityByQuadrature) {
  const Region a = Region::rectangle({0, 0, 10, 4});
  const Region c = Region::disk({5, 2}, 1);
  const auto f = line_intercept_field({c, 2.0, 0.3}, a);
  const auto m = moments(f, grid_partition(a, 8), 1024);
  EXPECT_NEAR(m.t, std::numbers::pi, 0.002 * std::numbers::pi);
  EXPECT_TRUE(transects_clear(a, c, 2.0, 0.3));
  EXPECT_FALSE(transects_clear(a, Region::disk({0.5, 2}, 0.4), 2.0, 0.0));
}

TEST(Canopy, EmptyAndFullCover) {
  const Region a = Region::rectangle({0, 0, 1000, 400});
  PartitionParams p;
  p.resolution = 256;
  const auto none = canopy_pipeline(a, Region::disk({5000, 5000}, 10), 10, 50, 0, 3, p);
  EXPECT_EQ(none.t_hat, 0.0);
  EXPECT_EQ(none.std_error, 0.0);
  const auto full = canopy_pipeline(a, Region::rectangle({-100, -100, 1100, 500}), 10, 50, 0.4, 3, p);
  EXPECT_NEAR(full.t_hat, area(a), 1e-9 * area(a));
  EXPECT_EQ(full.units, "m2");
  EXPECT_FALSE(full.warnings.empty());  // cover reaches past the domain
}
