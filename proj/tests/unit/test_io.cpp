#include <stratspace/io.hpp>

#include <gtest/gtest.h>

#include <filesystem>

using namespace stratspace;

namespace {
const Region kSquare = Region::rectangle({0, 0, 1, 1});

void expect_same_diagnostics(const Stratification& a, const Stratification& b) {
  const auto da = diagnostics(a), db = diagnostics(b);
  EXPECT_EQ(da.d_n, db.d_n);
  EXPECT_EQ(da.big_d_n, db.big_d_n);
  EXPECT_EQ(da.a_min, db.a_min);
  EXPECT_EQ(da.a_max, db.a_max);
  EXPECT_EQ(da.b_hat, db.b_hat);
  EXPECT_EQ(da.k_hat, db.k_hat);
  EXPECT_TRUE(std::equal(a.order().begin(), a.order().end(), b.order().begin(), b.order().end()));
}
}  // namespace

TEST(GeoJson, PolygonWithHole) {
  const auto r = parse_geojson(R"({"type":"Feature","properties":{},"geometry":{"type":"Polygon",
    "coordinates":[[[0,0],[1,0],[1,1],[0,1],[0,0]],[[0.25,0.25],[0.75,0.25],[0.75,0.75],[0.25,0.75],[0.25,0.25]]]}})");
  EXPECT_NEAR(area(r), 0.75, 1e-12);
}

TEST(GeoJson, MultiPolygonAndErrors) {
  const auto r = parse_geojson(R"({"type":"MultiPolygon","coordinates":[
    [[[0,0],[1,0],[1,1],[0,0]]],[[[2,0],[3,0],[3,1],[2,0]]]]})");
  EXPECT_NEAR(area(r), 1.0, 1e-12);
  EXPECT_THROW(parse_geojson("{"), IoError);
  EXPECT_THROW(parse_geojson(R"({"type":"Point","coordinates":[0,0]})"), IoError);
  EXPECT_THROW(read_geojson("/nonexistent/region.geojson"), IoError);
}

TEST(GeoJson, ReserveLikePolygonFile) {
  const auto r = read_geojson(std::filesystem::path(STRATSPACE_DATA_DIR) / "reserve.geojson");
  EXPECT_NEAR(area(r) / 1e4, 1045.0, 0.01);
}

TEST(GeoJson, RoundTrip) {
  const Region r = Region::polygon({{{0, 0}, {2, 0}, {2, 2}, {0, 2}}, {{{0.5, 0.5}, {0.5, 1}, {1, 1}}}});
  EXPECT_NEAR(area(parse_geojson(region_geojson(r))), area(r), 1e-12);
  EXPECT_NEAR(area(parse_geojson(region_geojson(Region::disk({0, 0}, 1)))), 3.14, 0.01);
}

TEST(RegionJson, AllKindsLossless) {
  const Region u = Region::disjoint_union({Region::disk({0, 0}, 1), Region::ellipse({5, 0}, 2, 1, 0.3),
                                           Region::rectangle({10, 10, 11, 12})});
  const Region back = parse_region_json(region_json(u));
  EXPECT_EQ(area(back), area(u));
  EXPECT_EQ(region_json(back), region_json(u));
}

TEST(StratificationJson, RoundTripGrid) {
  const auto g = grid_partition(Region::disk({0, 0}, 1), 5);
  const auto back = parse_stratification_json(stratification_json(g));
  expect_same_diagnostics(g, back);
  EXPECT_EQ(stratification_json(back), stratification_json(g));
}

TEST(StratificationJson, RoundTripPartition) {
  PartitionParams p;
  p.resolution = 96;
  p.seed = 4;
  const auto s = equal_area_compact_partition(kSquare, 9, p);
  const auto back = parse_stratification_json(stratification_json(s));
  expect_same_diagnostics(s, back);
  EXPECT_THROW(parse_stratification_json(R"({"strata":2})"), IoError);
}

TEST(PlanExport, CsvAndJson) {
  const auto plan = draw_ss1(grid_partition(kSquare, 2), RandomStream(5, {1}));
  const std::string csv = plan_csv(plan);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "site,x,y,unit,in_domain");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  const std::string j = plan_json(plan);
  EXPECT_NE(j.find("\"scheme\": \"SS1\""), std::string::npos);
  EXPECT_EQ(j, plan_json(draw_ss1(grid_partition(kSquare, 2), RandomStream(5, {1}))));
}

TEST(ReportJson, HectaresAndConfig) {
  EstimateReport r;
  r.scheme = Scheme::ss1;
  r.t_hat = 6.6e6;
  r.domain_area = 1.045e7;
  r.units = "m2";
  const std::string j = report_json(r, R"({"seed": 3})");
  EXPECT_NE(j.find("\"t_hat_ha\": 660.0"), std::string::npos);
  EXPECT_NE(j.find("\"seed\": 3"), std::string::npos);
  EXPECT_NE(j.find("\"schema_version\": 1"), std::string::npos);
}

TEST(Svg, ContainsCellsAndSites) {
  const auto g = grid_partition(kSquare, 2);
  const auto plan = draw_ss1(g, RandomStream(1));
  const std::string svg = strata_svg(g, &plan);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  std::size_t circles = 0;
  for (std::size_t pos = 0; (pos = svg.find("<circle", pos)) != std::string::npos; ++pos) ++circles;
  EXPECT_EQ(circles, 4u);
}

TEST(TextFiles, WriteAndReadBack) {
  const auto dir = std::filesystem::temp_directory_path() / "stratspace_io_test";
  write_text(dir / "sub" / "a.txt", "hello");
  EXPECT_EQ(read_text(dir / "sub" / "a.txt"), "hello");
  std::filesystem::remove_all(dir);
  EXPECT_THROW(write_text("/proc/forbidden/x.txt", "x"), IoError);
}
