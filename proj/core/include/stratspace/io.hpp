#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "stratspace/estimate.hpp"
#include "stratspace/geometry.hpp"
#include "stratspace/oracle.hpp"
#include "stratspace/schemes.hpp"
#include "stratspace/stratify.hpp"

namespace stratspace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kSchemaVersion = 1;

// Polygon, MultiPolygon, Feature or FeatureCollection; all polygon parts
// are combined into one region.
Region parse_geojson(std::string_view text);
Region read_geojson(const std::filesystem::path& path);
// Polygonal regions only; disks and ellipses are written as 256-gons.
std::string region_geojson(const Region& r);

// Lossless native encoding of any region kind.
std::string region_json(const Region& r);
Region parse_region_json(std::string_view text);

// Region, raster, assignment and order; re-import reproduces diagnostics.
std::string stratification_json(const Stratification& s);
Stratification parse_stratification_json(std::string_view text);

std::string plan_csv(const SamplePlan& p);
std::string plan_json(const SamplePlan& p);

// `config_json`, when given, is embedded verbatim under "config".
std::string report_json(const EstimateReport& r, std::optional<std::string_view> config_json = {});

std::string moments_csv(const MomentTable& m);

// Strata outlines (raster cells coloured by stratum) and optional sites.
std::string strata_svg(const Stratification& s, const SamplePlan* plan = nullptr);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace stratspace
