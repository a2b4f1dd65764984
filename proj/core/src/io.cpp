#include "stratspace/io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace stratspace {

using json = nlohmann::ordered_json;

namespace {

Ring ring_from(const json& coords) {
  if (!coords.is_array()) throw IoError("GeoJSON ring must be an array of positions");
  Ring ring;
  for (const auto& pos : coords) {
    if (!pos.is_array() || pos.size() < 2) throw IoError("GeoJSON position must have two coordinates");
    ring.push_back({pos[0].get<double>(), pos[1].get<double>()});
  }
  if (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  return ring;
}

Polygon polygon_from(const json& rings) {
  if (!rings.is_array() || rings.empty()) throw IoError("GeoJSON polygon needs an outer ring");
  Polygon p{ring_from(rings[0]), {}};
  for (std::size_t i = 1; i < rings.size(); ++i) p.holes.push_back(ring_from(rings[i]));
  return p;
}

void collect(const json& g, std::vector<Polygon>& parts) {
  const std::string type = g.value("type", "");
  if (type == "FeatureCollection") {
    for (const auto& f : g.at("features")) collect(f, parts);
  } else if (type == "Feature") {
    collect(g.at("geometry"), parts);
  } else if (type == "Polygon") {
    parts.push_back(polygon_from(g.at("coordinates")));
  } else if (type == "MultiPolygon") {
    for (const auto& p : g.at("coordinates")) parts.push_back(polygon_from(p));
  } else if (type == "GeometryCollection") {
    for (const auto& sub : g.at("geometries")) collect(sub, parts);
  } else {
    throw IoError("unsupported GeoJSON type '" + type + "'");
  }
}

json ring_json(const Ring& ring) {
  json out = json::array();
  for (const Point& p : ring) out.push_back({p.x, p.y});
  return out;
}

Ring ellipse_ring(const Ellipse& e, int m) {
  Ring ring;
  const double c = std::cos(e.rotation), s = std::sin(e.rotation);
  for (int i = 0; i < m; ++i) {
    const double t = 2.0 * std::numbers::pi * i / m;
    const double x = e.semi_a * std::cos(t), y = e.semi_b * std::sin(t);
    ring.push_back({e.center.x + c * x - s * y, e.center.y + s * x + c * y});
  }
  return ring;
}

void polygon_parts_of(const Region& r, std::vector<Polygon>& parts) {
  switch (r.kind()) {
    case Region::Kind::polygonal:
      for (const auto& p : r.polygon_parts()) parts.push_back(p);
      break;
    case Region::Kind::disk:
      parts.push_back({ellipse_ring({r.as_disk().center, r.as_disk().radius, r.as_disk().radius, 0.0}, 256), {}});
      break;
    case Region::Kind::ellipse:
      parts.push_back({ellipse_ring(r.as_ellipse(), 256), {}});
      break;
    case Region::Kind::disjoint_union:
      for (const auto& m : r.members()) polygon_parts_of(m, parts);
      break;
  }
}

json region_to(const Region& r) {
  json j;
  switch (r.kind()) {
    case Region::Kind::polygonal: {
      j["type"] = "polygons";
      j["parts"] = json::array();
      for (const auto& p : r.polygon_parts()) {
        json part;
        part["outer"] = ring_json(p.outer);
        part["holes"] = json::array();
        for (const auto& h : p.holes) part["holes"].push_back(ring_json(h));
        j["parts"].push_back(part);
      }
      break;
    }
    case Region::Kind::disk:
      j["type"] = "disk";
      j["center"] = {r.as_disk().center.x, r.as_disk().center.y};
      j["radius"] = r.as_disk().radius;
      break;
    case Region::Kind::ellipse: {
      const auto& e = r.as_ellipse();
      j["type"] = "ellipse";
      j["center"] = {e.center.x, e.center.y};
      j["semi_a"] = e.semi_a;
      j["semi_b"] = e.semi_b;
      j["rotation"] = e.rotation;
      break;
    }
    case Region::Kind::disjoint_union:
      j["type"] = "union";
      j["members"] = json::array();
      for (const auto& m : r.members()) j["members"].push_back(region_to(m));
      break;
  }
  return j;
}

Point point_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

Region region_from(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "polygons") {
    std::vector<Polygon> parts;
    for (const auto& part : j.at("parts")) {
      Polygon p{ring_from(part.at("outer")), {}};
      for (const auto& h : part.value("holes", json::array())) p.holes.push_back(ring_from(h));
      parts.push_back(std::move(p));
    }
    return Region::polygons(std::move(parts));
  }
  if (type == "disk") return Region::disk(point_from(j.at("center")), j.at("radius").get<double>());
  if (type == "ellipse") {
    return Region::ellipse(point_from(j.at("center")), j.at("semi_a").get<double>(),
                           j.at("semi_b").get<double>(), j.value("rotation", 0.0));
  }
  if (type == "union") {
    std::vector<Region> members;
    for (const auto& m : j.at("members")) members.push_back(region_from(m));
    return Region::disjoint_union(std::move(members));
  }
  if (type == "rectangle") {
    const auto& b = j.at("bounds");
    return Region::rectangle({b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(),
                              b.at(3).get<double>()});
  }
  throw IoError("unknown region type '" + type + "'");
}

template <typename Fn>
auto guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw IoError(std::string(what) + ": " + e.what());
  } catch (const GeometryError& e) {
    throw IoError(std::string(what) + ": " + e.what());
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

json plan_to(const SamplePlan& p) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["scheme"] = std::string(to_string(p.scheme));
  j["nominal_n"] = p.nominal_n;
  j["realized_in_domain"] = p.realized_in_domain;
  j["seed"] = p.seed;
  j["path"] = p.path;
  if (p.tessellation) {
    const auto& t = *p.tessellation;
    j["tessellation"] = {{"origin", {t.origin.x, t.origin.y}},
                         {"cell_w", t.cell_w},
                         {"cell_h", t.cell_h},
                         {"cells_x", t.cells_x},
                         {"cells_y", t.cells_y}};
  }
  j["sites"] = json::array();
  for (const Site& s : p.sites) {
    j["sites"].push_back({{"x", s.location.x}, {"y", s.location.y}, {"unit", s.unit}, {"in_domain", s.in_domain}});
  }
  return j;
}

}  // namespace

Region parse_geojson(std::string_view text) {
  return guarded("invalid GeoJSON", [&] {
    const json g = json::parse(text);
    std::vector<Polygon> parts;
    collect(g, parts);
    if (parts.empty()) throw IoError("GeoJSON contains no polygons");
    return Region::polygons(std::move(parts));
  });
}

Region read_geojson(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return parse_geojson(text);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string region_geojson(const Region& r) {
  std::vector<Polygon> parts;
  polygon_parts_of(r, parts);
  json g;
  g["type"] = "MultiPolygon";
  g["coordinates"] = json::array();
  for (const auto& p : parts) {
    json rings = json::array();
    Ring outer = p.outer;
    outer.push_back(outer.front());
    rings.push_back(ring_json(outer));
    for (Ring h : p.holes) {
      h.push_back(h.front());
      rings.push_back(ring_json(h));
    }
    g["coordinates"].push_back(rings);
  }
  return g.dump();
}

std::string region_json(const Region& r) { return region_to(r).dump(); }

Region parse_region_json(std::string_view text) {
  return guarded("invalid region", [&] { return region_from(json::parse(text)); });
}

std::string stratification_json(const Stratification& s) {
  const Raster& r = s.raster();
  json j;
  j["schema_version"] = kSchemaVersion;
  j["strata"] = s.size();
  j["region"] = region_to(s.region());
  j["raster"] = {{"origin", {r.origin.x, r.origin.y}}, {"cell_w", r.cell_w}, {"cell_h", r.cell_h},
                 {"nx", r.nx},
                 {"ny", r.ny},
                 {"fraction", r.fraction}};
  j["assignment"] = std::vector<int>(s.assignment().begin(), s.assignment().end());
  j["order"] = std::vector<int>(s.order().begin(), s.order().end());
  return j.dump();
}

Stratification parse_stratification_json(std::string_view text) {
  return guarded("invalid stratification", [&] {
    const json j = json::parse(text);
    auto raster = std::make_shared<Raster>();
    const auto& rj = j.at("raster");
    raster->origin = point_from(rj.at("origin"));
    raster->cell_w = rj.at("cell_w").get<double>();
    raster->cell_h = rj.at("cell_h").get<double>();
    raster->nx = rj.at("nx").get<int>();
    raster->ny = rj.at("ny").get<int>();
    raster->fraction = rj.at("fraction").get<std::vector<double>>();
    if (raster->fraction.size() != static_cast<std::size_t>(raster->nx) * raster->ny) {
      throw IoError("raster fraction count does not match nx * ny");
    }
    Stratification s(region_from(j.at("region")), raster, j.at("assignment").get<std::vector<int>>(),
                     j.at("strata").get<int>());
    return s.with_order(j.at("order").get<std::vector<int>>());
  });
}

std::string plan_csv(const SamplePlan& p) {
  std::string out = "site,x,y,unit,in_domain\n";
  for (std::size_t i = 0; i < p.sites.size(); ++i) {
    const Site& s = p.sites[i];
    out += std::to_string(i) + ',' + fmt(s.location.x) + ',' + fmt(s.location.y) + ',' +
           std::to_string(s.unit) + ',' + (s.in_domain ? "1" : "0") + '\n';
  }
  return out;
}

std::string plan_json(const SamplePlan& p) { return plan_to(p).dump(2); }

std::string report_json(const EstimateReport& r, std::optional<std::string_view> config_json) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["scheme"] = std::string(to_string(r.scheme));
  j["n"] = r.n;
  j["t_hat"] = r.t_hat;
  j["domain_area"] = r.domain_area;
  j["units"] = r.units;
  if (r.units == "m2") {
    j["t_hat_ha"] = r.t_hat / 1e4;
    j["domain_area_ha"] = r.domain_area / 1e4;
    j["percent"] = r.domain_area > 0 ? 100.0 * r.t_hat / r.domain_area : 0.0;
  }
  j["variance_estimates"] = r.variance_estimates;
  j["variance_used"] = r.variance_used;
  j["std_error"] = r.std_error;
  j["ci"] = {{"lower", r.ci.lower}, {"upper", r.ci.upper}, {"level", r.ci.level}};
  if (r.diagnostics) {
    const auto& d = *r.diagnostics;
    j["diagnostics"] = {{"d_n", d.d_n}, {"big_d_n", d.big_d_n}, {"a_min", d.a_min}, {"a_max", d.a_max},
                        {"b_hat", d.b_hat}, {"c_hat", d.c_hat}, {"k_hat", d.k_hat}};
  }
  j["seed"] = r.seed;
  j["path"] = r.path;
  j["warnings"] = r.warnings;
  if (config_json) j["config"] = json::parse(*config_json);
  return j.dump(2);
}

std::string moments_csv(const MomentTable& m) {
  std::string out = "stratum,area,t_i,s_i,var_i,m3_i\n";
  for (int i = 0; i < m.size(); ++i) {
    out += std::to_string(i) + ',' + fmt(m.area_i[i]) + ',' + fmt(m.t_i[i]) + ',' + fmt(m.s_i[i]) + ',' +
           fmt(m.var_i[i]) + ',' + fmt(m.m3_i[i]) + '\n';
  }
  out += "total," + fmt(m.domain_area()) + ',' + fmt(m.t) + ',' + fmt(m.s) + ",,\n";
  return out;
}

std::string strata_svg(const Stratification& s, const SamplePlan* plan) {
  const Raster& r = s.raster();
  const Rect box = s.region().bounding_box();
  const double scale = 800.0 / std::max(box.width(), box.height());
  const auto sx = [&](double x) { return fmt((x - box.xmin) * scale); };
  const auto sy = [&](double y) { return fmt((box.ymax - y) * scale); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(box.width() * scale) << "\" height=\""
     << fmt(box.height() * scale) << "\">\n";
  const auto assign = s.assignment();
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (assign[i] < 0) continue;
    const Rect c = r.cell_rect(i);
    const int hue = static_cast<int>((static_cast<long long>(assign[i]) * 137) % 360);
    os << "<rect x=\"" << sx(c.xmin) << "\" y=\"" << sy(c.ymax) << "\" width=\"" << fmt(c.width() * scale)
       << "\" height=\"" << fmt(c.height() * scale) << "\" fill=\"hsl(" << hue << ",55%,70%)\"/>\n";
  }
  if (plan) {
    for (const Site& site : plan->sites) {
      os << "<circle cx=\"" << sx(site.location.x) << "\" cy=\"" << sy(site.location.y)
         << "\" r=\"3\" fill=\"" << (site.in_domain ? "black" : "red") << "\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace stratspace
