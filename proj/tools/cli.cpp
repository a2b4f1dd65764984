#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <stratspace/harness.hpp>
#include <stratspace/io.hpp>
#include <stratspace/oracle.hpp>

#include <cfenv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

namespace stratspace::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& msg)
      : std::runtime_error("config key '" + key + "': " + msg) {}
};

const std::set<std::string> kCommands{"stratify", "sample", "estimate", "oracle",
                                      "rates",    "clt",    "compare",  "canopy"};

struct Context {
  std::string command;
  json config;
  fs::path base;
  fs::path out;
  int threads = 1;
  std::ostream* stdout_ = nullptr;
  std::ostream* stderr_ = nullptr;
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string general(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

template <typename T>
T get(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(key, "has the wrong type");
  }
}

template <typename T>
T require(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError(key, "is required");
  return get<T>(j, key, T{});
}

std::uint64_t seed_of(const Context& c) {
  const json& j = c.config;
  if (!j.contains("seed")) throw ConfigError("seed", "is required (no wall-clock seeding)");
  if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed", "must be a nonnegative integer");
  return j.at("seed").get<std::uint64_t>();
}

int positive_int(const json& j, const std::string& key, int fallback) {
  if (j.contains(key) && !j.at(key).is_number_integer()) throw ConfigError(key, "must be an integer");
  const int v = get<int>(j, key, fallback);
  if (v < 1) throw ConfigError(key, "must be >= 1");
  return v;
}

double level_of(const json& j) {
  const double level = get<double>(j, "level", 0.95);
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("level", "must lie in (0, 1)");
  return level;
}

Point point_of(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(key, "must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Region region_of(const Context& c, const std::string& key, std::optional<Region> fallback) {
  if (!c.config.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(key, "is required");
  }
  const json& v = c.config.at(key);
  std::optional<std::string> file;
  if (v.is_string()) file = v.get<std::string>();
  if (v.is_object() && v.value("type", "") == "geojson") {
    if (!v.contains("path") || !v.at("path").is_string()) throw ConfigError(key + ".path", "is required");
    file = v.at("path").get<std::string>();
  }
  if (file) {
    fs::path p = *file;
    if (p.is_relative()) p = c.base / p;
    if (!fs::exists(p)) throw ConfigError(key, "region file not found: " + p.string());
    try {
      return read_geojson(p);
    } catch (const IoError& e) {
      throw ConfigError(key, e.what());
    }
  }
  try {
    return parse_region_json(v.dump());
  } catch (const IoError& e) {
    throw ConfigError(key, e.what());
  }
}

Region domain_of(const Context& c) { return region_of(c, "region", Region::rectangle({0, 0, 1, 1})); }

AttributeField field_of(const Context& c, const Region& domain) {
  if (!c.config.contains("field")) throw ConfigError("field", "is required");
  const json& f = c.config.at("field");
  json spec = f.is_string() ? json{{"id", f}} : f;
  if (!spec.is_object() || !spec.contains("id")) throw ConfigError("field.id", "is required");
  FieldParams p;
  try {
    p.value = spec.value("value", p.value);
    p.alpha = spec.value("alpha", p.alpha);
    p.radius = spec.value("radius", p.radius);
    p.frequency = spec.value("frequency", p.frequency);
    if (spec.contains("center")) p.center = point_of(spec.at("center"), "field.center");
    if (spec.contains("polygon")) {
      for (const auto& q : spec.at("polygon")) p.polygon.push_back(point_of(q, "field.polygon"));
    }
  } catch (const json::exception&) {
    throw ConfigError("field", "has a parameter of the wrong type");
  }
  try {
    return builtin_field(spec.at("id").get<std::string>(), p, domain);
  } catch (const std::exception& e) {
    throw ConfigError("field", e.what());
  }
}

Scheme scheme_of(const json& j) {
  const auto s = parse_scheme(get<std::string>(j, "scheme", "SS1"));
  if (!s) throw ConfigError("scheme", "must be one of URS, SS1, SS2, TSS, SGS");
  return *s;
}

std::vector<int> n_list_of(const json& j) {
  const auto ns = get<std::vector<int>>(j, "n_list", {16, 64, 256, 1024});
  if (ns.empty()) throw ConfigError("n_list", "must not be empty");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const int k = static_cast<int>(std::lround(std::sqrt(ns[i])));
    if (ns[i] < 1 || k * k != ns[i]) throw ConfigError("n_list", "entries must be perfect squares");
    if (i > 0 && ns[i] <= ns[i - 1]) throw ConfigError("n_list", "must be strictly increasing");
  }
  return ns;
}

PartitionParams partition_of(const Context& c) {
  PartitionParams p;
  p.seed = seed_of(c);
  if (!c.config.contains("partition")) return p;
  const json& j = c.config.at("partition");
  if (!j.is_object()) throw ConfigError("partition", "must be an object");
  p.resolution = positive_int(j, "resolution", p.resolution);
  p.max_iter = positive_int(j, "max_iter", p.max_iter);
  p.restarts = positive_int(j, "restarts", p.restarts);
  return p;
}

// Strata for `count` strata (SS1) of the configured kind.
Stratification strata_of(const Context& c, const Region& a, int count) {
  const std::string kind = get<std::string>(c.config, "strata", "grid");
  try {
    if (kind == "grid") {
      const int k = static_cast<int>(std::lround(std::sqrt(count)));
      if (k * k != count) throw ConfigError("n", "grid strata need a perfect square");
      return grid_partition(a, k);
    }
    if (kind == "equal_area") return equal_area_compact_partition(a, count, partition_of(c));
  } catch (const StratifyError& e) {
    throw ConfigError("strata", e.what());
  }
  throw ConfigError("strata", "must be 'grid' or 'equal_area'");
}

struct Sampled {
  SamplePlan plan;
  std::optional<Stratification> strata;
};

Sampled sample_of(const Context& c, const Region& a) {
  const Scheme scheme = scheme_of(c.config);
  const int n = positive_int(c.config, "n", 16);
  const RandomStream stream(seed_of(c), {1});
  Sampled s;
  try {
    switch (scheme) {
      case Scheme::urs:
        s.plan = draw_urs(a, n, stream);
        break;
      case Scheme::ss1:
        s.strata = strata_of(c, a, n);
        s.plan = draw_ss1(*s.strata, stream);
        break;
      case Scheme::ss2:
        if (get<std::string>(c.config, "strata", "grid") == "grid") {
          s.strata = grid_design(Scheme::ss2, a, n).strata;
        } else {
          if (n % 2 != 0) throw ConfigError("n", "SS2 needs an even n");
          s.strata = strata_of(c, a, n / 2);
        }
        s.plan = draw_ss2(*s.strata, stream);
        break;
      case Scheme::tss:
      case Scheme::sgs: {
        const int k = static_cast<int>(std::lround(std::sqrt(n)));
        if (k * k != n) throw ConfigError("n", "TSS and SGS need a perfect square");
        const Rect frame = a.bounding_box();
        s.plan = scheme == Scheme::tss ? draw_tss(a, frame, k, stream, get<bool>(c.config, "random_shift", false))
                                       : draw_sgs(a, frame, k, stream);
        break;
      }
    }
  } catch (const HarnessError& e) {
    throw ConfigError("n", e.what());
  }
  s.plan.seed = seed_of(c);
  return s;
}

json embedded_config(const Context& c) {
  json j = c.config;
  j.erase("threads");
  j.erase("out");
  j["command"] = c.command;
  return j;
}

void write(const Context& c, const std::string& name, std::string_view text) { write_text(c.out / name, text); }

json diagnostics_json(const Diagnostics& d) {
  return {{"d_n", d.d_n},   {"big_d_n", d.big_d_n}, {"a_min", d.a_min}, {"a_max", d.a_max},
          {"b_hat", d.b_hat}, {"c_hat", d.c_hat},   {"k_hat", d.k_hat}};
}

int cmd_stratify(Context& c) {
  const Region a = domain_of(c);
  const int n = positive_int(c.config, "n", 16);
  const Stratification s = strata_of(c, a, n);
  const Diagnostics d = diagnostics(s);
  json j;
  j["schema_version"] = kSchemaVersion;
  j["strata"] = s.size();
  j["diagnostics"] = diagnostics_json(d);
  j["connected"] = s.connected();
  j["area_imbalance"] = s.area_imbalance();
  j["adjacent_consecutive_pairs"] = s.adjacent_consecutive_pairs();
  j["config"] = embedded_config(c);
  write(c, "strata.json", stratification_json(s));
  write(c, "diagnostics.json", j.dump(2));
  write(c, "strata.svg", strata_svg(s));
  auto& o = *c.stdout_;
  o << "strata          " << s.size() << '\n'
    << "d_n             " << general(d.d_n) << '\n'
    << "D_n             " << general(d.big_d_n) << '\n'
    << "b_hat           " << general(d.b_hat) << '\n'
    << "c_hat           " << general(d.c_hat) << '\n'
    << "area imbalance  " << general(s.area_imbalance()) << '\n'
    << "adjacent pairs  " << s.adjacent_consecutive_pairs() << '/' << std::max(0, s.size() - 1) << '\n';
  return 0;
}

int cmd_sample(Context& c) {
  const Region a = domain_of(c);
  const Sampled s = sample_of(c, a);
  write(c, "plan.csv", plan_csv(s.plan));
  write(c, "plan.json", plan_json(s.plan));
  if (s.strata) write(c, "plan.svg", strata_svg(*s.strata, &s.plan));
  *c.stdout_ << to_string(s.plan.scheme) << ": " << s.plan.sites.size() << " sites, "
             << s.plan.realized_in_domain << " in the domain\n";
  return 0;
}

int cmd_estimate(Context& c) {
  const Region a = domain_of(c);
  const AttributeField f = field_of(c, a);
  const Sampled s = sample_of(c, a);
  EstimateReport r = make_report(s.plan, s.strata ? &*s.strata : nullptr, f, level_of(c.config));
  r.units = get<std::string>(c.config, "units", "");
  write(c, "report.json", report_json(r, embedded_config(c).dump()));
  *c.stdout_ << format_report(r, r.units);
  return 0;
}

int cmd_oracle(Context& c) {
  const Region a = domain_of(c);
  const AttributeField f = field_of(c, a);
  const int n = positive_int(c.config, "n", 16);
  const Stratification s = strata_of(c, a, n);
  const int resolution = positive_int(c.config, "resolution", 512);
  if (resolution < 256) throw ConfigError("resolution", "must be >= 256");
  const MomentTable m = moments(f, s, resolution);
  json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = s.size();
  j["T"] = m.t;
  j["S"] = m.s;
  j["var_ss"] = exact_var_ss(m);
  j["var_urs"] = exact_var_urs(m, s.size());
  j["bias_naive"] = s.size() >= 2 ? json(bias_naive(m)) : json(nullptr);
  j["bias_neighbor"] = bias_neighbor(m, s.order());
  const auto hb = holder_bound_check(f, s, m);
  j["holder"] = hb ? json{{"bound", hb->bound}, {"sigma2", hb->sigma2}, {"satisfied", hb->satisfied}} : json(nullptr);
  const auto ly = lyapunov_ratio(m);
  j["lyapunov"] = ly ? json(*ly) : json(nullptr);
  j["resolution"] = m.resolution;
  j["error_estimate"] = m.error_estimate;
  j["flagged"] = m.flagged;
  j["config"] = embedded_config(c);
  write(c, "moments.csv", moments_csv(m));
  write(c, "oracle.json", j.dump(2));
  auto& o = *c.stdout_;
  o << "T               " << general(m.t) << '\n'
    << "S               " << general(m.s) << '\n'
    << "sigma_n^2       " << general(exact_var_ss(m)) << '\n'
    << "Var URS         " << general(exact_var_urs(m, s.size())) << '\n';
  if (m.flagged) *c.stderr_ << "warning: quadrature error estimate " << general(m.error_estimate) << " above tolerance\n";
  return 0;
}

int cmd_rates(Context& c) {
  const Region a = domain_of(c);
  const AttributeField f = field_of(c, a);
  const auto ns = n_list_of(c.config);
  const int resolution = positive_int(c.config, "resolution", 1024);
  if (resolution < 256) throw ConfigError("resolution", "must be >= 256");
  const RateTable t = oracle_rates(f, ns, resolution);
  std::string csv = "n,var_ss,var_urs,bias_naive_ratio,bias_neighbor_ratio,lyapunov,flagged\n";
  json rows = json::array();
  for (const auto& r : t.rows) {
    csv += std::to_string(r.n) + ',' + num(r.var_ss) + ',' + num(r.var_urs) + ',' + num(r.bias_naive_ratio) + ',' +
           num(r.bias_neighbor_ratio) + ',' + (r.lyapunov ? num(*r.lyapunov) : "") + ',' + (r.flagged ? "1" : "0") +
           '\n';
    rows.push_back({{"n", r.n}, {"var_ss", r.var_ss}, {"var_urs", r.var_urs}});
  }
  const auto fit_json = [](const std::optional<RateFit>& fit) {
    return fit ? json{{"slope", fit->slope}, {"intercept", fit->intercept}, {"r2", fit->r2}} : json(nullptr);
  };
  json j;
  j["schema_version"] = kSchemaVersion;
  j["rows"] = rows;
  j["ss_fit"] = fit_json(t.ss);
  j["urs_fit"] = fit_json(t.urs);
  j["config"] = embedded_config(c);
  write(c, "rates.csv", csv);
  write(c, "rates.json", j.dump(2));
  auto& o = *c.stdout_;
  o << "n        sigma_n^2      Var URS\n";
  for (const auto& r : t.rows) {
    char line[128];
    std::snprintf(line, sizeof line, "%-8d %-14.6e %-14.6e\n", r.n, r.var_ss, r.var_urs);
    o << line;
  }
  if (t.ss) o << "SS slope   " << fixed(t.ss->slope, 4) << '\n';
  if (t.urs) o << "URS slope  " << fixed(t.urs->slope, 4) << '\n';
  return 0;
}

int cmd_clt(Context& c) {
  const Region a = domain_of(c);
  const AttributeField f = field_of(c, a);
  const int n = positive_int(c.config, "n", 64);
  const Stratification s = strata_of(c, a, n);
  const MomentTable m = moments(f, s, positive_int(c.config, "resolution", 512));
  const double sigma2 = exact_var_ss(m);
  if (!(sigma2 > 0.0)) throw ConfigError("field", "has zero stratified variance; nothing to standardize");
  ReplicationConfig rc;
  rc.replications = positive_int(c.config, "replications", 100000);
  rc.seed = seed_of(c);
  rc.path = {2};
  rc.threads = c.threads;
  rc.oracle_t = m.t;
  rc.oracle_sigma = std::sqrt(sigma2);
  Design d;
  d.scheme = Scheme::ss1;
  d.n = s.size();
  d.strata = s;
  const ReplicationResult r = replicate(f, d, rc);
  CltCheck check;
  try {
    check = clt_check(r.standardized);
  } catch (const HarnessError& e) {
    throw ConfigError("replications", e.what());
  }
  json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = s.size();
  j["replications"] = rc.replications;
  j["oracle_t"] = m.t;
  j["oracle_sigma"] = *rc.oracle_sigma;
  j["mean"] = r.mean;
  j["variance"] = r.variance;
  j["coverage"] = check.coverage;
  j["ks"] = check.ks;
  const auto ly = lyapunov_ratio(m);
  j["lyapunov"] = ly ? json(*ly) : json(nullptr);
  j["config"] = embedded_config(c);
  std::ostringstream csv;
  write_replications_csv(csv, r);
  write(c, "replications.csv", csv.str());
  write(c, "clt.json", j.dump(2));
  *c.stdout_ << "coverage  " << fixed(check.coverage, 4) << "\nKS        " << fixed(check.ks, 4) << '\n';
  return 0;
}

int cmd_compare(Context& c) {
  const Region a = domain_of(c);
  const AttributeField f = field_of(c, a);
  const auto ns = n_list_of(c.config);
  ReplicationConfig rc;
  rc.replications = get<int>(c.config, "replications", 0);
  if (rc.replications < 0) throw ConfigError("replications", "must be >= 0");
  rc.seed = seed_of(c);
  rc.path = {3};
  rc.threads = c.threads;
  const CompareTable t = compare_schemes(f, ns, rc, positive_int(c.config, "resolution", 512));
  std::string csv = "n,scheme,oracle,empirical\n";
  json rows = json::array();
  for (const auto& r : t.rows) {
    csv += std::to_string(r.n) + ',' + std::string(to_string(r.scheme)) + ',' + (r.oracle ? num(*r.oracle) : "") +
           ',' + (r.empirical ? num(*r.empirical) : "") + '\n';
    rows.push_back({{"n", r.n},
                    {"scheme", std::string(to_string(r.scheme))},
                    {"oracle", r.oracle ? json(*r.oracle) : json(nullptr)},
                    {"empirical", r.empirical ? json(*r.empirical) : json(nullptr)}});
  }
  json j;
  j["schema_version"] = kSchemaVersion;
  j["rows"] = rows;
  j["dominance_violations"] = t.dominance_violations;
  j["config"] = embedded_config(c);
  write(c, "compare.csv", csv);
  write(c, "compare.json", j.dump(2));
  auto& o = *c.stdout_;
  o << "n        scheme  oracle         empirical\n";
  for (const auto& r : t.rows) {
    char line[160];
    std::snprintf(line, sizeof line, "%-8d %-7s %-14s %-14s\n", r.n, std::string(to_string(r.scheme)).c_str(),
                  r.oracle ? general(*r.oracle).c_str() : "-", r.empirical ? general(*r.empirical).c_str() : "-");
    o << line;
  }
  if (t.dominance_violations > 0) *c.stderr_ << "warning: URS below SS at " << t.dominance_violations << " n values\n";
  return 0;
}

int cmd_canopy(Context& c) {
  const Region a = domain_of(c);
  const Region cover = region_of(c, "cover", std::nullopt);
  const int n = positive_int(c.config, "n", 50);
  const double length = get<double>(c.config, "transect_length", 200.0);
  if (!(length > 0.0)) throw ConfigError("transect_length", "must be > 0");
  const double theta = get<double>(c.config, "orientation", 0.0);
  PartitionParams p = partition_of(c);
  if (!c.config.contains("partition")) p.resolution = 256;
  CanopySurvey survey = [&] {
    try {
      return prepare_canopy(a, cover, n, length, theta, p);
    } catch (const StratifyError& e) {
      throw ConfigError("n", e.what());
    }
  }();
  EstimateReport r = canopy_estimate(survey, RandomStream(seed_of(c), {0x43414E4F}), level_of(c.config));
  r.seed = seed_of(c);
  write(c, "report.json", report_json(r, embedded_config(c).dump()));
  write(c, "strata.json", stratification_json(survey.strata));
  *c.stdout_ << format_report(r, r.units);
  for (const auto& w : r.warnings) *c.stderr_ << "warning: " << w << '\n';
  return 0;
}

}  // namespace

std::string format_percent(double part, double whole) {
  if (!(whole > 0.0)) return "n/a";
  const int old = std::fegetround();
  std::fesetround(FE_TONEAREST);
  const double hundredths = std::nearbyint(part / whole * 1e4);
  std::fesetround(old);
  const long long v = static_cast<long long>(hundredths);
  const long long mag = v < 0 ? -v : v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%lld.%02lld%%", v < 0 ? "-" : "", mag / 100, mag % 100);
  return buf;
}

std::string format_report(const EstimateReport& r, std::string_view units) {
  std::ostringstream o;
  const bool m2 = units == "m2";
  const auto amount = [&](double v) { return m2 ? fixed(v / 1e4, 2) + " ha" : general(v); };
  o << "scheme          " << to_string(r.scheme) << '\n';
  o << "n               " << r.n << '\n';
  o << "estimate        " << amount(r.t_hat) << '\n';
  o << "domain area     " << amount(r.domain_area) << '\n';
  if (m2) o << "cover           " << format_percent(r.t_hat, r.domain_area) << '\n';
  o << "std error       " << amount(r.std_error) << '\n';
  o << "variance        " << (r.variance_used.empty() ? "none" : r.variance_used) << '\n';
  o << fixed(100.0 * r.ci.level, 0) << "% CI          [" << amount(r.ci.lower) << ", " << amount(r.ci.upper) << "]\n";
  for (const auto& [k, v] : r.variance_estimates) o << "  " << k << std::string(14 - std::min<std::size_t>(14, k.size()), ' ') << general(v) << '\n';
  return o.str();
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Design-based estimation of spatial totals"};
  std::string command, config_path, out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> reps, n, threads;
  std::optional<double> level;
  app.add_option("command", command, "stratify | sample | estimate | oracle | rates | clt | compare | canopy")->required();
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--seed", seed, "root seed");
  app.add_option("--reps", reps, "Monte Carlo replications");
  app.add_option("--n", n, "sample size");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads");
  app.add_option("--level", level, "confidence level");

  std::vector<std::string> args(argv.size() > 1 ? argv.begin() + 1 : argv.end(), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  Context c;
  c.command = command;
  c.stdout_ = &out;
  c.stderr_ = &err;
  c.out = out_dir;
  try {
    if (!kCommands.contains(command)) throw ConfigError("command", "unknown subcommand '" + command + "'");
    if (!config_path.empty()) {
      std::string text;
      try {
        text = read_text(config_path);
      } catch (const IoError&) {
        throw ConfigError("--config", "cannot read " + config_path);
      }
      try {
        c.config = json::parse(text);
      } catch (const json::exception& e) {
        throw ConfigError("--config", std::string("invalid JSON in ") + config_path + ": " + e.what());
      }
      if (!c.config.is_object()) throw ConfigError("--config", "must hold a JSON object");
      c.base = fs::path(config_path).parent_path();
    } else {
      c.config = json::object();
    }
    if (seed) c.config["seed"] = *seed;
    if (reps) c.config["replications"] = *reps;
    if (n) c.config["n"] = *n;
    if (level) c.config["level"] = *level;
    if (c.config.contains("out") && out_dir == "out") c.out = get<std::string>(c.config, "out", out_dir);
    c.threads = threads ? *threads : get<int>(c.config, "threads", 1);
    if (c.threads < 1) throw ConfigError("threads", "must be >= 1");
    seed_of(c);

    static const std::map<std::string, int (*)(Context&)> handlers{
        {"stratify", cmd_stratify}, {"sample", cmd_sample}, {"estimate", cmd_estimate}, {"oracle", cmd_oracle},
        {"rates", cmd_rates},       {"clt", cmd_clt},       {"compare", cmd_compare},   {"canopy", cmd_canopy}};
    return handlers.at(command)(c);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace stratspace::cli
