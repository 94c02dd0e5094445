// perc: command-line laboratory for triangular-lattice site percolation.
//
// Subcommands: xprob, corrlen, pplus, loops, events, sweep, metric.
// Every run reads a strict key-value config file, writes a results
// directory atomically (temp dir + rename), and records a manifest that is
// created before any result file and finalized after the last one.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime/statistical
// abort (e.g. loop-statistic truncation above the cap).

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "perclab/connectivity.hpp"
#include "perclab/correlation_length.hpp"
#include "perclab/curve_metric.hpp"
#include "perclab/interface_loops.hpp"
#include "perclab/regime_lab.hpp"
#include "perclab/sampler.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace perclab;

namespace {

constexpr const char* kVersion = "0.1.0";

[[noreturn]] void config_error(const std::string& msg) {
  std::fprintf(stderr, "config error: %s\n", msg.c_str());
  std::exit(1);
}

// ---------------------------------------------------------------------------
// Strict key-value config: `key = value` lines, optional `[section]`
// headers (prefixing keys with "section."), `#` comments. Values are
// numbers, booleans, quoted strings, or arrays of numbers. Every key must
// be consumed by the subcommand; leftovers are an error.
// ---------------------------------------------------------------------------
struct ConfigValue {
  enum class Kind { Number, Bool, String, Array } kind = Kind::Number;
  double num = 0.0;
  bool integral = false;  // the literal had no '.', 'e', or 'E'
  bool b = false;
  std::string str;
  std::vector<double> array;
  std::vector<bool> array_integral;
};

class Config {
 public:
  static Config parse_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open config file: " + path.string());
    Config cfg;
    std::string line, section;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string s = strip_comment(line);
      s = trim(s);
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') fail(path, lineno, "malformed section header");
        section = trim(s.substr(1, s.size() - 2));
        if (section.empty()) fail(path, lineno, "empty section name");
        continue;
      }
      size_t eq = s.find('=');
      if (eq == std::string::npos) fail(path, lineno, "expected key = value");
      std::string key = trim(s.substr(0, eq));
      std::string val = trim(s.substr(eq + 1));
      if (key.empty()) fail(path, lineno, "empty key");
      if (!section.empty()) key = section + "." + key;
      if (cfg.values_.count(key)) fail(path, lineno, "duplicate key: " + key);
      cfg.values_[key] = parse_value(path, lineno, val);
    }
    return cfg;
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  double get_double(const std::string& key) {
    return require(key, ConfigValue::Kind::Number).num;
  }
  double get_double(const std::string& key, double def) {
    return has(key) ? get_double(key) : (note_default(key, def), def);
  }
  int64_t get_int(const std::string& key) {
    const ConfigValue& v = require(key, ConfigValue::Kind::Number);
    if (!v.integral) config_error("key '" + key + "' must be an integer");
    return int64_t(v.num);
  }
  int64_t get_int(const std::string& key, int64_t def) {
    return has(key) ? get_int(key) : (note_default(key, def), def);
  }
  uint64_t get_uint(const std::string& key) {
    int64_t v = get_int(key);
    if (v < 0) config_error("key '" + key + "' must be non-negative");
    return uint64_t(v);
  }
  bool get_bool(const std::string& key, bool def) {
    if (!has(key)) return note_default(key, def), def;
    return require(key, ConfigValue::Kind::Bool).b;
  }
  std::string get_string(const std::string& key) {
    return require(key, ConfigValue::Kind::String).str;
  }
  std::string get_string(const std::string& key, const std::string& def) {
    return has(key) ? get_string(key) : (note_default(key, def), def);
  }
  std::vector<double> get_doubles(const std::string& key) {
    return require(key, ConfigValue::Kind::Array).array;
  }
  std::vector<double> get_doubles(const std::string& key,
                                  const std::vector<double>& def) {
    if (has(key)) return get_doubles(key);
    note_default(key, def);
    return def;
  }
  std::vector<int64_t> get_ints(const std::string& key) {
    const ConfigValue& v = require(key, ConfigValue::Kind::Array);
    std::vector<int64_t> out;
    for (size_t k = 0; k < v.array.size(); ++k) {
      if (!v.array_integral[k])
        config_error("key '" + key + "' must hold integers");
      out.push_back(int64_t(v.array[k]));
    }
    return out;
  }

  // Errors out if any config key was never consumed (strict mode).
  void finish() const {
    for (const auto& [key, value] : values_)
      if (!consumed_.count(key)) config_error("unknown key: " + key);
  }

  // Full resolved configuration (explicit keys + applied defaults) for the
  // manifest, so no silent default escapes the record.
  json resolved() const {
    json out = json::object();
    for (const auto& [key, v] : values_) {
      switch (v.kind) {
        case ConfigValue::Kind::Number:
          if (v.integral)
            out[key] = int64_t(v.num);
          else
            out[key] = v.num;
          break;
        case ConfigValue::Kind::Bool: out[key] = v.b; break;
        case ConfigValue::Kind::String: out[key] = v.str; break;
        case ConfigValue::Kind::Array: out[key] = v.array; break;
      }
    }
    // applied defaults and command-line overrides win over raw file values
    for (const auto& [key, dv] : defaults_) out[key] = dv;
    return out;
  }

  void record(const std::string& key, const json& v) { defaults_[key] = v; }

 private:
  std::map<std::string, ConfigValue> values_;
  mutable std::set<std::string> consumed_;
  std::map<std::string, json> defaults_;

  template <typename T>
  void note_default(const std::string& key, const T& v) {
    defaults_[key] = v;
  }

  const ConfigValue& require(const std::string& key, ConfigValue::Kind kind) {
    auto it = values_.find(key);
    if (it == values_.end()) config_error("missing required key: " + key);
    consumed_.insert(key);
    if (it->second.kind != kind)
      config_error("key '" + key + "' has the wrong type");
    return it->second;
  }

  [[noreturn]] static void fail(const fs::path& p, size_t lineno,
                                const std::string& msg) {
    config_error(p.string() + ":" + std::to_string(lineno) + ": " + msg);
  }

  static std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (size_t k = 0; k < s.size(); ++k) {
      if (s[k] == '"') in_str = !in_str;
      if (s[k] == '#' && !in_str) return s.substr(0, k);
    }
    return s;
  }

  static std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  }

  static ConfigValue parse_number(const fs::path& p, size_t lineno,
                                  const std::string& s) {
    ConfigValue v;
    v.kind = ConfigValue::Kind::Number;
    char* end = nullptr;
    v.num = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty())
      fail(p, lineno, "malformed value: " + s);
    v.integral = s.find_first_of(".eE") == std::string::npos;
    return v;
  }

  static ConfigValue parse_value(const fs::path& p, size_t lineno,
                                 const std::string& s) {
    ConfigValue v;
    if (s == "true" || s == "false") {
      v.kind = ConfigValue::Kind::Bool;
      v.b = (s == "true");
      return v;
    }
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
      v.kind = ConfigValue::Kind::String;
      v.str = s.substr(1, s.size() - 2);
      return v;
    }
    if (s.front() == '[') {
      if (s.back() != ']') fail(p, lineno, "unterminated array");
      v.kind = ConfigValue::Kind::Array;
      std::string body = s.substr(1, s.size() - 2);
      std::stringstream ss(body);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) fail(p, lineno, "empty array element");
        ConfigValue e = parse_number(p, lineno, item);
        v.array.push_back(e.num);
        v.array_integral.push_back(e.integral);
      }
      return v;
    }
    return parse_number(p, lineno, s);
  }
};

// ---------------------------------------------------------------------------
// Output directory with manifest bookkeeping and atomic rename.
// ---------------------------------------------------------------------------
std::string iso_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class RunDir {
 public:
  RunDir(const fs::path& out, const std::string& experiment, json resolved_cfg,
         uint64_t seed, int workers)
      : final_(out), tmp_(out.string() + ".tmp") {
    if (fs::exists(final_)) config_error("output directory exists: " + final_.string());
    fs::remove_all(tmp_);
    fs::create_directories(tmp_);
    manifest_["experiment"] = experiment;
    manifest_["config"] = std::move(resolved_cfg);
    manifest_["seed"] = seed;
    manifest_["workers"] = workers;
    manifest_["version"] = kVersion;
    manifest_["started"] = iso_now();
    manifest_["finalized"] = false;
    manifest_["outputs"] = json::array();
    manifest_["stages"] = json::object();
    start_ = std::chrono::steady_clock::now();
    write_manifest();  // before any result file
  }

  std::ofstream create(const std::string& name) {
    manifest_["outputs"].push_back(name);
    std::ofstream os(tmp_ / name, std::ios::binary);
    if (!os) config_error("cannot create output file: " + name);
    return os;
  }

  void stage_done(const std::string& name) {
    auto now = std::chrono::steady_clock::now();
    manifest_["stages"][name] =
        std::chrono::duration<double>(now - start_).count();
  }

  json& manifest() { return manifest_; }

  int finalize(int exit_code) {
    manifest_["ended"] = iso_now();
    manifest_["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    manifest_["exit_code"] = exit_code;
    manifest_["finalized"] = true;
    write_manifest();
    fs::rename(tmp_, final_);
    return exit_code;
  }

 private:
  fs::path final_, tmp_;
  json manifest_;
  std::chrono::steady_clock::time_point start_;

  void write_manifest() {
    std::ofstream os(tmp_ / "manifest.json", std::ios::binary);
    os << manifest_.dump(2) << "\n";
  }
};

// Shared row format for event frequencies.
void event_header(std::ofstream& os) {
  os << "# schema=1\n"
     << "event,p,delta,n_or_r,hits,replicas,p_hat,ci95,truncated_count\n";
}
void event_row(std::ofstream& os, const EventStats& s, double p, double delta,
               double n_or_r) {
  os << s.event << ',' << fmt(p) << ',' << fmt(delta) << ',' << fmt(n_or_r)
     << ',' << s.hits << ',' << s.replicas << ',' << fmt(s.p_hat) << ','
     << fmt(s.ci95) << ',' << s.truncated << '\n';
}

void probe_header(std::ofstream& os) {
  os << "# schema=1\n"
     << "target,phase,x,hits,replicas,p_hat,ci95,decision\n";
}
void probe_rows(std::ofstream& os, const std::string& target,
                const std::vector<ProbeLog>& probes) {
  for (const ProbeLog& pr : probes)
    os << target << ',' << pr.phase << ',' << fmt(pr.x) << ',' << pr.hits
       << ',' << pr.replicas << ',' << fmt(pr.p_hat) << ',' << fmt(pr.ci95)
       << ',' << pr.decision << '\n';
}

// ---------------------------------------------------------------------------
// Subcommands.
// ---------------------------------------------------------------------------
struct Common {
  fs::path config_path;
  fs::path out_dir;
  int workers = 0;          // 0 = take from config
  int64_t seed_flag = -1;   // -1 = take from config
};

struct Resolved {
  Config cfg;
  uint64_t seed = 0;
  int workers = 1;
};

Resolved resolve(const Common& c) {
  Config cfg = Config::parse_file(c.config_path);
  uint64_t seed;
  if (c.seed_flag >= 0) {
    seed = uint64_t(c.seed_flag);
    cfg.record("seed", seed);
    if (cfg.has("seed")) (void)cfg.get_uint("seed");  // consumed; overridden
  } else if (cfg.has("seed")) {
    seed = cfg.get_uint("seed");
  } else {
    config_error("master seed required: set 'seed' in the config or pass --seed");
  }
  int workers = c.workers > 0 ? c.workers : int(cfg.get_int("workers", 1));
  if (c.workers > 0 && cfg.has("workers")) (void)cfg.get_int("workers");
  if (workers < 1) config_error("workers must be >= 1");
  cfg.record("workers", workers);
  return Resolved{std::move(cfg), seed, workers};
}

SearchBudget budget_from(Config& cfg) {
  SearchBudget b;
  b.replicas_init = uint64_t(cfg.get_int("budget.replicas_init", 256));
  b.replicas_max = uint64_t(cfg.get_int("budget.replicas_max", 32768));
  b.bracket_rtol = cfg.get_double("budget.bracket_rtol", 0.0);
  if (b.replicas_init < 1 || b.replicas_max < b.replicas_init)
    config_error("budget: need 1 <= replicas_init <= replicas_max");
  return b;
}

int run_xprob(const Common& c) {
  auto [cfg, seed, workers] = resolve(c);
  std::vector<int64_t> ns = cfg.get_ints("n");
  std::vector<double> ps = cfg.get_doubles("p");
  uint64_t replicas = cfg.get_uint("replicas");
  cfg.finish();
  for (int64_t n : ns)
    if (n < 1) config_error("n values must be >= 1");
  for (double p : ps)
    if (p < 0.0 || p > 1.0) config_error("p values must lie in [0, 1]");

  RunDir run(c.out_dir, "xprob", cfg.resolved(), seed, workers);
  std::ofstream os = run.create("xprob.csv");
  event_header(os);
  uint64_t counter = 0;
  for (int64_t n : ns)
    for (double p : ps) {
      uint64_t s = detail::mix64(seed ^ detail::mix64(++counter));
      EventStats st = crossing_prob(n, p, replicas, s, workers);
      event_row(os, st, p, 1.0, double(n));
    }
  run.stage_done("xprob");
  return run.finalize(0);
}

int run_corrlen(const Common& c) {
  auto [cfg, seed, workers] = resolve(c);
  std::vector<double> ps = cfg.get_doubles("p");
  double epsilon = cfg.get_double("epsilon", 0.1);
  int64_t n_max = cfg.get_int("n_max");
  bool do_fit = cfg.get_bool("fit", false);
  SearchBudget budget = budget_from(cfg);
  cfg.finish();

  RunDir run(c.out_dir, "corrlen", cfg.resolved(), seed, workers);
  std::ofstream os = run.create("corrlen.csv");
  os << "# schema=1\n"
     << "p,epsilon,n_hat,n_low,n_high,exceeds_n_max,confident\n";
  std::ofstream pos = run.create("probes.csv");
  probe_header(pos);
  std::vector<std::pair<double, double>> fit_pts;
  bool all_finite = true;
  uint64_t counter = 0;
  for (double p : ps) {
    uint64_t s = detail::mix64(seed ^ detail::mix64(++counter));
    CorrEstimate e = estimate_L(p, epsilon, n_max, budget, s, workers);
    os << fmt(p) << ',' << fmt(epsilon) << ',' << e.n_hat << ',' << e.n_low
       << ',' << e.n_high << ',' << (e.exceeds_n_max ? 1 : 0) << ','
       << (e.confident ? 1 : 0) << '\n';
    probe_rows(pos, "p=" + fmt(p), e.probes);
    if (e.exceeds_n_max || e.n_hat < 1)
      all_finite = false;
    else if (p > 0.5)
      fit_pts.emplace_back(p, double(e.n_hat));
  }
  run.stage_done("corrlen");
  if (do_fit) {
    if (all_finite && fit_pts.size() >= 3) {
      PowerLawFit f = fit_power_law(fit_pts);
      std::ofstream fo = run.create("fit.csv");
      fo << "# schema=1\n"
         << "exponent,intercept,r_squared,points\n"
         << fmt(f.exponent) << ',' << fmt(f.intercept) << ','
         << fmt(f.r_squared) << ',' << fit_pts.size() << '\n';
    } else {
      run.manifest()["fit_skipped"] =
          "needs >= 3 certified finite estimates at p > 1/2";
    }
    run.stage_done("fit");
  }
  return run.finalize(0);
}

int run_pplus(const Common& c) {
  auto [cfg, seed, workers] = resolve(c);
  std::vector<int64_t> ns = cfg.get_ints("n");
  double epsilon = cfg.get_double("epsilon", 0.1);
  double p_tol = cfg.get_double("p_tol", 1.0 / 1024.0);
  SearchBudget budget = budget_from(cfg);
  cfg.finish();
  if (!(p_tol > 0.0)) config_error("p_tol must be positive");

  RunDir run(c.out_dir, "pplus", cfg.resolved(), seed, workers);
  std::ofstream os = run.create("pplus.csv");
  os << "# schema=1\n"
     << "n,epsilon,p_hat,p_low,p_high,confident\n";
  std::ofstream pos = run.create("probes.csv");
  probe_header(pos);
  uint64_t counter = 0;
  for (int64_t n : ns) {
    uint64_t s = detail::mix64(seed ^ detail::mix64(++counter));
    PPlusEstimate e = estimate_p_plus(n, epsilon, p_tol, budget, s, workers);
    os << n << ',' << fmt(epsilon) << ',' << fmt(e.p_hat) << ','
       << fmt(e.p_low) << ',' << fmt(e.p_high) << ','
       << (e.confident ? 1 : 0) << '\n';
    probe_rows(pos, "n=" + std::to_string(n), e.probes);
  }
  run.stage_done("pplus");
  return run.finalize(0);
}

void write_loop_record(std::ofstream& csv, std::ofstream& dump, int64_t id,
                       const BoundaryLoop& loop, bool surrounds_origin) {
  csv << id << ',' << loop.n_edges() << ',' << fmt(loop.diameter) << ','
      << (surrounds_origin ? 1 : 0) << ','
      << (loop.touches_window_boundary ? 1 : 0) << '\n';
  dump << id;
  for (const EmbeddedPoint& v : loop.vertices)
    dump << ' ' << fmt(v.x) << ' ' << fmt(v.y);
  dump << '\n';
}

int run_loops(const Common& c) {
  auto [cfg, seed, workers] = resolve(c);
  int64_t li = cfg.get_int("li");
  int64_t lj = cfg.get_int("lj", li);
  double delta = cfg.get_double("delta", 1.0);
  double p = cfg.get_double("p");
  uint64_t replicas = uint64_t(cfg.get_int("replicas", 1));
  bool dump_configs = cfg.get_bool("dump_configs", false);
  cfg.finish();
  if (li < 1 || lj < 1) config_error("window sides must be >= 1");
  if (p < 0.0 || p > 1.0) config_error("p must lie in [0, 1]");

  RunDir run(c.out_dir, "loops", cfg.resolved(), seed, workers);
  Window w{{0, 0}, li, lj, delta};
  EmbeddedPoint center = embed(window_center_site(w), delta);
  for (uint64_t rep = 0; rep < replicas; ++rep) {
    PercConfig conf = sample(w, p, seed, uint32_t(rep));
    LoopSet ls = trace_loops(conf);
    std::string stem = "loops_" + std::to_string(rep);
    std::ofstream csv = run.create(stem + ".csv");
    csv << "# schema=1\n"
        << "id,n_edges,diameter,surrounds_origin,touches_boundary\n";
    std::ofstream dump = run.create(stem + ".loops");
    int64_t id = 0;
    for (const BoundaryLoop& loop : ls.loops) {
      bool so = false;
      try {
        so = surrounds(loop, center);
      } catch (const std::domain_error&) {
        so = false;
      }
      write_loop_record(csv, dump, id++, loop, so);
    }
    for (const BoundaryLoop& frag : ls.open_fragments)
      write_loop_record(csv, dump, id++, frag, false);
    if (dump_configs) {
      std::ofstream bo = run.create("config_" + std::to_string(rep) + ".bin");
      dump_config(conf, bo);
    }
  }
  run.stage_done("loops");
  return run.finalize(0);
}

int run_events(const Common& c) {
  auto [cfg, seed, workers] = resolve(c);
  EventDescriptor d;
  d.kind = cfg.get_string("event");
  d.n = cfg.get_int("n", 0);
  d.r = cfg.get_double("r", 0.0);
  d.R = cfg.get_double("R", 0.0);
  d.k = cfg.get_int("k", 1);
  d.L = cfg.get_double("L", 0.0);
  d.color = cfg.get_string("color", "white") == "black" ? Color::Black
                                                        : Color::White;
  int64_t li = cfg.get_int("li");
  int64_t lj = cfg.get_int("lj", li);
  double delta = cfg.get_double("delta", 1.0);
  std::vector<double> ps = cfg.get_doubles("p");
  uint64_t replicas = cfg.get_uint("replicas");
  cfg.finish();
  if (li < 1 || lj < 1) config_error("window sides must be >= 1");

  Window w{{0, 0}, li, lj, delta};
  EventFn fn;
  try {
    fn = make_event(d, w);
  } catch (const std::exception& e) {
    config_error(std::string("bad event: ") + e.what());
  }
  double n_or_r = d.kind == "H"   ? double(d.n)
                  : d.kind == "G" ? d.L
                                  : d.r;

  RunDir run(c.out_dir, "events", cfg.resolved(), seed, workers);
  std::ofstream os = run.create("events.csv");
  event_header(os);
  uint64_t counter = 0;
  for (double p : ps) {
    if (p < 0.0 || p > 1.0) config_error("p values must lie in [0, 1]");
    uint64_t s = detail::mix64(seed ^ detail::mix64(++counter));
    EventStats st = estimate_event(d.name(), w, p, replicas, s, workers, fn);
    event_row(os, st, p, delta, n_or_r);
  }
  run.stage_done("events");
  return run.finalize(0);
}

int run_sweep_cmd(const Common& c) {
  auto [cfg, seed, workers] = resolve(c);
  SweepSpec spec;
  spec.alpha = cfg.get_double("alpha", 0.75);
  spec.lambda = cfg.get_double("lambda", 1.0);
  spec.deltas = cfg.get_doubles("deltas");
  spec.p_override = cfg.get_doubles("p_override", {});
  spec.epsilon = cfg.get_double("epsilon", 0.1);
  spec.window_side = cfg.get_double("window", 1.0);
  spec.replicas = cfg.get_uint("replicas");
  spec.t_low = cfg.get_double("t_low", 0.3);
  spec.t_high = cfg.get_double("t_high", 3.0);
  spec.budget = budget_from(cfg);
  spec.seed = seed;
  spec.workers = workers;
  cfg.finish();

  RunDir run(c.out_dir, "sweep", cfg.resolved(), seed, workers);
  RegimeReport report;
  try {
    report = run_sweep(spec);
  } catch (const std::invalid_argument& e) {
    config_error(e.what());
  }

  std::ofstream lv = run.create("levels.csv");
  lv << "# schema=1\n"
     << "level,delta,p,n_low,n_high,exceeds_n_max,scaled_lo,scaled_hi,"
        "confident,none_count,truncated,truncation_rate,aborted\n";
  std::ofstream ev = run.create("events.csv");
  event_header(ev);
  std::ofstream gc = run.create("gcdf.csv");
  gc << "# schema=1\n"
     << "level,delta,p,L,cond_hits,cond_replicas,cond_p_hat,cond_ci95,"
        "uncond_p_hat,uncond_ci95\n";
  json failed_levels = json::array();
  for (size_t j = 0; j < report.levels.size(); ++j) {
    const LevelReport& l = report.levels[j];
    lv << j << ',' << fmt(l.delta) << ',' << fmt(l.p) << ',' << l.corr.n_low
       << ',' << l.corr.n_high << ',' << (l.corr.exceeds_n_max ? 1 : 0) << ','
       << fmt(l.scaled.lo) << ',' << fmt(l.scaled.hi) << ','
       << (l.scaled.confident ? 1 : 0) << ',' << l.none_count << ','
       << l.truncated << ',' << fmt(l.truncation_rate) << ','
       << (l.aborted ? 1 : 0) << '\n';
    event_row(ev, l.macro_loop, l.p, l.delta, 0.0);
    event_row(ev, l.loop_exists, l.p, l.delta, 0.0);
    for (size_t q = 0; q < l.f_k.size(); ++q)
      event_row(ev, l.f_k[q], l.p, l.delta, double(l.f_k_index[q]));
    for (size_t q = 0; q < l.g_grid.size(); ++q) {
      const EventStats& cond = l.g_conditional[q];
      const EventStats& unc = l.g_unconditional[q];
      gc << j << ',' << fmt(l.delta) << ',' << fmt(l.p) << ','
         << fmt(l.g_grid[q]) << ',' << cond.hits << ',' << cond.replicas
         << ',' << fmt(cond.p_hat) << ',' << fmt(cond.ci95) << ','
         << fmt(unc.p_hat) << ',' << fmt(unc.ci95) << '\n';
    }
    if (l.aborted) failed_levels.push_back(j);
  }
  std::ofstream vd = run.create("verdict.txt");
  vd << to_string(report.verdict) << '\n';
  run.manifest()["verdict"] = to_string(report.verdict);
  run.manifest()["failed_levels"] = failed_levels;
  run.stage_done("sweep");
  return run.finalize(failed_levels.empty() ? 0 : 2);
}

std::vector<Curve> read_loop_dump(const fs::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open loop dump: " + path.string());
  std::vector<Curve> curves;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    int64_t id;
    if (!(ss >> id)) config_error("malformed loop dump line");
    Curve c;
    double x, y;
    while (ss >> x >> y) c.vertices.push_back({x, y, false});
    if (c.vertices.size() < 2) config_error("loop dump line with < 2 vertices");
    c.closed = c.vertices.front().x == c.vertices.back().x &&
               c.vertices.front().y == c.vertices.back().y;
    curves.push_back(std::move(c));
  }
  return curves;
}

int run_metric(const Common& c) {
  auto [cfg, seed, workers] = resolve(c);
  fs::path file = cfg.get_string("file");
  std::string file_b = cfg.get_string("file_b", "");
  double h = cfg.get_double("h", 0.05);
  cfg.finish();
  if (!(h > 0.0)) config_error("h must be positive");
  if (file.is_relative()) file = c.config_path.parent_path() / file;

  std::vector<Curve> curves = read_loop_dump(file);
  RunDir run(c.out_dir, "metric", cfg.resolved(), seed, workers);
  std::ofstream os = run.create("metric.csv");
  os << "# schema=1\n"
     << "i,j,curve_dist\n";
  for (size_t i = 0; i < curves.size(); ++i)
    for (size_t j = i + 1; j < curves.size(); ++j)
      os << i << ',' << j << ',' << fmt(curve_dist(curves[i], curves[j], h))
         << '\n';
  if (!file_b.empty()) {
    fs::path fb = file_b;
    if (fb.is_relative()) fb = c.config_path.parent_path() / fb;
    std::vector<Curve> other = read_loop_dump(fb);
    if (curves.empty() || other.empty())
      config_error("set distance needs non-empty curve sets");
    CurveSet F{curves}, G{other};
    std::ofstream so = run.create("set_dist.csv");
    so << "# schema=1\n"
       << "set_dist\n"
       << fmt(set_dist(F, G, h)) << '\n';
  }
  run.stage_done("metric");
  return run.finalize(0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"triangular-lattice site percolation laboratory"};
  app.require_subcommand(1);

  Common common;
  int rc = 0;
  auto add = [&](const std::string& name, const std::string& desc,
                 int (*fn)(const Common&)) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", common.config_path, "experiment config file")
        ->required();
    sub->add_option("--out", common.out_dir, "results directory")->required();
    sub->add_option("--workers", common.workers, "parallel workers");
    sub->add_option("--seed", common.seed_flag, "master seed (overrides config)");
    sub->callback([&rc, fn, &common]() { rc = fn(common); });
    return sub;
  };
  add("xprob", "crossing probabilities over an (n, p) grid", run_xprob);
  add("corrlen", "correlation-length estimates over a p grid", run_corrlen);
  add("pplus", "density thresholds p+ over an n grid", run_pplus);
  add("loops", "trace interface loops and dump them", run_loops);
  add("events", "Monte Carlo frequency of a named event", run_events);
  add("sweep", "regime sweep and trichotomy verdict", run_sweep_cmd);
  add("metric", "curve distance matrix over a loop dump", run_metric);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return rc;
}
