#include "mmwcache/experiment.hpp"

#include "mmwcache/rng.hpp"
#include "mmwcache/units.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mmwcache {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

const std::set<std::string>& sweepable_axes() {
  static const std::set<std::string> axes = {"lambda_u_per_km2", "d_l_m", "rate_bps",
                                             "zipf_epsilon"};
  return axes;
}

// Reads one JSON section with typed accessors; unknown keys are rejected so
// typos fail loudly.
class Section {
 public:
  Section(const json& root, const std::string& name) : name_(name) {
    if (root.contains(name)) {
      if (!root.at(name).is_object())
        throw std::invalid_argument("spec field '" + name + "' must be an object");
      obj_ = root.at(name);
    }
  }

  double number(const std::string& key, double fallback) {
    seen_.insert(key);
    if (!obj_.contains(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_number())
      throw std::invalid_argument("spec field '" + name_ + "." + key + "' must be a number");
    return v.get<double>();
  }

  long integer(const std::string& key, long fallback) {
    seen_.insert(key);
    if (!obj_.contains(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_number_integer())
      throw std::invalid_argument("spec field '" + name_ + "." + key + "' must be an integer");
    return v.get<long>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    seen_.insert(key);
    if (!obj_.contains(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_string())
      throw std::invalid_argument("spec field '" + name_ + "." + key + "' must be a string");
    return v.get<std::string>();
  }

  bool has(const std::string& key) const { return obj_.contains(key); }
  const json& raw(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key()))
        throw std::invalid_argument("unknown spec field '" + name_ + "." + it.key() + "'");
  }

 private:
  std::string name_;
  json obj_ = json::object();
  std::set<std::string> seen_;
};

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open spec file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return json::object();  // blank file: report missing fields
  json j = json::parse(text);  // throws with line/column info on bad syntax
  if (!j.is_object()) throw std::invalid_argument("spec file must contain a JSON object");
  return j;
}

NetworkConfig read_config(const json& root) {
  Section s(root, "config");
  NetworkConfig def;  // reference defaults
  NetworkConfig cfg;
  cfg.lambda_r = s.number("lambda_r_per_km2", def.lambda_r * 1e6) * 1e-6;
  cfg.lambda_u = s.number("lambda_u_per_km2", def.lambda_u * 1e6) * 1e-6;
  cfg.rho = s.number("rho", def.rho);
  cfg.p_c = s.number("p_c_w", def.p_c);
  cfg.p_d = s.number("p_d_w", def.p_d);
  cfg.p_b = s.number("p_b_w", def.p_b);
  cfg.f_c_cell = s.number("f_c_cell_hz", def.f_c_cell);
  cfg.f_c_mm = s.number("f_c_mm_hz", def.f_c_mm);
  cfg.b_c = s.number("b_c_hz", def.b_c);
  cfg.b_d = s.number("b_d_hz", def.b_d);
  cfg.alpha_c = s.number("alpha_c", def.alpha_c);
  cfg.alpha_l = s.number("alpha_l", def.alpha_l);
  cfg.alpha_n = s.number("alpha_n", def.alpha_n);
  cfg.d_l = s.number("d_l_m", def.d_l);
  cfg.d_r = s.number("d_r_m", def.d_r);
  cfg.g_m = db_to_linear(s.number("g_m_db", linear_to_db(def.g_m)));
  cfg.g_s = db_to_linear(s.number("g_s_db", linear_to_db(def.g_s)));
  cfg.delta_theta = deg_to_rad(s.number("delta_theta_deg", def.delta_theta * 180.0 / kPi));
  cfg.g_t = db_to_linear(s.number("g_t_db", linear_to_db(def.g_t)));
  cfg.g_r = db_to_linear(s.number("g_r_db", linear_to_db(def.g_r)));
  cfg.n_o = dbm_per_hz_to_w_per_hz(
      s.number("n_o_dbm_per_hz", linear_to_db(def.n_o) + 30.0));
  cfg.f_n = db_to_linear(s.number("f_n_db", linear_to_db(def.f_n)));
  cfg.sim_radius = s.number("sim_radius_m", def.sim_radius);
  s.finish();
  cfg.validate();
  return cfg;
}

ContentLibrary read_library(const json& root) {
  Section s(root, "library");
  ContentLibrary def;
  ContentLibrary lib;
  lib.n_files = static_cast<int>(s.integer("n_files", def.n_files));
  lib.zipf_epsilon = s.number("zipf_epsilon", def.zipf_epsilon);
  lib.m_d = static_cast<int>(s.integer("m_d", def.m_d));
  lib.m_e = static_cast<int>(s.integer("m_e", def.m_e));
  if (s.has("rate_bps") && s.raw("rate_bps").is_array()) {
    lib.rate_bps = s.raw("rate_bps").get<std::vector<double>>();
  } else {
    lib.rate_bps.assign(lib.n_files, s.number("rate_bps", 1e9));
  }
  s.finish();
  lib.validate();
  return lib;
}

AnalyticOptions read_analytic(const json& root) {
  Section s(root, "analytic");
  AnalyticOptions opt;
  opt.quad_rel_tol = s.number("quad_rel_tol", opt.quad_rel_tol);
  const std::string kind = s.text("laplace_integrand", "normalized");
  if (kind == "normalized")
    opt.integrand = LaplaceIntegrand::Normalized;
  else if (kind == "raw")
    opt.integrand = LaplaceIntegrand::Raw;
  else
    throw std::invalid_argument(
        "spec field 'analytic.laplace_integrand' must be 'normalized' or 'raw'");
  if (!(opt.quad_rel_tol > 0 && opt.quad_rel_tol < 1e-2))
    throw std::invalid_argument("spec field 'analytic.quad_rel_tol' out of range");
  s.finish();
  return opt;
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

void apply_axis(const std::string& name, double value, NetworkConfig& cfg, ContentLibrary& lib) {
  if (name == "lambda_u_per_km2") {
    cfg.lambda_u = value * 1e-6;
  } else if (name == "d_l_m") {
    cfg.d_l = value;
  } else if (name == "rate_bps") {
    lib.rate_bps.assign(lib.n_files, value);
  } else if (name == "zipf_epsilon") {
    lib.zipf_epsilon = value;
  } else {
    throw std::invalid_argument("unknown sweep axis '" + name + "'");
  }
}

ModelConfig load_model_config(const std::string& path) {
  const json root = parse_file(path);
  for (auto it = root.begin(); it != root.end(); ++it) {
    const std::string& k = it.key();
    if (k != "config" && k != "library" && k != "analytic" && k != "sweep" && k != "systems" &&
        k != "trials" && k != "base_seed" && k != "output")
      throw std::invalid_argument("unknown spec field '" + k + "'");
  }
  ModelConfig mc;
  mc.config = read_config(root);
  mc.library = read_library(root);
  mc.analytic = read_analytic(root);
  return mc;
}

ExperimentSpec load_spec(const std::string& path) {
  const json root = parse_file(path);

  std::vector<std::string> missing;
  if (!root.contains("sweep")) missing.push_back("sweep");
  if (!root.contains("trials")) missing.push_back("trials");
  if (!missing.empty()) {
    std::string msg = "experiment spec is missing required fields:";
    for (const std::string& f : missing) msg += " " + f;
    throw std::invalid_argument(msg);
  }

  ExperimentSpec spec;
  const ModelConfig mc = load_model_config(path);
  spec.config = mc.config;
  spec.library = mc.library;
  spec.analytic = mc.analytic;

  const json& sweep = root.at("sweep");
  if (!sweep.is_object()) throw std::invalid_argument("spec field 'sweep' must be an object");
  for (auto it = sweep.begin(); it != sweep.end(); ++it) {
    if (!sweepable_axes().count(it.key()))
      throw std::invalid_argument("sweep axis '" + it.key() + "' is not sweepable");
    if (!it.value().is_array() || it.value().empty())
      throw std::invalid_argument("sweep axis '" + it.key() + "' must be a nonempty array");
    SweepAxis axis;
    axis.name = it.key();
    for (const json& v : it.value()) {
      if (!v.is_number() || !std::isfinite(v.get<double>()))
        throw std::invalid_argument("sweep axis '" + it.key() + "' holds a non-finite value");
      axis.values.push_back(v.get<double>());
    }
    spec.sweep.push_back(std::move(axis));
  }
  if (spec.sweep.size() > 2)
    throw std::invalid_argument("at most two sweep axes are supported (got " +
                                std::to_string(spec.sweep.size()) + ")");
  // Every sweep value must produce a valid model.
  for (const SweepAxis& axis : spec.sweep) {
    for (double v : axis.values) {
      NetworkConfig c = spec.config;
      ContentLibrary l = spec.library;
      try {
        apply_axis(axis.name, v, c, l);
        c.validate();
        l.validate();
      } catch (const std::exception& e) {
        throw std::invalid_argument("sweep axis '" + axis.name + "' value " + fmt(v) +
                                    " is invalid: " + e.what());
      }
    }
  }

  if (root.contains("systems")) {
    spec.systems.clear();
    if (!root.at("systems").is_array())
      throw std::invalid_argument("spec field 'systems' must be an array");
    for (const json& v : root.at("systems")) {
      const std::string name = v.get<std::string>();
      if (name == "S-1")
        spec.systems.push_back(System::S1);
      else if (name == "S-2")
        spec.systems.push_back(System::S2);
      else
        throw std::invalid_argument("spec field 'systems' holds unknown system '" + name + "'");
    }
    if (spec.systems.empty()) throw std::invalid_argument("spec field 'systems' is empty");
  }

  spec.trials = root.at("trials").get<long>();
  if (spec.trials < 1) throw std::invalid_argument("spec field 'trials' must be at least 1");
  if (root.contains("base_seed")) spec.base_seed = root.at("base_seed").get<uint64_t>();
  if (root.contains("output")) spec.output = root.at("output").get<std::string>();
  return spec;
}

void write_spec(const ExperimentSpec& spec, const std::string& path) {
  json root;
  json cfg;
  const NetworkConfig& c = spec.config;
  cfg["lambda_r_per_km2"] = c.lambda_r * 1e6;
  cfg["lambda_u_per_km2"] = c.lambda_u * 1e6;
  cfg["rho"] = c.rho;
  cfg["p_c_w"] = c.p_c;
  cfg["p_d_w"] = c.p_d;
  cfg["p_b_w"] = c.p_b;
  cfg["f_c_cell_hz"] = c.f_c_cell;
  cfg["f_c_mm_hz"] = c.f_c_mm;
  cfg["b_c_hz"] = c.b_c;
  cfg["b_d_hz"] = c.b_d;
  cfg["alpha_c"] = c.alpha_c;
  cfg["alpha_l"] = c.alpha_l;
  cfg["alpha_n"] = c.alpha_n;
  cfg["d_l_m"] = c.d_l;
  cfg["d_r_m"] = c.d_r;
  cfg["g_m_db"] = linear_to_db(c.g_m);
  cfg["g_s_db"] = linear_to_db(c.g_s);
  cfg["delta_theta_deg"] = c.delta_theta * 180.0 / kPi;
  cfg["g_t_db"] = linear_to_db(c.g_t);
  cfg["g_r_db"] = linear_to_db(c.g_r);
  cfg["n_o_dbm_per_hz"] = linear_to_db(c.n_o) + 30.0;
  cfg["f_n_db"] = linear_to_db(c.f_n);
  cfg["sim_radius_m"] = c.sim_radius;
  root["config"] = cfg;

  json lib;
  lib["n_files"] = spec.library.n_files;
  lib["zipf_epsilon"] = spec.library.zipf_epsilon;
  bool uniform = true;
  for (double r : spec.library.rate_bps) uniform = uniform && r == spec.library.rate_bps[0];
  if (uniform)
    lib["rate_bps"] = spec.library.rate_bps[0];
  else
    lib["rate_bps"] = spec.library.rate_bps;
  lib["m_d"] = spec.library.m_d;
  lib["m_e"] = spec.library.m_e;
  root["library"] = lib;

  json an;
  an["quad_rel_tol"] = spec.analytic.quad_rel_tol;
  an["laplace_integrand"] =
      spec.analytic.integrand == LaplaceIntegrand::Normalized ? "normalized" : "raw";
  root["analytic"] = an;

  json sweep = json::object();
  for (const SweepAxis& axis : spec.sweep) sweep[axis.name] = axis.values;
  root["sweep"] = sweep;

  json systems = json::array();
  for (System s : spec.systems) systems.push_back(system_name(s));
  root["systems"] = systems;
  root["trials"] = spec.trials;
  root["base_seed"] = spec.base_seed;
  root["output"] = spec.output;

  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write spec file: " + path);
  out << root.dump(2) << "\n";
}

std::string csv_header(const ExperimentSpec& spec) {
  std::string h;
  for (const SweepAxis& axis : spec.sweep) h += axis.name + ",";
  h += "system,sp,sp_ci,op_d,sop_d,ee_total,ee_d2d,p_s,p_d_analytic,sp_analytic,trials,seed,status";
  return h;
}

int run_experiment(const ExperimentSpec& spec) {
  std::ofstream out(spec.output);
  if (!out) throw std::invalid_argument("cannot open output file: " + spec.output);
  out << csv_header(spec) << "\n";
  out.flush();

  // Cartesian sweep, first axis outermost; rows appear in sweep order.
  std::vector<std::vector<double>> points;
  if (spec.sweep.empty()) {
    points.push_back({});
  } else if (spec.sweep.size() == 1) {
    for (double v : spec.sweep[0].values) points.push_back({v});
  } else {
    for (double a : spec.sweep[0].values)
      for (double b : spec.sweep[1].values) points.push_back({a, b});
  }

  int failures = 0;
  for (size_t p = 0; p < points.size(); ++p) {
    for (size_t s = 0; s < spec.systems.size(); ++s) {
      const System system = spec.systems[s];
      const uint64_t seed = derive_seed(spec.base_seed, p * 4 + s);
      std::string prefix;
      for (double v : points[p]) prefix += fmt(v) + ",";
      prefix += system_name(system);
      try {
        NetworkConfig cfg = spec.config;
        ContentLibrary lib = spec.library;
        for (size_t a = 0; a < points[p].size(); ++a)
          apply_axis(spec.sweep[a].name, points[p][a], cfg, lib);

        const DerivedConstants dc = derive_constants(cfg, lib);
        CachingPolicy policy;
        std::vector<double> radii;
        if (system == System::S1) {
          policy = optimize_caching(placement_distances(dc, cfg, lib), lib, cfg);
          radii = association_thresholds(policy, dc, lib, cfg).search_radius;
        } else {
          policy = baseline_hitmax_caching(lib, cfg);
          radii.assign(lib.n_files, cfg.d_r);
        }
        const AnalyticReport an = overall_report(policy, radii, cfg, lib, spec.analytic);
        const MetricsReport mc = run_campaign(cfg, lib, policy, system, spec.trials, seed);

        out << prefix << "," << fmt(mc.sp.value) << "," << fmt(mc.sp.ci) << ","
            << fmt(mc.op_d.value) << "," << fmt(mc.sop_d.value) << ","
            << (mc.ee_total ? fmt(*mc.ee_total) : "") << ","
            << (mc.ee_d2d ? fmt(*mc.ee_d2d) : "") << "," << fmt(an.p_s) << "," << fmt(an.p_d)
            << "," << fmt(an.sp_total) << "," << mc.trials << "," << seed << ",ok\n";
      } catch (const std::exception& e) {
        ++failures;
        std::cerr << "sweep point failed (" << prefix << "): " << e.what() << "\n";
        out << prefix << ",,,,,,,,,," << spec.trials << "," << seed << ",failed\n";
      }
      out.flush();
    }
  }
  return failures;
}

std::string compare_report(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw std::invalid_argument("cannot open CSV file: " + csv_path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("CSV file is empty: " + csv_path);
  const std::vector<std::string> header = split_csv_line(line);
  auto column = [&](const std::string& name) {
    for (size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw std::invalid_argument("CSV is missing column '" + name + "'");
  };
  const size_t c_system = column("system");
  const size_t c_sp = column("sp");
  const size_t c_sop = column("sop_d");
  const size_t c_ee = column("ee_d2d");
  const size_t c_status = column("status");

  struct PointRow {
    std::optional<double> sp, sop, ee;
  };
  std::map<std::string, std::map<std::string, PointRow>> by_point;  // point -> system -> metrics
  std::vector<std::string> point_order;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw std::invalid_argument("CSV row has " + std::to_string(cells.size()) +
                                  " cells, expected " + std::to_string(header.size()));
    if (cells[c_status] != "ok") continue;
    std::string point;
    for (size_t i = 0; i < c_system; ++i) {
      if (i) point += " ";
      point += header[i] + "=" + cells[i];
    }
    if (!by_point.count(point)) point_order.push_back(point);
    PointRow row{parse_double(cells[c_sp]), parse_double(cells[c_sop]),
                 parse_double(cells[c_ee])};
    by_point[point][cells[c_system]] = row;
  }

  std::ostringstream os;
  double sum_sp = 0, sum_sop = 0, sum_ee = 0;
  long n_sp = 0, n_sop = 0, n_ee = 0;
  for (const std::string& point : point_order) {
    const auto& systems = by_point[point];
    if (!systems.count("S-1") || !systems.count("S-2"))
      throw std::invalid_argument("CSV point (" + point + ") lacks one of the systems S-1/S-2");
    const PointRow& a = systems.at("S-1");
    const PointRow& b = systems.at("S-2");
    os << (point.empty() ? "point" : point) << ": ";
    auto ratio = [&os](const char* name, std::optional<double> x, std::optional<double> y,
                       double& acc, long& n) {
      os << name << "=";
      if (x && y && *y != 0) {
        const double r = *x / *y;
        os << fmt(r);
        acc += r;
        ++n;
      } else {
        os << "n/a";
      }
      os << " ";
    };
    ratio("sp_ratio", a.sp, b.sp, sum_sp, n_sp);
    ratio("sop_d_ratio", a.sop, b.sop, sum_sop, n_sop);
    ratio("ee_d2d_ratio", a.ee, b.ee, sum_ee, n_ee);
    os << "\n";
  }
  if (point_order.empty()) throw std::invalid_argument("CSV holds no completed rows");
  os << "mean: ";
  os << "sp_ratio=" << (n_sp ? fmt(sum_sp / n_sp) : "n/a") << " ";
  os << "sop_d_ratio=" << (n_sop ? fmt(sum_sop / n_sop) : "n/a") << " ";
  os << "ee_d2d_ratio=" << (n_ee ? fmt(sum_ee / n_ee) : "n/a") << "\n";
  return os.str();
}

}  // namespace mmwcache
