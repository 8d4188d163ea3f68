#include "ccm/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace ccm {

const char* scenario_kind_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::WrongKey: return "wrong-key";
    case ScenarioKind::FrictionSweep: return "friction-sweep";
    case ScenarioKind::WearSweep: return "wear-sweep";
    case ScenarioKind::MeshDensity: return "mesh-density";
  }
  return "unknown";
}

ScenarioKind scenario_kind_from(const std::string& name) {
  if (name == "wrong-key") return ScenarioKind::WrongKey;
  if (name == "friction-sweep") return ScenarioKind::FrictionSweep;
  if (name == "wear-sweep") return ScenarioKind::WearSweep;
  if (name == "mesh-density") return ScenarioKind::MeshDensity;
  throw ConfigError("unknown scenario kind '" + name + "'");
}

namespace {

// ---- value grammar ----
struct Value {
  enum class Kind { Number, Word, List, Tuple } kind = Kind::Number;
  double number = 0;
  std::string word;
  std::vector<Value> items;
};

struct Cursor {
  const std::string& s;
  size_t pos = 0;
  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
};

Value parse_value(Cursor& c);

Value parse_sequence(Cursor& c, char open, char close, Value::Kind kind) {
  Value v;
  v.kind = kind;
  ++c.pos;  // consume open
  c.skip_ws();
  if (c.pos < c.s.size() && c.s[c.pos] == close) {
    ++c.pos;
    return v;
  }
  while (true) {
    v.items.push_back(parse_value(c));
    c.skip_ws();
    if (c.pos >= c.s.size()) throw ConfigError("unterminated '" + std::string(1, open) + "'");
    if (c.s[c.pos] == ',') {
      ++c.pos;
      continue;
    }
    if (c.s[c.pos] == close) {
      ++c.pos;
      return v;
    }
    throw ConfigError("expected ',' or '" + std::string(1, close) + "' in value");
  }
}

Value parse_value(Cursor& c) {
  c.skip_ws();
  if (c.pos >= c.s.size()) throw ConfigError("missing value");
  const char ch = c.s[c.pos];
  if (ch == '[') return parse_sequence(c, '[', ']', Value::Kind::List);
  if (ch == '(') return parse_sequence(c, '(', ')', Value::Kind::Tuple);
  // number or word token
  const size_t start = c.pos;
  while (c.pos < c.s.size() && !std::isspace(static_cast<unsigned char>(c.s[c.pos])) &&
         c.s[c.pos] != ',' && c.s[c.pos] != ']' && c.s[c.pos] != ')')
    ++c.pos;
  const std::string tok = c.s.substr(start, c.pos - start);
  if (tok.empty()) throw ConfigError("empty value token");
  Value v;
  char* end = nullptr;
  const double num = std::strtod(tok.c_str(), &end);
  if (end && *end == '\0') {
    v.kind = Value::Kind::Number;
    v.number = num;
  } else {
    v.kind = Value::Kind::Word;
    v.word = tok;
  }
  return v;
}

double as_number(const Value& v, const std::string& key) {
  if (v.kind != Value::Kind::Number) throw ConfigError(key + ": expected a number");
  return v.number;
}

int as_int(const Value& v, const std::string& key) {
  const double d = as_number(v, key);
  const int i = int(d);
  if (double(i) != d) throw ConfigError(key + ": expected an integer");
  return i;
}

std::vector<double> as_number_list(const Value& v, const std::string& key) {
  if (v.kind != Value::Kind::List) throw ConfigError(key + ": expected a [list]");
  std::vector<double> out;
  for (const auto& it : v.items) out.push_back(as_number(it, key));
  return out;
}

std::vector<int> as_int_list(const Value& v, const std::string& key) {
  std::vector<int> out;
  for (double d : as_number_list(v, key)) {
    if (double(int(d)) != d) throw ConfigError(key + ": expected integers");
    out.push_back(int(d));
  }
  return out;
}

Vec2 as_pair(const Value& v, const std::string& key) {
  if (v.kind != Value::Kind::Tuple || v.items.size() != 2)
    throw ConfigError(key + ": expected a (x, y) pair");
  return Vec2(as_number(v.items[0], key), as_number(v.items[1], key));
}

std::vector<Vec2> as_pair_list(const Value& v, const std::string& key) {
  if (v.kind != Value::Kind::List) throw ConfigError(key + ": expected a list of pairs");
  std::vector<Vec2> out;
  for (const auto& it : v.items) out.push_back(as_pair(it, key));
  return out;
}

std::pair<double, double> as_range(const Value& v, const std::string& key) {
  const auto lst = as_number_list(v, key);
  if (lst.size() != 2) throw ConfigError(key + ": expected [lo, hi]");
  if (lst[0] > lst[1]) throw ConfigError(key + ": lower bound exceeds upper bound");
  return {lst[0], lst[1]};
}

// ---- canonical formatting ----
std::string fmt(double d) {
  if (std::abs(d) < 1e15 && d == double(static_cast<long long>(d))) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(d));
    return buf;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

std::string fmt(const Vec2& p) { return "(" + fmt(p.x()) + ", " + fmt(p.y()) + ")"; }

template <typename T, typename F>
std::string fmt_list(const std::vector<T>& v, F f) {
  std::string out = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += f(v[i]);
  }
  return out + "]";
}

}  // namespace

JobConfig parse_config(const std::string& text) {
  JobConfig cfg;
  cfg.fixed_vertices.clear();
  cfg.desired_path_mm.clear();

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = line.substr(0, eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    const std::string rhs = line.substr(eq + 1);
    Cursor c{rhs, 0};
    Value v;
    try {
      v = parse_value(c);
      if (!c.eof()) throw ConfigError("trailing characters after value");
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + " (" + key + "): " + e.what());
    }

    auto set_range = [&](double& lo, double& hi) { std::tie(lo, hi) = as_range(v, key); };

    if (key == "domain.nx") cfg.nx = as_int(v, key);
    else if (key == "domain.ny") cfg.ny = as_int(v, key);
    else if (key == "domain.block_size_cm") cfg.block_size_cm = as_number(v, key);
    else if (key == "domain.input_vertex") cfg.input_vertex = as_int(v, key);
    else if (key == "domain.output_vertex") cfg.output_vertex = as_int(v, key);
    else if (key == "domain.fixed_vertices") cfg.fixed_vertices = as_int_list(v, key);
    else if (key == "domain.surface_grid") {
      const auto g = as_int_list(v, key);
      if (g.size() != 2) throw ConfigError(key + ": expected [nx, ny]");
      cfg.surf_grid_x = g[0];
      cfg.surf_grid_y = g[1];
    } else if (key == "domain.force_direction") cfg.force_direction = as_pair(v, key);
    else if (key == "bounds.end_slope_rad") set_range(cfg.slope_lo_rad, cfg.slope_hi_rad);
    else if (key == "bounds.member_width_mm") set_range(cfg.width_lo_mm, cfg.width_hi_mm);
    else if (key == "bounds.thickness_mm") set_range(cfg.thickness_lo_mm, cfg.thickness_hi_mm);
    else if (key == "bounds.vertex_offset_mm") set_range(cfg.offset_lo_mm, cfg.offset_hi_mm);
    else if (key == "bounds.surface_radius_cm") set_range(cfg.radius_lo_cm, cfg.radius_hi_cm);
    else if (key == "bounds.size_factor") set_range(cfg.factor_lo, cfg.factor_hi);
    else if (key == "bounds.orientation_rad") set_range(cfg.orient_lo_rad, cfg.orient_hi_rad);
    else if (key == "bounds.input_force_n") set_range(cfg.force_lo_n, cfg.force_hi_n);
    else if (key == "material.youngs_modulus_n_mm2") cfg.youngs_modulus_n_mm2 = as_number(v, key);
    else if (key == "material.poisson_ratio") cfg.poisson_ratio = as_number(v, key);
    else if (key == "mesh.n_el") cfg.n_el = as_int(v, key);
    else if (key == "mesh.n_ew") cfg.n_ew = as_int(v, key);
    else if (key == "fem.load_steps") cfg.load_steps = as_int(v, key);
    else if (key == "fem.max_newton_iters") cfg.max_newton_iters = as_int(v, key);
    else if (key == "fem.residual_rel_tol") cfg.residual_rel_tol = as_number(v, key);
    else if (key == "fem.max_halvings") cfg.max_halvings = as_int(v, key);
    else if (key == "fem.max_augmentations") cfg.max_augmentations = as_int(v, key);
    else if (key == "objective.weight_alpha") cfg.weight_alpha = as_number(v, key);
    else if (key == "objective.weight_beta") cfg.weight_beta = as_number(v, key);
    else if (key == "objective.weight_length") cfg.weight_length = as_number(v, key);
    else if (key == "objective.weight_theta") cfg.weight_theta = as_number(v, key);
    else if (key == "objective.fourier_terms") cfg.fourier_terms = as_int(v, key);
    else if (key == "objective.desired_path_mm") cfg.desired_path_mm = as_pair_list(v, key);
    else if (key == "contact.friction_mu") cfg.friction_mu = as_number(v, key);
    else if (key == "search.mutation_probability") cfg.mutation_probability = as_number(v, key);
    else if (key == "search.max_iterations") cfg.max_iterations = as_int(v, key);
    else if (key == "search.seed") cfg.seed = std::uint64_t(as_number(v, key));
    else if (key == "search.te_threshold") cfg.te_threshold = as_number(v, key);
    else if (key == "search.parallel_mutants") cfg.parallel_mutants = as_int(v, key);
    else if (key == "pad.center_cm") {
      cfg.pad_center_cm = as_pair(v, key);
      cfg.has_pad = true;
    } else if (key == "pad.radius_cm") {
      cfg.pad_radius_cm = as_number(v, key);
      cfg.has_pad = true;
    } else if (key == "obstacles.circles_cm") {
      if (v.kind != Value::Kind::List) throw ConfigError(key + ": expected a list");
      for (const auto& it : v.items) {
        if (it.kind != Value::Kind::Tuple || it.items.size() != 3)
          throw ConfigError(key + ": expected (x, y, r) tuples");
        cfg.obstacles_cm.push_back({as_number(it.items[0], key), as_number(it.items[1], key),
                                    as_number(it.items[2], key)});
      }
    } else if (key.rfind("scenario.", 0) == 0) {
      const std::string rest = key.substr(9);
      const size_t dot = rest.find('.');
      if (dot == std::string::npos)
        throw ConfigError("line " + std::to_string(lineno) + ": expected scenario.<name>.<field>");
      const std::string name = rest.substr(0, dot);
      const std::string field = rest.substr(dot + 1);
      ScenarioSpec& sp = cfg.scenarios[name];
      if (field == "kind") {
        if (v.kind != Value::Kind::Word) throw ConfigError(key + ": expected a kind word");
        sp.kind = scenario_kind_from(v.word);
      } else if (field == "remove_surfaces") {
        for (int id : as_int_list(v, key)) sp.remove_surfaces.push_back(id - 1);
      } else if (field == "rotate_surfaces") {
        for (int id : as_int_list(v, key)) sp.rotate_surfaces.push_back(id - 1);
      } else if (field == "rotation_rad") sp.rotation_rad = as_number(v, key);
      else if (field == "mu_values") sp.mu_values = as_number_list(v, key);
      else if (field == "wear_percent") sp.wear_percent = as_number_list(v, key);
      else if (field == "mesh_cases") {
        for (const auto& p : as_pair_list(v, key))
          sp.mesh_cases.push_back({int(p.x()), int(p.y())});
      } else if (field == "force_range_n") {
        std::tie(sp.force_lo_n, sp.force_hi_n) = as_range(v, key);
      } else if (field == "force_tol_n") sp.force_tol_n = as_number(v, key);
      else throw ConfigError("unknown scenario field '" + field + "'");
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }

  if (cfg.fixed_vertices.empty())
    throw ConfigError("config: domain.fixed_vertices must not be empty");
  if (cfg.desired_path_mm.size() < 2)
    throw ConfigError("config: objective.desired_path_mm needs at least 2 waypoints");
  return cfg;
}

JobConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_text(const JobConfig& cfg) {
  std::ostringstream o;
  auto kv = [&](const std::string& k, const std::string& v) { o << k << " = " << v << "\n"; };
  auto kd = [&](const std::string& k, double v) { kv(k, fmt(v)); };
  auto ki = [&](const std::string& k, long long v) { kv(k, fmt(double(v))); };
  auto krange = [&](const std::string& k, double lo, double hi) {
    kv(k, "[" + fmt(lo) + ", " + fmt(hi) + "]");
  };

  ki("domain.nx", cfg.nx);
  ki("domain.ny", cfg.ny);
  kd("domain.block_size_cm", cfg.block_size_cm);
  ki("domain.input_vertex", cfg.input_vertex);
  ki("domain.output_vertex", cfg.output_vertex);
  kv("domain.fixed_vertices",
     fmt_list(cfg.fixed_vertices, [](int i) { return fmt(double(i)); }));
  kv("domain.surface_grid",
     "[" + fmt(double(cfg.surf_grid_x)) + ", " + fmt(double(cfg.surf_grid_y)) + "]");
  kv("domain.force_direction", fmt(cfg.force_direction));
  krange("bounds.end_slope_rad", cfg.slope_lo_rad, cfg.slope_hi_rad);
  krange("bounds.member_width_mm", cfg.width_lo_mm, cfg.width_hi_mm);
  krange("bounds.thickness_mm", cfg.thickness_lo_mm, cfg.thickness_hi_mm);
  krange("bounds.vertex_offset_mm", cfg.offset_lo_mm, cfg.offset_hi_mm);
  krange("bounds.surface_radius_cm", cfg.radius_lo_cm, cfg.radius_hi_cm);
  krange("bounds.size_factor", cfg.factor_lo, cfg.factor_hi);
  krange("bounds.orientation_rad", cfg.orient_lo_rad, cfg.orient_hi_rad);
  krange("bounds.input_force_n", cfg.force_lo_n, cfg.force_hi_n);
  kd("material.youngs_modulus_n_mm2", cfg.youngs_modulus_n_mm2);
  kd("material.poisson_ratio", cfg.poisson_ratio);
  ki("mesh.n_el", cfg.n_el);
  ki("mesh.n_ew", cfg.n_ew);
  ki("fem.load_steps", cfg.load_steps);
  ki("fem.max_newton_iters", cfg.max_newton_iters);
  kd("fem.residual_rel_tol", cfg.residual_rel_tol);
  ki("fem.max_halvings", cfg.max_halvings);
  ki("fem.max_augmentations", cfg.max_augmentations);
  kd("objective.weight_alpha", cfg.weight_alpha);
  kd("objective.weight_beta", cfg.weight_beta);
  kd("objective.weight_length", cfg.weight_length);
  kd("objective.weight_theta", cfg.weight_theta);
  ki("objective.fourier_terms", cfg.fourier_terms);
  kv("objective.desired_path_mm", fmt_list(cfg.desired_path_mm, [](const Vec2& p) {
       return fmt(p);
     }));
  kd("contact.friction_mu", cfg.friction_mu);
  kd("search.mutation_probability", cfg.mutation_probability);
  ki("search.max_iterations", cfg.max_iterations);
  ki("search.seed", (long long)cfg.seed);
  kd("search.te_threshold", cfg.te_threshold);
  ki("search.parallel_mutants", cfg.parallel_mutants);
  if (cfg.has_pad) {
    kv("pad.center_cm", fmt(cfg.pad_center_cm));
    kd("pad.radius_cm", cfg.pad_radius_cm);
  }
  if (!cfg.obstacles_cm.empty()) {
    kv("obstacles.circles_cm", fmt_list(cfg.obstacles_cm, [](const std::array<double, 3>& c) {
         return "(" + fmt(c[0]) + ", " + fmt(c[1]) + ", " + fmt(c[2]) + ")";
       }));
  }
  for (const auto& [name, sp] : cfg.scenarios) {
    const std::string pre = "scenario." + name + ".";
    kv(pre + "kind", scenario_kind_name(sp.kind));
    if (!sp.remove_surfaces.empty())
      kv(pre + "remove_surfaces",
         fmt_list(sp.remove_surfaces, [](int i) { return fmt(double(i + 1)); }));
    if (!sp.rotate_surfaces.empty())
      kv(pre + "rotate_surfaces",
         fmt_list(sp.rotate_surfaces, [](int i) { return fmt(double(i + 1)); }));
    if (sp.rotation_rad != 1.0) kd(pre + "rotation_rad", sp.rotation_rad);
    if (!sp.mu_values.empty())
      kv(pre + "mu_values", fmt_list(sp.mu_values, [](double d) { return fmt(d); }));
    if (!sp.wear_percent.empty())
      kv(pre + "wear_percent", fmt_list(sp.wear_percent, [](double d) { return fmt(d); }));
    if (!sp.mesh_cases.empty())
      kv(pre + "mesh_cases", fmt_list(sp.mesh_cases, [](const std::pair<int, int>& p) {
           return "(" + fmt(double(p.first)) + ", " + fmt(double(p.second)) + ")";
         }));
    if (sp.force_lo_n >= 0)
      kv(pre + "force_range_n", "[" + fmt(sp.force_lo_n) + ", " + fmt(sp.force_hi_n) + "]");
    if (sp.force_tol_n != 0.05) kd(pre + "force_tol_n", sp.force_tol_n);
  }
  return o.str();
}

void write_config(const JobConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config file '" + path + "'");
  out << canonical_text(cfg);
}

DesignDomain make_domain(const JobConfig& cfg) {
  VariableBounds b;
  b.slope_lo = cfg.slope_lo_rad;
  b.slope_hi = cfg.slope_hi_rad;
  b.width_lo = cfg.width_lo_mm;
  b.width_hi = cfg.width_hi_mm;
  b.thickness_lo = cfg.thickness_lo_mm;
  b.thickness_hi = cfg.thickness_hi_mm;
  b.offset_lo = cfg.offset_lo_mm;
  b.offset_hi = cfg.offset_hi_mm;
  // Surface centers range over the whole domain.
  b.center_x_lo = 0;
  b.center_x_hi = cfg.nx * cfg.block_size_cm * 10.0;
  b.center_y_lo = 0;
  b.center_y_hi = cfg.ny * cfg.block_size_cm * 10.0;
  b.radius_lo = cfg.radius_lo_cm * 10.0;
  b.radius_hi = cfg.radius_hi_cm * 10.0;
  b.factor_lo = cfg.factor_lo;
  b.factor_hi = cfg.factor_hi;
  b.orient_lo = cfg.orient_lo_rad;
  b.orient_hi = cfg.orient_hi_rad;
  b.force_lo = cfg.force_lo_n;
  b.force_hi = cfg.force_hi_n;

  std::vector<int> fixed;
  for (int id : cfg.fixed_vertices) fixed.push_back(id - 1);
  return build_grid_domain(cfg.nx, cfg.ny, cfg.block_size_cm * 10.0, cfg.input_vertex - 1,
                           cfg.output_vertex - 1, fixed, cfg.surf_grid_x, cfg.surf_grid_y, b);
}

PipelineConfig make_pipeline_config(const JobConfig& cfg) {
  PipelineConfig p;
  p.mesh.n_el = cfg.n_el;
  p.mesh.n_ew = cfg.n_ew;
  p.material.E = cfg.youngs_modulus_n_mm2;
  p.material.nu = cfg.poisson_ratio;
  p.fem.rel_tol = cfg.residual_rel_tol;
  p.fem.max_newton_iters = cfg.max_newton_iters;
  p.fem.max_halvings = cfg.max_halvings;
  p.fem.max_augmentations = cfg.max_augmentations;
  p.load_steps = cfg.load_steps;
  p.force_direction = cfg.force_direction;
  p.weights = {cfg.weight_alpha, cfg.weight_beta, cfg.weight_length, cfg.weight_theta};
  p.fourier_terms = cfg.fourier_terms;
  p.desired_path = cfg.desired_path_mm;
  p.friction_mu = cfg.friction_mu;
  return p;
}

SearchConfig make_search_config(const JobConfig& cfg) {
  SearchConfig s;
  s.mutation_p = cfg.mutation_probability;
  s.max_iterations = cfg.max_iterations;
  s.seed = cfg.seed;
  s.te_threshold = cfg.te_threshold;
  s.parallel_mutants = cfg.parallel_mutants;
  return s;
}

}  // namespace ccm
