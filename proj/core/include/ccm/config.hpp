#pragma once

// Job configuration: a human-editable key/value text format with explicit
// units in key names (cm for domain-scale data, mm for member-scale data).
// Values are scalars, words, [lists], or (tuples).  Writing is canonical:
// write(read(write(c))) == write(c).

#include <array>
#include <map>
#include <string>
#include <vector>

#include "ccm/domain.hpp"
#include "ccm/pipeline.hpp"
#include "ccm/search.hpp"

namespace ccm {

enum class ScenarioKind { WrongKey, FrictionSweep, WearSweep, MeshDensity };

const char* scenario_kind_name(ScenarioKind k);
ScenarioKind scenario_kind_from(const std::string& name);

/// One study over an evolved (or fixed) design.  Surface ids are 1-based in
/// the file, matching the S1..Sk naming; stored 0-based here.
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::WrongKey;
  std::vector<int> remove_surfaces;
  std::vector<int> rotate_surfaces;
  double rotation_rad = 1.0;
  std::vector<double> mu_values;
  std::vector<double> wear_percent;
  std::vector<std::pair<int, int>> mesh_cases;  // (n_ew, n_el)
  double force_lo_n = -1, force_hi_n = -1;      // bisection range; <0 = use bounds
  double force_tol_n = 0.05;
};

struct JobConfig {
  // domain (vertex ids are 1-based in the file, stored 1-based here)
  int nx = 3, ny = 3;
  double block_size_cm = 15.0;
  int input_vertex = 1;
  int output_vertex = 2;
  std::vector<int> fixed_vertices;
  int surf_grid_x = 3, surf_grid_y = 3;
  Vec2 force_direction{1, 0};

  // variable bounds in the units of the tables
  double slope_lo_rad = -0.5, slope_hi_rad = 0.5;
  double width_lo_mm = 2, width_hi_mm = 6;
  double thickness_lo_mm = 6, thickness_hi_mm = 6;
  double offset_lo_mm = -20, offset_hi_mm = 20;
  double radius_lo_cm = 1, radius_hi_cm = 5;
  double factor_lo = 0.1, factor_hi = 1.0;
  double orient_lo_rad = 0, orient_hi_rad = kPi;
  double force_lo_n = 0, force_hi_n = 10;

  double youngs_modulus_n_mm2 = 20.0;
  double poisson_ratio = 0.33;

  int n_el = 20, n_ew = 4;

  int load_steps = 20;
  int max_newton_iters = 25;
  double residual_rel_tol = 1e-6;
  int max_halvings = 6;
  int max_augmentations = 20;

  double weight_alpha = 100, weight_beta = 100, weight_length = 0.1, weight_theta = 0;
  int fourier_terms = 100;
  std::vector<Vec2> desired_path_mm;
  double friction_mu = 0.0;

  double mutation_probability = 0.08;
  int max_iterations = 1000;
  std::uint64_t seed = 1;
  double te_threshold = -1;
  int parallel_mutants = 1;

  bool has_pad = false;
  Vec2 pad_center_cm{0, 0};
  double pad_radius_cm = 0;
  std::vector<std::array<double, 3>> obstacles_cm;  // x, y, r

  std::map<std::string, ScenarioSpec> scenarios;
};

JobConfig parse_config(const std::string& text);
JobConfig read_config(const std::string& path);
std::string canonical_text(const JobConfig& cfg);
void write_config(const JobConfig& cfg, const std::string& path);

/// Engine builders (cm keys become mm, vertex ids become 0-based).
DesignDomain make_domain(const JobConfig& cfg);
PipelineConfig make_pipeline_config(const JobConfig& cfg);
SearchConfig make_search_config(const JobConfig& cfg);

}  // namespace ccm
