#include "ccm/scenario.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

namespace ccm {

namespace {

std::string num(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", d);
  return buf;
}

double trace_length(const PathTrace& t) {
  double len = 0;
  for (size_t i = 0; i + 1 < t.points.size(); ++i)
    len += (t.points[i + 1] - t.points[i]).norm();
  return len;
}

/// Rotate a realized shape about its center and rebuild its boundary.
SurfaceShape rotated_shape(const SurfaceShape& s, double angle) {
  SurfaceShape out = s;
  if (s.kind == ShapeKind::Circle) return out;  // rotation is redundant
  out.theta = s.theta + angle;
  const double c = std::cos(angle), sn = std::sin(angle);
  for (auto& p : out.boundary) {
    const Vec2 d = p - s.center;
    p = s.center + Vec2(c * d.x() - sn * d.y(), sn * d.x() + c * d.y());
  }
  return out;
}

}  // namespace

std::string ScenarioReport::to_csv() const {
  std::ostringstream o;
  for (size_t i = 0; i < columns.size(); ++i) o << (i ? "," : "") << columns[i];
  o << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) o << (i ? "," : "") << row[i];
    o << "\n";
  }
  return o.str();
}

std::string ScenarioReport::to_text() const {
  std::ostringstream o;
  o << "scenario " << name << " (" << scenario_kind_name(kind) << ")\n";
  o << to_csv();
  if (!summary.empty()) o << summary << "\n";
  return o.str();
}

SwitchGeometry switch_geometry(const JobConfig& cfg) {
  SwitchGeometry sw;
  sw.has_pad = cfg.has_pad;
  sw.pad_center = cfg.pad_center_cm * 10.0;
  sw.pad_radius = cfg.pad_radius_cm * 10.0;
  for (const auto& c : cfg.obstacles_cm)
    sw.obstacles.push_back({c[0] * 10.0, c[1] * 10.0, c[2] * 10.0});
  return sw;
}

bool reaches_pad(const PathTrace& trace, const SwitchGeometry& sw) {
  if (!sw.has_pad || trace.points.empty()) return false;
  return (trace.points.back() - sw.pad_center).norm() <= sw.pad_radius;
}

bool hits_obstacle(const CandidateArtifacts& art, const SwitchGeometry& sw) {
  if (sw.obstacles.empty()) return false;
  for (const auto& u : art.solution.step_fields) {
    for (const auto& loop : art.loops) {
      for (int id : loop.node_cycle) {
        const Vec2 p = art.mesh.nodes[id] + Vec2(u[2 * id], u[2 * id + 1]);
        for (const auto& ob : sw.obstacles)
          if ((p - Vec2(ob[0], ob[1])).norm() <= ob[2]) return true;
      }
    }
  }
  return false;
}

double minimal_pad_force(const CandidateEvaluator& ev, const DesignVector& v,
                         const SwitchGeometry& sw, double mu, double lo, double hi, double tol) {
  CandidateArtifacts base = ev.prepare(v);
  if (base.penalty) return -1;

  auto reaches = [&](double force) {
    CandidateArtifacts art = base;  // fresh solve from the shared prepared geometry
    AnalyzeOptions opt;
    opt.mu = mu;
    opt.force = force;
    ev.analyze(art, opt);
    return art.analyzed && reaches_pad(art.solution.trace, sw);
  };

  if (!reaches(hi)) return -1;
  if (reaches(lo)) return lo;
  double a = lo, b = hi;
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    (reaches(m) ? b : a) = m;
  }
  return b;
}

ScenarioReport run_scenario(const CandidateEvaluator& ev, const DesignVector& v,
                            const JobConfig& cfg, const std::string& name) {
  const auto it = cfg.scenarios.find(name);
  if (it == cfg.scenarios.end()) throw ConfigError("unknown scenario '" + name + "'");
  const ScenarioSpec& sp = it->second;
  const SwitchGeometry sw = switch_geometry(cfg);

  ScenarioReport rep;
  rep.name = name;
  rep.kind = sp.kind;

  switch (sp.kind) {
    case ScenarioKind::WrongKey: {
      rep.columns = {"case", "converged", "te", "pad_reached", "alarm"};
      auto run_case = [&](const std::string& label, const std::vector<int>& remove,
                          const std::vector<int>& rotate) {
        CandidateArtifacts art = ev.prepare(v);
        if (!art.penalty) {
          std::erase_if(art.surfaces, [&](const SurfaceShape& s) {
            return std::find(remove.begin(), remove.end(), s.id) != remove.end();
          });
          for (auto& s : art.surfaces)
            if (std::find(rotate.begin(), rotate.end(), s.id) != rotate.end())
              s = rotated_shape(s, sp.rotation_rad);
          try {
            art.assignment = classify_and_assign(art.loops, art.surfaces, art.mesh,
                                                 intersection_tol(ev.domain()));
          } catch (const Error&) {
            art.penalty = PenaltyReason::MeshFailure;
          }
        }
        AnalyzeOptions opt;
        opt.record_fields = true;
        ev.analyze(art, opt);
        rep.rows.push_back({label, art.analyzed ? "yes" : "no", num(art.objective),
                            art.analyzed && reaches_pad(art.solution.trace, sw) ? "yes" : "no",
                            art.analyzed && hits_obstacle(art, sw) ? "yes" : "no"});
      };
      run_case("baseline", {}, {});
      std::string label = "modified";
      if (!sp.remove_surfaces.empty() || !sp.rotate_surfaces.empty())
        run_case(label, sp.remove_surfaces, sp.rotate_surfaces);
      rep.summary = "wrong-key case vs baseline";
      break;
    }

    case ScenarioKind::FrictionSweep: {
      rep.columns = {"mu", "min_force_n"};
      const double lo = sp.force_lo_n >= 0 ? sp.force_lo_n : cfg.force_lo_n;
      const double hi = sp.force_hi_n >= 0 ? sp.force_hi_n : cfg.force_hi_n;
      for (double mu : sp.mu_values) {
        const double f = minimal_pad_force(ev, v, sw, mu, std::max(lo, 1e-3), hi, sp.force_tol_n);
        rep.rows.push_back({num(mu), f < 0 ? "unreached" : num(f)});
      }
      rep.summary = "minimum pad-reaching force per friction coefficient";
      break;
    }

    case ScenarioKind::WearSweep: {
      rep.columns = {"wear_percent", "converged", "te", "path_length_mm"};
      const double mu = sp.mu_values.empty() ? cfg.friction_mu : sp.mu_values.front();
      CandidateArtifacts base = ev.prepare(v);
      AnalyzeOptions bopt;
      bopt.mu = mu;
      ev.analyze(base, bopt);
      if (!base.analyzed) {
        rep.rows.push_back({"baseline", "no", num(base.objective), "-"});
        rep.summary = "baseline analysis failed";
        break;
      }
      rep.rows.push_back({"0", "yes", num(base.objective),
                          num(trace_length(base.solution.trace))});
      for (double wpct : sp.wear_percent) {
        std::vector<std::string> row{num(wpct)};
        try {
          const QuadMesh worn = apply_wear(base.mesh, base.solution.contact_region, wpct / 100.0);
          CandidateArtifacts art = ev.prepare(v);
          AnalyzeOptions opt;
          opt.mu = mu;
          opt.mesh_override = &worn;
          ev.analyze(art, opt);
          row.push_back(art.analyzed ? "yes" : "no");
          row.push_back(num(art.objective));
          row.push_back(art.analyzed ? num(trace_length(art.solution.trace)) : "-");
        } catch (const Error& e) {
          row.insert(row.end(), {"no", "-", "-"});
          (void)e;
        }
        rep.rows.push_back(std::move(row));
      }
      rep.summary = "wear shrinks contact-band elements by the given percent";
      break;
    }

    case ScenarioKind::MeshDensity: {
      rep.columns = {"n_ew", "n_el", "elements", "te", "wall_ms"};
      for (const auto& [n_ew, n_el] : sp.mesh_cases) {
        PipelineConfig pc = ev.config();
        pc.mesh.n_ew = n_ew;
        pc.mesh.n_el = n_el;
        CandidateEvaluator dense(ev.domain(), pc);
        const auto t0 = std::chrono::steady_clock::now();
        CandidateArtifacts art = dense.evaluate_full(v);
        const auto t1 = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        rep.rows.push_back({std::to_string(n_ew), std::to_string(n_el),
                            std::to_string(art.mesh.elements.size()), num(art.objective),
                            num(ms)});
      }
      rep.summary = "objective and wall time per mesh density";
      break;
    }
  }
  return rep;
}

}  // namespace ccm
