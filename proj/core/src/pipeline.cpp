#include "ccm/pipeline.hpp"

#include <algorithm>

namespace ccm {

CandidateEvaluator::CandidateEvaluator(DesignDomain domain, PipelineConfig cfg)
    : domain_(std::move(domain)), cfg_(std::move(cfg)) {
  if (cfg_.desired_path.size() < 2)
    throw ConfigError("pipeline: desired path needs at least 2 waypoints");
  auto d = describe_path(cfg_.desired_path, cfg_.fourier_terms);
  if (!d) throw ConfigError("pipeline: desired path cannot be closed into a simple polygon");
  desired_ = std::move(*d);
}

CandidateArtifacts CandidateEvaluator::prepare(const DesignVector& v) const {
  CandidateArtifacts art;
  art.topology = filter_candidate(domain_, decode(domain_, v, cfg_.mesh.n_el));

  // Meshing may drop fully-consumed members, which can disconnect the
  // skeleton; re-filter and re-mesh until stable.
  for (int guard = 0; guard <= domain_.n_members(); ++guard) {
    art.validity = validate(domain_, art.topology);
    if (!art.validity.valid()) {
      art.penalty = !art.validity.input_present    ? PenaltyReason::MissingInputPort
                    : !art.validity.output_present ? PenaltyReason::MissingOutputPort
                                                   : PenaltyReason::MissingFixedVertex;
      art.objective = penalize(*art.penalty);
      return art;
    }
    MeshBuild mb;
    try {
      mb = build_mesh(art.topology, cfg_.mesh);
    } catch (const MeshError&) {
      art.penalty = PenaltyReason::MeshFailure;
      art.objective = penalize(*art.penalty);
      return art;
    }
    if (mb.dropped_members.empty()) {
      art.mesh = std::move(mb.mesh);
      break;
    }
    art.dropped_members.insert(art.dropped_members.end(), mb.dropped_members.begin(),
                               mb.dropped_members.end());
    std::erase_if(art.topology.members, [&](const ActiveMember& m) {
      return std::find(mb.dropped_members.begin(), mb.dropped_members.end(), m.id) !=
             mb.dropped_members.end();
    });
    art.topology = filter_candidate(domain_, std::move(art.topology));
  }

  art.surfaces = filter_surfaces_against_mesh(art.mesh, art.topology.surfaces,
                                              intersection_tol(domain_),
                                              &art.removed_surface_ids);
  try {
    art.paths = trace_paths(art.topology);
    art.loops = build_loops(art.paths, art.mesh);
    art.assignment =
        classify_and_assign(art.loops, art.surfaces, art.mesh, intersection_tol(domain_));
  } catch (const Error&) {
    art.penalty = PenaltyReason::MeshFailure;
    art.objective = penalize(*art.penalty);
    return art;
  }

  // Load case from the mesh vertex handles.
  const auto in_it = art.mesh.vertex_nodes.find(domain_.input_port);
  const auto out_it = art.mesh.vertex_nodes.find(domain_.output_port);
  if (in_it == art.mesh.vertex_nodes.end()) {
    art.penalty = PenaltyReason::MissingInputPort;
    art.objective = penalize(*art.penalty);
    return art;
  }
  if (out_it == art.mesh.vertex_nodes.end()) {
    art.penalty = PenaltyReason::MissingOutputPort;
    art.objective = penalize(*art.penalty);
    return art;
  }
  art.loadcase.input_node = in_it->second.representative;
  art.loadcase.output_node = out_it->second.representative;
  art.loadcase.direction = cfg_.force_direction.normalized();
  art.loadcase.magnitude = art.topology.force_magnitude;
  art.loadcase.n_steps = cfg_.load_steps;
  for (const auto& [vid, vn] : art.mesh.vertex_nodes) {
    if (!domain_.vertices[vid].fixed) continue;
    art.loadcase.fixed_nodes.insert(art.loadcase.fixed_nodes.end(), vn.clamp.begin(),
                                    vn.clamp.end());
  }
  std::sort(art.loadcase.fixed_nodes.begin(), art.loadcase.fixed_nodes.end());
  art.loadcase.fixed_nodes.erase(
      std::unique(art.loadcase.fixed_nodes.begin(), art.loadcase.fixed_nodes.end()),
      art.loadcase.fixed_nodes.end());
  if (art.loadcase.fixed_nodes.empty()) {
    art.penalty = PenaltyReason::MissingFixedVertex;
    art.objective = penalize(*art.penalty);
    return art;
  }

  art.prepared = true;
  return art;
}

void CandidateEvaluator::analyze(CandidateArtifacts& art, const AnalyzeOptions& opt) const {
  if (art.penalty || !art.prepared) return;

  const QuadMesh& mesh = opt.mesh_override ? *opt.mesh_override : art.mesh;
  Material mat = cfg_.material;
  mat.t = art.topology.thickness;
  const double mu = opt.mu.value_or(cfg_.friction_mu);

  ContactSetup contact =
      make_contact_setup(mesh, art.loops, art.assignment, art.surfaces, mat.E, mat.t, mu,
                         cfg_.contact_penalty_factor, cfg_.contact_gap_tol_factor);

  LoadCase load = art.loadcase;
  if (opt.force) load.magnitude = *opt.force;

  FemOptions fopt = cfg_.fem;
  fopt.record_fields = opt.record_fields;
  fopt.record_contact_history = opt.record_contact_history;

  art.solution = solve(mesh, mat, load, std::move(contact), fopt);
  if (!art.solution.converged) {
    art.penalty = PenaltyReason::AnalysisFailure;
    art.objective = penalize(*art.penalty);
    return;
  }
  art.analyzed = true;

  auto actual = describe_path(art.solution.trace.points, cfg_.fourier_terms);
  if (!actual) {
    art.penalty = PenaltyReason::DegeneratePath;
    art.objective = penalize(*art.penalty);
    return;
  }
  art.objective = total_error(desired_, *actual, cfg_.weights);
}

CandidateArtifacts CandidateEvaluator::evaluate_full(const DesignVector& v) const {
  CandidateArtifacts art = prepare(v);
  analyze(art);
  return art;
}

EvalOutcome CandidateEvaluator::evaluate(const DesignVector& v) const {
  const CandidateArtifacts art = evaluate_full(v);
  return {art.objective, art.penalty};
}

double CandidateEvaluator::objective_of(const PathTrace& trace) const {
  auto actual = describe_path(trace.points, cfg_.fourier_terms);
  if (!actual) return penalize(PenaltyReason::DegeneratePath);
  return total_error(desired_, *actual, cfg_.weights);
}

}  // namespace ccm
