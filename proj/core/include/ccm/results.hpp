#pragma once

// Result writers: path CSV, search log, design-vector checkpoints, contact
// event history, and SVG frames of the deforming mechanism.

#include <string>
#include <vector>

#include "ccm/pipeline.hpp"
#include "ccm/search.hpp"

namespace ccm {

void write_path_csv(const PathTrace& trace, const std::string& path);
void write_search_log_csv(const std::vector<IterationRecord>& history, const std::string& path);
void write_vector_checkpoint(const DesignVector& v, const std::string& path);
DesignVector read_vector_checkpoint(const std::string& path);
void write_contact_history_csv(const SolveResult& result, const std::string& path);

/// One SVG frame: undeformed outline in gray, deformed in red, rigid
/// surfaces, desired and traced paths.
std::string render_svg(const CandidateArtifacts& art, const std::vector<Vec2>& desired,
                       const Eigen::VectorXd& u, const PathTrace& partial_trace);

/// frame_000.svg .. frame_NNN.svg under `dir` (needs a solution with
/// recorded fields).
void write_svg_frames(const CandidateArtifacts& art, const std::vector<Vec2>& desired,
                      const std::string& dir);

}  // namespace ccm
