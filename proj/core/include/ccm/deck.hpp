#pragma once

// Solver-deck export in a keyword/data-line dialect: model data (nodes,
// elements, side sets, rigid surfaces, contact pairs) followed by history
// data (boundary conditions, load, output requests).  The bundled validator
// re-parses emitted decks and rejects structural violations.

#include <string>
#include <vector>

#include "ccm/fem.hpp"
#include "ccm/loops.hpp"
#include "ccm/mesher.hpp"

namespace ccm {

inline constexpr std::size_t kDeckMaxLineLength = 256;

std::string export_deck(const QuadMesh& mesh, const std::vector<Loop>& loops,
                        const ContactAssignment& assign,
                        const std::vector<SurfaceShape>& surfaces, const LoadCase& load,
                        const Material& mat, const std::string& title = "ccm model");

struct DeckInfo {
  int n_nodes = 0;
  int n_elements = 0;
  int n_side_sets = 0;
  int n_rigid_surfaces = 0;
  int n_contact_pairs = 0;
  bool has_history = false;
};

/// Parse a deck and check its invariants: every block starts with a keyword
/// line, no line exceeds 256 characters, every referenced node/element id
/// exists.  Throws DeckError on violations.
DeckInfo validate_deck(const std::string& text);

}  // namespace ccm
