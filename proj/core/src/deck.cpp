#include "ccm/deck.hpp"

#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace ccm {

namespace {

std::string num(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", d);
  return buf;
}

void emit_line(std::string& out, const std::string& line) {
  if (line.size() > kDeckMaxLineLength)
    throw DeckError("deck line exceeds " + std::to_string(kDeckMaxLineLength) +
                    " characters: " + line.substr(0, 40) + "...");
  out += line;
  out += '\n';
}

/// Ids packed onto data lines, wrapped under the line-length cap.
void emit_id_lines(std::string& out, const std::vector<int>& ids) {
  std::string line = " ";
  for (size_t i = 0; i < ids.size(); ++i) {
    const std::string tok = std::to_string(ids[i]);
    if (line.size() + tok.size() + 2 > kDeckMaxLineLength) {
      emit_line(out, line);
      line = " ";
    }
    if (line.size() > 1) line += ", ";
    line += tok;
  }
  if (line.size() > 1) emit_line(out, line);
}

std::string loop_name(const Loop& loop, int idx) {
  return (loop.kind == Loop::Kind::Outer ? "LOOP_O" : "LOOP_I") + std::to_string(idx);
}

}  // namespace

std::string export_deck(const QuadMesh& mesh, const std::vector<Loop>& loops,
                        const ContactAssignment& assign,
                        const std::vector<SurfaceShape>& surfaces, const LoadCase& load,
                        const Material& mat, const std::string& title) {
  std::string out;
  // ---- model data ----
  emit_line(out, "*HEADING");
  emit_line(out, " " + title);
  emit_line(out, "*NODE");
  for (size_t i = 0; i < mesh.nodes.size(); ++i)
    emit_line(out, " " + std::to_string(i + 1) + ", " + num(mesh.nodes[i].x()) + ", " +
                       num(mesh.nodes[i].y()));
  emit_line(out, "*ELEMENT, TYPE=CPS4");
  for (size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto& c = mesh.elements[e];
    emit_line(out, " " + std::to_string(e + 1) + ", " + std::to_string(c[0] + 1) + ", " +
                       std::to_string(c[1] + 1) + ", " + std::to_string(c[2] + 1) + ", " +
                       std::to_string(c[3] + 1));
  }
  emit_line(out, "*SOLID SECTION, THICKNESS=" + num(mesh.thickness));
  emit_line(out, "*MATERIAL, E=" + num(mat.E) + ", NU=" + num(mat.nu));

  for (const auto& mp : mesh.member_patches) {
    emit_line(out, "*ELSET, ELSET=MEMBER_" + std::to_string(mp.member_id + 1));
    std::vector<int> ids;
    for (const auto& row : mp.elem_grid)
      for (int e : row) ids.push_back(e + 1);
    emit_id_lines(out, ids);
  }
  for (size_t j = 0; j < mesh.junction_patches.size(); ++j) {
    emit_line(out, "*ELSET, ELSET=JUNCTION_" +
                       std::to_string(mesh.junction_patches[j].vertex_id + 1));
    std::vector<int> ids;
    for (int e : mesh.junction_patches[j].elems) ids.push_back(e + 1);
    emit_id_lines(out, ids);
  }

  int inner_idx = 0, outer_idx = 0;
  std::vector<std::string> loop_names;
  for (const auto& loop : loops) {
    const int idx = loop.kind == Loop::Kind::Outer ? ++outer_idx : ++inner_idx;
    const std::string name = loop_name(loop, idx);
    loop_names.push_back(name);
    emit_line(out, "*SURFACE, NAME=" + name);
    for (const auto& s : loop.sides)
      emit_line(out, " " + std::to_string(s.elem + 1) + ", S" + std::to_string(s.side));
  }
  for (const auto& s : surfaces) {
    emit_line(out, "*RIGID SURFACE, NAME=SURF_" + std::to_string(s.id + 1));
    for (const auto& p : s.boundary) emit_line(out, " " + num(p.x()) + ", " + num(p.y()));
  }
  for (const auto& [loop_idx, group_idx] : assign.loop_group_pairs) {
    for (int si : assign.surface_groups[group_idx]) {
      emit_line(out, "*CONTACT PAIR, SLAVE=" + loop_names[loop_idx] + ", MASTER=SURF_" +
                         std::to_string(surfaces[si].id + 1));
    }
  }
  for (int li : assign.self_contact_loops)
    emit_line(out,
              "*CONTACT PAIR, SLAVE=" + loop_names[li] + ", MASTER=" + loop_names[li]);

  // ---- history data ----
  emit_line(out, "*BOUNDARY");
  for (int n : load.fixed_nodes) emit_line(out, " " + std::to_string(n + 1) + ", 1, 2, 0.0");
  emit_line(out, "*STEP, INC=" + std::to_string(load.n_steps));
  emit_line(out, "*STATIC");
  emit_line(out, "*CLOAD");
  emit_line(out, " " + std::to_string(load.input_node + 1) + ", 1, " +
                     num(load.magnitude * load.direction.x()));
  emit_line(out, " " + std::to_string(load.input_node + 1) + ", 2, " +
                     num(load.magnitude * load.direction.y()));
  emit_line(out, "*NODE PRINT, NODE=" + std::to_string(load.output_node + 1));
  emit_line(out, " U");
  emit_line(out, "*END STEP");
  return out;
}

DeckInfo validate_deck(const std::string& text) {
  DeckInfo info;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::set<int> nodes, elements;
  std::string keyword;  // current block keyword
  bool in_model = true;
  int pending_heading_lines = 0;

  auto fail = [&](const std::string& msg) {
    throw DeckError("deck line " + std::to_string(lineno) + ": " + msg);
  };

  auto split_ints = [&](const std::string& s) {
    std::vector<long> out;
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        out.push_back(std::stol(tok));
      } catch (...) {
        fail("expected integer token '" + tok + "'");
      }
    }
    return out;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() > kDeckMaxLineLength)
      fail("line exceeds " + std::to_string(kDeckMaxLineLength) + " characters");
    if (line.empty()) continue;

    if (line[0] == '*') {
      const size_t comma = line.find(',');
      keyword = line.substr(1, comma == std::string::npos ? std::string::npos : comma - 1);
      if (keyword == "HEADING") pending_heading_lines = 1;
      else if (keyword == "SURFACE") ++info.n_side_sets;
      else if (keyword == "RIGID SURFACE") ++info.n_rigid_surfaces;
      else if (keyword == "CONTACT PAIR") ++info.n_contact_pairs;
      else if (keyword == "BOUNDARY" || keyword == "STEP" || keyword == "STATIC" ||
               keyword == "CLOAD" || keyword == "NODE PRINT" || keyword == "END STEP") {
        info.has_history = true;
        in_model = false;
      }
      continue;
    }

    if (keyword.empty()) fail("data line before any keyword line");
    if (pending_heading_lines > 0) {
      --pending_heading_lines;
      continue;
    }

    if (keyword == "NODE") {
      const auto v = split_ints(line.substr(0, line.find(',')));
      if (v.empty()) fail("node line without id");
      if (!nodes.insert(int(v[0])).second) fail("duplicate node id");
      ++info.n_nodes;
    } else if (keyword == "ELEMENT") {
      const auto v = split_ints(line);
      if (v.size() != 5) fail("element line needs id plus 4 node ids");
      if (!elements.insert(int(v[0])).second) fail("duplicate element id");
      for (size_t k = 1; k < v.size(); ++k)
        if (!nodes.count(int(v[k]))) fail("element references unknown node " +
                                          std::to_string(v[k]));
      ++info.n_elements;
    } else if (keyword == "ELSET") {
      for (long id : split_ints(line))
        if (!elements.count(int(id))) fail("elset references unknown element " +
                                           std::to_string(id));
    } else if (keyword == "SURFACE") {
      const size_t comma = line.find(',');
      if (comma == std::string::npos) fail("surface line needs 'elem, Sn'");
      const auto v = split_ints(line.substr(0, comma));
      if (v.empty() || !elements.count(int(v[0])))
        fail("surface references unknown element");
      std::string side = line.substr(comma + 1);
      side.erase(0, side.find_first_not_of(" \t"));
      if (side.size() < 2 || side[0] != 'S' || side[1] < '1' || side[1] > '4')
        fail("surface side must be S1..S4");
    } else if (keyword == "RIGID SURFACE") {
      // coordinate pairs; nothing to cross-reference
    } else if (keyword == "BOUNDARY" || keyword == "CLOAD") {
      const auto v = split_ints(line.substr(0, line.rfind(',')));
      if (v.empty() || !nodes.count(int(v[0])))
        fail(keyword + " references unknown node");
    } else if (keyword == "NODE PRINT" || keyword == "STEP" || keyword == "STATIC" ||
               keyword == "END STEP" || keyword == "SOLID SECTION" || keyword == "MATERIAL") {
      // free-form data lines
    } else {
      fail("unknown keyword '" + keyword + "'");
    }
  }

  if (info.n_nodes == 0) throw DeckError("deck has no nodes");
  if (info.n_elements == 0) throw DeckError("deck has no elements");
  (void)in_model;
  return info;
}

}  // namespace ccm
