#pragma once

// Shared fixtures for the test suites: hand-built topologies, simple block
// meshes, and small numeric helpers.

#include <random>
#include <vector>

#include "ccm/domain.hpp"
#include "ccm/mesher.hpp"

namespace testsup {

/// Build a CandidateTopology directly from explicit vertices and member
/// endpoint pairs (straight members unless slopes given).
struct TopoBuilder {
  std::vector<ccm::Vec2> verts;
  double thickness = 6.0;
  double force = 1.0;
  int n_el = 10;

  int vertex(double x, double y) {
    verts.push_back(ccm::Vec2(x, y));
    return int(verts.size()) - 1;
  }

  struct Mem {
    int id, v0, v1;
    double width, tau0, tau1;
  };
  std::vector<Mem> mems;

  int member(int v0, int v1, double width = 4.0, double tau0 = 0.0, double tau1 = 0.0) {
    const int id = int(mems.size());
    mems.push_back({id, v0, v1, width, tau0, tau1});
    return id;
  }

  ccm::CandidateTopology build() const {
    ccm::CandidateTopology t;
    t.vertex_pos = verts;
    t.thickness = thickness;
    t.force_magnitude = force;
    for (const auto& m : mems) {
      ccm::ActiveMember am;
      am.id = m.id;
      am.v0 = m.v0;
      am.v1 = m.v1;
      am.curve = {verts[m.v0], verts[m.v1], m.tau0, m.tau1};
      am.width = m.width;
      am.polyline = ccm::hermite_polyline(am.curve, n_el);
      t.members.push_back(std::move(am));
    }
    return t;
  }
};

/// Structured nx-by-ny element mesh over [0,W]x[0,H]; node (i,j) has id
/// j*(nx+1)+i.
inline ccm::QuadMesh block_mesh(double W, double H, int nx, int ny, double thickness = 6.0) {
  ccm::QuadMesh mesh;
  mesh.n_el = nx;
  mesh.n_ew = ny;
  mesh.thickness = thickness;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.nodes.push_back(ccm::Vec2(W * i / nx, H * j / ny));
  auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      mesh.elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
      mesh.owners.push_back({ccm::QuadMesh::Owner::Kind::Member, 0});
    }
  return mesh;
}

inline std::mt19937_64 rng(std::uint64_t seed = 42) { return std::mt19937_64(seed); }

}  // namespace testsup
