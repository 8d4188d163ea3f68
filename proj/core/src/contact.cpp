#include "ccm/contact.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ccm {

std::vector<Vec2> chain_points(const ContactChain& chain, const QuadMesh& mesh,
                               const Eigen::VectorXd& u) {
  if (chain.rigid) return chain.points;
  std::vector<Vec2> pts(chain.nodes.size());
  for (size_t i = 0; i < chain.nodes.size(); ++i) {
    const int n = chain.nodes[i];
    pts[i] = mesh.nodes[n] + Vec2(u[2 * n], u[2 * n + 1]);
  }
  return pts;
}

Projection closest_point(const Vec2& x, const std::vector<Vec2>& pts, bool closed,
                         int exclude_cycle_index, bool interior_only) {
  const int n = int(pts.size());
  const int n_seg = closed ? n : n - 1;
  Projection best;
  best.distance = std::numeric_limits<double>::max();
  double arc = 0;
  for (int j = 0; j < n_seg; ++j) {
    const Vec2& a = pts[j];
    const Vec2& b = pts[(j + 1) % n];
    const double len = (b - a).norm();
    if (len <= 0) continue;
    if (exclude_cycle_index >= 0) {
      const int prev = (exclude_cycle_index - 1 + n) % n;
      if (j == exclude_cycle_index || j == prev) {
        arc += len;
        continue;
      }
    }
    const Vec2 tang = (b - a) / len;
    // xi in [-1,1]: x_p = 0.5(1-xi) a + 0.5(1+xi) b
    double xi = 2.0 * (x - a).dot(tang) / len - 1.0;
    // A 2 percent overhang keeps genuine contacts at open chain ends while
    // rejecting the meaningless endpoint projections onto far segments.
    if (interior_only && (xi < -1.02 || xi > 1.02)) {
      arc += len;
      continue;
    }
    xi = std::clamp(xi, -1.0, 1.0);
    const Vec2 xp = 0.5 * (1 - xi) * a + 0.5 * (1 + xi) * b;
    const double dist = (x - xp).norm();
    if (dist < best.distance) {
      best.segment = j;
      best.xi = xi;
      best.point = xp;
      best.tangent = tang;
      // Outward normal is the left of travel: target chains run with their
      // solid on the right.
      best.normal = Vec2(-tang.y(), tang.x());
      best.seg_len = len;
      best.arc = arc + 0.5 * (1 + xi) * len;
      best.distance = dist;
    }
    arc += len;
  }
  return best;
}

double normal_gap(const Vec2& x, const Projection& p) { return (x - p.point).dot(p.normal); }

double friction_traction(double slip, double pressure, double mu, double k_t) {
  if (mu <= 0 || pressure <= 0) return 0;
  const double mag = std::min(k_t * std::abs(slip), mu * pressure);
  return slip >= 0 ? -mag : mag;
}

ContactSetup make_contact_setup(const QuadMesh& mesh, const std::vector<Loop>& loops,
                                const ContactAssignment& assign,
                                const std::vector<SurfaceShape>& surfaces, double youngs_modulus,
                                double thickness, double mu, double penalty_factor,
                                double gap_tol_factor) {
  ContactSetup setup;
  const double h = mesh.mean_edge_length();
  if (h <= 0) return setup;
  setup.penalty = penalty_factor * youngs_modulus * thickness / h;
  setup.gap_tol = gap_tol_factor * h;
  setup.mu = mu;
  // Softer stick regularization than the normal penalty keeps the
  // stick/slip transition from chattering.
  setup.k_t = setup.penalty / 100.0;
  // Self-contact capture band: half the mean short element side, well
  // under any member width but far above working penetrations.
  {
    double acc = 0;
    for (const auto& e : mesh.elements) {
      double shortest = std::numeric_limits<double>::max();
      for (int s = 0; s < 4; ++s)
        shortest = std::min(shortest, (mesh.nodes[e[(s + 1) % 4]] - mesh.nodes[e[s]]).norm());
      acc += shortest;
    }
    setup.capture = 0.5 * acc / double(mesh.elements.size());
  }

  // One deformable chain per loop.  Loop cycles carry the solid on the
  // left; chains want it on the right (outward normal = left of travel),
  // so the cycles reverse here.  c.sides[j] is the mesh side under chain
  // segment j (nodes[j] -> nodes[j+1]).
  std::vector<int> chain_of_loop(loops.size(), -1);
  for (size_t li = 0; li < loops.size(); ++li) {
    ContactChain c;
    c.rigid = false;
    c.closed = true;
    const auto& cyc = loops[li].node_cycle;
    const int N = int(cyc.size());
    c.nodes.assign(cyc.rbegin(), cyc.rend());
    c.sides.resize(N);
    for (int j = 0; j < N; ++j) c.sides[j] = loops[li].sides[(2 * N - 2 - j) % N];
    c.loop_index = int(li);
    chain_of_loop[li] = int(setup.chains.size());
    setup.chains.push_back(std::move(c));
  }
  // Rigid chains, one per surface, likewise reversed to clockwise.
  std::vector<int> chain_of_surface(surfaces.size(), -1);
  for (size_t si = 0; si < surfaces.size(); ++si) {
    ContactChain c;
    c.rigid = true;
    c.closed = true;
    auto pts = shape_boundary(surfaces[si], h);
    c.points.assign(pts.rbegin(), pts.rend());
    c.surface_id = surfaces[si].id;
    chain_of_surface[si] = int(setup.chains.size());
    setup.chains.push_back(std::move(c));
  }

  auto add_pair = [&](int loop_idx, int chain_idx, bool self) {
    ContactPair p{loop_idx, chain_of_loop[loop_idx], chain_idx, self};
    const int pair_idx = int(setup.pairs.size());
    setup.pairs.push_back(p);
    const auto& followers = setup.chains[chain_of_loop[loop_idx]].nodes;
    for (size_t k = 0; k < followers.size(); ++k) {
      ContactPairState st;
      st.pair = pair_idx;
      st.node = followers[k];
      st.cycle_index = int(k);
      setup.states.push_back(st);
    }
  };

  for (const auto& [loop_idx, group_idx] : assign.loop_group_pairs)
    for (int si : assign.surface_groups[group_idx])
      add_pair(loop_idx, chain_of_surface[si], false);
  for (int loop_idx : assign.self_contact_loops)
    add_pair(loop_idx, chain_of_loop[loop_idx], true);

  return setup;
}

namespace {

struct ChainGeom {
  std::vector<Vec2> pts;
  Vec2 center{0, 0};
  double radius = 0;
};

std::vector<ChainGeom> chain_geometry(const ContactSetup& setup, const QuadMesh& mesh,
                                      const Eigen::VectorXd& u) {
  std::vector<ChainGeom> out(setup.chains.size());
  for (size_t c = 0; c < setup.chains.size(); ++c) {
    out[c].pts = chain_points(setup.chains[c], mesh, u);
    Vec2 cen(0, 0);
    for (const auto& p : out[c].pts) cen += p;
    if (!out[c].pts.empty()) cen /= double(out[c].pts.size());
    double r = 0;
    for (const auto& p : out[c].pts) r = std::max(r, (p - cen).norm());
    out[c].center = cen;
    out[c].radius = r;
  }
  return out;
}

}  // namespace

ContactEval evaluate_contact(const ContactSetup& setup, const QuadMesh& mesh,
                             const Eigen::VectorXd& u, Eigen::VectorXd& f_contact,
                             std::vector<Eigen::Triplet<double>>* K) {
  ContactEval ev;
  if (setup.states.empty()) return ev;
  const auto geom = chain_geometry(setup, mesh, u);
  const double eps = setup.penalty;

  for (const auto& st : setup.states) {
    const auto& pair = setup.pairs[st.pair];
    const auto& chain = setup.chains[pair.chain];
    const auto& g = geom[pair.chain];
    const Vec2 x = mesh.nodes[st.node] + Vec2(u[2 * st.node], u[2 * st.node + 1]);

    // Cheap cull: an idle follower outside the chain's bounding circle
    // cannot penetrate.
    if (st.lambda == 0.0 && !pair.self) {
      const double bound = (x - g.center).norm() - g.radius;
      if (bound > 0.1 * std::max(g.radius, setup.gap_tol)) continue;
    }

    const Projection pr =
        closest_point(x, g.pts, chain.closed, pair.self ? st.cycle_index : -1, true);
    if (pr.segment < 0) continue;
    const double gap = normal_gap(x, pr);
    // A boundary node always "sees" the far side of its own body as deep
    // penetration; the capture band screens that out.
    if (pair.self && st.lambda == 0 && setup.capture > 0 && gap < -setup.capture) continue;
    const double lambda = st.lambda - eps * gap;
    // A pair touching at exactly zero force still contributes stiffness,
    // which restrains bodies held only by contact.
    if (lambda < 0 || (lambda == 0 && gap > 0)) continue;

    ev.n_active++;
    if (gap < 0) ev.max_penetration = std::max(ev.max_penetration, -gap);

    const double Na = 0.5 * (1 - pr.xi), Nb = 0.5 * (1 + pr.xi);
    const Vec2 n = pr.normal, a = pr.tangent;
    const int seg_a = chain.rigid ? -1 : chain.nodes[pr.segment];
    const int seg_b = chain.rigid ? -1 : chain.nodes[(pr.segment + 1) % chain.nodes.size()];

    // Normal forces: follower pushed along +n, target reaction split by the
    // segment shape functions.
    f_contact[2 * st.node] += lambda * n.x();
    f_contact[2 * st.node + 1] += lambda * n.y();
    if (!chain.rigid) {
      f_contact[2 * seg_a] -= lambda * Na * n.x();
      f_contact[2 * seg_a + 1] -= lambda * Na * n.y();
      f_contact[2 * seg_b] -= lambda * Nb * n.x();
      f_contact[2 * seg_b + 1] -= lambda * Nb * n.y();
    }

    double slip = 0;
    double t_t = 0;
    if (setup.mu > 0 && st.has_prev) {
      slip = pr.arc - st.arc_prev;
      const double total = [&] {
        double L = 0;
        const int ns = chain.closed ? int(g.pts.size()) : int(g.pts.size()) - 1;
        for (int j = 0; j < ns; ++j)
          L += (g.pts[(j + 1) % g.pts.size()] - g.pts[j]).norm();
        return L;
      }();
      if (chain.closed && total > 0) {
        while (slip > 0.5 * total) slip -= total;
        while (slip < -0.5 * total) slip += total;
      }
      t_t = friction_traction(slip, lambda, setup.mu, setup.k_t);
      f_contact[2 * st.node] += t_t * a.x();
      f_contact[2 * st.node + 1] += t_t * a.y();
      if (!chain.rigid) {
        f_contact[2 * seg_a] -= t_t * Na * a.x();
        f_contact[2 * seg_a + 1] -= t_t * Na * a.y();
        f_contact[2 * seg_b] -= t_t * Nb * a.x();
        f_contact[2 * seg_b + 1] -= t_t * Nb * a.y();
      }
    }

    if (!K) continue;

    // Consistent tangent of minus the nodal forces.  With
    //   N = [n; -Na n; -Nb n],  T = [a; -Na a; -Nb a],  D = [0; -n; +n],
    // the normal contribution is
    //   eps N N^T + (lambda/l) (T D^T + D T^T + (gap/l) D D^T).
    const int dofs_n = chain.rigid ? 1 : 3;
    int nodes_[3] = {st.node, seg_a, seg_b};
    double Nv[6], Tv[6], Dv[6];
    const double cN[3] = {1.0, -Na, -Nb};
    const double cD[3] = {0.0, -1.0, 1.0};
    for (int i = 0; i < 3; ++i) {
      Nv[2 * i] = cN[i] * n.x();
      Nv[2 * i + 1] = cN[i] * n.y();
      Tv[2 * i] = cN[i] * a.x();
      Tv[2 * i + 1] = cN[i] * a.y();
      Dv[2 * i] = cD[i] * n.x();
      Dv[2 * i + 1] = cD[i] * n.y();
    }
    const double inv_l = 1.0 / pr.seg_len;
    for (int i = 0; i < dofs_n; ++i) {
      for (int jd = 0; jd < dofs_n; ++jd) {
        for (int di = 0; di < 2; ++di) {
          for (int dj = 0; dj < 2; ++dj) {
            const int I = 2 * i + di, J = 2 * jd + dj;
            double v = eps * Nv[I] * Nv[J];
            v += lambda * inv_l * (Tv[I] * Dv[J] + Dv[I] * Tv[J] + gap * inv_l * Dv[I] * Dv[J]);
            if (v != 0.0)
              K->emplace_back(2 * nodes_[i] + di, 2 * nodes_[jd] + dj, v);
          }
        }
      }
    }

    if (setup.mu > 0 && st.has_prev) {
      // Approximate friction tangent: stick branch k_t a a^T; sliding branch
      // couples through the pressure, mu*eps*sign(slip) a n^T.
      const bool stick = setup.k_t * std::abs(slip) < setup.mu * lambda;
      for (int i = 0; i < dofs_n; ++i) {
        for (int jd = 0; jd < dofs_n; ++jd) {
          for (int di = 0; di < 2; ++di) {
            for (int dj = 0; dj < 2; ++dj) {
              const int I = 2 * i + di, J = 2 * jd + dj;
              double v = 0;
              if (stick) {
                v = setup.k_t * Tv[I] * Tv[J];
              } else {
                const double sgn = slip >= 0 ? 1.0 : -1.0;
                v = setup.mu * eps * sgn * Tv[I] * Nv[J];
              }
              if (v != 0.0)
                K->emplace_back(2 * nodes_[i] + di, 2 * nodes_[jd] + dj, v);
            }
          }
        }
      }
    }
  }
  return ev;
}

AugmentResult augment_and_update_active_set(ContactSetup& setup, const QuadMesh& mesh,
                                            const Eigen::VectorXd& u) {
  AugmentResult res;
  if (setup.states.empty()) return res;
  const auto geom = chain_geometry(setup, mesh, u);
  const double eps = setup.penalty;

  for (auto& st : setup.states) {
    const auto& pair = setup.pairs[st.pair];
    const auto& chain = setup.chains[pair.chain];
    const auto& g = geom[pair.chain];
    const Vec2 x = mesh.nodes[st.node] + Vec2(u[2 * st.node], u[2 * st.node + 1]);

    if (st.lambda == 0.0 && !pair.self) {
      const double bound = (x - g.center).norm() - g.radius;
      if (bound > 0.1 * std::max(g.radius, setup.gap_tol)) continue;
    }
    const Projection pr =
        closest_point(x, g.pts, chain.closed, pair.self ? st.cycle_index : -1, true);
    if (pr.segment < 0) continue;
    const double gap = normal_gap(x, pr);
    if (pair.self && st.lambda == 0 && setup.capture > 0 && gap < -setup.capture) continue;
    const double trial = st.lambda - eps * gap;

    const bool was_active = st.active;
    if (trial > 0) {
      st.lambda = trial;
      st.active = true;
      if (gap < 0) res.max_penetration = std::max(res.max_penetration, -gap);
      else res.max_adhesion_gap = std::max(res.max_adhesion_gap, gap);
      res.n_active++;
    } else {
      st.lambda = 0;
      st.active = false;
    }
    if (st.active != was_active) res.changed = true;
  }
  return res;
}

void commit_slip_reference(ContactSetup& setup, const QuadMesh& mesh, const Eigen::VectorXd& u) {
  if (setup.states.empty()) return;
  const auto geom = chain_geometry(setup, mesh, u);
  for (auto& st : setup.states) {
    if (!st.active) {
      st.has_prev = false;
      continue;
    }
    const auto& pair = setup.pairs[st.pair];
    const auto& chain = setup.chains[pair.chain];
    const Vec2 x = mesh.nodes[st.node] + Vec2(u[2 * st.node], u[2 * st.node + 1]);
    const Projection pr = closest_point(x, geom[pair.chain].pts, chain.closed,
                                        pair.self ? st.cycle_index : -1, true);
    if (pr.segment < 0) {
      st.has_prev = false;
      continue;
    }
    st.arc_prev = pr.arc;
    st.has_prev = true;
  }
}

std::vector<ElementSide> active_contact_sides(const ContactSetup& setup) {
  std::set<ElementSide> sides;
  for (const auto& st : setup.states) {
    if (!st.active) continue;
    const auto& pair = setup.pairs[st.pair];
    if (pair.follower_chain < 0) continue;
    const auto& chain = setup.chains[pair.follower_chain];
    const size_t n = chain.sides.size();
    if (n == 0 || st.cycle_index < 0) continue;
    // Chain segments k-1 and k meet at follower k.
    const size_t k = size_t(st.cycle_index);
    sides.insert(chain.sides[k]);
    sides.insert(chain.sides[(k + n - 1) % n]);
  }
  return {sides.begin(), sides.end()};
}

}  // namespace ccm
