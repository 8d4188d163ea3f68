#include "ccm/fem.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

namespace ccm {

namespace {

constexpr double kGaussAbscissa = 0.57735026918962576451;  // 1/sqrt(3)

struct GaussPoint {
  double xi, eta;
};
constexpr GaussPoint kGauss[4] = {{-kGaussAbscissa, -kGaussAbscissa},
                                  {kGaussAbscissa, -kGaussAbscissa},
                                  {kGaussAbscissa, kGaussAbscissa},
                                  {-kGaussAbscissa, kGaussAbscissa}};

void shape_derivs(double xi, double eta, double dxi[4], double deta[4]) {
  dxi[0] = -(1 - eta) / 4;
  dxi[1] = (1 - eta) / 4;
  dxi[2] = (1 + eta) / 4;
  dxi[3] = -(1 + eta) / 4;
  deta[0] = -(1 - xi) / 4;
  deta[1] = -(1 + xi) / 4;
  deta[2] = (1 + xi) / 4;
  deta[3] = (1 - xi) / 4;
}

/// Plane-stress constitutive matrix on [E11, E22, 2*E12].
Eigen::Matrix3d plane_stress_C(const Material& m) {
  Eigen::Matrix3d C;
  const double f = m.E / (1.0 - m.nu * m.nu);
  C << f, f * m.nu, 0, f * m.nu, f, 0, 0, 0, f * (1.0 - m.nu) / 2.0;
  return C;
}

}  // namespace

bool assemble(const QuadMesh& mesh, const Material& mat, const Eigen::VectorXd& u,
              Eigen::VectorXd& f_int, std::vector<Eigen::Triplet<double>>* K) {
  const Eigen::Matrix3d C = plane_stress_C(mat);
  f_int.setZero(2 * mesh.nodes.size());

  for (size_t ei = 0; ei < mesh.elements.size(); ++ei) {
    const auto& conn = mesh.elements[ei];
    Eigen::Matrix<double, 4, 2> X, Ue;
    for (int a = 0; a < 4; ++a) {
      X(a, 0) = mesh.nodes[conn[a]].x();
      X(a, 1) = mesh.nodes[conn[a]].y();
      Ue(a, 0) = u[2 * conn[a]];
      Ue(a, 1) = u[2 * conn[a] + 1];
    }

    Eigen::Matrix<double, 8, 1> fe = Eigen::Matrix<double, 8, 1>::Zero();
    Eigen::Matrix<double, 8, 8> ke = Eigen::Matrix<double, 8, 8>::Zero();

    for (const auto& gp : kGauss) {
      double dxi[4], deta[4];
      shape_derivs(gp.xi, gp.eta, dxi, deta);
      Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
      for (int a = 0; a < 4; ++a) {
        J(0, 0) += dxi[a] * X(a, 0);
        J(0, 1) += dxi[a] * X(a, 1);
        J(1, 0) += deta[a] * X(a, 0);
        J(1, 1) += deta[a] * X(a, 1);
      }
      const double detJ = J.determinant();
      if (!(detJ > 0) || !std::isfinite(detJ)) return false;
      const Eigen::Matrix2d Jinv = J.inverse();

      // Reference gradients dN_a/dX (rows = nodes).
      Eigen::Matrix<double, 4, 2> G;
      for (int a = 0; a < 4; ++a) {
        G(a, 0) = Jinv(0, 0) * dxi[a] + Jinv(0, 1) * deta[a];
        G(a, 1) = Jinv(1, 0) * dxi[a] + Jinv(1, 1) * deta[a];
      }

      const Eigen::Matrix2d H = Ue.transpose() * G;  // displacement gradient
      const Eigen::Matrix2d F = Eigen::Matrix2d::Identity() + H;
      if (!(F.determinant() > 0)) return false;  // inverted trial state
      const Eigen::Matrix2d Egreen = 0.5 * (F.transpose() * F - Eigen::Matrix2d::Identity());
      const Eigen::Vector3d Ev(Egreen(0, 0), Egreen(1, 1), 2.0 * Egreen(0, 1));
      const Eigen::Vector3d Sv = C * Ev;

      // Nonlinear strain-displacement matrix at the current state.
      Eigen::Matrix<double, 3, 8> B;
      for (int a = 0; a < 4; ++a) {
        B(0, 2 * a) = F(0, 0) * G(a, 0);
        B(0, 2 * a + 1) = F(1, 0) * G(a, 0);
        B(1, 2 * a) = F(0, 1) * G(a, 1);
        B(1, 2 * a + 1) = F(1, 1) * G(a, 1);
        B(2, 2 * a) = F(0, 0) * G(a, 1) + F(0, 1) * G(a, 0);
        B(2, 2 * a + 1) = F(1, 0) * G(a, 1) + F(1, 1) * G(a, 0);
      }

      const double w = detJ * mat.t;
      fe += w * B.transpose() * Sv;
      if (K) {
        ke += w * B.transpose() * C * B;
        // Geometric part: (grad Na . S grad Nb) I2.  Sv(2) is the shear
        // stress itself (the 2E12 factor lives in the strain vector).
        Eigen::Matrix2d S;
        S << Sv(0), Sv(2), Sv(2), Sv(1);
        for (int a = 0; a < 4; ++a) {
          for (int b = 0; b < 4; ++b) {
            const double g = w * (G.row(a) * S * G.row(b).transpose())(0, 0);
            ke(2 * a, 2 * b) += g;
            ke(2 * a + 1, 2 * b + 1) += g;
          }
        }
      }
    }

    if (!fe.allFinite()) return false;
    for (int a = 0; a < 4; ++a) {
      f_int[2 * conn[a]] += fe[2 * a];
      f_int[2 * conn[a] + 1] += fe[2 * a + 1];
    }
    if (K) {
      for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b)
          K->emplace_back(2 * conn[a / 2] + a % 2, 2 * conn[b / 2] + b % 2, ke(a, b));
    }
  }
  return true;
}

double strain_energy(const QuadMesh& mesh, const Material& mat, const Eigen::VectorXd& u) {
  const Eigen::Matrix3d C = plane_stress_C(mat);
  double energy = 0;
  for (size_t ei = 0; ei < mesh.elements.size(); ++ei) {
    const auto& conn = mesh.elements[ei];
    Eigen::Matrix<double, 4, 2> X, Ue;
    for (int a = 0; a < 4; ++a) {
      X(a, 0) = mesh.nodes[conn[a]].x();
      X(a, 1) = mesh.nodes[conn[a]].y();
      Ue(a, 0) = u[2 * conn[a]];
      Ue(a, 1) = u[2 * conn[a] + 1];
    }
    for (const auto& gp : kGauss) {
      double dxi[4], deta[4];
      shape_derivs(gp.xi, gp.eta, dxi, deta);
      Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
      for (int a = 0; a < 4; ++a) {
        J(0, 0) += dxi[a] * X(a, 0);
        J(0, 1) += dxi[a] * X(a, 1);
        J(1, 0) += deta[a] * X(a, 0);
        J(1, 1) += deta[a] * X(a, 1);
      }
      const double detJ = J.determinant();
      const Eigen::Matrix2d Jinv = J.inverse();
      Eigen::Matrix<double, 4, 2> G;
      for (int a = 0; a < 4; ++a) {
        G(a, 0) = Jinv(0, 0) * dxi[a] + Jinv(0, 1) * deta[a];
        G(a, 1) = Jinv(1, 0) * dxi[a] + Jinv(1, 1) * deta[a];
      }
      const Eigen::Matrix2d F = Eigen::Matrix2d::Identity() + Ue.transpose() * G;
      const Eigen::Matrix2d Eg = 0.5 * (F.transpose() * F - Eigen::Matrix2d::Identity());
      const Eigen::Vector3d Ev(Eg(0, 0), Eg(1, 1), 2.0 * Eg(0, 1));
      energy += 0.5 * Ev.dot(C * Ev) * detJ * mat.t;
    }
  }
  return energy;
}

namespace {

struct Snapshot {
  Eigen::VectorXd u;
  std::vector<ContactPairState> states;
};

}  // namespace

SolveResult solve(const QuadMesh& mesh, const Material& mat, const LoadCase& load,
                  ContactSetup contact, const FemOptions& opt) {
  SolveResult res;
  const int n_nodes = int(mesh.nodes.size());
  const int n_dof = 2 * n_nodes;
  if (load.input_node < 0 || load.input_node >= n_nodes)
    throw ConfigError("solve: invalid input node");
  if (load.output_node < 0 || load.output_node >= n_nodes)
    throw ConfigError("solve: invalid output node");
  if (load.fixed_nodes.empty()) throw ConfigError("solve: empty fixed node set");
  if (load.n_steps < 1) throw ConfigError("solve: n_steps must be >= 1");

  // Reduced system over free dofs.
  std::vector<int> dof_map(n_dof);
  {
    std::vector<bool> fixed(n_dof, false);
    for (int n : load.fixed_nodes) {
      fixed[2 * n] = true;
      fixed[2 * n + 1] = true;
    }
    int idx = 0;
    for (int i = 0; i < n_dof; ++i) dof_map[i] = fixed[i] ? -1 : idx++;
  }
  const int n_free = *std::max_element(dof_map.begin(), dof_map.end()) + 1;

  Eigen::VectorXd f_ext_full = Eigen::VectorXd::Zero(n_dof);
  f_ext_full[2 * load.input_node] = load.magnitude * load.direction.x();
  f_ext_full[2 * load.input_node + 1] = load.magnitude * load.direction.y();
  const double f_ext_norm = f_ext_full.norm();

  Eigen::VectorXd u = Eigen::VectorXd::Zero(n_dof);
  auto out_pos = [&](const Eigen::VectorXd& uu) -> Vec2 {
    return mesh.nodes[load.output_node] +
           Vec2(uu[2 * load.output_node], uu[2 * load.output_node + 1]);
  };
  auto in_disp = [&](const Eigen::VectorXd& uu) -> Vec2 {
    return Vec2(uu[2 * load.input_node], uu[2 * load.input_node + 1]);
  };

  res.trace.points.push_back(out_pos(u));

  // Reduced residual at the given displacements; false on unusable states.
  auto residual = [&](const Eigen::VectorXd& uu, double factor, Eigen::VectorXd& r_red,
                      std::vector<Eigen::Triplet<double>>* trips, ContactEval* ev) -> bool {
    Eigen::VectorXd f_int, f_c = Eigen::VectorXd::Zero(n_dof);
    if (!assemble(mesh, mat, uu, f_int, trips)) return false;
    const ContactEval e = evaluate_contact(contact, mesh, uu, f_c, trips);
    if (ev) *ev = e;
    r_red.resize(n_free);
    for (int i = 0; i < n_dof; ++i)
      if (dof_map[i] >= 0)
        r_red[dof_map[i]] = f_int[i] - f_c[i] - factor * f_ext_full[i];
    return r_red.allFinite();
  };

  // One Newton solve at a fixed load factor and fixed multipliers.  The
  // line search caps penetration growth per iterate (a deep dive puts a
  // huge transient penalty force on the system and destabilizes sliding
  // over segment corners) and lets active-set-changing steps through even
  // when the residual rises.
  auto newton = [&](double factor) -> bool {
    const double tol =
        f_ext_norm > 0 ? std::max(opt.rel_tol * factor * f_ext_norm, opt.abs_tol) : opt.abs_tol;
    Eigen::VectorXd r_red, r_try;
    for (int it = 0; it < opt.max_newton_iters; ++it) {
      std::vector<Eigen::Triplet<double>> trips;
      ContactEval ev0;
      if (!residual(u, factor, r_red, &trips, &ev0)) return false;
      const double rn = r_red.norm();
      if (rn <= tol) return true;

      std::vector<Eigen::Triplet<double>> red;
      red.reserve(trips.size());
      for (const auto& t : trips) {
        const int i = dof_map[t.row()], j = dof_map[t.col()];
        if (i >= 0 && j >= 0) red.emplace_back(i, j, t.value());
      }
      Eigen::SparseMatrix<double> K(n_free, n_free);
      K.setFromTriplets(red.begin(), red.end());
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
      lu.compute(K);
      if (lu.info() != Eigen::Success) return false;
      const Eigen::VectorXd du = lu.solve(-r_red);
      if (!du.allFinite()) return false;

      const double pen_allowed =
          contact.empty() ? std::numeric_limits<double>::max()
                          : std::max(4.0 * ev0.max_penetration, 200.0 * contact.gap_tol);
      double alpha = 1.0;
      double fallback = -1.0;
      bool stepped = false;
      for (int ls = 0; ls < 24; ++ls) {
        Eigen::VectorXd u_try = u;
        for (int i = 0; i < n_dof; ++i)
          if (dof_map[i] >= 0) u_try[i] += alpha * du[dof_map[i]];
        ContactEval ev_try;
        if (residual(u_try, factor, r_try, nullptr, &ev_try) &&
            ev_try.max_penetration <= pen_allowed) {
          if (r_try.norm() < rn || r_try.norm() <= tol || ev_try.n_active != ev0.n_active) {
            u = std::move(u_try);
            stepped = true;
            break;
          }
          if (fallback < 0) fallback = alpha;  // largest usable step so far
        }
        alpha *= 0.5;
      }
      if (!stepped && fallback > 0) {
        // No descent step exists; take the largest penetration-safe one and
        // let the next iterations recover (plain Newton behaviour).
        for (int i = 0; i < n_dof; ++i)
          if (dof_map[i] >= 0) u[i] += fallback * du[dof_map[i]];
        stepped = true;
      }
      if (!stepped) return false;
    }
    return false;
  };

  // One load step: inner Newton plus the multiplier augmentation loop.
  // Terminates when penetration is resolved and no drained multiplier keeps
  // pulling at an open gap.
  auto do_step = [&](double factor) -> bool {
    for (int round = 0; round < opt.max_augmentations; ++round) {
      if (!newton(factor)) return false;
      const AugmentResult ar = augment_and_update_active_set(contact, mesh, u);
      if (ar.max_penetration <= contact.gap_tol && ar.max_adhesion_gap <= contact.gap_tol)
        return true;
    }
    return false;
  };

  const double base = 1.0 / load.n_steps;
  const double floor = base / std::pow(2.0, opt.max_halvings);
  double lam = 0.0;
  double dlam = base;
  Vec2 prev_in = in_disp(u);

  while (lam < 1.0 - 1e-12) {
    const double step = std::min(dlam, 1.0 - lam);
    Snapshot snap{u, contact.states};
    const double target = lam + step;
    bool ok = false;
    try {
      ok = do_step(target);
    } catch (const Error&) {
      ok = false;
    }
    if (!ok) {
      u = snap.u;
      contact.states = snap.states;
      dlam *= 0.5;
      if (dlam < floor - 1e-15) {
        res.message = "load step failed to converge at factor " + std::to_string(target);
        res.u = u;
        res.contact = std::move(contact);
        return res;
      }
      continue;
    }

    // Converged (sub)step.
    lam = target;
    res.converged_steps++;
    const Vec2 cur_in = in_disp(u);
    const Vec2 f_prev = (lam - step) * load.magnitude * load.direction;
    const Vec2 f_cur = lam * load.magnitude * load.direction;
    res.external_work += 0.5 * (f_prev + f_cur).dot(cur_in - prev_in);
    prev_in = cur_in;

    commit_slip_reference(contact, mesh, u);
    res.trace.points.push_back(out_pos(u));
    if (opt.record_fields) res.step_fields.push_back(u);
    if (opt.record_contact_history) {
      std::vector<ContactEvent> events;
      for (const auto& st : contact.states)
        if (st.active) events.push_back({st.pair, st.node, st.lambda});
      res.contact_history.push_back(std::move(events));
    }
    {
      const auto sides = active_contact_sides(contact);
      res.contact_region.insert(res.contact_region.end(), sides.begin(), sides.end());
    }

    // Grow back toward the base increment after two clean sub-steps.
    if (dlam < base) dlam = std::min(base, dlam * 2.0);
  }

  std::sort(res.contact_region.begin(), res.contact_region.end());
  res.contact_region.erase(std::unique(res.contact_region.begin(), res.contact_region.end()),
                           res.contact_region.end());
  res.converged = true;
  res.u = u;
  res.strain_energy = strain_energy(mesh, mat, u);
  res.contact = std::move(contact);
  return res;
}

}  // namespace ccm
