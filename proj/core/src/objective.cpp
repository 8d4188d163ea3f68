#include "ccm/objective.hpp"

#include <algorithm>
#include <cmath>

#include "ccm/geometry.hpp"

namespace ccm {

const char* penalty_reason_name(PenaltyReason r) {
  switch (r) {
    case PenaltyReason::MissingInputPort: return "missing-input-port";
    case PenaltyReason::MissingOutputPort: return "missing-output-port";
    case PenaltyReason::MissingFixedVertex: return "missing-fixed-vertex";
    case PenaltyReason::MeshFailure: return "mesh-failure";
    case PenaltyReason::AnalysisFailure: return "analysis-failure";
    case PenaltyReason::DegeneratePath: return "degenerate-path";
  }
  return "unknown";
}

double penalize(PenaltyReason) { return kPenaltyValue; }

namespace {

/// Drop consecutive duplicates (within a tiny tolerance).
std::vector<Vec2> dedupe(const std::vector<Vec2>& path) {
  std::vector<Vec2> out;
  for (const auto& p : path)
    if (out.empty() || (p - out.back()).norm() > 1e-12) out.push_back(p);
  return out;
}

double path_length(const std::vector<Vec2>& path) {
  double len = 0;
  for (size_t i = 0; i + 1 < path.size(); ++i) len += (path[i + 1] - path[i]).norm();
  return len;
}

std::vector<Vec2> ribbon_polygon(const std::vector<Vec2>& path, double delta) {
  const size_t n = path.size();
  std::vector<Vec2> normals(n);
  std::vector<Vec2> seg(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) seg[i] = perp_ccw((path[i + 1] - path[i]).normalized());
  normals[0] = seg[0];
  normals[n - 1] = seg[n - 2];
  for (size_t i = 1; i + 1 < n; ++i) {
    Vec2 v = seg[i - 1] + seg[i];
    normals[i] = v.norm() > 1e-12 ? v.normalized() : seg[i];
  }
  std::vector<Vec2> poly(path.begin(), path.end());
  for (size_t i = n; i-- > 0;) poly.push_back(path[i] + delta * normals[i]);
  return poly;
}

std::vector<Vec2> chord_offset_polygon(const std::vector<Vec2>& path, double delta) {
  // Return leg along a fixed offset direction perpendicular to the chord,
  // chosen away from the path centroid.
  const Vec2 chord = path.back() - path.front();
  Vec2 nrm = chord.norm() > 1e-12 ? perp_ccw(chord.normalized()) : Vec2(0, 1);
  Vec2 centroid(0, 0);
  for (const auto& p : path) centroid += p;
  centroid /= double(path.size());
  const Vec2 mid = 0.5 * (path.front() + path.back());
  if (nrm.dot(centroid - mid) > 0) nrm = -nrm;
  std::vector<Vec2> poly(path.begin(), path.end());
  for (size_t i = path.size(); i-- > 0;) poly.push_back(path[i] + delta * nrm);
  return poly;
}

}  // namespace

std::optional<std::vector<Vec2>> close_curve(const std::vector<Vec2>& raw) {
  const std::vector<Vec2> path = dedupe(raw);
  if (path.size() < 2) return std::nullopt;
  const double len = path_length(path);
  if (len <= 0) return std::nullopt;
  const double delta = 0.01 * len;
  const double tol = 1e-9 * len;

  std::vector<Vec2> poly = ribbon_polygon(path, delta);
  if (polygon_is_simple(poly, tol)) return poly;
  poly = chord_offset_polygon(path, delta);
  if (polygon_is_simple(poly, tol)) return poly;
  return std::nullopt;
}

FsDescriptor fsd(const std::vector<Vec2>& polygon, int n_coeffs) {
  if (n_coeffs < 1) throw GeometryError("fsd: n_coeffs must be >= 1");
  std::vector<Vec2> poly = dedupe(polygon);
  if (poly.size() > 1 && (poly.front() - poly.back()).norm() <= 1e-12) poly.pop_back();
  if (poly.size() < 3) throw GeometryError("fsd: degenerate polygon");

  const double area = polygon_signed_area(poly);
  if (std::abs(area) <= 0 && path_length(poly) <= 0)
    throw GeometryError("fsd: zero-perimeter polygon");
  const bool reversed = area < 0;
  if (reversed) std::reverse(poly.begin(), poly.end());

  // Perimeter of the given polygon (descriptor l).
  const size_t n = poly.size();
  double perimeter = 0;
  for (size_t i = 0; i < n; ++i) perimeter += (poly[(i + 1) % n] - poly[i]).norm();
  if (perimeter <= 0) throw GeometryError("fsd: zero-perimeter polygon");

  // Resample to equal arc-length vertices; the turning function of the
  // resampled polygon is a staircase integrated exactly below.
  constexpr int kSamples = 1024;
  std::vector<Vec2> rs(kSamples);
  {
    std::vector<double> cum(n + 1, 0.0);
    for (size_t i = 0; i < n; ++i)
      cum[i + 1] = cum[i] + (poly[(i + 1) % n] - poly[i]).norm();
    size_t seg = 0;
    for (int k = 0; k < kSamples; ++k) {
      const double s = perimeter * double(k) / kSamples;
      while (seg + 1 < n + 1 && cum[seg + 1] < s) ++seg;
      const double ds = cum[seg + 1] - cum[seg];
      const double f = ds > 0 ? (s - cum[seg]) / ds : 0.0;
      const Vec2 a = poly[seg % n];
      const Vec2 b = poly[(seg + 1) % n];
      rs[k] = a + f * (b - a);
    }
  }
  rs = dedupe(rs);
  const int m = int(rs.size());
  if (m < 3) throw GeometryError("fsd: polygon collapses under resampling");

  // Segment angles and cumulative turning; phi is constant per segment.
  std::vector<double> seg_len(m), seg_ang(m);
  for (int i = 0; i < m; ++i) {
    const Vec2 d = rs[(i + 1) % m] - rs[i];
    seg_len[i] = d.norm();
    seg_ang[i] = std::atan2(d.y(), d.x());
  }
  double total_len = 0;
  for (int i = 0; i < m; ++i) total_len += seg_len[i];

  std::vector<double> phi(m, 0.0);  // cumulative turning at segment i
  for (int i = 1; i < m; ++i) {
    const double turn = wrap_angle_pi(seg_ang[i] - seg_ang[i - 1]);
    phi[i] = phi[i - 1] + turn;
  }

  // Normalized turning function phi*(t) = phi(tL/2pi) - t over [0, 2pi];
  // integrate (phi_i - t) against cos(kt), sin(kt) exactly per segment.
  FsDescriptor out;
  out.alpha.assign(n_coeffs, 0.0);
  out.beta.assign(n_coeffs, 0.0);
  double t0 = 0;
  for (int i = 0; i < m; ++i) {
    const double t1 = t0 + 2.0 * kPi * seg_len[i] / total_len;
    for (int k = 1; k <= n_coeffs; ++k) {
      const double s1 = std::sin(k * t1), s0 = std::sin(k * t0);
      const double c1 = std::cos(k * t1), c0 = std::cos(k * t0);
      // int phi_i cos(kt) dt = phi_i (s1 - s0)/k
      // int t cos(kt) dt = [t sin(kt)/k + cos(kt)/k^2]
      const double int_cos = phi[i] * (s1 - s0) / k -
                             ((t1 * s1 - t0 * s0) / k + (c1 - c0) / (k * k));
      // int phi_i sin(kt) dt = -phi_i (c1 - c0)/k
      // int t sin(kt) dt = [-t cos(kt)/k + sin(kt)/k^2]
      const double int_sin = -phi[i] * (c1 - c0) / k -
                             ((-t1 * c1 + t0 * c0) / k + (s1 - s0) / (k * k));
      out.alpha[k - 1] += int_cos / kPi;
      out.beta[k - 1] += int_sin / kPi;
    }
    t0 = t1;
  }

  out.length = perimeter;
  out.theta = seg_ang[0];
  return out;
}

double total_error(const FsDescriptor& d, const FsDescriptor& a, const Weights& w) {
  if (d.alpha.size() != a.alpha.size() || d.beta.size() != a.beta.size())
    throw GeometryError("total_error: descriptor sizes differ");
  double alpha_e = 0, beta_e = 0;
  for (size_t i = 0; i < d.alpha.size(); ++i) {
    alpha_e += (d.alpha[i] - a.alpha[i]) * (d.alpha[i] - a.alpha[i]);
    beta_e += (d.beta[i] - a.beta[i]) * (d.beta[i] - a.beta[i]);
  }
  const double l_e = (d.length - a.length) * (d.length - a.length);
  const double th_e = (d.theta - a.theta) * (d.theta - a.theta);
  return w.alpha * alpha_e + w.beta * beta_e + w.length * l_e + w.theta * th_e;
}

std::optional<FsDescriptor> describe_path(const std::vector<Vec2>& path, int n_coeffs) {
  auto poly = close_curve(path);
  if (!poly) return std::nullopt;
  try {
    return fsd(*poly, n_coeffs);
  } catch (const GeometryError&) {
    return std::nullopt;
  }
}

}  // namespace ccm
