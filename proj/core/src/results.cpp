#include "ccm/results.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ccm {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file '" + path + "'");
  return out;
}

std::string num(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", d);
  return buf;
}

}  // namespace

void write_path_csv(const PathTrace& trace, const std::string& path) {
  auto out = open_out(path);
  out << "step,x_mm,y_mm\n";
  for (size_t i = 0; i < trace.points.size(); ++i)
    out << i << "," << num(trace.points[i].x()) << "," << num(trace.points[i].y()) << "\n";
}

void write_search_log_csv(const std::vector<IterationRecord>& history, const std::string& path) {
  auto out = open_out(path);
  out << "iteration,te,accepted,best,penalized\n";
  for (const auto& r : history)
    out << r.iteration << "," << num(r.te) << "," << (r.accepted ? 1 : 0) << "," << num(r.best)
        << "," << (r.penalized ? 1 : 0) << "\n";
}

void write_vector_checkpoint(const DesignVector& v, const std::string& path) {
  auto out = open_out(path);
  out << v.size() << "\n";
  for (double d : v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    out << buf << "\n";
  }
}

DesignVector read_vector_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint '" + path + "'");
  size_t n = 0;
  if (!(in >> n)) throw IoError("checkpoint '" + path + "': bad header");
  DesignVector v(n);
  for (size_t i = 0; i < n; ++i)
    if (!(in >> v[i])) throw IoError("checkpoint '" + path + "': truncated");
  return v;
}

void write_contact_history_csv(const SolveResult& result, const std::string& path) {
  auto out = open_out(path);
  out << "step,pair,node,lambda\n";
  for (size_t s = 0; s < result.contact_history.size(); ++s)
    for (const auto& ev : result.contact_history[s])
      out << s + 1 << "," << ev.pair << "," << ev.node + 1 << "," << num(ev.lambda) << "\n";
}

namespace {

void svg_polyline(std::ostream& o, const std::vector<Vec2>& pts, bool closed,
                  const std::string& stroke, double width, const std::string& fill = "none") {
  o << (closed ? "<polygon" : "<polyline") << " points=\"";
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i) o << " ";
    o << num(pts[i].x()) << "," << num(-pts[i].y());  // y up
  }
  o << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\"" << num(width)
    << "\"/>\n";
}

}  // namespace

std::string render_svg(const CandidateArtifacts& art, const std::vector<Vec2>& desired,
                       const Eigen::VectorXd& u, const PathTrace& partial_trace) {
  const QuadMesh& mesh = art.mesh;
  // Extent over undeformed + deformed nodes + surfaces.
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto grow = [&](const Vec2& p) {
    xmin = std::min(xmin, p.x());
    xmax = std::max(xmax, p.x());
    ymin = std::min(ymin, p.y());
    ymax = std::max(ymax, p.y());
  };
  for (size_t i = 0; i < mesh.nodes.size(); ++i) {
    grow(mesh.nodes[i]);
    grow(mesh.nodes[i] + Vec2(u[2 * i], u[2 * i + 1]));
  }
  for (const auto& s : art.surfaces)
    for (const auto& p : s.boundary) grow(p);
  for (const auto& p : desired) grow(p);
  const double margin = 0.05 * std::max(xmax - xmin, ymax - ymin) + 1.0;
  xmin -= margin;
  xmax += margin;
  ymin -= margin;
  ymax += margin;

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(xmin) << " " << num(-ymax)
    << " " << num(xmax - xmin) << " " << num(ymax - ymin) << "\">\n";

  auto outline = [&](const Eigen::VectorXd* disp, const std::string& color, double w) {
    for (const auto& loop : art.loops) {
      std::vector<Vec2> poly;
      poly.reserve(loop.node_cycle.size());
      for (int id : loop.node_cycle) {
        Vec2 p = mesh.nodes[id];
        if (disp) p += Vec2((*disp)[2 * id], (*disp)[2 * id + 1]);
        poly.push_back(p);
      }
      svg_polyline(o, poly, true, color, w);
    }
  };
  outline(nullptr, "#b0b0b0", 0.4);
  outline(&u, "#cc2222", 0.6);

  for (const auto& s : art.surfaces) svg_polyline(o, s.boundary, true, "#2244cc", 0.5);
  if (desired.size() >= 2) svg_polyline(o, desired, false, "#22aa22", 0.6);
  if (partial_trace.points.size() >= 2)
    svg_polyline(o, partial_trace.points, false, "#2222ee", 0.6);

  o << "</svg>\n";
  return o.str();
}

void write_svg_frames(const CandidateArtifacts& art, const std::vector<Vec2>& desired,
                      const std::string& dir) {
  if (art.solution.step_fields.empty())
    throw IoError("write_svg_frames: no recorded displacement fields");
  std::filesystem::create_directories(dir);
  for (size_t s = 0; s < art.solution.step_fields.size(); ++s) {
    PathTrace partial;
    partial.points.assign(art.solution.trace.points.begin(),
                          art.solution.trace.points.begin() + long(s) + 2);
    char name[32];
    std::snprintf(name, sizeof name, "frame_%03zu.svg", s);
    auto out = open_out((std::filesystem::path(dir) / name).string());
    out << render_svg(art, desired, art.solution.step_fields[s], partial);
  }
}

}  // namespace ccm
