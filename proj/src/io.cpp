#include "uavcov/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "uavcov/errors.hpp"

namespace uavcov {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_trajectory_csv(const TrajectoryLog& log, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "step,t,id,x,y,z,u_x,u_y,u_z\n";
  for (const auto& rec : log.records) {
    for (std::size_t k = 0; k < rec.nodes.size(); ++k) {
      const auto& n = rec.nodes[k];
      const ControlInput u = k < rec.inputs.size() ? rec.inputs[k] : ControlInput{};
      out << rec.step << ',' << fmt17(rec.t) << ',' << n.id << ',' << fmt17(n.q.x) << ','
          << fmt17(n.q.y) << ',' << fmt17(n.z) << ',' << fmt17(u.u_q.x) << ',' << fmt17(u.u_q.y)
          << ',' << fmt17(u.u_z) << '\n';
    }
  }
  if (!out) throw IoError("failed writing " + path.string());
}

void write_metrics_json(const TrajectoryLog& log, const std::filesystem::path& path) {
  using nlohmann::json;
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json timeline = json::array();
  for (const auto& rec : log.records) {
    timeline.push_back({{"step", rec.step},
                        {"t", rec.t},
                        {"H", rec.H},
                        {"H_max_form", num(rec.H_max_form)},
                        {"H_max_form_bound", num(rec.H_max_form_bound)},
                        {"H_over_Hopt", log.h_opt > 0.0 ? num(rec.H / log.h_opt) : json(nullptr)},
                        {"covered_area_ratio", rec.covered_area_ratio}});
  }
  const json doc{{"H_opt", log.h_opt},
                 {"converged", log.converged},
                 {"steps_taken", log.steps_taken},
                 {"clamp_activations", log.clamp_activations},
                 {"projections", log.projections},
                 {"timeline", timeline}};
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<TrajectoryRow> read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("step,t,id,x,y,z,u_x,u_y,u_z", 0) != 0) {
    throw ParseError(path.string() + ": unexpected header");
  }
  std::vector<TrajectoryRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 9) throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected 9 fields");
    try {
      TrajectoryRow r;
      r.step = std::stoi(f[0]);
      r.t = std::stod(f[1]);
      r.node.id = std::stoi(f[2]);
      r.node.q = {std::stod(f[3]), std::stod(f[4])};
      r.node.z = std::stod(f[5]);
      r.u_q = {std::stod(f[6]), std::stod(f[7])};
      r.u_z = std::stod(f[8]);
      rows.push_back(r);
    } catch (const std::exception&) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return rows;
}

std::vector<NodeState> final_nodes_from_csv(const std::filesystem::path& path) {
  const auto rows = read_trajectory_csv(path);
  std::vector<NodeState> out;
  if (rows.empty()) return out;
  const int last = rows.back().step;
  for (const auto& r : rows) {
    if (r.step == last) out.push_back(r.node);
  }
  return out;
}

namespace {

std::string xy(Point2 p) {
  std::ostringstream os;
  os.precision(9);
  os << p.x << ',' << p.y;
  return os.str();
}

// Path data for one piece, assuming the pen is at its start.
std::string piece_path(const geom::BoundaryPiece& piece) {
  std::ostringstream os;
  os.precision(9);
  if (const geom::Arc* a = piece.arc()) {
    // SVG cannot draw a closed arc in one command; split it in halves.
    const int parts = std::abs(a->sweep) > geom::kPi ? 2 : 1;
    for (int k = 0; k < parts; ++k) {
      const auto half = piece.sub(static_cast<double>(k) / parts, static_cast<double>(k + 1) / parts);
      const int sweep_flag = a->sweep > 0.0 ? 1 : 0;
      os << " A " << a->radius << ',' << a->radius << " 0 0 " << sweep_flag << ' ' << xy(half.end());
    }
  } else {
    os << " L " << xy(piece.end());
  }
  return os.str();
}

const char* label_class(geom::LabelKind k) {
  switch (k) {
    case geom::LabelKind::OwnSensingCircle: return "own";
    case geom::LabelKind::WorldBoundary: return "world";
    case geom::LabelKind::DominanceVs: return "dominance";
    case geom::LabelKind::TieBisectorVs: return "tie";
  }
  return "other";
}

}  // namespace

void write_snapshot_svg(const SwarmState& s, const std::vector<Cell>& cells,
                        const std::filesystem::path& path) {
  geom::Box box = s.omega.bounds();
  for (const auto& n : s.nodes) {
    const auto d = s.model.sensing_disk(n);
    box.include(d.center - Point2{d.radius, d.radius});
    box.include(d.center + Point2{d.radius, d.radius});
  }
  box = box.expanded(0.05 * std::max(box.width(), box.height()));
  const double px = 800.0 / std::max(box.width(), box.height());
  auto out = open_out(path);
  out.precision(9);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << box.width() * px << "\" height=\""
      << box.height() * px << "\" viewBox=\"" << box.lo.x << ' ' << -box.hi.y << ' ' << box.width() << ' '
      << box.height() << "\">\n";
  out << "<style>path,circle,polygon{fill:none;vector-effect:non-scaling-stroke;stroke-width:1.5}"
         ".omega{stroke:#000}.sensing{stroke:#999;stroke-dasharray:4 3}.own{stroke:#2a7de1}"
         ".world{stroke:#444}.dominance{stroke:#d0312d}.tie{stroke:#e69f00}"
         ".node{fill:#000;stroke:none}</style>\n";
  out << "<g transform=\"scale(1,-1)\">\n<polygon class=\"omega\" points=\"";
  for (const auto& v : s.omega.vertices()) out << xy(v) << ' ';
  out << "\"/>\n";
  for (const auto& n : s.nodes) {
    out << "<circle class=\"sensing\" data-id=\"" << n.id << "\" cx=\"" << n.q.x << "\" cy=\"" << n.q.y
        << "\" r=\"" << s.model.radius(n.z) << "\"/>\n";
  }
  for (const auto& c : cells) {
    if (c.region.empty()) continue;
    out << "<g class=\"cell\" data-owner=\"" << c.owner << "\">\n";
    c.region.for_each_piece([&](const geom::BoundaryPiece& p) {
      out << "<path class=\"" << label_class(p.label.kind) << "\" d=\"M " << xy(p.start())
          << piece_path(p) << "\"/>\n";
    });
    out << "</g>\n";
  }
  for (const auto& n : s.nodes) {
    out << "<circle class=\"node\" cx=\"" << n.q.x << "\" cy=\"" << n.q.y << "\" r=\""
        << 0.01 * std::max(box.width(), box.height()) << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace uavcov
