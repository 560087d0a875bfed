#include "bubbletree/bubble_tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "bubbletree/error.hpp"
#include "json.hpp"

namespace bubbletree {

const char* vertex_kind_name(VertexKind k) {
  switch (k) {
    case VertexKind::base: return "base";
    case VertexKind::bubble: return "bubble";
    case VertexKind::ghost: return "ghost";
  }
  return "?";
}

const char* vertex_chart_name(VertexChart c) {
  return c == VertexChart::domain ? "domain" : "sphere_minus_infty";
}

namespace {

constexpr double kPi = std::numbers::pi;

class Builder {
 public:
  explicit Builder(const TreeConfig& cfg)
      : cfg_(cfg), quantum_(4.0 * kPi * kPi * (1.0 - cfg.detection.eta) * (1.0 - cfg.detection.eta)) {}

  TreeBuild run(const MetricSequence& seq) {
    build(seq, cfg_.detection, 0, VertexChart::domain);
    out_.tree.root = 0;
    out_.tree.C1 = out_.detections[0].C1;
    out_.tree.C2 = out_.detections[0].C2;
    return std::move(out_);
  }

 private:
  int build(const MetricSequence& seq, const DetectionConfig& dc, int depth, VertexChart chart) {
    int id = static_cast<int>(out_.tree.vertices.size());
    out_.tree.vertices.push_back({id, VertexKind::base, false, 0.0, 0.0, chart});
    out_.sequences.push_back(seq);
    out_.sup_outside.push_back(0.0);
    Detection det;
    try {
      det = detect_bubbles(seq, dc);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RadiusUnresolvable || depth == 0) throw;
      warn("vertex " + std::to_string(id) + ": " + e.what());
      det.C1 = total_functionals(seq.frames.back()).area;
      det.C2 = total_functionals(seq.frames.back()).energy;
    }
    out_.detections.push_back(det);
    if (depth == 0) budget_ = det.C1 * det.C2;

    std::vector<const BubbleCandidate*> expanded;
    for (const auto& cand : det.accepted) {
      std::string where = "vertex " + std::to_string(id) + " bubble at (" +
                          std::to_string(cand.center.x) + ", " + std::to_string(cand.center.y) + ")";
      if (depth >= cfg_.max_depth) {
        warn(where + ": depth cap reached, not expanded");
        out_.tree.vertices[id].truncated = true;
        continue;
      }
      if ((out_.tree.edges.size() + 1) * quantum_ > budget_ * (1.0 + 1e-9)) {
        warn(where + ": recursion budget exhausted, not expanded");
        out_.tree.vertices[id].truncated = true;
        continue;
      }
      BlowupResult b;
      try {
        b = blowup(seq, cand, cfg_.blowup);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoConcentration) throw;
        warn(where + ": " + e.what());
        continue;
      }
      for (const auto& w : b.warnings) warn(where + ": " + w);
      expanded.push_back(&cand);
      BubbleEdge edge;
      edge.parent = id;
      edge.child = static_cast<int>(out_.tree.vertices.size());
      edge.point = cand.center;
      edge.area_mass = cand.profile.A_p;
      edge.energy_mass = cand.profile.K_p;
      edge.area_loss = b.tau;
      edge.efficient = std::abs(b.tau) <= cfg_.efficiency_tol;
      out_.tree.edges.push_back(edge);
      out_.necks.push_back(std::move(b.neck));
      DetectionConfig child = dc;
      child.profile_radius = cfg_.child_profile_fraction * out_.necks.back().r2;
      child.merge_radius = 0.0;
      build(b.child, child, depth + 1, VertexChart::sphere_minus_infty);
    }

    // Limit functionals and vanishing away from the expanded bubble disks.
    const MetricGrid& last = seq.frames.back();
    Functionals total = total_functionals(last);
    double area = total.area, energy = total.energy;
    for (const auto* c : expanded) {
      Functionals f = functionals(last, Region::disk(c->profile.frame_centers.back(), c->profile.r_min()));
      area -= f.area;
      energy -= f.energy;
    }
    std::size_t k0 = seq.size() > dc.tail_window ? seq.size() - dc.tail_window : 0;
    std::vector<double> sups;
    for (std::size_t k = k0; k < seq.size(); ++k) {
      std::vector<Region> holes;
      for (const auto* c : expanded) {
        holes.push_back(Region::disk(c->profile.frame_centers[k], c->profile.r_min()));
      }
      sups.push_back(seq.frames[k].vanished() ? -std::numeric_limits<double>::infinity()
                                              : sup_phi_outside(seq.frames[k], holes));
    }
    bool falling = sups.size() >= 2;
    for (std::size_t k = 1; k < sups.size(); ++k) falling = falling && sups[k] < sups[k - 1];
    bool vanished = last.vanished() || sups.back() < cfg_.vanish_threshold ||
                    (falling && sups.front() - sups.back() >= cfg_.vanish_drop &&
                     area <= cfg_.vanish_area_fraction * total.area);
    BubbleVertex& v = out_.tree.vertices[id];
    v.area = area;
    v.energy = energy;
    v.vanished = vanished;
    v.kind = vanished ? VertexKind::ghost : (depth == 0 ? VertexKind::base : VertexKind::bubble);
    out_.sup_outside[id] = sups.back();
    return id;
  }

  void warn(const std::string& w) { out_.warnings.push_back(w); }

  const TreeConfig& cfg_;
  double quantum_;
  double budget_ = 0.0;
  TreeBuild out_;
};

std::string real(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* flag(bool b) { return b ? "true" : "false"; }

}  // namespace

TreeBuild build_tree(const MetricSequence& seq, const TreeConfig& cfg) {
  seq.validate();
  Builder b(cfg);
  TreeBuild out = b.run(seq);
  check_structure(out.tree, cfg.detection.eta);
  return out;
}

void check_structure(const BubbleTree& t, double eta) {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::MalformedTree, m); };
  std::size_t nv = t.vertices.size();
  if (nv == 0) fail("tree has no vertices");
  if (t.root != 0) fail("root must be vertex 0");
  if (t.edges.size() + 1 != nv) fail("edge count must be one less than vertex count");
  std::vector<int> parents(nv, 0), children(nv, 0);
  for (std::size_t k = 0; k < nv; ++k) {
    if (t.vertices[k].id != static_cast<int>(k)) fail("vertex ids must match positions");
  }
  for (const auto& e : t.edges) {
    if (e.parent < 0 || e.child < 0 || e.parent >= static_cast<int>(nv) ||
        e.child >= static_cast<int>(nv) || e.child <= e.parent) {
      fail("edge endpoints out of order");
    }
    ++parents[e.child];
    ++children[e.parent];
  }
  if (parents[0] != 0) fail("root has a parent");
  for (std::size_t k = 1; k < nv; ++k) {
    if (parents[k] != 1) fail("vertex " + std::to_string(k) + " needs exactly one parent");
    const auto& v = t.vertices[k];
    if (v.chart != VertexChart::sphere_minus_infty) fail("bubble vertex must use a sphere chart");
    if (v.kind == VertexKind::base) fail("only the root may be a base vertex");
    if (v.kind == VertexKind::ghost && children[k] < 2) {
      throw Error(ErrorCode::GhostLawViolated,"ghost vertex " + std::to_string(k) + " has fewer than two children");
    }
  }
  for (const auto& v : t.vertices) {
    if ((v.kind == VertexKind::ghost) != v.vanished) {
      fail("vertex " + std::to_string(v.id) + " kind disagrees with its vanished flag");
    }
  }
  int irregular = 0;
  for (std::size_t k = 0; k < nv; ++k) {
    if (children[k] + parents[k] != 2) ++irregular;
  }
  if (irregular > std::sqrt(std::max(0.0, t.C1 * t.C2)) + 1.0) {
    fail(std::to_string(irregular) + " vertices of valence other than 2 exceed the mass bound");
  }
  for (const auto& e : t.edges) {
    if (std::sqrt(e.area_mass * e.energy_mass) < (1.0 - eta) * 2.0 * kPi) {
      throw Error(ErrorCode::BudgetViolated, "edge mass below the bubble threshold");
    }
  }
}

MassReport mass_accounting(const TreeBuild& b, double tol) {
  const BubbleTree& t = b.tree;
  MassReport r;
  r.tolerance = tol;
  Functionals total = total_functionals(b.sequences[0].frames.back());
  r.total_area = total.area;
  r.total_energy = total.energy;
  auto add = [&](const std::string& name, double lhs, double rhs, double scale, bool one_sided) {
    MassCheck c{name, lhs, rhs, 0.0, false};
    double diff = one_sided ? std::max(0.0, rhs - lhs) : std::abs(lhs - rhs);
    c.residual = scale > 0 ? diff / scale : diff;
    c.pass = c.residual <= tol;
    r.checks.push_back(c);
  };
  double a = t.vertices[0].area, e = t.vertices[0].energy;
  for (const auto& edge : t.edges) {
    if (edge.parent != 0) continue;
    a += edge.area_mass;
    e += edge.energy_mass;
  }
  add("area_identity", r.total_area, a, r.total_area, false);
  add("energy_inequality", r.total_energy, e, r.total_energy, true);
  for (std::size_t k = 0; k < t.edges.size(); ++k) {
    const auto& edge = t.edges[k];
    double rhs = t.vertices[edge.child].area + edge.area_loss;
    for (const auto& sub : t.edges) {
      if (sub.parent == edge.child) rhs += sub.area_mass;
    }
    add("edge_" + std::to_string(k) + "_area", edge.area_mass, rhs, edge.area_mass, false);
  }
  double all = 0.0;
  for (const auto& v : t.vertices) all += v.area;
  for (const auto& edge : t.edges) all += edge.area_loss;
  add("area_conservation", r.total_area, all, r.total_area, false);
  r.pass = std::all_of(r.checks.begin(), r.checks.end(), [](const MassCheck& c) { return c.pass; });
  return r;
}

ThickThin thick_thin(const TreeBuild& b, double eps) {
  ThickThin tt;
  tt.eps = eps;
  for (const auto& v : b.tree.vertices) tt.thick.push_back({v.id, v.kind, v.area});
  for (std::size_t k = 0; k < b.necks.size(); ++k) {
    const NeckSpec& n = b.necks[k];
    ThinComponent c;
    c.edge = static_cast<int>(k);
    c.outer_radius = n.r1;
    for (std::size_t f = 0; f < n.recentered.size(); ++f) {
      double lo = n.delta[f] * n.r2;
      c.inner_radius = std::max(c.inner_radius, lo);
      int steps = std::max(2, static_cast<int>(std::ceil(64.0 * std::log10(n.r1 / lo))));
      for (int s = 0; s <= steps; ++s) {
        double r = lo * std::pow(n.r1 / lo, static_cast<double>(s) / steps);
        c.max_circle_length =
            std::max(c.max_circle_length, circle_length(n.recentered.frames[f], {0, 0}, std::min(r, n.r1)));
      }
    }
    if (!(c.max_circle_length < eps)) {
      throw Error(ErrorCode::ThinViolation, "neck " + std::to_string(k) + " has a circle of length " +
                                                std::to_string(c.max_circle_length));
    }
    tt.thin.push_back(c);
  }
  return tt;
}

std::string serialize(const BubbleTree& t) {
  std::string s = "{\"totals\":{\"C1\":" + real(t.C1) + ",\"C2\":" + real(t.C2) + "},\"root\":" +
                  std::to_string(t.root) + ",\"vertices\":[";
  for (std::size_t k = 0; k < t.vertices.size(); ++k) {
    const auto& v = t.vertices[k];
    if (k) s += ",";
    s += "{\"id\":" + std::to_string(v.id) + ",\"kind\":\"" + vertex_kind_name(v.kind) +
         "\",\"vanished\":" + flag(v.vanished) + ",\"area\":" + real(v.area) +
         ",\"energy\":" + real(v.energy) + ",\"chart\":\"" + vertex_chart_name(v.chart) + "\"" +
         (v.truncated ? ",\"truncated\":true}" : "}");
  }
  s += "],\"edges\":[";
  for (std::size_t k = 0; k < t.edges.size(); ++k) {
    const auto& e = t.edges[k];
    if (k) s += ",";
    s += "{\"parent\":" + std::to_string(e.parent) + ",\"child\":" + std::to_string(e.child) +
         ",\"point\":[" + real(e.point.x) + "," + real(e.point.y) + "],\"area_mass\":" +
         real(e.area_mass) + ",\"energy_mass\":" + real(e.energy_mass) +
         ",\"area_loss\":" + real(e.area_loss) + ",\"efficient\":" + flag(e.efficient) + "}";
  }
  s += "]}\n";
  return s;
}

BubbleTree parse_tree(const std::string& text) {
  BubbleTree t;
  try {
    auto j = nlohmann::json::parse(text);
    t.C1 = j.at("totals").at("C1").get<double>();
    t.C2 = j.at("totals").at("C2").get<double>();
    t.root = j.at("root").get<int>();
    for (const auto& v : j.at("vertices")) {
      BubbleVertex x;
      x.id = v.at("id").get<int>();
      std::string kind = v.at("kind").get<std::string>();
      if (kind != "ghost" && kind != "bubble" && kind != "base") throw Error(ErrorCode::ParseError, "unknown vertex kind '" + kind + "'");
      x.kind = kind == "ghost" ? VertexKind::ghost : kind == "bubble" ? VertexKind::bubble : VertexKind::base;
      x.vanished = v.at("vanished").get<bool>();
      x.truncated = v.value("truncated", false);
      x.area = v.at("area").get<double>();
      x.energy = v.at("energy").get<double>();
      std::string chart = v.at("chart").get<std::string>();
      if (chart != "domain" && chart != "sphere_minus_infty") throw Error(ErrorCode::ParseError, "unknown vertex chart '" + chart + "'");
      x.chart = chart == "domain" ? VertexChart::domain : VertexChart::sphere_minus_infty;
      t.vertices.push_back(x);
    }
    for (const auto& e : j.at("edges")) {
      BubbleEdge x;
      x.parent = e.at("parent").get<int>();
      x.child = e.at("child").get<int>();
      x.point = {e.at("point").at(0).get<double>(), e.at("point").at(1).get<double>()};
      x.area_mass = e.at("area_mass").get<double>();
      x.energy_mass = e.at("energy_mass").get<double>();
      x.area_loss = e.at("area_loss").get<double>();
      x.efficient = e.at("efficient").get<bool>();
      t.edges.push_back(x);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return t;
}

std::string serialize(const ThickThin& tt) {
  std::string s = "{\"eps\":" + real(tt.eps) + ",\"N_thick\":" + std::to_string(tt.thick.size()) +
                  ",\"N_thin\":" + std::to_string(tt.thin.size()) + ",\"thick\":[";
  for (std::size_t k = 0; k < tt.thick.size(); ++k) {
    const auto& c = tt.thick[k];
    if (k) s += ",";
    s += "{\"vertex\":" + std::to_string(c.vertex) + ",\"kind\":\"" + vertex_kind_name(c.kind) +
         "\",\"area\":" + real(c.area) + "}";
  }
  s += "],\"thin\":[";
  for (std::size_t k = 0; k < tt.thin.size(); ++k) {
    const auto& c = tt.thin[k];
    if (k) s += ",";
    s += "{\"edge\":" + std::to_string(c.edge) + ",\"max_circle_length\":" + real(c.max_circle_length) +
         ",\"inner_radius\":" + real(c.inner_radius) + ",\"outer_radius\":" + real(c.outer_radius) + "}";
  }
  s += "]}\n";
  return s;
}

std::string serialize(const MassReport& r) {
  std::string s = "{\"total_area\":" + real(r.total_area) + ",\"total_energy\":" + real(r.total_energy) +
                  ",\"tolerance\":" + real(r.tolerance) + ",\"checks\":[";
  for (std::size_t k = 0; k < r.checks.size(); ++k) {
    const auto& c = r.checks[k];
    if (k) s += ",";
    s += "{\"name\":\"" + c.name + "\",\"lhs\":" + real(c.lhs) + ",\"rhs\":" + real(c.rhs) +
         ",\"residual\":" + real(c.residual) + ",\"pass\":" + flag(c.pass) + "}";
  }
  s += "],\"pass\":" + std::string(flag(r.pass)) + "}\n";
  return s;
}

}  // namespace bubbletree
