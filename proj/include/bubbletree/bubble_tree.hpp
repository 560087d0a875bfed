#pragma once

#include <string>
#include <vector>

#include "bubbletree/renormalize.hpp"

namespace bubbletree {

enum class VertexKind { base, bubble, ghost };
enum class VertexChart { domain, sphere_minus_infty };

const char* vertex_kind_name(VertexKind k);
const char* vertex_chart_name(VertexChart c);

struct BubbleVertex {
  int id = 0;
  VertexKind kind = VertexKind::base;
  bool vanished = false;
  double area = 0.0;  // limit functionals away from the vertex's bubble disks
  double energy = 0.0;
  VertexChart chart = VertexChart::domain;
  bool truncated = false;  // some bubble left unexpanded (depth cap or budget)
};

struct BubbleEdge {
  int parent = 0;
  int child = 0;
  Vec2 point;
  double area_mass = 0.0;
  double energy_mass = 0.0;
  double area_loss = 0.0;
  bool efficient = false;
};

struct BubbleTree {
  double C1 = 0.0;
  double C2 = 0.0;
  int root = 0;
  std::vector<BubbleVertex> vertices;
  std::vector<BubbleEdge> edges;
};

struct TreeConfig {
  DetectionConfig detection;
  BlowupConfig blowup;
  int max_depth = 4;  // 0 analyzes the root without expanding bubbles
  double efficiency_tol = 0.05;
  // Child profile radius as a fraction of the child window.
  double child_profile_fraction = 0.25;
  // A vertex vanishes when the tail maximum of phi away from its bubbles is
  // below vanish_threshold, or falls strictly by vanish_drop overall while
  // the last-frame area there is at most vanish_area_fraction of the total.
  double vanish_threshold = -8.0;
  double vanish_drop = 1.0;
  double vanish_area_fraction = 0.01;
};

struct TreeBuild {
  BubbleTree tree;
  std::vector<NeckSpec> necks;               // per edge
  std::vector<MetricSequence> sequences;     // per vertex
  std::vector<Detection> detections;         // per vertex
  std::vector<double> sup_outside;           // per vertex, last tail frame
  std::vector<std::string> warnings;
};

TreeBuild build_tree(const MetricSequence& seq, const TreeConfig& cfg = {});

// Throws on a malformed tree, a ghost with fewer than two children, or an
// edge carrying less than the bubble threshold.
void check_structure(const BubbleTree& tree, double eta = 0.25);

struct MassCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // relative
  bool pass = false;
};

struct MassReport {
  double total_area = 0.0;
  double total_energy = 0.0;
  double tolerance = 0.0;
  std::vector<MassCheck> checks;
  bool pass = false;
};

MassReport mass_accounting(const TreeBuild& build, double tol = 0.05);

struct ThinComponent {
  int edge = 0;
  double inner_radius = 0.0;  // largest delta_n r2 over the tail
  double outer_radius = 0.0;  // r1
  double max_circle_length = 0.0;
};

struct ThickComponent {
  int vertex = 0;
  VertexKind kind = VertexKind::base;
  double area = 0.0;
};

struct ThickThin {
  double eps = 0.0;
  std::vector<ThickComponent> thick;
  std::vector<ThinComponent> thin;
};

ThickThin thick_thin(const TreeBuild& build, double eps);

std::string serialize(const BubbleTree& tree);
BubbleTree parse_tree(const std::string& json);
std::string serialize(const ThickThin& tt);
std::string serialize(const MassReport& report);

}  // namespace bubbletree
