#pragma once

#include <cmath>
#include <string>

namespace bubbletree {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

enum class ChartKind { disk, plane_window, annulus };

const char* chart_kind_name(ChartKind kind);
ChartKind parse_chart_kind(const std::string& name);

// Disk, square window (half-width outer_radius) or annulus about center.
struct Region {
  ChartKind kind = ChartKind::disk;
  Vec2 center;
  double outer_radius = 1.0;
  double inner_radius = 0.0;

  static Region disk(Vec2 c, double r) { return {ChartKind::disk, c, r, 0.0}; }
  static Region window(Vec2 c, double r) { return {ChartKind::plane_window, c, r, 0.0}; }
  static Region annulus(Vec2 c, double r_in, double r_out) {
    return {ChartKind::annulus, c, r_out, r_in};
  }

  bool contains(Vec2 p) const;
  // Every point of the closed rectangle lies in the region.
  bool contains_rect(double x0, double x1, double y0, double y1) const;
  bool disjoint_rect(double x0, double x1, double y0, double y1) const;
  // Area of rectangle ∩ region divided by rectangle area.
  double rect_fraction(double x0, double x1, double y0, double y1) const;
  // Region lies inside other (closed sets, with tolerance tol).
  bool inside(const Region& other, double tol = 0.0) const;
  double area() const;
};

// Chart of a conformal metric: a region sampled on a uniform grid covering
// its bounding square [c - R, c + R]^2.
struct DomainChart {
  Region region;
  int grid_n = 64;

  static DomainChart disk(Vec2 c, double r, int n) { return {Region::disk(c, r), n}; }
  static DomainChart window(Vec2 c, double r, int n) { return {Region::window(c, r), n}; }
  static DomainChart annulus(Vec2 c, double r_in, double r_out, int n) {
    return {Region::annulus(c, r_in, r_out), n};
  }

  ChartKind kind() const { return region.kind; }
  Vec2 center() const { return region.center; }
  double outer_radius() const { return region.outer_radius; }
  double inner_radius() const { return region.inner_radius; }

  void validate() const;
  double spacing() const { return 2.0 * region.outer_radius / (grid_n - 1); }
  double node_x(int i) const;
  double node_y(int j) const;
  Vec2 node(int i, int j) const { return {node_x(i), node_y(j)}; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * grid_n + i; }
  std::size_t node_count() const { return static_cast<std::size_t>(grid_n) * grid_n; }
  bool contains(Vec2 p) const { return region.contains(p); }
  // Dual cell of node (i, j) clipped to the bounding square.
  void cell_bounds(int i, int j, double& x0, double& x1, double& y0, double& y1) const;
};

bool operator==(const Region& a, const Region& b);
bool operator==(const DomainChart& a, const DomainChart& b);

}  // namespace bubbletree
