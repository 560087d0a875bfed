#include "bubbletree/geometry.hpp"

#include <algorithm>
#include <array>
#include <vector>

#include "bubbletree/error.hpp"

namespace bubbletree {

const char* chart_kind_name(ChartKind kind) {
  switch (kind) {
    case ChartKind::disk: return "disk";
    case ChartKind::plane_window: return "plane_window";
    case ChartKind::annulus: return "annulus";
  }
  return "?";
}

ChartKind parse_chart_kind(const std::string& name) {
  if (name == "disk") return ChartKind::disk;
  if (name == "plane_window") return ChartKind::plane_window;
  if (name == "annulus") return ChartKind::annulus;
  throw Error(ErrorCode::InvalidChart, "unknown chart kind '" + name + "'");
}

namespace {

double corner_far(double x0, double x1, double y0, double y1, Vec2 c) {
  double dx = std::max(std::abs(x0 - c.x), std::abs(x1 - c.x));
  double dy = std::max(std::abs(y0 - c.y), std::abs(y1 - c.y));
  return std::hypot(dx, dy);
}

double nearest(double x0, double x1, double y0, double y1, Vec2 c) {
  double dx = std::max({x0 - c.x, 0.0, c.x - x1});
  double dy = std::max({y0 - c.y, 0.0, c.y - y1});
  return std::hypot(dx, dy);
}

// Antiderivative of sqrt(R^2 - x^2).
double circle_primitive(double x, double r) {
  double t = std::clamp(x / r, -1.0, 1.0);
  return 0.5 * (x * std::sqrt(std::max(0.0, r * r - x * x)) + r * r * std::asin(t));
}

double clip_halfplane_area(double a, double b, double nx, double ny, double d) {
  // Area of [-a,a]x[-b,b] ∩ {nx*x + ny*y <= d}.
  std::array<Vec2, 4> quad{Vec2{-a, -b}, Vec2{a, -b}, Vec2{a, b}, Vec2{-a, b}};
  std::vector<Vec2> out;
  out.reserve(8);
  for (int k = 0; k < 4; ++k) {
    Vec2 p = quad[k];
    Vec2 q = quad[(k + 1) % 4];
    double sp = nx * p.x + ny * p.y - d;
    double sq = nx * q.x + ny * q.y - d;
    if (sp <= 0) out.push_back(p);
    if ((sp < 0 && sq > 0) || (sp > 0 && sq < 0)) {
      double t = sp / (sp - sq);
      out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
    }
  }
  double area = 0.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Vec2& p = out[k];
    const Vec2& q = out[(k + 1) % out.size()];
    area += p.x * q.y - q.x * p.y;
  }
  return 0.5 * std::abs(area);
}

double disk_rect_area(double x0, double x1, double y0, double y1, Vec2 c, double r) {
  x0 -= c.x;
  x1 -= c.x;
  y0 -= c.y;
  y1 -= c.y;
  double w = x1 - x0;
  double h = y1 - y0;
  if (corner_far(x0, x1, y0, y1, {0, 0}) <= r) return w * h;
  if (nearest(x0, x1, y0, y1, {0, 0}) >= r) return 0.0;
  double mx = 0.5 * (x0 + x1);
  double my = 0.5 * (y0 + y1);
  double dist = std::hypot(mx, my);
  if (std::max(w, h) < 1e-4 * r && dist > 0) {
    // Boundary is straight to within (size/r)^2 across the rectangle.
    return clip_halfplane_area(0.5 * w, 0.5 * h, mx / dist, my / dist, r - dist);
  }
  std::vector<double> cuts{x0, x1};
  for (double y : {y0, y1}) {
    if (std::abs(y) < r) {
      double s = std::sqrt(r * r - y * y);
      cuts.push_back(s);
      cuts.push_back(-s);
    }
  }
  cuts.push_back(r);
  cuts.push_back(-r);
  std::sort(cuts.begin(), cuts.end());
  double lo_x = std::max(x0, -r);
  double hi_x = std::min(x1, r);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    double a = std::max(cuts[k], lo_x);
    double b = std::min(cuts[k + 1], hi_x);
    if (b <= a) continue;
    double m = 0.5 * (a + b);
    double s = std::sqrt(std::max(0.0, r * r - m * m));
    bool top_is_circle = s <= y1;
    bool bottom_is_circle = -s >= y0;
    double top = top_is_circle ? s : y1;
    double bottom = bottom_is_circle ? -s : y0;
    if (top <= bottom) continue;
    double arc = circle_primitive(b, r) - circle_primitive(a, r);
    double upper = top_is_circle ? arc : y1 * (b - a);
    double lower = bottom_is_circle ? -arc : y0 * (b - a);
    total += upper - lower;
  }
  return std::clamp(total, 0.0, w * h);
}

double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

}  // namespace

bool Region::contains(Vec2 p) const {
  double dx = p.x - center.x;
  double dy = p.y - center.y;
  switch (kind) {
    case ChartKind::disk: return std::hypot(dx, dy) <= outer_radius;
    case ChartKind::plane_window:
      return std::abs(dx) <= outer_radius && std::abs(dy) <= outer_radius;
    case ChartKind::annulus: {
      double r = std::hypot(dx, dy);
      return r <= outer_radius && r >= inner_radius;
    }
  }
  return false;
}

bool Region::contains_rect(double x0, double x1, double y0, double y1) const {
  switch (kind) {
    case ChartKind::disk: return corner_far(x0, x1, y0, y1, center) <= outer_radius;
    case ChartKind::plane_window:
      return x0 >= center.x - outer_radius && x1 <= center.x + outer_radius &&
             y0 >= center.y - outer_radius && y1 <= center.y + outer_radius;
    case ChartKind::annulus:
      return corner_far(x0, x1, y0, y1, center) <= outer_radius &&
             nearest(x0, x1, y0, y1, center) >= inner_radius;
  }
  return false;
}

bool Region::disjoint_rect(double x0, double x1, double y0, double y1) const {
  switch (kind) {
    case ChartKind::disk: return nearest(x0, x1, y0, y1, center) >= outer_radius;
    case ChartKind::plane_window:
      return x1 <= center.x - outer_radius || x0 >= center.x + outer_radius ||
             y1 <= center.y - outer_radius || y0 >= center.y + outer_radius;
    case ChartKind::annulus:
      return nearest(x0, x1, y0, y1, center) >= outer_radius ||
             corner_far(x0, x1, y0, y1, center) <= inner_radius;
  }
  return true;
}

double Region::rect_fraction(double x0, double x1, double y0, double y1) const {
  double a = (x1 - x0) * (y1 - y0);
  if (a <= 0) return 0.0;
  if (contains_rect(x0, x1, y0, y1)) return 1.0;
  if (disjoint_rect(x0, x1, y0, y1)) return 0.0;
  double inside = 0.0;
  switch (kind) {
    case ChartKind::disk:
      inside = disk_rect_area(x0, x1, y0, y1, center, outer_radius);
      break;
    case ChartKind::plane_window:
      inside = overlap(x0, x1, center.x - outer_radius, center.x + outer_radius) *
               overlap(y0, y1, center.y - outer_radius, center.y + outer_radius);
      break;
    case ChartKind::annulus:
      inside = disk_rect_area(x0, x1, y0, y1, center, outer_radius) -
               disk_rect_area(x0, x1, y0, y1, center, inner_radius);
      break;
  }
  return std::clamp(inside / a, 0.0, 1.0);
}

bool Region::inside(const Region& o, double tol) const {
  double d = norm(center - o.center);
  double ext = outer_radius;
  if (kind == ChartKind::plane_window) {
    double x0 = center.x - ext, x1 = center.x + ext, y0 = center.y - ext, y1 = center.y + ext;
    switch (o.kind) {
      case ChartKind::disk: return corner_far(x0, x1, y0, y1, o.center) <= o.outer_radius + tol;
      case ChartKind::plane_window:
        return x0 >= o.center.x - o.outer_radius - tol && x1 <= o.center.x + o.outer_radius + tol &&
               y0 >= o.center.y - o.outer_radius - tol && y1 <= o.center.y + o.outer_radius + tol;
      case ChartKind::annulus:
        return corner_far(x0, x1, y0, y1, o.center) <= o.outer_radius + tol &&
               nearest(x0, x1, y0, y1, o.center) >= o.inner_radius - tol;
    }
  }
  // Disk, or annulus judged by its outer disk and hole.
  bool outer_ok = false;
  switch (o.kind) {
    case ChartKind::disk: outer_ok = d + ext <= o.outer_radius + tol; break;
    case ChartKind::plane_window:
      outer_ok = std::abs(center.x - o.center.x) + ext <= o.outer_radius + tol &&
                 std::abs(center.y - o.center.y) + ext <= o.outer_radius + tol;
      break;
    case ChartKind::annulus: {
      outer_ok = d + ext <= o.outer_radius + tol;
      if (!outer_ok) return false;
      if (d - ext >= o.inner_radius - tol) return true;
      return kind == ChartKind::annulus && d + o.inner_radius <= inner_radius + tol;
    }
  }
  return outer_ok;
}

double Region::area() const {
  constexpr double pi = 3.14159265358979323846;
  switch (kind) {
    case ChartKind::disk: return pi * outer_radius * outer_radius;
    case ChartKind::plane_window: return 4.0 * outer_radius * outer_radius;
    case ChartKind::annulus:
      return pi * (outer_radius * outer_radius - inner_radius * inner_radius);
  }
  return 0.0;
}

void DomainChart::validate() const {
  if (grid_n < 16) throw Error(ErrorCode::GridTooCoarse, "grid_n must be at least 16");
  if (!std::isfinite(region.center.x) || !std::isfinite(region.center.y) ||
      !std::isfinite(region.outer_radius) || !(region.outer_radius > 0)) {
    throw Error(ErrorCode::InvalidChart, "chart needs a finite center and positive radius");
  }
  if (region.kind == ChartKind::annulus &&
      !(region.inner_radius > 0 && region.inner_radius < region.outer_radius)) {
    throw Error(ErrorCode::InvalidChart, "annulus needs 0 < inner_radius < outer_radius");
  }
}

double DomainChart::node_x(int i) const {
  return region.center.x + region.outer_radius * (2.0 * i - (grid_n - 1)) / (grid_n - 1);
}

double DomainChart::node_y(int j) const {
  return region.center.y + region.outer_radius * (2.0 * j - (grid_n - 1)) / (grid_n - 1);
}

void DomainChart::cell_bounds(int i, int j, double& x0, double& x1, double& y0,
                              double& y1) const {
  const double r = region.outer_radius;
  const double m = grid_n - 1;
  auto edge = [&](double c, int k) { return c + r * (2.0 * k - 1 - m) / m; };
  x0 = std::max(edge(region.center.x, i), region.center.x - r);
  x1 = std::min(edge(region.center.x, i + 1), region.center.x + r);
  y0 = std::max(edge(region.center.y, j), region.center.y - r);
  y1 = std::min(edge(region.center.y, j + 1), region.center.y + r);
}

bool operator==(const Region& a, const Region& b) {
  return a.kind == b.kind && a.center.x == b.center.x && a.center.y == b.center.y &&
         a.outer_radius == b.outer_radius && a.inner_radius == b.inner_radius;
}

bool operator==(const DomainChart& a, const DomainChart& b) {
  return a.region == b.region && a.grid_n == b.grid_n;
}

}  // namespace bubbletree
