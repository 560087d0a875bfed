#include "bubbletree/grid_metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bubbletree/error.hpp"

namespace bubbletree {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_live(const MetricGrid& g) {
  if (g.vanished()) throw Error(ErrorCode::VanishedMetric, "metric has vanished");
}

// Radial step for difference quotients.
double radial_step(const MetricGrid& g, double r) {
  return g.has_source() ? 1e-5 * r : g.chart().spacing();
}

void require_band(const MetricGrid& g, Vec2 c, double r_lo, double r_hi) {
  if (!(r_lo > 0) || !Region::annulus(c, r_lo, r_hi).inside(g.chart().region, 1e-12 * r_hi)) {
    throw Error(ErrorCode::CircleOutOfChart, "circle does not fit in the chart");
  }
}

}  // namespace

ScalarField curvature_field(const MetricGrid& g) {
  require_live(g);
  const DomainChart& c = g.chart();
  if (c.grid_n < 16) throw Error(ErrorCode::GridTooCoarse, "grid_n below 16");
  ScalarField out{c, std::vector<double>(c.node_count(), 0.0),
                  std::vector<std::uint8_t>(c.node_count(), 0)};
  for (int j = 1; j < c.grid_n - 1; ++j) {
    for (int i = 1; i < c.grid_n - 1; ++i) {
      if (!c.contains(c.node(i, j)) || !c.contains(c.node(i + 1, j)) ||
          !c.contains(c.node(i - 1, j)) || !c.contains(c.node(i, j + 1)) ||
          !c.contains(c.node(i, j - 1))) {
        continue;
      }
      double lap;
      g.laplacian(i, j, lap);
      double k = lap == 0.0 ? 0.0 : std::exp(std::log(std::abs(lap)) - 2.0 * g.phi_node(i, j));
      out.values[c.index(i, j)] = lap > 0 ? -k : k;
      out.valid_mask[c.index(i, j)] = 1;
    }
  }
  return out;
}

Functionals functionals(const MetricGrid& g, const Region& region) {
  const DomainChart& c = g.chart();
  double scale = std::max(1.0, c.outer_radius());
  if (!region.inside(c.region, 1e-12 * scale)) {
    throw Error(ErrorCode::RegionOutOfChart, "region is not inside the chart");
  }
  Functionals f;
  if (g.vanished()) return f;
  const auto& cells = g.cells();
  double h = c.spacing();
  double lo_x = c.center().x - c.outer_radius();
  double lo_y = c.center().y - c.outer_radius();
  auto index_range = [&](double lo, double a, double b, int& i0, int& i1) {
    i0 = std::max(0, static_cast<int>(std::floor((a - lo) / h - 0.5)) - 1);
    i1 = std::min(c.grid_n - 1, static_cast<int>(std::ceil((b - lo) / h + 0.5)) + 1);
  };
  int i0, i1, j0, j1;
  double R = region.outer_radius;
  index_range(lo_x, region.center.x - R, region.center.x + R, i0, i1);
  index_range(lo_y, region.center.y - R, region.center.y + R, j0, j1);
  CellSums acc;
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      double x0, x1, y0, y1;
      c.cell_bounds(i, j, x0, x1, y0, y1);
      if (region.disjoint_rect(x0, x1, y0, y1)) continue;
      if (region.contains_rect(x0, x1, y0, y1)) {
        acc += cells[c.index(i, j)];
      } else {
        acc += g.cell_in_region(i, j, region);
      }
    }
  }
  f.area = acc.area;
  f.energy = acc.energy;
  f.abs_curvature = acc.abs_curvature;
  f.curvature = acc.curvature;
  return f;
}

Functionals total_functionals(const MetricGrid& g) { return functionals(g, g.chart().region); }

int theta_samples(const MetricGrid& g, double r) {
  double h = g.chart().spacing();
  return std::max(64, static_cast<int>(std::ceil(kTwoPi * r / h)));
}

double circle_length(const MetricGrid& g, Vec2 center, double r) {
  require_band(g, center, r, r);
  if (g.vanished()) return 0.0;
  int n = theta_samples(g, r);
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    double t = kTwoPi * k / n;
    sum += std::exp(g.phi_at({center.x + r * std::cos(t), center.y + r * std::sin(t)}));
  }
  return r * sum * kTwoPi / n;
}

RadialStats radial_stats(const MetricGrid& g, Vec2 center, double r) {
  require_live(g);
  double d = radial_step(g, r);
  double margin = g.has_source() ? d : 2.0 * d;
  require_band(g, center, r - margin, r + margin);
  int n = theta_samples(g, r);
  RadialStats s;
  s.sup_phi = -std::numeric_limits<double>::infinity();
  s.inf_phi = std::numeric_limits<double>::infinity();
  double sum_phi = 0.0, sum_flux = 0.0, sum_len = 0.0;
  for (int k = 0; k < n; ++k) {
    double t = kTwoPi * k / n;
    double ct = std::cos(t), st = std::sin(t);
    auto at = [&](double rr) { return g.phi_at({center.x + rr * ct, center.y + rr * st}); };
    double v = at(r);
    double dr = (at(r + d) - at(r - d)) / (2.0 * d);
    sum_phi += v;
    sum_flux += dr;
    sum_len += std::exp(v);
    s.sup_phi = std::max(s.sup_phi, v);
    s.inf_phi = std::min(s.inf_phi, v);
  }
  s.average = sum_phi / n;
  s.flux = r * sum_flux * kTwoPi / n;
  s.circle_length = r * sum_len * kTwoPi / n;
  return s;
}

MetricGrid chart_invert(const MetricGrid& g) {
  const DomainChart& c = g.chart();
  const Region& reg = c.region;
  if (reg.contains({0.0, 0.0})) {
    throw Error(ErrorCode::OriginInDomain, "the origin lies in the chart domain");
  }
  DomainChart out;
  out.grid_n = c.grid_n;
  double d = norm(reg.center);
  if (reg.kind == ChartKind::annulus && d == 0.0) {
    out.region = Region::annulus({0, 0}, 1.0 / reg.outer_radius, 1.0 / reg.inner_radius);
  } else if (reg.kind != ChartKind::plane_window && d > reg.outer_radius) {
    double s = d * d - reg.outer_radius * reg.outer_radius;
    out.region = Region::disk({reg.center.x / s, -reg.center.y / s}, reg.outer_radius / s);
  } else if (reg.kind == ChartKind::plane_window) {
    // Bounding window of the image of the square's boundary.
    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    const int m = 4096;
    for (int k = 0; k < 4 * m; ++k) {
      double s = -1.0 + 2.0 * (k % m) / m;
      Vec2 p;
      switch (k / m) {
        case 0: p = {s, -1}; break;
        case 1: p = {1, s}; break;
        case 2: p = {-s, 1}; break;
        default: p = {-1, -s}; break;
      }
      p = reg.center + reg.outer_radius * p;
      double q = p.x * p.x + p.y * p.y;
      x_lo = std::min(x_lo, p.x / q);
      x_hi = std::max(x_hi, p.x / q);
      y_lo = std::min(y_lo, -p.y / q);
      y_hi = std::max(y_hi, -p.y / q);
    }
    double half = 0.5 * std::max(x_hi - x_lo, y_hi - y_lo) * 1.01;
    out.region = Region::window({0.5 * (x_lo + x_hi), 0.5 * (y_lo + y_hi)}, half);
  } else {
    throw Error(ErrorCode::OriginInDomain, "annulus must be centered at the origin");
  }
  MetricGrid src = g;
  if (g.vanished()) return MetricGrid::vanished_on(out);
  auto inverted = [src](double x, double y) {
    double q = x * x + y * y;
    return src.phi_at({x / q, -y / q}) - std::log(q);
  };
  if (g.has_source()) return MetricGrid::sample(out, inverted);
  MetricGrid tmp = MetricGrid::sample(out, inverted);
  return MetricGrid::from_samples(out, std::vector<double>(tmp.phi().begin(), tmp.phi().end()));
}

DirichletSplit dirichlet_split(const MetricGrid& g, const Region& subdisk) {
  require_live(g);
  const DomainChart& c = g.chart();
  if (subdisk.kind != ChartKind::disk || !subdisk.inside(c.region, 1e-12 * c.outer_radius())) {
    throw Error(ErrorCode::RegionOutOfChart, "subdisk is not a disk inside the chart");
  }
  const int n = c.grid_n;
  const std::size_t N = c.node_count();
  std::vector<std::uint8_t> unknown(N, 0), closed(N, 0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double r = norm(c.node(i, j) - subdisk.center);
      if (r <= subdisk.outer_radius) closed[c.index(i, j)] = 1;
      if (r < subdisk.outer_radius && i > 0 && j > 0 && i < n - 1 && j < n - 1) {
        unknown[c.index(i, j)] = 1;
      }
    }
  }
  auto phi = g.phi();
  // A = -h^2 Δ_h restricted to unknowns with zero boundary values.
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (int j = 1; j < n - 1; ++j) {
      for (int i = 1; i < n - 1; ++i) {
        std::size_t k = c.index(i, j);
        if (!unknown[k]) continue;
        y[k] = 4.0 * x[k] - x[k + 1] - x[k - 1] - x[k + n] - x[k - n];
      }
    }
  };
  std::vector<double> b(N, 0.0), u(N, 0.0);
  double bnorm = 0.0;
  for (int j = 1; j < n - 1; ++j) {
    for (int i = 1; i < n - 1; ++i) {
      std::size_t k = c.index(i, j);
      if (!unknown[k]) continue;
      b[k] = 4.0 * phi[k] - phi[k + 1] - phi[k - 1] - phi[k + n] - phi[k - n];
      bnorm += b[k] * b[k];
    }
  }
  bnorm = std::sqrt(bnorm);
  DirichletSplit out;
  double tol = 1e-8 * bnorm;
  if (bnorm > 0) {
    std::vector<double> r = b, p = b, ap(N, 0.0);
    double rr = bnorm * bnorm;
    int max_iter = 20 * n + 1000;
    int it = 0;
    while (std::sqrt(rr) > tol) {
      if (++it > max_iter) {
        throw Error(ErrorCode::SolverDivergence, "conjugate gradient did not converge");
      }
      apply(p, ap);
      double pap = 0.0;
      for (std::size_t k = 0; k < N; ++k) {
        if (unknown[k]) pap += p[k] * ap[k];
      }
      if (!(pap > 0)) throw Error(ErrorCode::SolverDivergence, "lost positive definiteness");
      double alpha = rr / pap;
      double rr_new = 0.0;
      for (std::size_t k = 0; k < N; ++k) {
        if (!unknown[k]) continue;
        u[k] += alpha * p[k];
        r[k] -= alpha * ap[k];
        rr_new += r[k] * r[k];
      }
      double beta = rr_new / rr;
      rr = rr_new;
      for (std::size_t k = 0; k < N; ++k) {
        if (unknown[k]) p[k] = r[k] + beta * p[k];
      }
    }
    out.iterations = it;
    out.relative_residual = std::sqrt(rr) / bnorm;
  }
  out.u = {c, u, closed};
  std::vector<double> v(N);
  for (std::size_t k = 0; k < N; ++k) v[k] = phi[k] - u[k];
  out.v = {c, std::move(v), closed};
  return out;
}

double geodesic_defect(const MetricGrid& g, Vec2 center, double r) {
  require_live(g);
  double d = radial_step(g, r);
  require_band(g, center, r - 2.0 * d, r);
  int n = theta_samples(g, r);
  double sup = -std::numeric_limits<double>::infinity();
  double inf = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    double t = kTwoPi * k / n;
    double ct = std::cos(t), st = std::sin(t);
    auto at = [&](double rr) { return g.phi_at({center.x + rr * ct, center.y + rr * st}); };
    double v = at(r);
    sup = std::max(sup, v);
    inf = std::min(inf, v);
    // One-sided from inside the circle.
    double dr = (3.0 * v - 4.0 * at(r - d) + at(r - 2.0 * d)) / (2.0 * d);
    sum += dr + 1.0 / r;
  }
  if (sup - inf > 1e-6) {
    throw Error(ErrorCode::NotRotationallySymmetric, "phi varies along the circle");
  }
  return sum / n;
}

Vec2 argmax_phi(const MetricGrid& g, const Region& search) {
  require_live(g);
  const DomainChart& c = g.chart();
  double best = -std::numeric_limits<double>::infinity();
  Vec2 at = search.center;
  bool found = false;
  for (int j = 0; j < c.grid_n; ++j) {
    for (int i = 0; i < c.grid_n; ++i) {
      Vec2 p = c.node(i, j);
      if (!search.contains(p) || !c.contains(p)) continue;
      double v = g.phi_node(i, j);
      if (v > best) {
        best = v;
        at = p;
        found = true;
      }
    }
  }
  if (!found || !g.has_source()) return at;
  // Compass search on the closed form.
  double fv = g.phi_at(at);
  double step = 0.5 * c.spacing();
  const double floor = 1e-9 * c.spacing();
  const Vec2 dirs[8] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
  for (int it = 0; it < 4000 && step > floor; ++it) {
    bool moved = false;
    for (const Vec2& d : dirs) {
      Vec2 q = at + step * d;
      double fq = g.phi_at(q);
      if (fq > fv) {
        at = q;
        fv = fq;
        moved = true;
        break;
      }
    }
    if (!moved) step *= 0.5;
  }
  return at;
}

double sup_phi_outside(const MetricGrid& g, const std::vector<Region>& holes) {
  const DomainChart& c = g.chart();
  double best = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < c.grid_n; ++j) {
    for (int i = 0; i < c.grid_n; ++i) {
      Vec2 p = c.node(i, j);
      if (!c.contains(p)) continue;
      bool inside = false;
      for (const auto& h : holes) {
        if (h.contains(p)) {
          inside = true;
          break;
        }
      }
      if (!inside) best = std::max(best, g.phi_node(i, j));
    }
  }
  return best;
}

}  // namespace bubbletree
