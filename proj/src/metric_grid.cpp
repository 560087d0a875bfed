#include "bubbletree/metric_grid.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "bubbletree/error.hpp"
#include "bubbletree/parallel.hpp"

namespace bubbletree {

struct MetricGrid::State {
  DomainChart chart;
  std::vector<double> phi;
  PhiFunction source;
  bool vanished = false;
  QuadratureOptions quad;
  mutable std::once_flag cells_once;
  mutable std::vector<CellSums> cells;
};

namespace {

constexpr double kPhiClamp = 700.0;

double clamp_phi(double v) {
  if (std::isnan(v)) return -kPhiClamp;
  return std::clamp(v, -kPhiClamp, kPhiClamp);
}

struct Corners {
  double c00, c10, c01, c11;  // (x0,y0) (x1,y0) (x0,y1) (x1,y1)
};

// Adaptive midpoint quadrature on a rectangle.  Subdivision depends only on
// the integrand, so restricting to a region reweights a fixed set of leaves.
class CellIntegrator {
 public:
  CellIntegrator(const PhiFunction& f, const QuadratureOptions& q) : f_(f), q_(q) {}

  CellSums run(double x0, double x1, double y0, double y1, const Region* region) {
    acc_ = {};
    Corners c{f_(x0, y0), f_(x1, y0), f_(x0, y1), f_(x1, y1)};
    rect(x0, x1, y0, y1, c, 0, region);
    return acc_;
  }

 private:
  void rect(double x0, double x1, double y0, double y1, const Corners& c, int depth,
            const Region* region) {
    if (region) {
      if (region->disjoint_rect(x0, x1, y0, y1)) return;
      if (region->contains_rect(x0, x1, y0, y1)) region = nullptr;
    }
    double w = x1 - x0;
    double h = y1 - y0;
    if (w > 1.5 * h) {
      double xm = 0.5 * (x0 + x1);
      double b = f_(xm, y0), t = f_(xm, y1);
      rect(x0, xm, y0, y1, {c.c00, b, c.c01, t}, depth + 1, region);
      rect(xm, x1, y0, y1, {b, c.c10, t, c.c11}, depth + 1, region);
      return;
    }
    if (h > 1.5 * w) {
      double ym = 0.5 * (y0 + y1);
      double l = f_(x0, ym), r = f_(x1, ym);
      rect(x0, x1, y0, ym, {c.c00, c.c10, l, r}, depth + 1, region);
      rect(x0, x1, ym, y1, {l, r, c.c01, c.c11}, depth + 1, region);
      return;
    }
    double xm = 0.5 * (x0 + x1);
    double ym = 0.5 * (y0 + y1);
    double fc = f_(xm, ym);
    bool finite = std::isfinite(fc) && std::isfinite(c.c00) && std::isfinite(c.c10) &&
                  std::isfinite(c.c01) && std::isfinite(c.c11);
    double var = 0.0;
    if (finite) {
      var = std::max({std::abs(c.c00 - fc), std::abs(c.c10 - fc), std::abs(c.c01 - fc),
                      std::abs(c.c11 - fc)});
    }
    bool refine = depth < q_.min_depth ||
                  ((!finite || var > q_.variation_tol) && depth < q_.max_depth);
    if (refine) {
      double l = f_(x0, ym), r = f_(x1, ym), b = f_(xm, y0), t = f_(xm, y1);
      rect(x0, xm, y0, ym, {c.c00, b, l, fc}, depth + 1, region);
      rect(xm, x1, y0, ym, {b, c.c10, fc, r}, depth + 1, region);
      rect(x0, xm, ym, y1, {l, fc, c.c01, t}, depth + 1, region);
      rect(xm, x1, ym, y1, {fc, r, t, c.c11}, depth + 1, region);
      return;
    }
    if (!std::isfinite(fc)) return;
    double weight = region ? region->rect_fraction(x0, x1, y0, y1) : 1.0;
    double a = w * h;
    acc_.area += weight * (a * std::exp(2.0 * fc));
    if (!finite) return;
    double lap = (c.c00 + c.c10 + c.c01 + c.c11 - 4.0 * fc) / (0.25 * (w * w + h * h));
    double e = lap == 0.0 ? 0.0 : std::exp(2.0 * std::log(std::abs(lap)) - 2.0 * fc);
    acc_.energy += weight * (a * e);
    acc_.abs_curvature += weight * (a * std::abs(lap));
    acc_.curvature += weight * (a * -lap);
  }

  const PhiFunction& f_;
  const QuadratureOptions& q_;
  CellSums acc_;
};

}  // namespace

const DomainChart& MetricGrid::chart() const { return state_->chart; }
bool MetricGrid::vanished() const { return state_->vanished; }
bool MetricGrid::has_source() const { return static_cast<bool>(state_->source); }
const PhiFunction& MetricGrid::source() const { return state_->source; }
std::span<const double> MetricGrid::phi() const { return state_->phi; }
double MetricGrid::phi_node(int i, int j) const { return state_->phi[state_->chart.index(i, j)]; }
const QuadratureOptions& MetricGrid::quadrature() const { return state_->quad; }

MetricGrid MetricGrid::sample(const DomainChart& chart, PhiFunction phi) {
  chart.validate();
  auto s = std::make_shared<State>();
  s->chart = chart;
  s->phi.resize(chart.node_count());
  parallel_for(chart.grid_n, [&](std::size_t j) {
    for (int i = 0; i < chart.grid_n; ++i) {
      Vec2 p = chart.node(i, static_cast<int>(j));
      s->phi[chart.index(i, static_cast<int>(j))] = clamp_phi(phi(p.x, p.y));
    }
  });
  s->source = std::move(phi);
  return MetricGrid(s);
}

MetricGrid MetricGrid::from_samples(const DomainChart& chart, std::vector<double> phi) {
  chart.validate();
  if (phi.size() != chart.node_count()) {
    throw Error(ErrorCode::InvalidSequence, "sample count does not match grid");
  }
  for (double v : phi) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidSequence, "non-finite phi sample");
  }
  auto s = std::make_shared<State>();
  s->chart = chart;
  s->phi = std::move(phi);
  return MetricGrid(s);
}

MetricGrid MetricGrid::vanished_on(const DomainChart& chart) {
  chart.validate();
  auto s = std::make_shared<State>();
  s->chart = chart;
  s->phi.assign(chart.node_count(), -kPhiClamp);
  s->vanished = true;
  return MetricGrid(s);
}

MetricGrid MetricGrid::with_quadrature(const QuadratureOptions& q) const {
  auto s = std::make_shared<State>();
  s->chart = state_->chart;
  s->phi = state_->phi;
  s->source = state_->source;
  s->vanished = state_->vanished;
  s->quad = q;
  return MetricGrid(s);
}

double MetricGrid::bilinear(Vec2 p) const {
  const DomainChart& c = state_->chart;
  double h = c.spacing();
  double lo_x = c.center().x - c.outer_radius();
  double lo_y = c.center().y - c.outer_radius();
  int n = c.grid_n;
  double u = std::clamp((p.x - lo_x) / h, 0.0, n - 1.0);
  double v = std::clamp((p.y - lo_y) / h, 0.0, n - 1.0);
  int i = std::min(static_cast<int>(u), n - 2);
  int j = std::min(static_cast<int>(v), n - 2);
  double s = u - i;
  double t = v - j;
  const auto& f = state_->phi;
  return (1 - s) * (1 - t) * f[c.index(i, j)] + s * (1 - t) * f[c.index(i + 1, j)] +
         (1 - s) * t * f[c.index(i, j + 1)] + s * t * f[c.index(i + 1, j + 1)];
}

double MetricGrid::phi_at(Vec2 p) const {
  if (state_->source) return state_->source(p.x, p.y);
  return bilinear(p);
}

bool MetricGrid::laplacian(int i, int j, double& out) const {
  const DomainChart& c = state_->chart;
  int n = c.grid_n;
  if (i <= 0 || j <= 0 || i >= n - 1 || j >= n - 1) return false;
  double h = c.spacing();
  const auto& f = state_->phi;
  out = (f[c.index(i + 1, j)] + f[c.index(i - 1, j)] + f[c.index(i, j + 1)] +
         f[c.index(i, j - 1)] - 4.0 * f[c.index(i, j)]) /
        (h * h);
  return true;
}

bool MetricGrid::cell_active(int i, int j) const {
  double x0, x1, y0, y1;
  state_->chart.cell_bounds(i, j, x0, x1, y0, y1);
  return !state_->chart.region.disjoint_rect(x0, x1, y0, y1);
}

const std::vector<CellSums>& MetricGrid::cells() const {
  std::call_once(state_->cells_once, [this] {
    const DomainChart& c = state_->chart;
    std::vector<CellSums> out(c.node_count());
    if (!state_->vanished) {
      parallel_for(c.grid_n, [&](std::size_t jj) {
        int j = static_cast<int>(jj);
        for (int i = 0; i < c.grid_n; ++i) {
          if (!cell_active(i, j)) continue;
          out[c.index(i, j)] = cell_in_region(i, j, c.region);
        }
      });
    }
    state_->cells = std::move(out);
  });
  return state_->cells;
}

CellSums MetricGrid::cell_in_region(int i, int j, const Region& region) const {
  const DomainChart& c = state_->chart;
  double x0, x1, y0, y1;
  c.cell_bounds(i, j, x0, x1, y0, y1);
  if (state_->vanished || region.disjoint_rect(x0, x1, y0, y1)) return {};
  if (state_->source) {
    CellIntegrator integ(state_->source, state_->quad);
    return integ.run(x0, x1, y0, y1, &region);
  }
  double a = (x1 - x0) * (y1 - y0);
  double frac = region.rect_fraction(x0, x1, y0, y1);
  double v = state_->phi[c.index(i, j)];
  CellSums s;
  s.area = frac * (a * std::exp(2.0 * v));
  double lap;
  if (laplacian(i, j, lap)) {
    double e = lap == 0.0 ? 0.0 : std::exp(2.0 * std::log(std::abs(lap)) - 2.0 * v);
    s.energy = frac * (a * e);
    s.abs_curvature = frac * (a * std::abs(lap));
    s.curvature = frac * (a * -lap);
  }
  return s;
}

void MetricSequence::validate() const {
  if (frames.size() < 2) throw Error(ErrorCode::InvalidSequence, "need at least two frames");
  if (labels.size() != frames.size()) {
    throw Error(ErrorCode::InvalidSequence, "label count differs from frame count");
  }
  for (std::size_t k = 1; k < labels.size(); ++k) {
    if (!(labels[k] > labels[k - 1])) {
      throw Error(ErrorCode::InvalidSequence, "labels must increase strictly");
    }
  }
  for (const auto& f : frames) {
    if (!f.valid()) throw Error(ErrorCode::InvalidSequence, "empty frame");
  }
}

MetricSequence MetricSequence::tail(std::size_t w) const {
  MetricSequence out;
  std::size_t start = frames.size() > w ? frames.size() - w : 0;
  out.frames.assign(frames.begin() + start, frames.end());
  out.labels.assign(labels.begin() + start, labels.end());
  return out;
}

}  // namespace bubbletree
