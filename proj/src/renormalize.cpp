#include "bubbletree/renormalize.hpp"

#include <algorithm>
#include <cmath>

#include "bubbletree/error.hpp"

namespace bubbletree {

namespace {

// New metric on chart from a pointwise map of the source.
MetricGrid resample(const MetricGrid& src, const DomainChart& chart, PhiFunction phi) {
  if (src.vanished()) return MetricGrid::vanished_on(chart);
  MetricGrid out = MetricGrid::sample(chart, std::move(phi));
  if (src.has_source()) return out.with_quadrature(src.quadrature());
  return MetricGrid::from_samples(chart, {out.phi().begin(), out.phi().end()});
}

}  // namespace

Recentered recenter(const MetricSequence& seq, Vec2 p, double window) {
  seq.validate();
  Recentered out;
  for (const auto& f : seq.frames) {
    if (!Region::disk(p, window).inside(f.chart().region, 1e-12 * window)) {
      throw Error(ErrorCode::WindowOutOfChart, "recentering window leaves the chart");
    }
    DomainChart chart = DomainChart::disk({0, 0}, window, f.chart().grid_n);
    Vec2 c = f.vanished() ? p : argmax_phi(f, Region::disk(p, window));
    MetricGrid src = f;
    PhiFunction shifted;
    if (f.has_source()) {
      PhiFunction s = f.source();
      shifted = [s, c](double x, double y) { return s(c.x + x, c.y + y); };
    } else {
      shifted = [src, c](double x, double y) { return src.bilinear({c.x + x, c.y + y}); };
    }
    out.seq.frames.push_back(resample(f, chart, shifted));
    out.centers.push_back(c);
  }
  out.seq.labels = seq.labels;
  return out;
}

double neck_radius(const MetricGrid& g, double eps, double r1, const NeckOptions& opts) {
  if (!(eps > 0) || !(eps < opts.eps0)) {
    throw Error(ErrorCode::FilterAboveThreshold, "filter eps must lie in (0, eps0)");
  }
  Vec2 c = g.chart().center();
  double l1 = circle_length(g, c, r1);
  if (l1 > eps) throw Error(ErrorCode::PreconditionLengthTooLarge, "L(r1) exceeds eps");
  if (l1 == eps) return r1;
  double floor = g.has_source() ? 1e-15 * r1 : 2.0 * g.chart().spacing();
  double step = std::pow(10.0, -1.0 / opts.samples_per_decade);
  double hi = r1;
  double lo = r1 * step;
  while (true) {
    if (lo < floor) throw Error(ErrorCode::NoCrossing, "circle length stays below eps");
    if (circle_length(g, c, lo) >= eps) break;
    hi = lo;
    lo *= step;
  }
  // L(lo) >= eps > L(hi).
  while (hi - lo > opts.rel_tol * lo) {
    double mid = std::sqrt(lo * hi);
    if (circle_length(g, c, mid) >= eps) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

MetricGrid rescale(const MetricGrid& g, double delta, double window) {
  Vec2 c = g.chart().center();
  if (!(delta > 0) || !(window > 0) ||
      !Region::disk(c, delta * window).inside(g.chart().region, 1e-12 * delta * window)) {
    throw Error(ErrorCode::WindowExceedsSource, "rescaled window leaves the source chart");
  }
  DomainChart chart = DomainChart::disk({0, 0}, window, g.chart().grid_n);
  double shift = std::log(delta);
  PhiFunction phi;
  if (g.has_source()) {
    PhiFunction s = g.source();
    phi = [s, c, delta, shift](double x, double y) { return s(c.x + delta * x, c.y + delta * y) + shift; };
  } else {
    MetricGrid src = g;
    phi = [src, c, delta, shift](double x, double y) {
      return src.bilinear({c.x + delta * x, c.y + delta * y}) + shift;
    };
  }
  return resample(g, chart, phi);
}

BlowupResult blowup(const MetricSequence& seq, const BubbleCandidate& cand,
                    const BlowupConfig& cfg) {
  BlowupResult res;
  const ConcentrationProfile& prof = cand.profile;
  if (prof.radii.empty()) throw Error(ErrorCode::NoConcentration, "candidate has no profile");
  MetricSequence tail = seq.tail(cfg.tail_window);
  Recentered rc = recenter(tail, cand.center, prof.radii.front());
  NeckSpec& neck = res.neck;
  neck.point = cand.center;
  neck.filter_eps = cfg.filter_eps;
  neck.labels = tail.labels;
  neck.bubble_radius = prof.r_min();

  double r1 = 0.0;
  for (double r : prof.radii) {
    bool ok = true;
    for (const auto& f : rc.seq.frames) ok = ok && circle_length(f, {0, 0}, r) <= 0.5 * cfg.filter_eps;
    if (ok) {
      r1 = r;
      break;
    }
  }
  if (r1 == 0.0) throw Error(ErrorCode::NoConcentration, "no ladder radius with short circles");
  neck.r1 = r1;

  NeckOptions nopt;
  nopt.eps0 = cfg.eps0;
  double max_delta = 0.0;
  for (const auto& f : rc.seq.frames) {
    double d;
    try {
      d = neck_radius(f, cfg.filter_eps, r1, nopt);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoCrossing) {
        throw Error(ErrorCode::NoConcentration, "no neck crossing below r1");
      }
      throw;
    }
    neck.delta.push_back(d);
    max_delta = std::max(max_delta, d);
  }
  double r2 = cfg.child_window;
  if (max_delta * r2 >= r1) {
    r2 = 0.5 * r1 / max_delta;
    res.warnings.push_back("child window shrunk to " + std::to_string(r2) +
                           " to stay inside the neck");
  }
  if (!(r2 > 1.0)) throw Error(ErrorCode::NoConcentration, "neck too short for a child window");
  neck.r2 = r2;

  for (std::size_t k = 0; k < rc.seq.size(); ++k) {
    res.child.frames.push_back(rescale(rc.seq.frames[k], neck.delta[k], r2));
  }
  res.child.labels = tail.labels;

  const MetricGrid& last = rc.seq.frames.back();
  double inner = neck.delta.back() * r2;
  res.tau = functionals(last, Region::disk({0, 0}, neck.bubble_radius)).area -
            functionals(last, Region::disk({0, 0}, inner)).area;
  res.child_budget = total_functionals(res.child.frames.back());
  double tol = 1.0 + cfg.budget_tol;
  if (res.child_budget.area + res.tau > prof.A_p * tol || res.child_budget.energy > prof.K_p * tol) {
    throw Error(ErrorCode::BudgetViolated, "child functionals exceed the parent bubble mass");
  }
  neck.recentered = std::move(rc.seq);
  return res;
}

}  // namespace bubbletree
