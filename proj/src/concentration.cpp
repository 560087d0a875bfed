#include "bubbletree/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bubbletree/error.hpp"

namespace bubbletree {

namespace {

std::vector<double> ladder(double r0, int levels) {
  std::vector<double> r;
  for (int j = 0; j <= levels; ++j) r.push_back(std::ldexp(r0, -j));
  return r;
}

void check_ladder(const MetricSequence& seq, double r0, int levels) {
  if (levels < 3) throw Error(ErrorCode::ConfigError, "profile needs at least three levels");
  if (!(r0 > 0)) throw Error(ErrorCode::ConfigError, "profile radius must be positive");
  for (const auto& f : seq.frames) {
    if (std::ldexp(r0, -levels) < 4.0 * f.chart().spacing()) {
      throw Error(ErrorCode::RadiusUnresolvable, "smallest radius is below four grid spacings");
    }
  }
}

std::size_t tail_start(const MetricSequence& seq, std::size_t w) {
  return seq.size() > w ? seq.size() - w : 0;
}

struct LocalMax {
  Vec2 at;
  double value;
};

std::vector<LocalMax> local_maxima(const MetricGrid& g) {
  std::vector<LocalMax> out;
  if (g.vanished()) return out;
  const DomainChart& c = g.chart();
  for (int j = 1; j < c.grid_n - 1; ++j) {
    for (int i = 1; i < c.grid_n - 1; ++i) {
      double v = g.phi_node(i, j);
      bool is_max = c.contains(c.node(i, j));
      for (int dj = -1; dj <= 1 && is_max; ++dj) {
        for (int di = -1; di <= 1 && is_max; ++di) {
          if (di == 0 && dj == 0) continue;
          if (!c.contains(c.node(i + di, j + dj))) {
            is_max = false;
            continue;
          }
          // Ties go to the later node so that symmetric pairs yield one maximum.
          double w = g.phi_node(i + di, j + dj);
          bool later = dj > 0 || (dj == 0 && di > 0);
          if (!(v > w || (v == w && later))) is_max = false;
        }
      }
      if (is_max) out.push_back({c.node(i, j), v});
    }
  }
  return out;
}

}  // namespace

ConcentrationProfile concentration_profile(const MetricSequence& seq, Vec2 p, double r0, int levels,
                                           const ProfileOptions& opts) {
  seq.validate();
  check_ladder(seq, r0, levels);
  ConcentrationProfile prof;
  prof.center = p;
  prof.radii = ladder(r0, levels);
  prof.labels = seq.labels;
  prof.tail_window = opts.tail_window;
  double track_r = opts.track_radius > 0 ? opts.track_radius : r0;
  for (const auto& f : seq.frames) {
    Vec2 c = p;
    if (opts.track && !f.vanished()) c = argmax_phi(f, Region::disk(p, track_r));
    prof.frame_centers.push_back(c);
    std::vector<double> a, e;
    for (double r : prof.radii) {
      Functionals v = functionals(f, Region::disk(c, r));
      a.push_back(v.area);
      e.push_back(v.energy);
    }
    prof.area_at.push_back(std::move(a));
    prof.energy_at.push_back(std::move(e));
  }
  prof.A_p = std::numeric_limits<double>::infinity();
  prof.K_p = std::numeric_limits<double>::infinity();
  for (std::size_t k = tail_start(seq, opts.tail_window); k < seq.size(); ++k) {
    prof.A_p = std::min(prof.A_p, prof.area_at[k].back());
    prof.K_p = std::min(prof.K_p, prof.energy_at[k].back());
  }
  return prof;
}

WaistProfile waist(const MetricSequence& seq, Vec2 p, double rho0, int levels,
                   std::size_t tail_window) {
  seq.validate();
  check_ladder(seq, rho0, levels);
  WaistProfile w;
  w.radii = ladder(rho0, levels);
  // Sample radii: 32 per octave from the smallest ladder radius up.
  std::vector<double> grid;
  const int per_octave = 32;
  for (int k = 0; k <= per_octave * levels; ++k) {
    grid.push_back(w.radii.back() * std::exp2(static_cast<double>(k) / per_octave));
  }
  grid.back() = rho0;
  for (const auto& f : seq.frames) {
    std::vector<double> lengths(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) lengths[k] = circle_length(f, p, grid[k]);
    std::vector<double> row;
    for (double rho : w.radii) {
      double m = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid[k] >= rho * (1 - 1e-12)) m = std::min(m, lengths[k]);
      }
      row.push_back(m);
    }
    w.frame_waist.push_back(std::move(row));
  }
  for (std::size_t j = 0; j < w.radii.size(); ++j) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t k = tail_start(seq, tail_window); k < seq.size(); ++k) {
      m = std::min(m, w.frame_waist[k][j]);
    }
    w.waist_at.push_back(m);
  }
  return w;
}

int bubble_count_bound(double C1, double C2) {
  if (!(C1 > 0) || !(C2 > 0)) return 0;
  double v = std::sqrt(C1 * C2) / (2.0 * std::numbers::pi);
  return static_cast<int>(std::floor(v * (1.0 + 1e-12)));
}

Detection detect_bubbles(const MetricSequence& seq, const DetectionConfig& cfg) {
  seq.validate();
  Detection det;
  for (const auto& f : seq.frames) {
    if (f.vanished()) continue;
    Functionals t = total_functionals(f);
    det.C1 = std::max(det.C1, t.area);
    det.C2 = std::max(det.C2, t.energy);
  }
  det.count_bound = bubble_count_bound(det.C1, det.C2);

  const MetricGrid& last = seq.frames.back();
  const DomainChart& chart = last.chart();
  double h = chart.spacing();
  double merge = cfg.merge_radius > 0 ? cfg.merge_radius : 4.0 * h;
  double r0 = cfg.profile_radius > 0 ? cfg.profile_radius : 0.25 * chart.outer_radius();

  std::vector<LocalMax> maxima;
  for (std::size_t k = tail_start(seq, cfg.tail_window); k < seq.size(); ++k) {
    auto m = local_maxima(seq.frames[k]);
    maxima.insert(maxima.end(), m.begin(), m.end());
  }
  std::stable_sort(maxima.begin(), maxima.end(),
                   [](const LocalMax& a, const LocalMax& b) { return a.value > b.value; });
  std::vector<Vec2> seeds;
  for (const auto& m : maxima) {
    bool near = false;
    for (const auto& s : seeds) near = near || norm(s - m.at) <= merge;
    if (!near) seeds.push_back(m.at);
    if (seeds.size() >= cfg.max_candidates) break;
  }

  ProfileOptions opts;
  opts.tail_window = cfg.tail_window;
  opts.track = true;
  std::vector<BubbleCandidate> all;
  for (const Vec2& s : seeds) {
    BubbleCandidate cand;
    cand.center = s;
    if (!Region::disk(s, r0).inside(chart.region)) {
      cand.reason = "profile disk leaves the chart";
      det.rejected.push_back(std::move(cand));
      continue;
    }
    try {
      cand.profile = concentration_profile(seq, s, r0, cfg.levels, opts);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RegionOutOfChart) throw;
      cand.reason = "tracked disk leaves the chart";
      det.rejected.push_back(std::move(cand));
      continue;
    }
    cand.center = cand.profile.frame_centers.back();
    bool dup = false;
    for (const auto& other : all) dup = dup || norm(other.center - cand.center) <= merge;
    if (dup) continue;
    all.push_back(std::move(cand));
  }

  const double threshold = (1.0 - cfg.eta) * 2.0 * std::numbers::pi;
  for (auto& cand : all) {
    const auto& prof = cand.profile;
    cand.product_root = std::sqrt(prof.A_p * prof.K_p);
    std::size_t k0 = tail_start(seq, cfg.tail_window);
    double first = 0.0, prev = -std::numeric_limits<double>::infinity();
    for (std::size_t k = k0; k < seq.size(); ++k) {
      double s = seq.frames[k].vanished() ? -std::numeric_limits<double>::infinity()
                                          : seq.frames[k].phi_at(prof.frame_centers[k]);
      if (k == k0) first = s;
      if (s < prev) cand.pseudo = true;
      prev = s;
      cand.sup_growth = s - first;
    }
    if (!(cand.product_root >= threshold)) {
      cand.reason = "product below threshold";
    } else if (!(prof.A_p >= cfg.min_area)) {
      cand.reason = "area below minimum";
    } else if (!(cand.sup_growth >= cfg.min_sup_growth)) {
      cand.reason = "local maximum does not grow";
    } else {
      cand.accepted = true;
    }
    (cand.accepted ? det.accepted : det.rejected).push_back(std::move(cand));
  }
  std::sort(det.accepted.begin(), det.accepted.end(), [](const auto& a, const auto& b) {
    return a.center.x != b.center.x ? a.center.x < b.center.x : a.center.y < b.center.y;
  });
  if (static_cast<int>(det.accepted.size()) > det.count_bound) {
    throw Error(ErrorCode::CountBoundViolated,
                std::to_string(det.accepted.size()) + " bubbles exceed the bound " +
                    std::to_string(det.count_bound));
  }
  return det;
}

double isoperimetric_defect(const MetricGrid& g, const Region& disk) {
  Functionals f = functionals(g, disk);
  double L = circle_length(g, disk.center, disk.outer_radius);
  return f.abs_curvature - (2.0 * std::numbers::pi - L * L / (2.0 * f.area));
}

double area_growth_ratio(const MetricSequence& seq, Vec2 p, double r0, int levels, double alpha,
                         std::size_t tail_window) {
  seq.validate();
  check_ladder(seq, r0, levels);
  double best = 0.0;
  for (std::size_t k = tail_start(seq, tail_window); k < seq.size(); ++k) {
    for (double r : ladder(r0, levels)) {
      best = std::max(best, functionals(seq.frames[k], Region::disk(p, r)).area / std::pow(r, alpha));
    }
  }
  return best;
}

}  // namespace bubbletree
