#pragma once

#include <string>
#include <vector>

#include "bubbletree/concentration.hpp"

namespace bubbletree {

struct Recentered {
  MetricSequence seq;         // disk charts of radius window about the origin
  std::vector<Vec2> centers;  // per-frame maxima in the source chart
};

// Translate each frame so that its maximum of phi near p sits at the origin.
Recentered recenter(const MetricSequence& seq, Vec2 p, double window);

struct NeckOptions {
  double eps0 = 1.0;
  int samples_per_decade = 256;
  double rel_tol = 1e-6;
};

// sup { r <= r1 : L(r) >= eps } for circles about the chart center.
double neck_radius(const MetricGrid& g, double eps, double r1, const NeckOptions& opts = {});

// phi^(z) = phi(c + delta z) + ln delta on a disk of radius window.
MetricGrid rescale(const MetricGrid& g, double delta, double window);

struct BlowupConfig {
  double filter_eps = 0.5;
  double eps0 = 1.0;
  std::size_t tail_window = 3;
  double child_window = 8.0;
  double budget_tol = 0.05;
};

struct NeckSpec {
  Vec2 point;              // bubble center in the parent chart (last frame)
  double r1 = 0.0;         // outer neck radius, recentered chart
  double r2 = 0.0;         // child window radius
  double bubble_radius = 0.0;
  double filter_eps = 0.0;
  std::vector<double> labels;
  std::vector<double> delta;  // per tail frame
  MetricSequence recentered;  // tail frames about the bubble center
};

struct BlowupResult {
  MetricSequence child;
  NeckSpec neck;
  double tau = 0.0;  // last-frame area between the child window and the bubble disk
  Functionals child_budget;
  std::vector<std::string> warnings;
};

BlowupResult blowup(const MetricSequence& seq, const BubbleCandidate& cand,
                    const BlowupConfig& cfg = {});

}  // namespace bubbletree
