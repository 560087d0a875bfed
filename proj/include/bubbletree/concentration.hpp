#pragma once

#include <string>
#include <vector>

#include "bubbletree/grid_metric.hpp"

namespace bubbletree {

struct ProfileOptions {
  std::size_t tail_window = 3;
  // Follow the per-frame maximum of phi within track_radius of p
  // (0 means the outer radius).
  bool track = false;
  double track_radius = 0.0;
};

struct ConcentrationProfile {
  Vec2 center;
  std::vector<double> radii;  // r0 2^-j, j = 0..levels
  std::vector<double> labels;
  std::vector<Vec2> frame_centers;
  std::vector<std::vector<double>> area_at;    // [frame][radius]
  std::vector<std::vector<double>> energy_at;  // [frame][radius]
  std::size_t tail_window = 3;
  double A_p = 0.0;  // min over the tail at the smallest radius
  double K_p = 0.0;

  double r_min() const { return radii.back(); }
};

ConcentrationProfile concentration_profile(const MetricSequence& seq, Vec2 p, double r0, int levels,
                                           const ProfileOptions& opts = {});

struct WaistProfile {
  std::vector<double> radii;
  std::vector<double> waist_at;                  // min over the tail
  std::vector<std::vector<double>> frame_waist;  // [frame][radius]
};

// Shortest centered circle with radius in [rho, rho0].
WaistProfile waist(const MetricSequence& seq, Vec2 p, double rho0, int levels,
                   std::size_t tail_window = 3);

struct DetectionConfig {
  double eta = 0.25;
  std::size_t tail_window = 3;
  double min_area = 0.05 * 4.0 * 3.14159265358979323846;
  double profile_radius = 0.0;  // 0: a quarter of the chart radius
  int levels = 3;
  double merge_radius = 0.0;  // 0: four grid spacings
  // Required rise of the local maximum of phi across the tail.
  double min_sup_growth = 0.5;
  std::size_t max_candidates = 32;
};

struct BubbleCandidate {
  Vec2 center;  // tracked center in the last frame
  ConcentrationProfile profile;
  double product_root = 0.0;  // sqrt(A_p K_p)
  double sup_growth = 0.0;
  bool pseudo = false;  // local maximum not monotone across the tail
  bool accepted = false;
  std::string reason;
};

struct Detection {
  std::vector<BubbleCandidate> accepted;
  std::vector<BubbleCandidate> rejected;
  double C1 = 0.0;  // sup of total area
  double C2 = 0.0;  // sup of total energy
  int count_bound = 0;
};

Detection detect_bubbles(const MetricSequence& seq, const DetectionConfig& cfg = {});

int bubble_count_bound(double C1, double C2);

// ∫_D |K| dA - (2 pi - L^2 / (2A)) for a disk D.
double isoperimetric_defect(const MetricGrid& g, const Region& disk);

// max over tail frames and ladder radii of A_n(D_rho(p)) / rho^alpha.
double area_growth_ratio(const MetricSequence& seq, Vec2 p, double r0, int levels, double alpha,
                         std::size_t tail_window = 3);

}  // namespace bubbletree
