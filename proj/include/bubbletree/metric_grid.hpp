#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "bubbletree/geometry.hpp"

namespace bubbletree {

// Closed-form log conformal factor phi(x, y).
using PhiFunction = std::function<double(double, double)>;

// Per-cell integrals of e^{2phi}, (Δphi)^2 e^{-2phi}, |Δphi| and -Δphi.
struct CellSums {
  double area = 0.0;
  double energy = 0.0;
  double abs_curvature = 0.0;
  double curvature = 0.0;

  CellSums& operator+=(const CellSums& o) {
    area += o.area;
    energy += o.energy;
    abs_curvature += o.abs_curvature;
    curvature += o.curvature;
    return *this;
  }
};

struct QuadratureOptions {
  double variation_tol = 0.025;
  int min_depth = 1;
  int max_depth = 40;
};

// Metric e^{2phi}(dx^2 + dy^2) sampled on a chart.  When built from a closed
// form the source is kept, and pointwise queries and integrals use it.
class MetricGrid {
 public:
  MetricGrid() = default;

  static MetricGrid sample(const DomainChart& chart, PhiFunction phi);
  static MetricGrid from_samples(const DomainChart& chart, std::vector<double> phi);
  static MetricGrid vanished_on(const DomainChart& chart);

  bool valid() const { return static_cast<bool>(state_); }
  const DomainChart& chart() const;
  bool vanished() const;
  bool has_source() const;
  const PhiFunction& source() const;

  std::span<const double> phi() const;
  double phi_node(int i, int j) const;
  // Exact when a source is attached, bilinear (clamped to the square) otherwise.
  double phi_at(Vec2 p) const;
  double bilinear(Vec2 p) const;

  // Five-point Laplacian at (i, j); false on the rim.
  bool laplacian(int i, int j, double& out) const;

  const std::vector<CellSums>& cells() const;
  // Integral over the dual cell of (i, j) restricted to a region.
  CellSums cell_in_region(int i, int j, const Region& region) const;
  bool cell_active(int i, int j) const;

  const QuadratureOptions& quadrature() const;
  MetricGrid with_quadrature(const QuadratureOptions& q) const;

 private:
  struct State;
  std::shared_ptr<const State> state_;
  explicit MetricGrid(std::shared_ptr<const State> s) : state_(std::move(s)) {}
};

struct MetricSequence {
  std::vector<MetricGrid> frames;
  std::vector<double> labels;

  void validate() const;
  std::size_t size() const { return frames.size(); }
  // Last w frames (or all when shorter).
  MetricSequence tail(std::size_t w) const;
};

struct ScalarField {
  DomainChart chart;
  std::vector<double> values;
  std::vector<std::uint8_t> valid_mask;

  double at(int i, int j) const { return values[chart.index(i, j)]; }
  bool valid(int i, int j) const { return valid_mask[chart.index(i, j)] != 0; }
};

struct RadialStats {
  double average = 0.0;
  double flux = 0.0;
  double circle_length = 0.0;
  double sup_phi = 0.0;
  double inf_phi = 0.0;
};

}  // namespace bubbletree
