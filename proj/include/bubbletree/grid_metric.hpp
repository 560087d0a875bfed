#pragma once

#include <vector>

#include "bubbletree/metric_grid.hpp"

namespace bubbletree {

struct Functionals {
  double area = 0.0;
  double energy = 0.0;
  double abs_curvature = 0.0;  // ∫|K| dA
  double curvature = 0.0;      // ∫K dA
};

// K = -Δphi e^{-2phi} at interior nodes; the one-cell rim is invalid.
ScalarField curvature_field(const MetricGrid& g);

Functionals functionals(const MetricGrid& g, const Region& region);
Functionals total_functionals(const MetricGrid& g);

int theta_samples(const MetricGrid& g, double r);
double circle_length(const MetricGrid& g, Vec2 center, double r);
RadialStats radial_stats(const MetricGrid& g, Vec2 center, double r);

// phi~(w) = phi(1/w) - 2 ln|w|.
MetricGrid chart_invert(const MetricGrid& g);

struct DirichletSplit {
  ScalarField u;  // Δu = Δphi inside, u = 0 on the boundary
  ScalarField v;  // phi - u, discretely harmonic
  int iterations = 0;
  double relative_residual = 0.0;
};

DirichletSplit dirichlet_split(const MetricGrid& g, const Region& subdisk);

// Mean of phi_r + 1/r over the circle, for rotationally symmetric metrics.
double geodesic_defect(const MetricGrid& g, Vec2 center, double r);

// Node maximizing phi in a region, refined off-grid when a source is attached.
Vec2 argmax_phi(const MetricGrid& g, const Region& search);

// Largest nodal phi over chart nodes outside every hole.
double sup_phi_outside(const MetricGrid& g, const std::vector<Region>& holes);

}  // namespace bubbletree
