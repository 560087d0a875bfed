#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "bubbletree/metric_grid.hpp"

namespace bubbletree::families {

// ln(2s / (1 + s^2 |z - c|^2)): round sphere of curvature 1 at scale s.
PhiFunction round_sphere(double scale = 1.0, Vec2 c = {});

// Bubble at z = -n^{-a}.  Normalized: e^{2phi} = 4n^2/(1+n^2|z+n^{-a}|^2)^2,
// otherwise without the factor 4 (curvature 4, area pi).
PhiFunction example1_phi(double n, double offset_exp = 0.33, bool normalized = true);
MetricSequence example1(const DomainChart& chart, const std::vector<double>& n_values,
                        double offset_exp = 0.33, bool normalized = true);

enum class NeckProfile { literal, cylindrical };
enum class View { plane, inverted };

struct Example2Params {
  double beta = 1.0;
  NeckProfile profile = NeckProfile::cylindrical;
  View view = View::plane;
};

// -ln r - beta ln ln r for r > 2, even quartic cap matching to second order.
double example2_limit(double r, double beta);
double example2_limit_derivative(double r, double beta);
// Radius of the geodesic circle where the neck is cut and reflected.
double example2_neck_end(double n, NeckProfile profile);
// Rotationally symmetric profile of frame n on [0, inf), reflected across
// the neck end.
double example2_radial(double r, double n, double beta, NeckProfile profile);
PhiFunction example2_phi(double n, const Example2Params& p);
MetricSequence example2(const DomainChart& chart, const std::vector<double>& n_values,
                        const Example2Params& p);

// Pullback of the round metric by n f, f(z) = prod (z - root).
PhiFunction example3_phi(double n, const std::vector<std::complex<double>>& roots);
std::vector<std::complex<double>> critical_points(const std::vector<std::complex<double>>& roots);
MetricSequence example3(const DomainChart& chart, const std::vector<double>& n_values,
                        const std::vector<std::complex<double>>& roots);

struct RandomRotsymParams {
  std::uint64_t seed = 1;
  double amplitude = 1.5;  // |phi| <= amplitude away from concentration
  double length = 1.0;
  bool concentrate = false;
};

// Smooth radial profile about the chart center from four seeded terms.
PhiFunction random_rotsym_phi(const RandomRotsymParams& p, Vec2 center, double n);
MetricSequence random_rotsym(const DomainChart& chart, const std::vector<double>& n_values,
                             const RandomRotsymParams& p);

// Area and energy bound every generated frame must satisfy.
inline constexpr double kFunctionalBound = 1e3;

}  // namespace bubbletree::families
