#include <cmath>
#include <numbers>
#include <random>

#include "bubbletree/concentration.hpp"
#include "bubbletree/error.hpp"
#include "bubbletree/families.hpp"
#include "bubbletree/grid_metric.hpp"
#include "bubbletree/renormalize.hpp"
#include "doctest.h"

using namespace bubbletree;
namespace fam = bubbletree::families;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::ParseError;
}

// Larger root of eps (1 + s^2) = 4 pi s, s = n r.
double sphere_neck(double n, double eps) {
  return (2 * kPi + std::sqrt(4 * kPi * kPi - eps * eps)) / (eps * n);
}

}  // namespace

TEST_CASE("recentering puts the maximum at the origin") {
  auto seq = fam::example1(DomainChart::window({0, 0}, 8.0, 256), {100, 200});
  Vec2 p{-0.2, 0.1};
  Recentered rc = recenter(seq, p, 1.0);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(rc.centers[k].x == doctest::Approx(-std::pow(seq.labels[k], -0.33)).epsilon(1e-7));
    CHECK(rc.seq.frames[k].chart().kind() == ChartKind::disk);
    CHECK(rc.seq.frames[k].chart().region.outer_radius == 1.0);
    Vec2 m = argmax_phi(rc.seq.frames[k], Region::disk({0, 0}, 0.5));
    CHECK(norm(m) < 1e-8);
  }
  CHECK(code_of([&] { recenter(seq, {7.5, 0}, 1.0); }) == ErrorCode::WindowOutOfChart);
}

TEST_CASE("rescaling a recentered bubble gives the unit sphere") {
  auto seq = fam::example1(DomainChart::window({0, 0}, 8.0, 256), {100, 1000});
  Recentered rc = recenter(seq, {-0.1, 0}, 1.0);
  for (std::size_t k = 0; k < 2; ++k) {
    double n = seq.labels[k];
    MetricGrid child = rescale(rc.seq.frames[k], 1.0 / n, 2.0);
    const DomainChart& c = child.chart();
    double worst = 0.0;
    for (int j = 0; j < c.grid_n; ++j) {
      for (int i = 0; i < c.grid_n; ++i) {
        if (!c.contains(c.node(i, j))) continue;
        Vec2 z = c.node(i, j);
        double oracle = std::log(2.0 / (1.0 + z.x * z.x + z.y * z.y));
        worst = std::max(worst, std::abs(child.phi_node(i, j) - oracle));
      }
    }
    CHECK(worst < 1e-6);
  }
  CHECK(code_of([&] { rescale(rc.seq.frames[0], 0.6, 2.0); }) == ErrorCode::WindowExceedsSource);
}

TEST_CASE("neck radius matches the quadratic root on a round sphere") {
  for (double n : {60.0, 400.0}) {
    MetricGrid g = MetricGrid::sample(DomainChart::disk({0, 0}, 1.0, 128), fam::round_sphere(n, {0, 0}));
    for (double eps : {0.25, 0.5, 0.9}) {
      double d = neck_radius(g, eps, 1.0);
      CHECK(d == doctest::Approx(sphere_neck(n, eps)).epsilon(1e-4));
      CHECK(circle_length(g, {0, 0}, d) == doctest::Approx(eps).epsilon(1e-4));
    }
  }
}

TEST_CASE("neck radius is the largest radius with a long circle") {
  // Two necks; the outer one must be found.
  PhiFunction bumpy = [](double x, double y) {
    double r = std::hypot(x, y);
    return std::log(2 * 30.0 / (1 + 900 * r * r)) + 2.0 * std::exp(-std::pow((r - 0.4) / 0.03, 2));
  };
  MetricGrid g = MetricGrid::sample(DomainChart::disk({0, 0}, 1.0, 128), bumpy);
  double eps = 0.5;
  double d = neck_radius(g, eps, 0.95);
  double r_lo = 1e-4;
  for (int k = 0; k <= 4000; ++k) {
    double r = r_lo * std::pow(0.95 / r_lo, k / 4000.0);
    if (r > d * (1 + 1e-5)) CHECK(circle_length(g, {0, 0}, r) < eps);
  }
  CHECK(d > 0.4);
}

TEST_CASE("neck radius preconditions") {
  MetricGrid g = MetricGrid::sample(DomainChart::disk({0, 0}, 1.0, 128), fam::round_sphere(50.0, {0, 0}));
  CHECK(code_of([&] { neck_radius(g, 1.0, 1.0); }) == ErrorCode::FilterAboveThreshold);
  CHECK(code_of([&] { neck_radius(g, 0.5, 0.1); }) == ErrorCode::PreconditionLengthTooLarge);
  MetricGrid flat = MetricGrid::sample(DomainChart::disk({0, 0}, 1.0, 128), [](double, double) { return 0.0; });
  CHECK(code_of([&] { neck_radius(flat, 0.5, 0.05); }) == ErrorCode::NoCrossing);
}

TEST_CASE("rescaling conserves area and energy") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    DomainChart c = DomainChart::disk({u(rng), u(rng)}, 0.8, 256);
    MetricGrid g = fam::random_rotsym(c, {1, 2}, {.seed = seed}).frames[0];
    for (double delta : {0.5, 0.1}) {
      MetricGrid h = rescale(g, delta, 1.0);
      Functionals a = total_functionals(h);
      Functionals b = functionals(g, Region::disk(c.center(), delta));
      CHECK(a.area == doctest::Approx(b.area).epsilon(5e-3));
      CHECK(a.energy == doctest::Approx(b.energy).epsilon(5e-3));
    }
  }
}

TEST_CASE("blowup of example 1") {
  auto seq = fam::example1(DomainChart::window({0, 0}, 8.0, 512), {10, 100, 1000});
  DetectionConfig dc;
  dc.profile_radius = 6.0;
  Detection d = detect_bubbles(seq, dc);
  REQUIRE(d.accepted.size() == 1);
  BlowupResult b = blowup(seq, d.accepted[0]);
  const NeckSpec& nk = b.neck;
  REQUIRE(nk.delta.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(nk.delta[k] == doctest::Approx(sphere_neck(nk.labels[k], 0.5)).epsilon(1e-4));
  }
  CHECK(nk.r1 <= 6.0);
  CHECK(nk.r2 > 1.0);
  CHECK(b.child.size() == 3);
  // Every child frame is a round unit sphere.
  for (const auto& f : b.child.frames) {
    ScalarField k = curvature_field(f);
    const DomainChart& c = f.chart();
    for (int j = 0; j < c.grid_n; ++j) {
      for (int i = 0; i < c.grid_n; ++i) {
        std::size_t idx = c.index(i, j);
        if (k.valid_mask[idx] && norm(c.node(i, j)) < 0.05) CHECK(k.values[idx] == doctest::Approx(1.0).epsilon(0.01));
      }
    }
  }
  CHECK(b.tau >= 0.0);
  CHECK(b.tau < 0.05 * 4 * kPi);
  CHECK(b.child_budget.area == doctest::Approx(4 * kPi).epsilon(0.05));
}
