#include <cmath>
#include <complex>
#include <numbers>

#include "bubbletree/error.hpp"
#include "bubbletree/families.hpp"
#include "bubbletree/grid_metric.hpp"
#include "doctest.h"

using namespace bubbletree;
namespace fam = bubbletree::families;

namespace {

constexpr double kPi = std::numbers::pi;

double d1(const std::function<double(double)>& f, double r, double h) {
  return (f(r + h) - f(r - h)) / (2 * h);
}

double d2(const std::function<double(double)>& f, double r, double h) {
  return (f(r + h) - 2 * f(r) + f(r - h)) / (h * h);
}

}  // namespace

TEST_CASE("example 1 closed form") {
  PhiFunction one = fam::example1_phi(1.0);
  CHECK(std::exp(2 * one(-1.0, 0.0)) == doctest::Approx(4.0));
  PhiFunction g = fam::example1_phi(100.0);
  double c = std::pow(100.0, -0.33);
  for (auto [x, y] : {std::pair{0.1, 0.2}, std::pair{-0.3, 0.05}, std::pair{1.0, -1.0}}) {
    double q = (x + c) * (x + c) + y * y;
    double oracle = 4 * 1e4 / ((1 + 1e4 * q) * (1 + 1e4 * q));
    CHECK(std::exp(2 * g(x, y)) == doctest::Approx(oracle).epsilon(1e-13));
  }
}

TEST_CASE("example 1 masses about the bubble center") {
  auto seq = fam::example1(DomainChart::window({0, 0}, 4.0, 128), {10, 40});
  for (std::size_t k = 0; k < seq.size(); ++k) {
    double n = seq.labels[k];
    Vec2 c{-std::pow(n, -0.33), 0};
    for (double r : {0.5, 2.0}) {
      double oracle = 4 * kPi * n * n * r * r / (1 + n * n * r * r);
      Functionals f = functionals(seq.frames[k], Region::disk(c, r));
      CHECK(f.area == doctest::Approx(oracle).epsilon(1e-3));
      CHECK(f.energy == doctest::Approx(oracle).epsilon(3e-3));
    }
  }
  CHECK_THROWS_AS(fam::example1(DomainChart::window({3, 0}, 1.0, 32), {10, 20}), Error);
}

TEST_CASE("unnormalized example 1 has curvature 4") {
  auto seq = fam::example1(DomainChart::window({0, 0}, 1.0, 129), {2, 3}, 0.33, false);
  ScalarField k = curvature_field(seq.frames[0]);
  for (std::size_t i = 0; i < k.values.size(); ++i) {
    if (k.valid_mask[i]) CHECK(k.values[i] == doctest::Approx(4.0).epsilon(2e-3));
  }
}

TEST_CASE("example 2 limit profile and cap") {
  for (double beta : {0.6, 1.0, 1.4}) {
    auto f = [beta](double r) { return fam::example2_limit(r, beta); };
    double h = 1e-4;
    // Matched to second order at r = 2.
    CHECK(f(2 - 1e-10) == doctest::Approx(f(2 + 1e-10)).epsilon(1e-8));
    CHECK(d1(f, 2 - 2 * h, h) == doctest::Approx(d1(f, 2 + 2 * h, h)).epsilon(1e-3));
    CHECK(d2(f, 2 - 3 * h, h) == doctest::Approx(d2(f, 2 + 3 * h, h)).epsilon(1e-2));
    // Cap decreases away from its maximum at the origin.
    for (double r = 0.1; r < 2.0; r += 0.1) CHECK(f(r) < f(r - 0.1));
    CHECK(fam::example2_limit_derivative(5.0, beta) == doctest::Approx(d1(f, 5.0, 1e-5)).epsilon(1e-7));
  }
}

TEST_CASE("example 2 necks end on geodesic circles") {
  double beta = 1.2;
  for (auto prof : {fam::NeckProfile::literal, fam::NeckProfile::cylindrical}) {
    for (double n : {8.0, 32.0}) {
      double t = fam::example2_neck_end(n, prof);
      auto f = [&](double r) { return fam::example2_radial(r, n, beta, prof); };
      double h = 1e-6 * t;
      double inner = (3 * f(t) - 4 * f(t - h) + f(t - 2 * h)) / (2 * h);
      CHECK(inner == doctest::Approx(-1.0 / t).epsilon(1e-6));
      // Reflection across |z| = T is continuous.
      CHECK(f(t * (1 + 1e-9)) == doctest::Approx(f(t)).epsilon(1e-8));
    }
  }
  // Cylindrical neck is C^1 where it leaves the limit; the literal one is not.
  double n = 16.0;
  auto cyl = [&](double r) { return fam::example2_radial(r, n, beta, fam::NeckProfile::cylindrical); };
  auto lit = [&](double r) { return fam::example2_radial(r, n, beta, fam::NeckProfile::literal); };
  double h = 1e-7;
  CHECK((cyl(n + h) - cyl(n)) / h == doctest::Approx((cyl(n) - cyl(n - h)) / h).epsilon(1e-5));
  double jump = (lit(n + h) - lit(n)) / h - (lit(n) - lit(n - h)) / h;
  CHECK(jump == doctest::Approx(-beta / std::log(n) + beta / (n * std::log(n))).epsilon(1e-4));
}

TEST_CASE("literal example 2 neck energy exceeds the generator bound") {
  fam::Example2Params p{1.4, fam::NeckProfile::literal, fam::View::plane};
  double t = fam::example2_neck_end(8.0, p.profile);
  MetricGrid g = MetricGrid::sample(DomainChart::disk({0, 0}, t, 256), fam::example2_phi(8.0, p));
  CHECK(total_functionals(g).energy > fam::kFunctionalBound);
  p.profile = fam::NeckProfile::cylindrical;
  CHECK_NOTHROW(fam::example2(DomainChart::disk({0, 0}, 60.0, 128), {8, 16}, p));
}

TEST_CASE("glued example 2 in the inverted chart") {
  fam::Example2Params p{1.4, fam::NeckProfile::cylindrical, fam::View::inverted};
  double n = 16;
  PhiFunction psi = fam::example2_phi(n, p);
  double t = n * n;
  // Near copy: psi(w) = phi(1/w) - 2 ln|w|.
  double rho = 0.3;
  CHECK(psi(rho, 0) == doctest::Approx(fam::example2_limit(1 / rho, 1.4) - 2 * std::log(rho)).epsilon(1e-12));
  // Far copy is the frame rescaled by T^2.
  rho = 1e-6;
  CHECK(psi(0, rho) == doctest::Approx(fam::example2_radial(t * t * rho, n, 1.4, p.profile) + 2 * std::log(t)).epsilon(1e-12));
  CHECK(psi(1 / t * (1 + 1e-10), 0) == doctest::Approx(psi(1 / t * (1 - 1e-10), 0)).epsilon(1e-8));
}

TEST_CASE("example 2 tail flux") {
  for (double beta : {0.75, 1.4}) {
    for (double k : {5.0, 10.0}) {
      double r = std::exp(k);
      MetricGrid g = MetricGrid::sample(DomainChart::disk({0, 0}, 1.5 * r, 64),
                                        [beta](double x, double y) { return fam::example2_limit(std::hypot(x, y), beta); });
      RadialStats s = radial_stats(g, {0, 0}, r);
      CHECK(s.flux / (2 * kPi) == doctest::Approx(-1 - beta / k).epsilon(1e-6));
    }
  }
}

TEST_CASE("example 3") {
  using C = std::complex<double>;
  PhiFunction one = fam::example3_phi(50.0, {C(1, 0)});
  PhiFunction bubble = fam::round_sphere(50.0, {1, 0});
  CHECK(one(1.01, 0.02) == doctest::Approx(bubble(1.01, 0.02)).epsilon(1e-12));
  auto cps = fam::critical_points({C(1, 0), C(2, 0)});
  REQUIRE(cps.size() == 1);
  CHECK(cps[0].real() == doctest::Approx(1.5));
  auto cubic = fam::critical_points({C(0, 0), C(1, 0), C(0, 1)});
  for (const auto& c : cubic) {
    C df = 3.0 * c * c - 2.0 * C(1, 1) * c + C(0, 1);
    CHECK(std::abs(df) < 1e-10);
  }
  CHECK_THROWS_AS(fam::example3(DomainChart::window({1.5, 0}, 1.0, 32), {10, 20}, {C(1, 0), C(2, 0)}), Error);
  CHECK_THROWS_AS(fam::example3(DomainChart::window({0, 0}, 1.2, 32), {10, 20}, {C(1, 0), C(2, 0)}), Error);
  auto seq = fam::example3(DomainChart::annulus({1.5, 0}, 0.15, 1.5, 128), {20, 40}, {C(1, 0), C(2, 0)});
  CHECK(total_functionals(seq.frames[1]).area == doctest::Approx(8 * kPi).epsilon(0.02));
}

TEST_CASE("random radial metrics are seeded and bounded") {
  DomainChart c = DomainChart::disk({0.2, -0.1}, 0.8, 64);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    fam::RandomRotsymParams p{.seed = seed};
    auto seq = fam::random_rotsym(c, {1, 2}, p);
    for (double v : seq.frames[0].phi()) CHECK(std::abs(v) <= p.amplitude + 1e-12);
    auto again = fam::random_rotsym(c, {1, 2}, p);
    CHECK(std::equal(seq.frames[0].phi().begin(), seq.frames[0].phi().end(), again.frames[0].phi().begin()));
  }
  auto a = fam::random_rotsym(c, {1, 2}, {.seed = 1});
  auto b = fam::random_rotsym(c, {1, 2}, {.seed = 2});
  CHECK(a.frames[0].phi()[100] != b.frames[0].phi()[100]);
  auto flat = fam::random_rotsym(c, {1, 2}, {.seed = 3, .amplitude = 0.0});
  for (double v : flat.frames[0].phi()) CHECK(v == 0.0);
  CHECK_THROWS_AS(fam::random_rotsym(DomainChart::disk({0, 0}, 10.0, 64), {1, 2}, {.seed = 4, .amplitude = 3.0}), Error);
}
