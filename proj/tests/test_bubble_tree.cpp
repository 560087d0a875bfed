#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "bubbletree/bubble_tree.hpp"
#include "bubbletree/error.hpp"
#include "bubbletree/families.hpp"
#include "bubbletree/grid_metric.hpp"
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

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

TreeConfig example1_config() {
  TreeConfig c;
  c.detection.profile_radius = 6.0;
  return c;
}

const TreeBuild& example1_build() {
  static const TreeBuild b =
      build_tree(fam::example1(DomainChart::window({0, 0}, 8.0, 256), {10, 100, 1000}), example1_config());
  return b;
}

BubbleTree two_level() {
  BubbleTree t;
  t.C1 = t.C2 = 8 * kPi;
  for (int k = 0; k < 4; ++k) {
    BubbleVertex v;
    v.id = k;
    v.kind = k == 1 ? VertexKind::ghost : VertexKind::bubble;
    v.vanished = k == 1;
    v.chart = k == 0 ? VertexChart::domain : VertexChart::sphere_minus_infty;
    t.vertices.push_back(v);
  }
  t.vertices[0].kind = VertexKind::base;
  for (auto [p, c] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{1, 3}}) {
    BubbleEdge e;
    e.parent = p;
    e.child = c;
    e.area_mass = e.energy_mass = 4 * kPi;
    t.edges.push_back(e);
  }
  t.edges[0].area_mass = t.edges[0].energy_mass = 8 * kPi;
  return t;
}

}  // namespace

TEST_CASE("flat metric is a single base vertex") {
  MetricSequence s;
  for (double n : {1.0, 2.0, 3.0}) {
    s.frames.push_back(MetricGrid::sample(DomainChart::window({0, 0}, 1.0, 128), [](double, double) { return 0.0; }));
    s.labels.push_back(n);
  }
  TreeBuild b = build_tree(s);
  REQUIRE(b.tree.vertices.size() == 1);
  CHECK(b.tree.edges.empty());
  CHECK(b.tree.vertices[0].kind == VertexKind::base);
  CHECK(b.tree.vertices[0].area == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(mass_accounting(b).pass);
  ThickThin tt = thick_thin(b, 0.5);
  CHECK(tt.thick.size() == 1);
  CHECK(tt.thin.empty());
}

TEST_CASE("example 1 tree") {
  const TreeBuild& b = example1_build();
  const BubbleTree& t = b.tree;
  REQUIRE(t.vertices.size() == 2);
  REQUIRE(t.edges.size() == 1);
  CHECK(t.vertices[0].kind == VertexKind::ghost);
  CHECK(t.vertices[0].vanished);
  CHECK(t.vertices[1].kind == VertexKind::bubble);
  CHECK(t.vertices[1].chart == VertexChart::sphere_minus_infty);
  CHECK(t.edges[0].area_mass == doctest::Approx(4 * kPi).epsilon(0.05));
  CHECK(t.edges[0].energy_mass == doctest::Approx(4 * kPi).epsilon(0.05));
  CHECK(t.edges[0].point.x == doctest::Approx(-std::pow(1000.0, -0.33)).epsilon(1e-6));
  CHECK(t.C1 <= 4 * kPi * (1 + 1e-3));
  MassReport m = mass_accounting(b);
  CHECK(m.pass);
  for (const auto& c : m.checks) CHECK_MESSAGE(c.pass, c.name);
  ThickThin tt = thick_thin(b, 0.5);
  CHECK(tt.thick.size() == 2);
  REQUIRE(tt.thin.size() == 1);
  CHECK(tt.thin[0].max_circle_length < 0.5);
  CHECK(tt.thin[0].inner_radius < tt.thin[0].outer_radius);
  CHECK(code_of([&] { thick_thin(b, 0.01); }) == ErrorCode::ThinViolation);
}

TEST_CASE("tree json round trip is exact") {
  const BubbleTree& t = example1_build().tree;
  std::string text = serialize(t);
  BubbleTree back = parse_tree(text);
  CHECK(serialize(back) == text);
  REQUIRE(back.edges.size() == t.edges.size());
  CHECK(same_bits(back.C1, t.C1));
  CHECK(same_bits(back.C2, t.C2));
  for (std::size_t k = 0; k < t.edges.size(); ++k) {
    CHECK(same_bits(back.edges[k].point.x, t.edges[k].point.x));
    CHECK(same_bits(back.edges[k].area_mass, t.edges[k].area_mass));
    CHECK(same_bits(back.edges[k].area_loss, t.edges[k].area_loss));
  }
  for (std::size_t k = 0; k < t.vertices.size(); ++k) {
    CHECK(back.vertices[k].kind == t.vertices[k].kind);
    CHECK(same_bits(back.vertices[k].energy, t.vertices[k].energy));
  }
  CHECK_THROWS_AS(parse_tree("{\"vertices\": 3}"), Error);
  CHECK_THROWS_AS(parse_tree("not json"), Error);
}

TEST_CASE("structure checks") {
  CHECK_NOTHROW(check_structure(two_level()));
  BubbleTree t = two_level();
  t.edges.pop_back();
  t.vertices.pop_back();
  CHECK(code_of([&] { check_structure(t); }) == ErrorCode::GhostLawViolated);
  t = two_level();
  t.edges[2].parent = 2;
  t.edges[2].child = 2;
  CHECK(code_of([&] { check_structure(t); }) == ErrorCode::MalformedTree);
  t = two_level();
  t.edges[2].child = 2;
  CHECK(code_of([&] { check_structure(t); }) == ErrorCode::MalformedTree);
  t = two_level();
  t.vertices[2].kind = VertexKind::base;
  CHECK(code_of([&] { check_structure(t); }) == ErrorCode::MalformedTree);
  t = two_level();
  t.vertices[0].vanished = true;
  CHECK(code_of([&] { check_structure(t); }) == ErrorCode::MalformedTree);
  t = two_level();
  t.vertices[2].vanished = true;
  CHECK(code_of([&] { check_structure(t); }) == ErrorCode::MalformedTree);
  t = two_level();
  t.C1 = t.C2 = 0.5;
  CHECK(code_of([&] { check_structure(t); }) == ErrorCode::MalformedTree);
  t = two_level();
  t.edges[1].area_mass = 0.1;
  CHECK(code_of([&] { check_structure(t); }) == ErrorCode::BudgetViolated);
  // A ghost root with a single child is allowed.
  t = two_level();
  t.vertices[0].kind = VertexKind::ghost;
  t.vertices[0].vanished = true;
  CHECK_NOTHROW(check_structure(t));
}

TEST_CASE("example 3 tree has two bubbles") {
  using C = std::complex<double>;
  TreeConfig cfg;
  cfg.detection.profile_radius = 0.3;
  auto seq = fam::example3(DomainChart::annulus({1.5, 0}, 0.15, 1.5, 512), {250, 500, 1000}, {C(1, 0), C(2, 0)});
  TreeBuild b = build_tree(seq, cfg);
  REQUIRE(b.tree.vertices.size() == 3);
  CHECK(b.tree.vertices[0].kind == VertexKind::ghost);
  for (const auto& e : b.tree.edges) {
    CHECK(e.parent == 0);
    CHECK(e.area_mass == doctest::Approx(4 * kPi).epsilon(0.05));
    CHECK(e.energy_mass == doctest::Approx(4 * kPi).epsilon(0.05));
    CHECK(e.efficient);
  }
  CHECK(mass_accounting(b).pass);
  ThickThin tt = thick_thin(b, 0.5);
  CHECK(tt.thick.size() == 3);
  CHECK(tt.thin.size() == 2);
}

TEST_CASE("random trees survive a json round trip") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::uniform_int_distribution<int> size(1, 9);
  for (int trial = 0; trial < 50; ++trial) {
    BubbleTree t;
    t.C1 = std::abs(u(rng));
    t.C2 = std::ldexp(std::abs(u(rng)), -40);
    int nv = size(rng);
    for (int k = 0; k < nv; ++k) {
      BubbleVertex v;
      v.id = k;
      v.kind = static_cast<VertexKind>(rng() % 3);
      v.vanished = rng() % 2;
      v.truncated = rng() % 2;
      v.area = u(rng) / 7;
      v.energy = std::nextafter(u(rng), 0.0);
      v.chart = k ? VertexChart::sphere_minus_infty : VertexChart::domain;
      t.vertices.push_back(v);
      if (k) {
        BubbleEdge e;
        e.parent = static_cast<int>(rng() % k);
        e.child = k;
        e.point = {u(rng) / 3, u(rng) * 1e-300};
        e.area_mass = u(rng);
        e.energy_mass = 1.0 / 3.0;
        e.area_loss = u(rng) * 1e-9;
        e.efficient = rng() % 2;
        t.edges.push_back(e);
      }
    }
    std::string text = serialize(t);
    BubbleTree b = parse_tree(text);
    REQUIRE(b.vertices.size() == t.vertices.size());
    for (std::size_t k = 0; k < t.vertices.size(); ++k) {
      CHECK(b.vertices[k].kind == t.vertices[k].kind);
      CHECK(b.vertices[k].vanished == t.vertices[k].vanished);
      CHECK(b.vertices[k].truncated == t.vertices[k].truncated);
      CHECK(same_bits(b.vertices[k].area, t.vertices[k].area));
      CHECK(same_bits(b.vertices[k].energy, t.vertices[k].energy));
    }
    for (std::size_t k = 0; k < t.edges.size(); ++k) {
      CHECK(b.edges[k].parent == t.edges[k].parent);
      CHECK(same_bits(b.edges[k].point.y, t.edges[k].point.y));
      CHECK(same_bits(b.edges[k].energy_mass, t.edges[k].energy_mass));
      CHECK(b.edges[k].efficient == t.edges[k].efficient);
    }
    CHECK(same_bits(b.C2, t.C2));
    CHECK(serialize(b) == text);
  }
}

TEST_CASE("depth cap truncates and records it") {
  TreeConfig cfg = example1_config();
  cfg.max_depth = 0;
  TreeBuild b = build_tree(fam::example1(DomainChart::window({0, 0}, 8.0, 256), {10, 100, 1000}), cfg);
  REQUIRE(b.tree.vertices.size() == 1);
  CHECK(b.tree.vertices[0].truncated);
  CHECK(!b.warnings.empty());
  CHECK(serialize(b.tree).find("\"truncated\":true") != std::string::npos);
}
