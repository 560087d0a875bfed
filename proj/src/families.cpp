#include "bubbletree/families.hpp"

#include <cmath>
#include <numbers>
#include <array>
#include <limits>
#include <random>

#include "bubbletree/error.hpp"
#include "bubbletree/grid_metric.hpp"

namespace bubbletree::families {

namespace {

void check_bounds(const MetricGrid& g, double label) {
  Functionals f = total_functionals(g);
  if (!(f.area < kFunctionalBound) || !(f.energy < kFunctionalBound)) {
    throw Error(ErrorCode::FunctionalBoundExceeded,
                "frame " + std::to_string(label) + " has area " + std::to_string(f.area) +
                    " and energy " + std::to_string(f.energy));
  }
}

MetricSequence build(const DomainChart& chart, const std::vector<double>& n_values,
                     const std::function<PhiFunction(double)>& make, bool bounded) {
  chart.validate();
  MetricSequence seq;
  for (double n : n_values) {
    seq.frames.push_back(MetricGrid::sample(chart, make(n)));
    seq.labels.push_back(n);
    if (bounded) check_bounds(seq.frames.back(), n);
  }
  seq.validate();
  return seq;
}

}  // namespace

PhiFunction round_sphere(double scale, Vec2 c) {
  return [scale, c](double x, double y) {
    double q = (x - c.x) * (x - c.x) + (y - c.y) * (y - c.y);
    return std::log(2.0 * scale) - std::log1p(scale * scale * q);
  };
}

PhiFunction example1_phi(double n, double offset_exp, bool normalized) {
  double shift = std::pow(n, -offset_exp);
  double lead = std::log((normalized ? 2.0 : 1.0) * n);
  return [n, shift, lead](double x, double y) {
    double q = (x + shift) * (x + shift) + y * y;
    return lead - std::log1p(n * n * q);
  };
}

MetricSequence example1(const DomainChart& chart, const std::vector<double>& n_values,
                        double offset_exp, bool normalized) {
  for (double n : n_values) {
    if (!chart.contains({-std::pow(n, -offset_exp), 0.0})) {
      throw Error(ErrorCode::ChartTooSmall, "bubble center lies outside the chart");
    }
  }
  return build(chart, n_values,
               [&](double n) { return example1_phi(n, offset_exp, normalized); }, true);
}

namespace {

struct Cap {
  double a, b, c;
};

Cap example2_cap(double beta) {
  const double r = 2.0;
  double l = std::log(r);
  double f0 = -l - beta * std::log(l);
  double f1 = -1.0 / r - beta / (r * l);
  double f2 = 1.0 / (r * r) + beta * (l + 1.0) / (r * r * l * l);
  double c = (f2 - 0.5 * f1) / 32.0;
  double b = (f1 - 32.0 * c) / 4.0;
  double a = f0 - 4.0 * b - 16.0 * c;
  return {a, b, c};
}

}  // namespace

double example2_limit(double r, double beta) {
  if (r > 2.0) return -std::log(r) - beta * std::log(std::log(r));
  Cap k = example2_cap(beta);
  double q = r * r;
  return k.a + k.b * q + k.c * q * q;
}

double example2_limit_derivative(double r, double beta) {
  if (r > 2.0) return -1.0 / r - beta / (r * std::log(r));
  Cap k = example2_cap(beta);
  return 2.0 * k.b * r + 4.0 * k.c * r * r * r;
}

double example2_neck_end(double n, NeckProfile profile) {
  return profile == NeckProfile::literal ? n + std::log(n) : n * n;
}

double example2_radial(double r, double n, double beta, NeckProfile profile) {
  double t = example2_neck_end(n, profile);
  if (r > t) return example2_radial(t * t / r, n, beta, profile) + 2.0 * std::log(t / r);
  if (r <= n) return example2_limit(r, beta);
  double ln_n = std::log(n);
  double eps = beta / ln_n;
  double del = beta / (ln_n * ln_n);
  double base = example2_limit(n, beta) + ln_n - std::log(r);
  if (profile == NeckProfile::literal) {
    double s = r - n;
    return base - eps * s + 0.5 * del * s * s;
  }
  double s = std::log(r / n);
  return base - eps * s + 0.5 * del * s * s;
}

PhiFunction example2_phi(double n, const Example2Params& p) {
  double beta = p.beta;
  NeckProfile prof = p.profile;
  if (p.view == View::plane) {
    return [n, beta, prof](double x, double y) {
      return example2_radial(std::hypot(x, y), n, beta, prof);
    };
  }
  double t = example2_neck_end(n, prof);
  return [n, beta, prof, t](double x, double y) {
    double rho = std::hypot(x, y);
    if (rho < 1.0 / t) return example2_radial(t * t * rho, n, beta, prof) + 2.0 * std::log(t);
    return example2_radial(1.0 / rho, n, beta, prof) - 2.0 * std::log(rho);
  };
}

MetricSequence example2(const DomainChart& chart, const std::vector<double>& n_values,
                        const Example2Params& p) {
  if (!(p.beta > 0.5 && p.beta < 1.5)) {
    throw Error(ErrorCode::ConfigError, "beta must lie in (0.5, 1.5)");
  }
  for (double n : n_values) {
    if (!(n > 2.0)) throw Error(ErrorCode::ConfigError, "n must exceed 2");
  }
  // The literal neck has unbounded energy as n grows, so it is not bounded here.
  return build(chart, n_values, [&](double n) { return example2_phi(n, p); },
               p.profile == NeckProfile::cylindrical);
}

PhiFunction example3_phi(double n, const std::vector<std::complex<double>>& roots) {
  double lead = std::log(2.0 * n);
  return [n, lead, roots](double x, double y) {
    std::complex<double> z(x, y);
    std::complex<double> f(1.0, 0.0), df(0.0, 0.0);
    for (const auto& r : roots) {
      df = df * (z - r) + f;
      f *= (z - r);
    }
    double a = std::abs(df);
    if (a == 0.0) return -std::numeric_limits<double>::infinity();
    return lead + std::log(a) - std::log1p(n * n * std::norm(f));
  };
}

std::vector<std::complex<double>> critical_points(const std::vector<std::complex<double>>& roots) {
  using C = std::complex<double>;
  std::size_t m = roots.size();
  if (m < 2) return {};
  // Coefficients of f, lowest degree first.
  std::vector<C> coef{C(1.0)};
  for (const auto& r : roots) {
    std::vector<C> next(coef.size() + 1, C(0.0));
    for (std::size_t k = 0; k < coef.size(); ++k) {
      next[k + 1] += coef[k];
      next[k] -= r * coef[k];
    }
    coef = next;
  }
  std::vector<C> d(m);
  for (std::size_t k = 1; k <= m; ++k) d[k - 1] = coef[k] * static_cast<double>(k);
  for (auto& c : d) c /= d.back();
  std::size_t deg = m - 1;
  auto eval = [&](C z) {
    C acc(0.0);
    for (std::size_t k = d.size(); k-- > 0;) acc = acc * z + d[k];
    return acc;
  };
  std::vector<C> z(deg);
  for (std::size_t k = 0; k < deg; ++k) z[k] = std::pow(C(0.4, 0.9), static_cast<double>(k));
  for (int it = 0; it < 500; ++it) {
    double change = 0.0;
    for (std::size_t k = 0; k < deg; ++k) {
      C den(1.0);
      for (std::size_t j = 0; j < deg; ++j) {
        if (j != k) den *= (z[k] - z[j]);
      }
      C step = eval(z[k]) / den;
      z[k] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15) break;
  }
  return z;
}

MetricSequence example3(const DomainChart& chart, const std::vector<double>& n_values,
                        const std::vector<std::complex<double>>& roots) {
  if (roots.empty()) throw Error(ErrorCode::ConfigError, "example 3 needs at least one root");
  for (const auto& r : roots) {
    if (!chart.contains({r.real(), r.imag()})) {
      throw Error(ErrorCode::ChartTooSmall, "a root lies outside the chart");
    }
  }
  for (const auto& c : critical_points(roots)) {
    if (chart.contains({c.real(), c.imag()})) {
      throw Error(ErrorCode::CriticalPointInChart, "f' vanishes inside the chart");
    }
  }
  return build(chart, n_values, [&](double n) { return example3_phi(n, roots); }, true);
}

PhiFunction random_rotsym_phi(const RandomRotsymParams& p, Vec2 center, double n) {
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> freq(0.3, 2.5);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::array<double, 4> c{}, w{}, th{};
  double total = 0.0;
  for (int k = 0; k < 4; ++k) {
    c[k] = coef(rng);
    w[k] = freq(rng);
    th[k] = phase(rng);
    total += std::abs(c[k]);
  }
  for (auto& v : c) v *= p.amplitude / total;
  double len = p.length;
  bool conc = p.concentrate;
  return [c, w, th, len, conc, n, center](double x, double y) {
    double q = ((x - center.x) * (x - center.x) + (y - center.y) * (y - center.y)) / (len * len);
    double v = 0.0;
    for (int k = 0; k < 4; ++k) v += c[k] * std::cos(w[k] * q + th[k]);
    if (conc) v += std::log1p(q) + std::log(n) - std::log1p(n * n * q);
    return v;
  };
}

MetricSequence random_rotsym(const DomainChart& chart, const std::vector<double>& n_values,
                             const RandomRotsymParams& p) {
  if (!(p.amplitude >= 0.0 && p.amplitude <= 3.0)) {
    throw Error(ErrorCode::ConfigError, "amplitude must lie in [0, 3]");
  }
  return build(chart, n_values,
               [&](double n) { return random_rotsym_phi(p, chart.center(), n); }, true);
}

}  // namespace bubbletree::families
