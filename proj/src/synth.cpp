#include "geoc/synth.hpp"

#include <cmath>
#include <vector>

#include "geoc/error.hpp"
#include "geoc/rng.hpp"

namespace geoc {

namespace {

enum Stream : std::uint64_t { kStreamX = 1, kStreamY = 2, kStreamNoise = 3 };

double noise_draw(CounterRng& rng, const NoiseSpec& noise) {
  if (noise.kind == NoiseKind::uniform_eps) return noise.eps * (rng.uniform() - 0.5);
  return noise.eps * rng.normal();
}

double henon_next(const SystemSpec& s, double x, double y) { return s.c + s.a * x * x + s.b * y; }

}  // namespace

double apply_selector(Selector s, double v) {
  switch (s) {
    case Selector::identity: return v;
    case Selector::square: return v * v;
    case Selector::exp: return std::exp(v);
    case Selector::log: return std::log(v);
  }
  return v;
}

std::string to_string(Family f) {
  switch (f) {
    case Family::linear_xy: return "linear_xy";
    case Family::g1_g2_additive: return "g1_g2_additive";
    case Family::henon_uniform: return "henon_uniform";
    case Family::henon_attractor: return "henon_attractor";
  }
  return "?";
}

std::string to_string(Selector s) {
  switch (s) {
    case Selector::identity: return "identity";
    case Selector::square: return "square";
    case Selector::exp: return "exp";
    case Selector::log: return "log";
  }
  return "?";
}

Family family_from_string(const std::string& name) {
  for (Family f : {Family::linear_xy, Family::g1_g2_additive, Family::henon_uniform,
                   Family::henon_attractor}) {
    if (to_string(f) == name) return f;
  }
  throw ArgumentError("unknown system family '" + name + "'");
}

Selector selector_from_string(const std::string& name) {
  for (Selector s : {Selector::identity, Selector::square, Selector::exp, Selector::log}) {
    if (to_string(s) == name) return s;
  }
  throw ArgumentError("unknown selector '" + name + "'");
}

SystemSpec SystemSpec::linear(double a, double b, double c, std::size_t n, std::uint64_t seed) {
  SystemSpec s;
  s.family = Family::linear_xy;
  s.a = a;
  s.b = b;
  s.c = c;
  s.n = n;
  s.seed = seed;
  return s;
}

SystemSpec SystemSpec::henon_uniform(std::size_t n, std::uint64_t seed) {
  SystemSpec s;
  s.family = Family::henon_uniform;
  s.a = -1.4;
  s.b = 1.0;
  s.c = 1.0;
  s.n = n;
  s.seed = seed;
  s.domain = {-1.5, 1.5};
  return s;
}

SystemSpec SystemSpec::henon_attractor(std::size_t n, std::size_t burn_in) {
  SystemSpec s = henon_uniform(n, 0);
  s.family = Family::henon_attractor;
  s.y_gain = 0.3;
  s.burn_in = burn_in;
  return s;
}

void SystemSpec::validate() const {
  if (n < 1) throw ArgumentError("sample count n must be at least 1");
  if (!(domain.hi > domain.lo)) throw ArgumentError("input domain must have hi > lo");
  if (noise) noise->validate();
  if (family == Family::g1_g2_additive &&
      (g1 == Selector::log || g2 == Selector::log) && !(domain.lo > 0.0)) {
    throw DomainError("log selector needs a strictly positive input domain");
  }
  for (double v : {a, b, c, y_gain}) {
    if (!std::isfinite(v)) throw ArgumentError("system parameters must be finite");
  }
}

CouplingSample generate(const SystemSpec& spec) {
  spec.validate();
  const CounterRng root(spec.seed);
  CounterRng rx = root.split(kStreamX);
  CounterRng ry = root.split(kStreamY);
  CounterRng rz = root.split(kStreamNoise);

  if (spec.family == Family::henon_attractor) {
    const auto [x, y] = henon_orbit(spec);
    return CouplingSample::from_series(x, y);
  }

  if (spec.n < 2) throw LengthError("i.i.d. families need n >= 2");
  std::vector<double> xs(spec.n);
  std::vector<double> ys(spec.n);
  std::vector<double> next(spec.n);
  for (std::size_t t = 0; t < spec.n; ++t) {
    const double x = rx.uniform(spec.domain.lo, spec.domain.hi);
    const double y = ry.uniform(spec.domain.lo, spec.domain.hi);
    double v = 0.0;
    switch (spec.family) {
      case Family::linear_xy: v = spec.a * x + spec.b * y + spec.c; break;
      case Family::g1_g2_additive:
        v = spec.a * apply_selector(spec.g1, x) + spec.b * apply_selector(spec.g2, y) + spec.c;
        break;
      case Family::henon_uniform: v = henon_next(spec, x, y); break;
      case Family::henon_attractor: break;
    }
    if (spec.noise) v += noise_draw(rz, *spec.noise);
    xs[t] = x;
    ys[t] = y;
    next[t] = v;
  }
  return CouplingSample::from_triples(TimeSeries(std::move(xs), "x"), TimeSeries(std::move(ys), "y"),
                                      TimeSeries(std::move(next), "x_next"));
}

std::pair<TimeSeries, TimeSeries> henon_orbit(const SystemSpec& spec) {
  spec.validate();
  if (spec.family != Family::henon_attractor) throw ArgumentError("henon_orbit needs the henon_attractor family");
  // n triples need n + 1 orbit points.
  const std::size_t total = spec.burn_in + spec.n + 1;
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(spec.n + 1);
  ys.reserve(spec.n + 1);
  double x = 0.0;
  double y = 0.0;
  for (std::size_t t = 0; t < total; ++t) {
    if (t >= spec.burn_in) {
      xs.push_back(x);
      ys.push_back(y);
    }
    const double xn = henon_next(spec, x, y);
    y = spec.y_gain * x;
    x = xn;
    if (!(std::abs(x) <= 1e6)) {
      throw DivergenceError("Henon orbit diverged at iteration " + std::to_string(t));
    }
  }
  TimeSeries xt(std::move(xs), "x");
  if (spec.noise) xt = inject_noise(xt, *spec.noise, spec.seed);
  return {std::move(xt), TimeSeries(std::move(ys), "y")};
}

TimeSeries inject_noise(const TimeSeries& x, const NoiseSpec& noise, std::uint64_t seed) {
  noise.validate();
  CounterRng rng = CounterRng(seed).split(kStreamNoise + 100);
  std::vector<double> v(x.values());
  for (double& s : v) s += noise_draw(rng, noise);
  return TimeSeries(std::move(v), x.name(), x.time_step());
}

}  // namespace geoc
