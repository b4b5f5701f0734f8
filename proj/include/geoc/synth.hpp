#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "geoc/noise.hpp"
#include "geoc/series.hpp"

namespace geoc {

enum class Family { linear_xy, g1_g2_additive, henon_uniform, henon_attractor };
enum class Selector { identity, square, exp, log };

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Synthetic coupled system.
///
///   linear_xy:       x' = a x + b y + c
///   g1_g2_additive:  x' = a g1(x) + b g2(y) + c
///   henon_*:         x' = c + a x^2 + b y,  y' = y_gain x   (a = -1.4, b = c = 1)
///
/// With y_gain = 1 the map is area preserving and escapes from (0, 0) within a
/// few steps, so henon_attractor defaults to the classical y_gain = 0.3.
///
/// The linear/additive families and henon_uniform draw (x, y) i.i.d. uniform on
/// `domain` for every sample; henon_attractor iterates the map from (0, 0).
/// Optional noise is added to every x'.
struct SystemSpec {
  Family family = Family::linear_xy;
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double y_gain = 1.0;
  Selector g1 = Selector::identity;
  Selector g2 = Selector::identity;
  std::optional<NoiseSpec> noise;
  std::uint64_t seed = 1;
  std::size_t n = 1000;
  std::size_t burn_in = 1000;
  Interval domain{1.0, 2.0};

  static SystemSpec linear(double a, double b, double c, std::size_t n, std::uint64_t seed);
  static SystemSpec henon_uniform(std::size_t n, std::uint64_t seed);
  static SystemSpec henon_attractor(std::size_t n, std::size_t burn_in = 1000);

  void validate() const;
};

/// Deterministic in the spec: equal specs give bit-identical samples.
CouplingSample generate(const SystemSpec& spec);

/// The n + 1 orbit points behind an henon_attractor sample, noise included.
std::pair<TimeSeries, TimeSeries> henon_orbit(const SystemSpec& spec);

/// Adds i.i.d. uniform(-eps/2, eps/2) or gaussian(0, eps^2) noise.
TimeSeries inject_noise(const TimeSeries& x, const NoiseSpec& noise, std::uint64_t seed);

double apply_selector(Selector s, double v);

std::string to_string(Family f);
std::string to_string(Selector s);
Family family_from_string(const std::string& name);
Selector selector_from_string(const std::string& name);

}  // namespace geoc
