#include "geoc/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "geoc/error.hpp"
#include "geoc/parallel.hpp"

namespace geoc {

namespace {

// Antiderivative of the standard normal CDF: d/dz (z Phi(z) + phi(z)) = Phi(z).
double normal_cdf_integral(double z) {
  const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
  return z * cdf + phi;
}

constexpr std::size_t kMaxCells = std::size_t{1} << 24;

}  // namespace

double noise_entropy(const NoiseSpec& noise) {
  noise.validate();
  if (noise.kind == NoiseKind::uniform_eps) return std::log(noise.eps);
  return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * noise.eps * noise.eps);
}

MonotoneMap MonotoneMap::scaled(Selector m, double b) {
  switch (m) {
    case Selector::identity:
      return {[b](double y) { return b * y; }, [b](double u) { return u / b; },
              [b](double) { return b; }};
    case Selector::square:
      return {[b](double y) { return b * y * y; }, [b](double u) { return std::sqrt(std::max(0.0, u / b)); },
              [b](double y) { return 2.0 * b * y; }};
    case Selector::log:
      return {[b](double y) { return b * std::log(y); }, [b](double u) { return std::exp(u / b); },
              [b](double y) { return b / y; }};
    case Selector::exp:
      return {[b](double y) { return b * std::exp(y); }, [b](double u) { return std::log(u / b); },
              [b](double y) { return b * std::exp(y); }};
  }
  throw ArgumentError("unsupported selector");
}

Density1D pushforward_density_1d(const Density1D& py, const MonotoneMap& f, std::size_t cells) {
  if (cells == 0) cells = py.cells();
  const double lo = py.lo();
  const double hi = py.hi();

  // Sample f' on the support: it must keep one sign and vanish on at most a
  // null set (isolated endpoint zeros such as y^2 at 0 are fine).
  constexpr std::size_t kProbe = 1024;
  std::size_t zeros = 0;
  int sign = 0;
  for (std::size_t i = 0; i <= kProbe; ++i) {
    const double y = lo + (hi - lo) * static_cast<double>(i) / kProbe;
    const double d = f.derivative(y);
    if (!std::isfinite(d)) throw DomainError("map is undefined at y = " + std::to_string(y));
    if (d == 0.0) {
      ++zeros;
      continue;
    }
    const int s = d > 0.0 ? 1 : -1;
    if (sign != 0 && s != sign) throw PreconditionError("map is not monotone on the support");
    sign = s;
  }
  if (sign == 0 || zeros > 1) throw SingularMapError("map derivative vanishes on the support");

  const double u0 = f.forward(lo);
  const double u1 = f.forward(hi);
  if (!std::isfinite(u0) || !std::isfinite(u1)) throw DomainError("map is undefined on the support");
  const double ulo = std::min(u0, u1);
  const double uhi = std::max(u0, u1);
  if (!(uhi > ulo)) throw SingularMapError("map collapses the support to a point");

  const auto cdf = [&](double u) {
    if (u <= ulo) return 0.0;
    if (u >= uhi) return 1.0;
    const double y = std::clamp(f.inverse(u), lo, hi);
    return sign > 0 ? py.cdf(y) : 1.0 - py.cdf(y);
  };
  return Density1D::from_cdf(ulo, uhi, cells, cdf);
}

Density1D convolve(const Density1D& pu, const NoiseSpec& noise) {
  noise.validate();
  const double h = pu.dx();
  const std::size_t m = pu.cells();
  std::vector<double> avg;
  double lo = 0.0;

  if (noise.kind == NoiseKind::uniform_eps) {
    // p(x) = (F(x + e/2) - F(x - e/2)) / e, averaged exactly over each cell.
    const double e = noise.eps;
    const double span = pu.hi() - pu.lo() + e;
    const double cells_f = std::ceil(span / h - 1e-9);
    if (cells_f > static_cast<double>(kMaxCells)) throw ResolutionError("noise too wide for the grid");
    const auto cells = static_cast<std::size_t>(cells_f);
    lo = pu.lo() - 0.5 * e;
    avg.resize(cells);
    const auto g = [&](double x) { return pu.cdf_integral(x); };
    for (std::size_t i = 0; i < cells; ++i) {
      const double a = lo + static_cast<double>(i) * h;
      const double b = a + h;
      const double v = (g(b + 0.5 * e) - g(b - 0.5 * e)) - (g(a + 0.5 * e) - g(a - 0.5 * e));
      avg[i] = std::max(0.0, v / (e * h));
    }
  } else {
    // Grids aligned, so the cell-to-cell weight depends on the offset only.
    const double sigma = noise.eps;
    const double pad_f = std::ceil(8.0 * sigma / h);
    if (static_cast<double>(m) + 2.0 * pad_f > static_cast<double>(kMaxCells)) {
      throw ResolutionError("noise too wide for the grid");
    }
    const auto pad = static_cast<std::size_t>(pad_f);
    const std::size_t cells = m + 2 * pad;
    lo = pu.lo() - static_cast<double>(pad) * h;
    const std::size_t reach = pad + 1;
    std::vector<double> w(2 * reach + 1);
    const double r = h / sigma;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double s = static_cast<double>(k) - static_cast<double>(reach);
      w[k] = sigma * (normal_cdf_integral((s + 1.0) * r) - 2.0 * normal_cdf_integral(s * r) +
                      normal_cdf_integral((s - 1.0) * r));
    }
    avg.assign(cells, 0.0);
    const auto& p = pu.values();
    for (std::size_t j = 0; j < m; ++j) {
      if (p[j] == 0.0) continue;
      const std::size_t centre = j + pad;
      const std::size_t first = centre >= reach ? centre - reach : 0;
      const std::size_t last = std::min(cells - 1, centre + reach);
      for (std::size_t i = first; i <= last; ++i) {
        avg[i] += p[j] * w[i + reach - centre];
      }
    }
    for (double& v : avg) v = std::max(0.0, v / h);
  }

  double mass = 0.0;
  for (double v : avg) mass += v;
  mass *= h;
  if (std::abs(mass - 1.0) > 1e-6) {
    throw ResolutionError("convolution mass drifted to " + std::to_string(mass));
  }
  std::vector<double> masses(avg.size());
  for (std::size_t i = 0; i < avg.size(); ++i) masses[i] = avg[i] * h;
  return Density1D::from_masses(lo, lo + static_cast<double>(avg.size()) * h, std::move(masses));
}

double AdditiveMap::operator()(double x, double y) const {
  return a * apply_selector(g, x) + b * apply_selector(m, y) + c;
}

namespace {

double h_cond_at(const AdditiveMap& f, const Density1D& px, const Density1D& py,
                 const std::optional<NoiseSpec>& noise, std::size_t cells, std::size_t nodes) {
  // Step 1 does not depend on x: the y-part of the map is shared.
  const Density1D pu = pushforward_density_1d(py, MonotoneMap::scaled(f.m, f.b), cells);

  std::vector<double> weight(nodes);
  std::vector<double> q(nodes);
  const double hx = (px.hi() - px.lo()) / static_cast<double>(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double a = px.lo() + static_cast<double>(i) * hx;
    weight[i] = px.cdf(a + hx) - px.cdf(a);
  }
  parallel_chunks(nodes, thread_count(), [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (weight[i] == 0.0) continue;
      const double x = px.lo() + (static_cast<double>(i) + 0.5) * hx;
      const double shift = f.a * apply_selector(f.g, x) + f.c;
      // Steps 2-3: conditional density of x' given x and its entropy.
      const Density1D cond = (noise ? convolve(pu, *noise) : pu).shifted(shift);
      q[i] = cond.entropy();
    }
  });
  double h = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    if (weight[i] == 0.0) continue;
    h += weight[i] * q[i];
    total += weight[i];
  }
  return h / total;
}

}  // namespace

SemianalyticResult h_cond_semianalytic(const AdditiveMap& f, const Density1D& px,
                                       const Density1D& py, const std::optional<NoiseSpec>& noise,
                                       const SemianalyticOptions& options) {
  if (options.cells < 16 || options.cells % 2 != 0) {
    throw ArgumentError("quadrature resolution must be even and at least 16");
  }
  if (options.outer_nodes == 0) throw ArgumentError("outer_nodes must be positive");
  if (f.g == Selector::log && !(px.lo() > 0.0)) {
    throw DomainError("log selector needs a strictly positive x support");
  }
  if (noise) noise->validate();
  SemianalyticResult r;
  r.value = h_cond_at(f, px, py, noise, options.cells, options.outer_nodes);
  r.value_half = h_cond_at(f, px, py, noise, options.cells / 2, options.outer_nodes);
  r.error_estimate = std::abs(r.value - r.value_half) / 3.0;
  return r;
}

double h_cond_full(const std::optional<NoiseSpec>& noise) {
  return noise ? noise_entropy(*noise) : -kDivergent;
}

double te_noisy_linear(double b, double eps) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (b < 0.0) throw DomainError("coupling b must be nonnegative");
  if (b == 0.0) return 0.0;
  return std::log(b / eps) + eps / (2.0 * b);
}

double te_upper_bound(const std::function<double(double, double)>& f, const Rect& domain,
                      double eps) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (!(domain.x_hi > domain.x_lo) || !(domain.y_hi > domain.y_lo)) {
    throw ArgumentError("domain must have positive extent");
  }
  constexpr std::size_t kGrid = 33;
  std::vector<double> v(kGrid * kGrid);
  for (std::size_t i = 0; i < kGrid; ++i) {
    const double x = domain.x_lo + (domain.x_hi - domain.x_lo) * static_cast<double>(i) / (kGrid - 1);
    for (std::size_t j = 0; j < kGrid; ++j) {
      const double y = domain.y_lo + (domain.y_hi - domain.y_lo) * static_cast<double>(j) / (kGrid - 1);
      v[i * kGrid + j] = f(x, y);
    }
  }
  for (std::size_t i = 0; i < kGrid; ++i) {
    for (std::size_t j = 0; j < kGrid; ++j) {
      const double here = v[i * kGrid + j];
      const double tol = 1e-12 * (1.0 + std::abs(here));
      if ((i + 1 < kGrid && v[(i + 1) * kGrid + j] < here - tol) ||
          (j + 1 < kGrid && v[i * kGrid + j + 1] < here - tol)) {
        throw PreconditionError("map is not monotonically increasing in each argument");
      }
    }
  }
  const double spread = f(domain.x_hi, domain.y_hi) - f(domain.x_hi, domain.y_lo);
  return std::log(std::abs(spread / eps + 1.0));
}

}  // namespace geoc
