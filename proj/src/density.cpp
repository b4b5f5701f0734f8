#include "geoc/density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geoc/error.hpp"

namespace geoc {

Density1D::Density1D(double lo, double hi, std::vector<double> cell_averages)
    : lo_(lo), hi_(hi), p_(std::move(cell_averages)) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ArgumentError("density support must be a finite interval with hi > lo");
  }
  if (p_.empty()) throw ArgumentError("density needs at least one cell");
  for (double v : p_) {
    if (!std::isfinite(v) || v < 0.0) throw ArgumentError("density values must be finite and >= 0");
  }
  const double m = mass();
  if (std::abs(m - 1.0) > 1e-8) {
    throw ArgumentError("density integrates to " + std::to_string(m) + ", not 1");
  }
  const double h = dx();
  cum_.assign(p_.size() + 1, 0.0);
  cumint_.assign(p_.size() + 1, 0.0);
  for (std::size_t j = 0; j < p_.size(); ++j) {
    cum_[j + 1] = cum_[j] + p_[j] * h;
    cumint_[j + 1] = cumint_[j] + cum_[j] * h + 0.5 * p_[j] * h * h;
  }
}

Density1D Density1D::from_masses(double lo, double hi, std::vector<double> masses) {
  double total = 0.0;
  for (double m : masses) total += m;
  if (!(total > 0.0)) throw ArgumentError("density has no mass");
  const double dx = (hi - lo) / static_cast<double>(masses.size());
  for (double& m : masses) m /= total * dx;
  return Density1D(lo, hi, std::move(masses));
}

Density1D Density1D::from_cdf(double lo, double hi, std::size_t cells,
                              const std::function<double(double)>& cdf) {
  if (cells == 0) throw ArgumentError("density needs at least one cell");
  std::vector<double> m(cells);
  const double dx = (hi - lo) / static_cast<double>(cells);
  double prev = cdf(lo);
  for (std::size_t i = 0; i < cells; ++i) {
    const double next = i + 1 == cells ? cdf(hi) : cdf(lo + static_cast<double>(i + 1) * dx);
    m[i] = std::max(0.0, next - prev);
    prev = next;
  }
  return from_masses(lo, hi, std::move(m));
}

Density1D Density1D::from_pdf(double lo, double hi, std::size_t cells,
                              const std::function<double(double)>& pdf) {
  if (cells == 0) throw ArgumentError("density needs at least one cell");
  std::vector<double> m(cells);
  const double dx = (hi - lo) / static_cast<double>(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    m[i] = std::max(0.0, pdf(lo + (static_cast<double>(i) + 0.5) * dx));
  }
  return from_masses(lo, hi, std::move(m));
}

Density1D Density1D::uniform(double lo, double hi, std::size_t cells) {
  return Density1D(lo, hi, std::vector<double>(cells, 1.0 / (hi - lo)));
}

double Density1D::pdf(double x) const noexcept {
  if (!(x >= lo_) || !(x < hi_)) return x == hi_ ? p_.back() : 0.0;
  const auto i = std::min(p_.size() - 1, static_cast<std::size_t>((x - lo_) / dx()));
  return p_[i];
}

double Density1D::cdf(double x) const noexcept {
  if (!(x > lo_)) return 0.0;
  if (!(x < hi_)) return 1.0;
  const double h = dx();
  const auto i = std::min(p_.size() - 1, static_cast<std::size_t>((x - lo_) / h));
  const double w = x - (lo_ + static_cast<double>(i) * h);
  return std::clamp(cum_[i] + p_[i] * w, 0.0, 1.0);
}

double Density1D::cdf_integral(double x) const noexcept {
  if (!(x > lo_)) return 0.0;
  if (!(x < hi_)) return cumint_.back() + (x - hi_) * cum_.back();
  const double h = dx();
  const auto i = std::min(p_.size() - 1, static_cast<std::size_t>((x - lo_) / h));
  const double w = x - (lo_ + static_cast<double>(i) * h);
  return cumint_[i] + cum_[i] * w + 0.5 * p_[i] * w * w;
}

double Density1D::mass() const noexcept {
  double s = 0.0;
  for (double v : p_) s += v;
  return s * dx();
}

double Density1D::entropy() const noexcept {
  double s = 0.0;
  for (double v : p_) {
    if (v > 0.0) s -= v * std::log(v);
  }
  return s * dx();
}

Density1D Density1D::shifted(double offset) const { return Density1D(lo_ + offset, hi_ + offset, p_); }

Density1D Density1D::coarsened(std::size_t factor) const {
  if (factor == 0 || p_.size() % factor != 0) {
    throw ArgumentError("coarsening factor must divide the cell count");
  }
  std::vector<double> m(p_.size() / factor, 0.0);
  for (std::size_t i = 0; i < p_.size(); ++i) m[i / factor] += p_[i];
  return from_masses(lo_, hi_, std::move(m));
}

double l1_distance(const Density1D& a, const Density1D& b) {
  std::vector<double> cuts;
  cuts.reserve(a.cells() + b.cells() + 2);
  for (std::size_t i = 0; i <= a.cells(); ++i) cuts.push_back(a.lo() + static_cast<double>(i) * a.dx());
  for (std::size_t i = 0; i <= b.cells(); ++i) cuts.push_back(b.lo() + static_cast<double>(i) * b.dx());
  std::sort(cuts.begin(), cuts.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double w = cuts[i + 1] - cuts[i];
    if (!(w > 0.0)) continue;
    const double m = 0.5 * (cuts[i] + cuts[i + 1]);
    s += std::abs(a.pdf(m) - b.pdf(m)) * w;
  }
  return s;
}

}  // namespace geoc
