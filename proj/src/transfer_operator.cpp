#include "geoc/transfer_operator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "geoc/error.hpp"
#include "geoc/parallel.hpp"

namespace geoc {

namespace {

constexpr double kLevelTolerance = 1e-8;
constexpr double kRankTolerance = 1e-10;

double selector_derivative(Selector s, double v) {
  switch (s) {
    case Selector::identity: return 1.0;
    case Selector::square: return 2.0 * v;
    case Selector::exp: return std::exp(v);
    case Selector::log: return 1.0 / v;
  }
  return 0.0;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// Node values of f on the (nx + 1) x (ny + 1) lattice and edge-crossing search.
class Lattice {
 public:
  Lattice(const Map2D& map, const Rect& domain, std::size_t nx, std::size_t ny)
      : map_(map), d_(domain), nx_(nx), ny_(ny), v_((nx + 1) * (ny + 1)) {
    if (nx == 0 || ny == 0) throw ArgumentError("lattice needs at least one cell per axis");
    for (std::size_t j = 0; j <= ny; ++j) {
      for (std::size_t i = 0; i <= nx; ++i) v_[j * (nx + 1) + i] = map.f(x(i), y(j));
    }
  }

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  double x(std::size_t i) const {
    return i == nx_ ? d_.x_hi : d_.x_lo + (d_.x_hi - d_.x_lo) * static_cast<double>(i) / static_cast<double>(nx_);
  }
  double y(std::size_t j) const {
    return j == ny_ ? d_.y_hi : d_.y_lo + (d_.y_hi - d_.y_lo) * static_cast<double>(j) / static_cast<double>(ny_);
  }
  double node(std::size_t i, std::size_t j) const { return v_[j * (nx_ + 1) + i]; }

  // Crossing of `level` between two nodes whose inside-flags (f >= level) differ.
  Point2 crossing(Point2 p, double fp, Point2 q, double fq, double level) const {
    if (std::abs(fp - level) <= kLevelTolerance && fp >= level) return p;
    if (std::abs(fq - level) <= kLevelTolerance && fq >= level) return q;
    // Keep p on the outside (f < level).
    if (fp >= level) {
      std::swap(p, q);
      std::swap(fp, fq);
    }
    Point2 m = p;
    for (int it = 0; it < 200; ++it) {
      m = {0.5 * (p.x + q.x), 0.5 * (p.y + q.y)};
      if ((m.x == p.x && m.y == p.y) || (m.x == q.x && m.y == q.y)) break;
      const double fm = map_.f(m.x, m.y);
      if (std::abs(fm - level) <= kLevelTolerance) break;
      if (fm < level) p = m;
      else q = m;
    }
    return m;
  }

  // Segments of the level set inside cell (i, j). Edges are numbered
  // 0 bottom, 1 right, 2 top, 3 left; emit(edge_a, a, edge_b, b).
  template <class Emit>
  void cell_segments(std::size_t i, std::size_t j, double level, Emit&& emit) const {
    const Point2 c[4] = {{x(i), y(j)}, {x(i + 1), y(j)}, {x(i + 1), y(j + 1)}, {x(i), y(j + 1)}};
    const double v[4] = {node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)};
    bool in[4];
    int count = 0;
    for (int k = 0; k < 4; ++k) {
      in[k] = v[k] >= level;
      count += in[k];
    }
    if (count == 0 || count == 4) return;

    Point2 pt[4];
    bool cut[4];
    for (int e = 0; e < 4; ++e) {
      const int a = e;
      const int b = (e + 1) % 4;
      cut[e] = in[a] != in[b];
      if (cut[e]) pt[e] = crossing(c[a], v[a], c[b], v[b], level);
    }
    int edges[4];
    int n = 0;
    for (int e = 0; e < 4; ++e) {
      if (cut[e]) edges[n++] = e;
    }
    if (n == 2) {
      emit(edges[0], pt[edges[0]], edges[1], pt[edges[1]]);
      return;
    }
    // Saddle: resolve with the value at the cell centre.
    const double centre = map_.f(0.5 * (c[0].x + c[2].x), 0.5 * (c[0].y + c[2].y));
    if ((centre >= level) == in[0]) {
      emit(0, pt[0], 1, pt[1]);
      emit(2, pt[2], 3, pt[3]);
    } else {
      emit(3, pt[3], 0, pt[0]);
      emit(1, pt[1], 2, pt[2]);
    }
  }

  std::pair<double, double> cell_range(std::size_t i, std::size_t j) const {
    const double a = node(i, j), b = node(i + 1, j), c = node(i + 1, j + 1), d = node(i, j + 1);
    return {std::min({a, b, c, d}), std::max({a, b, c, d})};
  }

 private:
  const Map2D& map_;
  Rect d_;
  std::size_t nx_;
  std::size_t ny_;
  std::vector<double> v_;
};

void check_rank(const Map2D& map, Point2 p) {
  if (std::abs(map.fx(p.x, p.y)) < kRankTolerance && std::abs(map.fy(p.x, p.y)) < kRankTolerance) {
    throw RankDeficiencyError("both partial derivatives vanish at (" + fmt(p.x) + ", " + fmt(p.y) + ")",
                              p.x, p.y);
  }
}

double kernel_value(const Map2D& map, LineKernel kernel, double x, double y) {
  const double fx = std::abs(map.fx(x, y));
  const double fy = std::abs(map.fy(x, y));
  return kernel == LineKernel::paper ? 1.0 / (fx + fy) : 1.0 / std::hypot(fx, fy);
}

}  // namespace

DensityGrid::DensityGrid(Rect domain, std::size_t nx, std::size_t ny, std::vector<double> values)
    : domain_(domain), nx_(nx), ny_(ny), v_(std::move(values)) {
  if (!(domain.x_hi > domain.x_lo) || !(domain.y_hi > domain.y_lo)) {
    throw ArgumentError("density grid domain must have positive extent");
  }
  if (nx == 0 || ny == 0 || v_.size() != nx * ny) {
    throw ArgumentError("density grid needs nx * ny cell values");
  }
  double s = 0.0;
  for (double v : v_) {
    if (!std::isfinite(v) || v < 0.0) throw ArgumentError("density grid values must be finite and >= 0");
    s += v;
  }
  const double mass = s * dx() * dy();
  if (std::abs(mass - 1.0) > 1e-8) throw ArgumentError("density grid integrates to " + fmt(mass));
}

DensityGrid DensityGrid::uniform(Rect domain, std::size_t nx, std::size_t ny) {
  return DensityGrid(domain, nx, ny, std::vector<double>(nx * ny, 1.0 / domain.area()));
}

DensityGrid DensityGrid::from_pdf(Rect domain, std::size_t nx, std::size_t ny,
                                  const std::function<double(double, double)>& pdf) {
  if (nx == 0 || ny == 0) throw ArgumentError("density grid needs at least one cell per axis");
  std::vector<double> v(nx * ny);
  const double hx = (domain.x_hi - domain.x_lo) / static_cast<double>(nx);
  const double hy = (domain.y_hi - domain.y_lo) / static_cast<double>(ny);
  double s = 0.0;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double p = std::max(0.0, pdf(domain.x_lo + (static_cast<double>(i) + 0.5) * hx,
                                         domain.y_lo + (static_cast<double>(j) + 0.5) * hy));
      v[j * nx + i] = p;
      s += p;
    }
  }
  if (!(s > 0.0)) throw ArgumentError("density has no mass");
  for (double& p : v) p /= s * hx * hy;
  return DensityGrid(domain, nx, ny, std::move(v));
}

double DensityGrid::at(double x, double y) const noexcept {
  if (x < domain_.x_lo || x > domain_.x_hi || y < domain_.y_lo || y > domain_.y_hi) return 0.0;
  const auto i = std::min(nx_ - 1, static_cast<std::size_t>((x - domain_.x_lo) / dx()));
  const auto j = std::min(ny_ - 1, static_cast<std::size_t>((y - domain_.y_lo) / dy()));
  return v_[j * nx_ + i];
}

Density1D DensityGrid::x_marginal() const {
  std::vector<double> m(nx_, 0.0);
  for (std::size_t j = 0; j < ny_; ++j) {
    for (std::size_t i = 0; i < nx_; ++i) m[i] += v_[j * nx_ + i];
  }
  return Density1D::from_masses(domain_.x_lo, domain_.x_hi, std::move(m));
}

Map2D Map2D::linear(double a, double b, double c) {
  return {[a, b, c](double x, double y) { return a * x + b * y + c; },
          [a](double, double) { return a; }, [b](double, double) { return b; }};
}

Map2D Map2D::from_additive(const AdditiveMap& m) {
  return {[m](double x, double y) { return m(x, y); },
          [m](double x, double) { return m.a * selector_derivative(m.g, x); },
          [m](double, double y) { return m.b * selector_derivative(m.m, y); }};
}

LevelSet extract_level_set(const Map2D& map, const Rect& domain, std::size_t nx, std::size_t ny,
                           double value) {
  const Lattice lat(map, domain, nx, ny);
  // Global edge ids: horizontal edges first, then vertical ones.
  const std::size_t n_horizontal = nx * (ny + 1);
  auto edge_id = [&](std::size_t i, std::size_t j, int e) -> std::size_t {
    switch (e) {
      case 0: return j * nx + i;
      case 2: return (j + 1) * nx + i;
      case 3: return n_horizontal + j * (nx + 1) + i;
      default: return n_horizontal + j * (nx + 1) + i + 1;
    }
  };

  struct Segment {
    std::size_t a, b;
  };
  std::vector<Segment> segs;
  std::map<std::size_t, Point2> points;
  std::map<std::size_t, std::vector<std::size_t>> incident;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const auto [lo, hi] = lat.cell_range(i, j);
      if (value < lo || value > hi) continue;
      lat.cell_segments(i, j, value, [&](int ea, Point2 pa, int eb, Point2 pb) {
        const std::size_t a = edge_id(i, j, ea);
        const std::size_t b = edge_id(i, j, eb);
        points.emplace(a, pa);
        points.emplace(b, pb);
        incident[a].push_back(segs.size());
        incident[b].push_back(segs.size());
        segs.push_back({a, b});
      });
    }
  }

  LevelSet out;
  out.value = value;
  std::vector<bool> used(segs.size(), false);
  auto walk = [&](std::size_t start_edge) {
    std::vector<Point2> chain{points.at(start_edge)};
    std::size_t at = start_edge;
    for (;;) {
      std::size_t next_seg = segs.size();
      for (std::size_t s : incident[at]) {
        if (!used[s]) {
          next_seg = s;
          break;
        }
      }
      if (next_seg == segs.size()) break;
      used[next_seg] = true;
      at = segs[next_seg].a == at ? segs[next_seg].b : segs[next_seg].a;
      chain.push_back(points.at(at));
    }
    out.chains.push_back(std::move(chain));
  };
  // Open chains start at edges with a single incident segment.
  for (const auto& [edge, list] : incident) {
    if (list.size() == 1 && !used[list[0]]) walk(edge);
  }
  for (std::size_t s = 0; s < segs.size(); ++s) {
    if (!used[s]) walk(segs[s].a);
  }
  return out;
}

PushforwardResult fp_pushforward_1d(const Density1D& rho, const Map1D& map, std::size_t cells) {
  if (cells == 0) cells = rho.cells();
  const double lo = rho.lo();
  const double hi = rho.hi();

  // Branch points: sign changes of f' on a fine sample, refined by bisection.
  const std::size_t samples = std::max<std::size_t>(4096, 4 * cells);
  auto sample_x = [&](std::size_t k) {
    return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples);
  };
  std::vector<double> cuts{lo};
  std::vector<std::string> warnings;
  double prev = map.df(lo);
  double prev_x = lo;
  for (std::size_t k = 1; k <= samples; ++k) {
    const double xk = sample_x(k);
    const double d = map.df(xk);
    if (!std::isfinite(d)) throw DomainError("map derivative is not finite at x = " + fmt(xk));
    if (d == 0.0) continue;
    if (prev != 0.0 && (prev > 0.0) != (d > 0.0)) {
      double a = prev_x;
      double b = xk;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b) break;
        const double dm = map.df(m);
        if (dm != 0.0 && (dm > 0.0) == (prev > 0.0)) a = m;
        else b = m;
      }
      const double c = 0.5 * (a + b);
      if (c > lo && c < hi) {
        cuts.push_back(c);
        warnings.push_back("critical point at x = " + fmt(c) + "; density is singular near x' = " +
                           fmt(map.f(c)));
      }
    }
    prev = d;
    prev_x = xk;
  }
  cuts.push_back(hi);
  if (prev == 0.0) throw SingularMapError("map derivative vanishes on the whole support");

  double ulo = std::numeric_limits<double>::infinity();
  double uhi = -ulo;
  for (double c : cuts) {
    ulo = std::min(ulo, map.f(c));
    uhi = std::max(uhi, map.f(c));
  }
  if (!(uhi > ulo)) throw SingularMapError("map collapses the support to a point");

  // Mass of {x in branch : f(x) < u}, by bisection on the monotone branch.
  auto below = [&](double a, double b, double u) {
    const double fa = map.f(a);
    const double fb = map.f(b);
    const bool increasing = fb >= fa;
    if (u <= std::min(fa, fb)) return 0.0;
    if (u >= std::max(fa, fb)) return rho.cdf(b) - rho.cdf(a);
    double l = a;
    double r = b;
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (l + r);
      if (m == l || m == r) break;
      const bool left_of = increasing ? map.f(m) < u : map.f(m) >= u;
      if (left_of) l = m;
      else r = m;
    }
    const double x = 0.5 * (l + r);
    return increasing ? rho.cdf(x) - rho.cdf(a) : rho.cdf(b) - rho.cdf(x);
  };

  const double h = (uhi - ulo) / static_cast<double>(cells);
  std::vector<double> edge_mass(cells + 1, 0.0);
  for (std::size_t k = 0; k <= cells; ++k) {
    const double u = k == cells ? uhi : ulo + static_cast<double>(k) * h;
    double s = 0.0;
    for (std::size_t b = 0; b + 1 < cuts.size(); ++b) s += below(cuts[b], cuts[b + 1], u);
    edge_mass[k] = k == cells ? 1.0 : s;
  }
  std::vector<double> masses(cells);
  for (std::size_t k = 0; k < cells; ++k) masses[k] = std::max(0.0, edge_mass[k + 1] - edge_mass[k]);
  double total = std::accumulate(masses.begin(), masses.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-6) throw ResolutionError("pushforward lost mass: " + fmt(total));
  return {Density1D::from_masses(ulo, uhi, std::move(masses)), total, std::move(warnings)};
}

std::string to_string(LineKernel k) { return k == LineKernel::paper ? "paper" : "coarea"; }

LineKernel line_kernel_from_string(const std::string& name) {
  if (name == "paper") return LineKernel::paper;
  if (name == "coarea") return LineKernel::coarea;
  throw ArgumentError("unknown kernel '" + name + "' (expected paper or coarea)");
}

std::vector<double> level_integrals(const DensityGrid& rho, const Map2D& map,
                                    const std::vector<double>& levels, LineKernel kernel) {
  const Lattice lat(map, rho.domain(), rho.nx(), rho.ny());
  const std::size_t nx = rho.nx();
  const std::size_t ny = rho.ny();
  std::vector<std::pair<double, double>> range(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) range[j * nx + i] = lat.cell_range(i, j);
  }
  std::vector<std::size_t> order(levels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return levels[a] < levels[b]; });
  std::vector<double> sorted(levels.size());
  for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = levels[order[k]];

  // Workers own disjoint level ranges; each level sums its cells in the same
  // order whatever the worker count.
  std::vector<double> acc(levels.size(), 0.0);
  parallel_chunks(sorted.size(), thread_count(), [&](std::size_t, std::size_t begin, std::size_t end) {
    const double lmin = sorted[begin];
    const double lmax = sorted[end - 1];
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < nx; ++i) {
        const auto [lo, hi] = range[j * nx + i];
        if (hi < lmin || lo > lmax) continue;
        auto first = std::lower_bound(sorted.begin() + static_cast<std::ptrdiff_t>(begin),
                                      sorted.begin() + static_cast<std::ptrdiff_t>(end), lo);
        for (auto it = first; it != sorted.begin() + static_cast<std::ptrdiff_t>(end) && *it <= hi; ++it) {
          const std::size_t k = static_cast<std::size_t>(it - sorted.begin());
          lat.cell_segments(i, j, *it, [&](int, Point2 a, int, Point2 b) {
            check_rank(map, a);
            check_rank(map, b);
            const double mx = 0.5 * (a.x + b.x);
            const double my = 0.5 * (a.y + b.y);
            const double len = std::hypot(b.x - a.x, b.y - a.y);
            acc[k] += len * rho.at(mx, my) * kernel_value(map, kernel, mx, my);
          });
        }
      }
    }
  });
  std::vector<double> out(levels.size());
  for (std::size_t k = 0; k < order.size(); ++k) out[order[k]] = acc[k];
  return out;
}

PushforwardResult asymmetric_pushforward(const DensityGrid& rho, const Map2D& map, double lo,
                                         double hi, std::size_t cells, LineKernel kernel) {
  if (!(hi > lo) || cells == 0) throw ArgumentError("output grid must have hi > lo and cells > 0");
  const double h = (hi - lo) / static_cast<double>(cells);
  const Lattice lat(map, rho.domain(), rho.nx(), rho.ny());
  const std::size_t nx = rho.nx();
  const std::size_t ny = rho.ny();
  const double g = 0.5 / std::sqrt(3.0);

  // Output cell k receives rho_ij times the integral over z in the cell of the
  // kernel-weighted length of {f = z} inside lattice cell (i, j). The length
  // is smooth between corner values, so each piece gets two-point Gauss.
  std::vector<std::vector<double>> rows(ny, std::vector<double>(cells, 0.0));
  parallel_chunks(ny, thread_count(), [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      std::vector<double>& row = rows[j];
      for (std::size_t i = 0; i < nx; ++i) {
        const double r = rho.values()[j * nx + i];
        if (r == 0.0) continue;
        double c[4] = {lat.node(i, j), lat.node(i + 1, j), lat.node(i + 1, j + 1), lat.node(i, j + 1)};
        std::sort(c, c + 4);
        const double zlo = std::max(c[0], lo);
        const double zhi = std::min(c[3], hi);
        if (!(zhi > zlo)) continue;
        auto length = [&](double z) {
          double sum = 0.0;
          lat.cell_segments(i, j, z, [&](int, Point2 a, int, Point2 b) {
            check_rank(map, a);
            check_rank(map, b);
            const double mx = 0.5 * (a.x + b.x);
            const double my = 0.5 * (a.y + b.y);
            sum += std::hypot(b.x - a.x, b.y - a.y) * kernel_value(map, kernel, mx, my);
          });
          return sum;
        };
        const std::size_t k0 = std::min(cells - 1, static_cast<std::size_t>((zlo - lo) / h));
        const std::size_t k1 = std::min(cells - 1, static_cast<std::size_t>((zhi - lo) / h));
        for (std::size_t k = k0; k <= k1; ++k) {
          const double a = std::max(zlo, lo + static_cast<double>(k) * h);
          const double b = std::min(zhi, lo + static_cast<double>(k + 1) * h);
          double cut[6] = {a, 0, 0, b, 0, 0};
          std::size_t n = 1;
          for (int q = 1; q <= 2; ++q) {
            if (c[q] > a && c[q] < b) cut[n++] = c[q];
          }
          cut[n++] = b;
          double m = 0.0;
          for (std::size_t p = 0; p + 1 < n; ++p) {
            const double w = cut[p + 1] - cut[p];
            if (!(w > 0.0)) continue;
            const double mid = 0.5 * (cut[p] + cut[p + 1]);
            m += 0.5 * w * (length(mid - g * w) + length(mid + g * w));
          }
          row[k] += r * m;
        }
      }
    }
  });
  std::vector<double> masses(cells, 0.0);
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < cells; ++k) masses[k] += row[k];
  }
  double raw = 0.0;
  for (double m : masses) raw += m;
  if (!(raw > 0.0)) throw ResolutionError("no level set in [" + fmt(lo) + ", " + fmt(hi) + "] meets the domain");
  PushforwardResult r{Density1D::from_masses(lo, hi, std::move(masses)), raw, {}};
  if (std::abs(raw - 1.0) > 1e-3) {
    r.warnings.push_back("raw level-set mass " + fmt(raw) + " renormalized to 1 (" + to_string(kernel) +
                         " kernel)");
  }
  return r;
}

Density1D conditional_density_box(const Map1D& map, double x0, double eps) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  const double d = std::abs(map.df(x0));
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw DegeneratePointError("f'(x0) vanishes at x0 = " + fmt(x0));
  }
  const double c = map.f(x0);
  return Density1D::uniform(c - eps * d, c + eps * d);
}

Density1D conditional_density_box(const Map2D& map, double x0, double y0, double eps) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  const double s = std::abs(map.fx(x0, y0)) + std::abs(map.fy(x0, y0));
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DegeneratePointError("both partial derivatives vanish at (" + fmt(x0) + ", " + fmt(y0) + ")");
  }
  const double c = map.f(x0, y0);
  return Density1D::uniform(c - eps * s, c + eps * s);
}

namespace {

template <class Body>
void midpoint_cells(const Rect& domain, const QuadratureOptions& quad, Body&& body) {
  if (quad.nx == 0 || quad.ny == 0) throw ArgumentError("quadrature needs at least one cell per axis");
  if (!(domain.x_hi > domain.x_lo) || !(domain.y_hi > domain.y_lo)) {
    throw ArgumentError("domain must have positive extent");
  }
  const double hx = (domain.x_hi - domain.x_lo) / static_cast<double>(quad.nx);
  const double hy = (domain.y_hi - domain.y_lo) / static_cast<double>(quad.ny);
  for (std::size_t j = 0; j < quad.ny; ++j) {
    const double y = domain.y_lo + (static_cast<double>(j) + 0.5) * hy;
    for (std::size_t i = 0; i < quad.nx; ++i) body(domain.x_lo + (static_cast<double>(i) + 0.5) * hx, y);
  }
}

}  // namespace

double pinsker_lower_bound(const Map2D& map, const Rect& domain, const QuadratureOptions& quad) {
  double sum = 0.0;
  std::size_t singular = 0;
  midpoint_cells(domain, quad, [&](double x, double y) {
    const double fx = std::abs(map.fx(x, y));
    const double fy = std::abs(map.fy(x, y));
    if (fx < kRankTolerance) {
      ++singular;
      return;
    }
    sum += std::abs(1.0 / (fx + fy) - 1.0 / fx);
  });
  const double cells = static_cast<double>(quad.nx * quad.ny);
  if (static_cast<double>(singular) > 0.01 * cells) {
    throw NearSingularError("|f_x| < 1e-10 on " + std::to_string(singular) + " of " +
                            std::to_string(quad.nx * quad.ny) + " cells");
  }
  const double l1 = sum / cells;
  return 0.5 * l1 * l1;
}

SmallBApprox small_b_approx(const Map2D& map, const Rect& domain, const QuadratureOptions& quad) {
  double sx = 0.0;
  double sy = 0.0;
  midpoint_cells(domain, quad, [&](double x, double y) {
    sx += std::abs(map.fx(x, y));
    sy += std::abs(map.fy(x, y));
  });
  const double cells = static_cast<double>(quad.nx * quad.ny);
  const double mx = sx / cells;
  const double my = sy / cells;
  if (!(mx > 0.0)) throw NearSingularError("<|f_x|> vanishes on the domain");
  SmallBApprox r;
  r.value = 0.5 * domain.area() * my * my / (mx * mx * mx * mx);
  if (my >= 0.1 * mx) {
    r.warnings.push_back("<|f_y|> = " + fmt(my) + " is not small against <|f_x|> = " + fmt(mx) +
                         "; the expansion may be inaccurate");
  }
  return r;
}

namespace {

constexpr std::size_t kWindowSamples = 4000;
constexpr std::size_t kWindowSamples2D = 400;
constexpr std::size_t kNoiseSamples = 16;

double box_l1(const Density1D& box, const std::vector<std::pair<double, double>>& samples,
              std::size_t bins) {
  if (bins == 0) throw ArgumentError("bins must be positive");
  std::vector<double> hist(bins, 0.0);
  double total = 0.0;
  double outside = 0.0;
  const double lo = box.lo();
  const double width = box.hi() - box.lo();
  const double bw = width / static_cast<double>(bins);
  for (const auto& [v, w] : samples) {
    total += w;
    if (v < lo || v >= box.hi()) {
      outside += w;
      continue;
    }
    hist[std::min(bins - 1, static_cast<std::size_t>((v - lo) / bw))] += w;
  }
  if (!(total > 0.0)) throw ArgumentError("density vanishes on the conditioning window");
  const double height = 1.0 / width;
  double l1 = outside / total;
  for (double m : hist) l1 += std::abs(m / (total * bw) - height) * bw;
  return l1;
}

}  // namespace

double box_limit_error(const Map1D& map, const std::function<double(double)>& rho, double x0,
                       double eps, std::size_t bins) {
  const Density1D box = conditional_density_box(map, x0, eps);
  const double noise = eps * eps;
  std::vector<std::pair<double, double>> samples;
  samples.reserve(kWindowSamples * kNoiseSamples);
  for (std::size_t i = 0; i < kWindowSamples; ++i) {
    const double x = x0 - eps + 2.0 * eps * (static_cast<double>(i) + 0.5) / kWindowSamples;
    const double w = rho(x);
    const double fx = map.f(x);
    for (std::size_t k = 0; k < kNoiseSamples; ++k) {
      const double z = noise * ((static_cast<double>(k) + 0.5) / kNoiseSamples - 0.5);
      samples.emplace_back(fx + z, w);
    }
  }
  return box_l1(box, samples, bins);
}

double box_limit_error(const Map2D& map, const std::function<double(double, double)>& rho,
                       double x0, double y0, double eps, std::size_t bins) {
  const Density1D box = conditional_density_box(map, x0, y0, eps);
  const double noise = eps * eps;
  std::vector<std::pair<double, double>> samples;
  samples.reserve(kWindowSamples2D * kWindowSamples2D * kNoiseSamples);
  for (std::size_t i = 0; i < kWindowSamples2D; ++i) {
    const double x = x0 - eps + 2.0 * eps * (static_cast<double>(i) + 0.5) / kWindowSamples2D;
    for (std::size_t j = 0; j < kWindowSamples2D; ++j) {
      const double y = y0 - eps + 2.0 * eps * (static_cast<double>(j) + 0.5) / kWindowSamples2D;
      const double w = rho(x, y);
      const double f = map.f(x, y);
      for (std::size_t k = 0; k < kNoiseSamples; ++k) {
        const double z = noise * ((static_cast<double>(k) + 0.5) / kNoiseSamples - 0.5);
        samples.emplace_back(f + z, w);
      }
    }
  }
  return box_l1(box, samples, bins);
}

}  // namespace geoc
