// geoc: command-line front end for the geoflow library.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "geoc/bench.hpp"
#include "geoc/corr_dim.hpp"
#include "geoc/entropy.hpp"
#include "geoc/error.hpp"
#include "geoc/io.hpp"
#include "geoc/oracles.hpp"
#include "geoc/parallel.hpp"
#include "geoc/synth.hpp"
#include "geoc/transfer_operator.hpp"

namespace {

using namespace geoc;

enum Exit : int { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

struct Common {
  std::size_t threads = 0;
  std::string units = "nats";
  std::string out;
  bool quiet = false;
};

struct SystemArgs {
  std::string family = "linear_xy";
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  std::string g1 = "identity";
  std::string g2 = "identity";
  std::string noise = "uniform";
  double eps = 0.0;
  std::uint64_t seed = 1;
  std::size_t n = 1000;
  std::size_t burn_in = 1000;
  double y_gain = 0.0;  // 0 keeps the family default
  double lo = 1.0;
  double hi = 2.0;

  SystemSpec spec() const {
    SystemSpec s;
    const Family f = family_from_string(family);
    if (f == Family::henon_uniform) s = SystemSpec::henon_uniform(n, seed);
    else if (f == Family::henon_attractor) s = SystemSpec::henon_attractor(n, burn_in);
    else {
      s.family = f;
      s.a = a;
      s.b = b;
      s.c = c;
      s.domain = {lo, hi};
    }
    s.seed = seed;
    s.n = n;
    s.g1 = selector_from_string(g1);
    s.g2 = selector_from_string(g2);
    if (y_gain != 0.0) s.y_gain = y_gain;
    if (eps > 0.0) s.noise = NoiseSpec{noise_kind_from_string(noise), eps};
    return s;
  }

  void add(CLI::App* app, bool with_params) {
    app->add_option("--family", family, "linear_xy, g1_g2_additive, henon_uniform, henon_attractor")
        ->capture_default_str();
    app->add_option("--seed", seed, "generator seed")->capture_default_str();
    app->add_option("--n", n, "sample count")->capture_default_str();
    app->add_option("--burn-in", burn_in, "discarded attractor iterations")->capture_default_str();
    app->add_option("--noise", noise, "uniform or gaussian")->capture_default_str();
    app->add_option("--eps", eps, "noise width; 0 for none")->capture_default_str();
    if (!with_params) return;
    app->add_option("--a", a, "coefficient of g1(x)")->capture_default_str();
    app->add_option("--b", b, "coefficient of g2(y)")->capture_default_str();
    app->add_option("--c", c, "constant term")->capture_default_str();
    app->add_option("--g1", g1, "selector on x: identity, square, exp, log")->capture_default_str();
    app->add_option("--g2", g2, "selector on y: identity, square, exp, log")->capture_default_str();
    app->add_option("--y-gain", y_gain, "Henon y' = y_gain x; 0 keeps the default")->capture_default_str();
    app->add_option("--domain-lo", lo, "lower end of the input interval")->capture_default_str();
    app->add_option("--domain-hi", hi, "upper end of the input interval")->capture_default_str();
  }
};

struct DataArgs {
  std::string input;
  std::string x = "1";
  std::string y = "2";
  std::string x_next;
  bool header = false;
  std::size_t min_rows = 100;

  void add(CLI::App* app) {
    app->add_option("--input", input, "CSV file; without it a synthetic system is generated");
    app->add_option("--x", x, "x column (1-based index or header name)")->capture_default_str();
    app->add_option("--y", y, "y column")->capture_default_str();
    app->add_option("--x-next", x_next, "explicit x' column for i.i.d. triples");
    app->add_flag("--header", header, "first row holds column names");
    app->add_option("--min-rows", min_rows, "fewest usable rows accepted")->capture_default_str();
  }
};

struct Loaded {
  CouplingSample forward;                 // y -> x
  std::optional<CouplingSample> reverse;  // x -> y, only for ordinary series
};

Loaded load(const DataArgs& data, const SystemArgs& sys, AnalysisReport& report) {
  if (data.input.empty()) {
    const SystemSpec spec = sys.spec();
    report.input("system", to_string(spec.family));
    report.input("seed", std::to_string(spec.seed));
    if (spec.family == Family::henon_attractor) {
      // Orbit data: the reverse direction is an ordinary lag-1 series too.
      const auto [x, y] = henon_orbit(spec);
      return {CouplingSample::from_series(x, y), CouplingSample::from_series(y, x)};
    }
    const CouplingSample s = generate(spec);
    return {s, std::nullopt};
  }
  CsvOptions csv;
  csv.header = data.header;
  csv.min_rows = data.min_rows;
  report.input("file", data.input);
  report.input("x_column", data.x);
  report.input("y_column", data.y);
  auto [x, y] = ingest_csv(data.input, parse_column_selector(data.x), parse_column_selector(data.y), csv);
  if (!data.x_next.empty()) {
    report.input("x_next_column", data.x_next);
    auto [xx, xn] = ingest_csv(data.input, parse_column_selector(data.x), parse_column_selector(data.x_next), csv);
    return {CouplingSample::from_triples(x, y, xn), std::nullopt};
  }
  report.input("rows", std::to_string(x.size()));
  return {CouplingSample::from_series(x, y), CouplingSample::from_series(y, x)};
}

double in_units(double nats, const std::string& units) {
  return units == "bits" ? nats / std::numbers::ln2 : nats;
}

std::string quote(const std::string& s) {
  if (!s.empty() && s.find_first_of(" \t\"'\\$") == std::string::npos) return s;
  std::string q = "'";
  for (char ch : s) q += ch == '\'' ? std::string("'\\''") : std::string(1, ch);
  return q + "'";
}

// Every option of the subcommand with its effective value, so the echoed
// command reruns the analysis even if defaults change.
void echo(const CLI::App& root, const CLI::App& sub, AnalysisReport& report) {
  std::string cmd = root.get_name() + " " + sub.get_name();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help") continue;
    std::string value;
    if (opt->get_type_size_max() == 0 || opt->get_expected_max() == 0) {
      if (opt->count() == 0) continue;
      cmd += " --" + name;
      report.param(name, "true");
      continue;
    }
    if (opt->count() > 0) value = opt->as<std::string>();
    else value = opt->get_default_str();
    if (value.empty()) continue;
    cmd += " --" + name + " " + quote(value);
    report.param(name, value);
  }
  report.input("command", cmd);
}

void emit(const AnalysisReport& report, const Common& common, const std::string& fallback_stem) {
  if (!common.quiet) std::cout << report.text();
  const std::string stem = common.out.empty() ? fallback_stem : common.out;
  if (stem == "-") return;
  for (const auto& p : report.write(stem)) std::cerr << "wrote " << p.string() << '\n';
}

void add_d2_options(CLI::App* app, D2Params& d2) {
  app->add_option("--radii", d2.n_radii, "number of log-spaced radii")->capture_default_str();
  app->add_option("--fit-window", d2.fit_window, "radii per local slope")->capture_default_str();
  app->add_option("--theiler", d2.theiler, "temporal exclusion window")->capture_default_str();
  app->add_flag("--standardize", d2.standardize, "z-score each coordinate first");
}

void record_d2(AnalysisReport& r, const std::string& key, const D2Estimate& e) {
  r.result(key, e.value);
  r.diagnostic(key + ".fit_range", "[" + format_double(e.r_lo) + ", " + format_double(e.r_hi) + "]");
  r.diagnostic(key + ".stderr", format_double(e.slope_stderr));
}

void record_geoc(AnalysisReport& r, const std::string& p, const GeoCResult& g) {
  record_d2(r, p + "d2_x", g.d2_x);
  record_d2(r, p + "d2_xxp", g.d2_xxp);
  record_d2(r, p + "d2_xy", g.d2_xy);
  record_d2(r, p + "d2_xyxp", g.d2_xyxp);
  r.result(p + "geoc_cond_x", g.geoc_cond_x);
  r.result(p + "geoc_cond_xy", g.geoc_cond_xy);
  r.result(p + "geoc", g.geoc);
  for (const auto& w : g.warnings) r.warning(p + w);
}

void record_te(AnalysisReport& r, const std::string& p, const TEEstimate& t, const std::string& units) {
  r.result(p + "te", in_units(t.value, units));
  r.result(p + "h_cond_x", in_units(t.h_cond_x, units));
  r.result(p + "h_cond_xy", in_units(t.h_cond_xy, units));
  for (const auto& w : t.warnings) r.warning(p + w);
}

int run(int argc, char** argv) {
  CLI::App app{"Transfer entropy and geometric causation for scalar time series", "geoc"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threads", common.threads, "worker cap (default: GEOC_THREADS or all cores)");
    sub->add_option("--units", common.units, "nats or bits")
        ->check(CLI::IsMember({"nats", "bits"}))
        ->capture_default_str();
    sub->add_option("--out", common.out, "report stem; '-' writes nothing");
    sub->add_flag("--quiet", common.quiet, "do not print the report");
  };

  // gen
  SystemArgs gen_sys;
  std::string gen_csv = "gen.csv";
  CLI::App* gen = app.add_subcommand("gen", "write a synthetic system as CSV (x, y, x_next)");
  gen_sys.add(gen, true);
  gen->add_option("--csv", gen_csv, "output file")->capture_default_str();
  add_common(gen);

  // d2
  SystemArgs d2_sys;
  DataArgs d2_data;
  D2Params d2_params;
  std::string d2_cloud = "x_y_xnext";
  CLI::App* d2 = app.add_subcommand("d2", "correlation dimension of one cloud");
  d2_sys.add(d2, true);
  d2_data.add(d2);
  add_d2_options(d2, d2_params);
  d2->add_option("--cloud", d2_cloud, "x, x_xnext, x_y or x_y_xnext")
      ->check(CLI::IsMember({"x", "x_xnext", "x_y", "x_y_xnext"}))
      ->capture_default_str();
  add_common(d2);

  // te
  SystemArgs te_sys;
  DataArgs te_data;
  KnnParams te_knn;
  CLI::App* te = app.add_subcommand("te", "transfer entropy in both directions");
  te_sys.add(te, true);
  te_data.add(te);
  te->add_option("--k", te_knn.k, "neighbour order")->capture_default_str();
  te->add_option("--theiler", te_knn.theiler, "temporal exclusion window")->capture_default_str();
  add_common(te);

  // geoc
  SystemArgs geoc_sys;
  DataArgs geoc_data;
  GeoCParams geoc_params;
  KnnParams geoc_knn;
  CLI::App* gc = app.add_subcommand("geoc", "geometric causation in both directions, with TE");
  geoc_sys.add(gc, true);
  geoc_data.add(gc);
  add_d2_options(gc, geoc_params.d2);
  gc->add_option("--k", geoc_knn.k, "neighbour order for TE")->capture_default_str();
  add_common(gc);

  // bound
  double bound_a = 1.0;
  double bound_b = 1.0;
  std::string bound_g = "identity";
  std::string bound_m = "identity";
  std::string bound_noise = "uniform";
  double bound_eps = 0.01;
  double bound_lo = 1.0;
  double bound_hi = 2.0;
  std::string bound_kernel = "paper";
  std::size_t bound_grid = 512;
  CLI::App* bound = app.add_subcommand("bound", "analytic oracles and bounds for x' = a g(x) + b m(y)");
  bound->add_option("--a", bound_a, "coefficient of g(x)")->capture_default_str();
  bound->add_option("--b", bound_b, "coefficient of m(y)")->capture_default_str();
  bound->add_option("--g", bound_g, "identity, square, exp, log")->capture_default_str();
  bound->add_option("--m", bound_m, "identity, square, log")->capture_default_str();
  bound->add_option("--noise", bound_noise, "uniform or gaussian")->capture_default_str();
  bound->add_option("--eps", bound_eps, "noise width; 0 for the noiseless limit")->capture_default_str();
  bound->add_option("--domain-lo", bound_lo, "lower end of the input square")->capture_default_str();
  bound->add_option("--domain-hi", bound_hi, "upper end of the input square")->capture_default_str();
  bound->add_option("--kernel", bound_kernel, "level-set kernel: paper or coarea")
      ->check(CLI::IsMember({"paper", "coarea"}))
      ->capture_default_str();
  bound->add_option("--grid", bound_grid, "quadrature cells per axis")->capture_default_str();
  add_common(bound);

  // bench
  std::string bench_table = "henon";
  BenchOptions bench_opts;
  std::string bench_input;
  std::string bench_x = "1";
  std::string bench_y = "2";
  CLI::App* bench = app.add_subcommand("bench", "reproduce a reference table or sweep");
  bench->add_option("--table", bench_table, "hcond, henon, heart, bsweep or epssweep")
      ->check(CLI::IsMember(bench_tables()))
      ->capture_default_str();
  bench->add_option("--n", bench_opts.n, "sample count (0: table default)")->capture_default_str();
  bench->add_option("--seed", bench_opts.seed, "generator seed")->capture_default_str();
  bench->add_option("--k", bench_opts.k, "neighbour order (0: table default)")->capture_default_str();
  bench->add_option("--eps", bench_opts.eps, "noise width (0: table default)")->capture_default_str();
  bench->add_option("--input", bench_input, "heart/breathing CSV (heart table)");
  bench->add_option("--x", bench_x, "heart-rate column")->capture_default_str();
  bench->add_option("--y", bench_y, "breathing column")->capture_default_str();
  bench->add_flag("--header", bench_opts.header, "first row holds column names");
  add_common(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (common.threads) set_thread_count(common.threads);

  AnalysisReport report;
  if (gen->parsed()) {
    const SystemSpec spec = gen_sys.spec();
    const CouplingSample s = generate(spec);
    write_csv(gen_csv, {"x", "y", "x_next"}, {s.x.values(), s.y.values(), s.x_next.values()});
    echo(app, *gen, report);
    report.input("system", to_string(spec.family));
    report.result("rows", static_cast<double>(s.size()));
    report.diagnostic("csv", gen_csv);
    emit(report, common, "gen");
    return kOk;
  }
  if (d2->parsed()) {
    echo(app, *d2, report);
    const Loaded data = load(d2_data, d2_sys, report);
    const CouplingSample& s = data.forward;
    const PointCloud cloud = d2_cloud == "x" ? s.cloud_x()
                             : d2_cloud == "x_xnext" ? s.cloud_x_xnext()
                             : d2_cloud == "x_y" ? s.cloud_x_y()
                                                 : s.cloud_x_y_xnext();
    const D2Estimate e = estimate_d2(cloud, d2_params);
    record_d2(report, "d2", e);
    report.curve({"correlation_sum", {"r", "csum", "pairs"},
                  {e.curve.radii, e.curve.csum, std::vector<double>(e.curve.pair_counts.begin(), e.curve.pair_counts.end())}});
    std::vector<double> idx;
    for (std::size_t i = 0; i < e.local_slopes.size(); ++i) idx.push_back(static_cast<double>(i));
    report.curve({"local_slopes", {"index", "slope"}, {idx, e.local_slopes}});
    emit(report, common, "d2");
    return kOk;
  }
  if (te->parsed()) {
    echo(app, *te, report);
    const Loaded data = load(te_data, te_sys, report);
    record_te(report, "", transfer_entropy(data.forward, te_knn), common.units);
    if (data.reverse) {
      record_te(report, "x_to_y.", transfer_entropy(*data.reverse, te_knn), common.units);
    } else {
      report.diagnostic("x_to_y", "not available for i.i.d. triples");
    }
    emit(report, common, "te");
    return kOk;
  }
  if (gc->parsed()) {
    echo(app, *gc, report);
    const Loaded data = load(geoc_data, geoc_sys, report);
    record_geoc(report, "", geoc::geoc(data.forward, geoc_params));
    record_te(report, "", transfer_entropy(data.forward, geoc_knn), common.units);
    if (data.reverse) {
      record_geoc(report, "x_to_y.", geoc::geoc(*data.reverse, geoc_params));
      record_te(report, "x_to_y.", transfer_entropy(*data.reverse, geoc_knn), common.units);
    } else {
      report.diagnostic("x_to_y", "not available for i.i.d. triples");
    }
    emit(report, common, "geoc");
    return kOk;
  }
  if (bound->parsed()) {
    echo(app, *bound, report);
    AdditiveMap f;
    f.a = bound_a;
    f.b = bound_b;
    f.g = selector_from_string(bound_g);
    f.m = selector_from_string(bound_m);
    if (f.m == Selector::exp) throw ArgumentError("--m must be identity, square or log");
    const Rect domain{bound_lo, bound_hi, bound_lo, bound_hi};
    const Density1D unit = Density1D::uniform(bound_lo, bound_hi);
    std::optional<NoiseSpec> noise;
    if (bound_eps > 0.0) noise = NoiseSpec{noise_kind_from_string(bound_noise), bound_eps};
    report.input("map", "x' = a g(x) + b m(y) on [" + format_double(bound_lo) + ", " + format_double(bound_hi) + "]^2");

    const SemianalyticResult h = h_cond_semianalytic(f, unit, unit, noise);
    const double h_full = h_cond_full(noise);
    report.result("h_cond_x", in_units(h.value, common.units));
    report.diagnostic("h_cond_x.quadrature_error", format_double(in_units(h.error_estimate, common.units)));
    report.result("h_cond_xy", in_units(h_full, common.units));
    report.result("te", in_units(h.value - h_full, common.units));
    if (noise) {
      report.result("te_upper_bound", in_units(te_upper_bound(f, domain, noise->eps), common.units));
      if (f.g == Selector::identity && f.m == Selector::identity && f.a == 1.0 && f.b >= 0.0 &&
          noise->kind == NoiseKind::uniform_eps && bound_hi - bound_lo == 1.0) {
        report.result("te_closed_form", in_units(te_noisy_linear(f.b, noise->eps), common.units));
      }
    }
    const Map2D map = Map2D::from_additive(f);
    const QuadratureOptions quad{bound_grid, bound_grid};
    report.result("pinsker_lower_bound", in_units(pinsker_lower_bound(map, domain, quad), common.units));
    const SmallBApprox sb = small_b_approx(map, domain, quad);
    report.result("small_b_approx", in_units(sb.value, common.units));
    for (const auto& w : sb.warnings) report.warning(w);

    const LineKernel kernel = line_kernel_from_string(bound_kernel);
    const DensityGrid rho = DensityGrid::uniform(domain, bound_grid, bound_grid);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double x : {bound_lo, bound_hi}) {
      for (double y : {bound_lo, bound_hi}) {
        lo = std::min(lo, f(x, y));
        hi = std::max(hi, f(x, y));
      }
    }
    const PushforwardResult pf = asymmetric_pushforward(rho, map, lo, hi, bound_grid, kernel);
    report.result("pushforward_raw_mass", pf.raw_mass);
    for (const auto& w : pf.warnings) report.warning(w);
    std::vector<double> xs;
    for (std::size_t i = 0; i < pf.density.cells(); ++i) xs.push_back(pf.density.midpoint(i));
    report.curve({"pushforward", {"x_next", "density"}, {xs, pf.density.values()}});
    emit(report, common, "bound");
    return kOk;
  }
  if (bench->parsed()) {
    if (!bench_input.empty()) bench_opts.input = bench_input;
    else if (const char* env = std::getenv("GEOC_HEART_CSV"); env && *env && bench_table == "heart") {
      bench_opts.input = env;
    }
    bench_opts.x_column = parse_column_selector(bench_x);
    bench_opts.y_column = parse_column_selector(bench_y);
    report = run_bench(bench_table, bench_opts);
    echo(app, *bench, report);
    emit(report, common, "bench_" + bench_table);
    return kOk;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const geoc::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const geoc::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const geoc::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
