#include "idla/cli.hpp"

#include "idla/ensemble.hpp"
#include "idla/green.hpp"
#include "idla/idla.hpp"
#include "idla/io.hpp"
#include "idla/sandpile.hpp"
#include "idla/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

namespace idla::cli {

namespace {

class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

unsigned default_threads() {
  if (const char* env = std::getenv("IDLA_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::vector<double> parse_reals(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& tok : split(s, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("cannot parse " + what + " '" + s + "'");
    }
  }
  return out;
}

std::vector<int> parse_grid(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_reals(s, "n grid")) {
    if (v < 1 || v != std::floor(v)) throw UsageError("n grid entries must be integers >= 1");
    out.push_back(static_cast<int>(v));
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i] <= out[i - 1]) throw UsageError("n grid must be strictly increasing");
  }
  if (out.empty()) throw UsageError("empty n grid");
  return out;
}

LatticePoint parse_site(const std::string& s, int d) {
  std::vector<std::int64_t> c;
  for (double v : parse_reals(s, "site")) {
    if (v != std::floor(v)) throw UsageError("site coordinates must be integers");
    c.push_back(static_cast<std::int64_t>(v));
  }
  if (static_cast<int>(c.size()) != d) throw UsageError("site '" + s + "' does not have d coordinates");
  return make_point(c);
}

RealPoint parse_real_point(const std::string& s, int d) {
  const auto v = parse_reals(s, "point");
  if (static_cast<int>(v.size()) != d) throw UsageError("point '" + s + "' does not have d coordinates");
  return Eigen::Map<const Eigen::VectorXd>(v.data(), d);
}

void check_dim(int d) {
  if (d < 2 || d > kMaxDim) throw UsageError("--d must be in [2, " + std::to_string(kMaxDim) + "]");
}

template <typename Writer>
void emit(const std::string& path, std::ostream& fallback, Writer&& write) {
  if (path.empty() || path == "-") {
    write(fallback);
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(os);
}

void emit_json(const std::string& path, std::ostream& fallback, const nlohmann::ordered_json& j) {
  emit(path, fallback, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

struct Common {
  unsigned threads = default_threads();
  std::uint64_t seed = 1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--threads", c.threads, "Worker threads (default: $IDLA_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed, "Master seed");
}

// ---------------------------------------------------------------------------

struct GrowArgs {
  Common common;
  int d = 2;
  int n = 0;
  std::uint64_t stream = 0;
  std::string out_odometer, out_cluster, out_record, svg;
};

int cmd_grow(const GrowArgs& a, std::ostream& out) {
  check_dim(a.d);
  if (a.n < 1) throw UsageError("--n must be >= 1");
  const auto result = grow_for_radius(a.n, a.d, WalkRng(a.common.seed, a.stream));
  if (!a.out_odometer.empty()) {
    emit(a.out_odometer, out, [&](std::ostream& os) { write_odometer_csv(os, result.odometer); });
  }
  if (!a.out_cluster.empty()) {
    emit(a.out_cluster, out, [&](std::ostream& os) { write_cluster_csv(os, result.cluster); });
  }
  std::string record_path = a.out_record;
  if (record_path.empty() && !a.out_odometer.empty() && a.out_odometer != "-") {
    record_path = a.out_odometer + ".json";
  }
  emit_json(record_path, out, growth_record_json(result.record));
  if (!a.svg.empty()) {
    const auto* g = result.odometer.grid();
    BoxGrid<double> heat(a.d, g->radius());
    for (std::size_t i = 0; i < g->size(); ++i) heat[i] = static_cast<double>((*g)[i]);
    emit(a.svg, out, [&](std::ostream& os) { write_heat_svg(os, heat, "iDLA odometer"); });
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SandpileArgs {
  Common common;
  int d = 2;
  int n = 0;
  std::string order = "lex";
  double tol = 1e-12;
  bool majorant = false;
  std::string out_mass, out_odometer, out_report, svg;
};

int cmd_sandpile(const SandpileArgs& a, std::ostream& out) {
  check_dim(a.d);
  if (a.n < 1) throw UsageError("--n must be >= 1");
  if (!(a.tol > 0)) throw UsageError("--tol must be positive");
  if (a.majorant && a.d < 3) throw UsageError("--majorant needs d >= 3");
  RelaxOptions opt;
  opt.order = a.order == "radial" ? SweepOrder::Radial : SweepOrder::Lexicographic;
  opt.tol_stop = a.tol;
  const auto res = relax_point_mass(a.n, a.d, opt);

  if (!a.out_mass.empty()) {
    emit(a.out_mass, out, [&](std::ostream& os) { write_field_csv(os, res.final_mass.grid(), "mass"); });
  }
  if (!a.out_odometer.empty()) {
    emit(a.out_odometer, out, [&](std::ostream& os) { write_field_csv(os, res.odometer.grid(), "u"); });
  }
  nlohmann::ordered_json j;
  j["n"] = a.n;
  j["d"] = a.d;
  j["order"] = a.order;
  j["initial_mass"] = res.initial.total();
  j["final_mass"] = res.final_mass.total();
  j["sweeps"] = res.sweeps;
  j["max_excess"] = res.max_excess;
  j["toppled_sites"] = toppled_site_count(res.odometer);
  j["laplacian_residual"] = laplacian_identity_residual(res);
  bool ok = true;
  if (a.majorant) {
    const double radius = a.n + 4.0;
    const FreeGreenField field(a.d, radius + 2.0);
    const auto rep = majorant_check(
        res.odometer, [&](const LatticePoint& z) { return gamma_fn(z, a.n, GreenMode::ExactNumeric, &field); },
        radius);
    j["majorant"] = {{"min_gap", rep.min_gap},
                     {"max_superharmonic_violation", rep.max_superharmonic_violation},
                     {"max_interior_harmonic_violation", rep.max_interior_harmonic_violation},
                     {"sites_checked", rep.sites_checked},
                     {"passes_1e-6", rep.passes(1e-6)}};
    ok = rep.passes(1e-6);
  }
  emit_json(a.out_report, out, j);
  if (!a.svg.empty()) {
    emit(a.svg, out, [&](std::ostream& os) { write_heat_svg(os, res.odometer.grid(), "sandpile odometer"); });
  }
  return ok ? kExitOk : kExitVerificationFailed;
}

// ---------------------------------------------------------------------------

struct GreenArgs {
  Common common;
  int d = 2;
  double k = 0;
  bool exact = false;
  bool asymptotic = false;
  std::string row = "";
  std::string out_path;
};

int cmd_green(const GreenArgs& a, std::ostream& out) {
  check_dim(a.d);
  if (!(a.k >= 0)) throw UsageError("--k must be >= 0");
  if (a.exact && a.asymptotic) throw UsageError("--exact and --asymptotic are exclusive");
  const LatticePoint x = a.row.empty() ? origin(a.d) : parse_site(a.row, a.d);
  const BallIndex index(a.k, a.d);
  if (!index.contains(x)) throw UsageError("--row site lies outside the ball");
  Eigen::VectorXd row(index.size());
  if (a.asymptotic) {
    if (squared_norm(x) != 0) throw UsageError("--asymptotic rows are only defined from the origin");
    for (Eigen::Index r = 0; r < index.size(); ++r) {
      row(r) = squared_norm(index.site(r)) == 0 ? std::numeric_limits<double>::quiet_NaN()
                                                : green_asymptotic(a.k, index.site(r));
    }
  } else if (static_cast<std::size_t>(index.size()) <= kDenseSiteLimit) {
    const auto table = stopped_green_exact<double>(a.k, a.d);
    row = table.values().row(table.index().row(x)).transpose();
  } else {
    row = stopped_green_column<double>(a.k, x, a.d).values;
  }
  emit(a.out_path, out, [&](std::ostream& os) { write_green_row_csv(os, index, row); });
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  Common common;
  int d = 2;
  std::string n_grid;
  std::optional<int> seeds;
  std::vector<std::string> z;
  std::string rule = "fixed";
  std::string a_point;
  std::optional<double> band;
  std::optional<double> rel_tol;
  double green_radius = 20.0;
  std::string out_json, out_csv;
};

int finish(const VerificationReport& rep, const VerifyArgs& a, std::ostream& out) {
  emit_json(a.out_json, out, rep.to_json());
  if (!a.out_csv.empty()) emit(a.out_csv, out, [&](std::ostream& os) { rep.write_csv(os); });
  return rep.verdict() ? kExitOk : kExitVerificationFailed;
}

int seed_count(const std::optional<int>& given, int fallback) {
  const int seeds = given.value_or(fallback);
  if (seeds < 1) throw UsageError("--seeds must be >= 1");
  return seeds;
}

int cmd_bulk_odometer(const VerifyArgs& a, std::ostream& out) {
  check_dim(a.d);
  BulkOdometerOptions opt;
  opt.d = a.d;
  opt.n_grid = a.n_grid.empty() ? std::vector<int>{32, 64, 128} : parse_grid(a.n_grid);
  opt.seeds = seed_count(a.seeds, 10);
  if (a.z.empty()) {
    RealPoint z = RealPoint::Zero(a.d);
    z[0] = 0.5;
    opt.z_list.push_back(z);
  }
  for (const auto& s : a.z) {
    RealPoint z = parse_real_point(s, a.d);
    if (!(z.norm() > 0 && z.norm() < 1)) throw UsageError("--z must have magnitude in (0, 1)");
    opt.z_list.push_back(z);
  }
  opt.final_band = a.band;
  EnsembleRunner runner(a.common.seed, a.common.threads);
  return finish(verify_bulk_odometer(runner, opt), a, out);
}

int cmd_near_origin(const VerifyArgs& a, std::ostream& out) {
  check_dim(a.d);
  NearOriginOptions opt;
  opt.d = a.d;
  opt.seeds = seed_count(a.seeds, 5);
  if (a.rule == "fixed") {
    if (a.d < 3) throw UsageError("--rule fixed needs d >= 3 (free Green's function)");
    opt.rule = NearOriginOptions::Rule::FixedPoint;
    opt.fixed_point = a.a_point.empty() ? origin(a.d) : parse_site(a.a_point, a.d);
  } else {
    opt.rule = NearOriginOptions::Rule::SqrtGrowing;
  }
  const std::vector<int> fallback = a.d == 2 ? std::vector<int>{64, 128, 256} : std::vector<int>{16, 24, 32};
  opt.n_grid = a.n_grid.empty() ? fallback : parse_grid(a.n_grid);
  opt.final_band = a.band;
  if (!(a.green_radius >= 1)) throw UsageError("--green-radius must be >= 1");
  opt.green_radius = a.green_radius;
  EnsembleRunner runner(a.common.seed, a.common.threads);
  return finish(verify_near_origin(runner, opt), a, out);
}

int cmd_timescale(const VerifyArgs& a, std::ostream& out) {
  check_dim(a.d);
  TimescaleOptions opt;
  opt.d = a.d;
  opt.seeds = seed_count(a.seeds, 5);
  opt.n_grid = a.n_grid.empty() ? (a.d == 2 ? std::vector<int>{32, 64, 128} : std::vector<int>{8, 16, 32})
                                : parse_grid(a.n_grid);
  opt.rel_tol = a.rel_tol.value_or(a.d == 2 ? 0.10 : 0.15);
  if (!(opt.rel_tol > 0)) throw UsageError("--rel-tol must be positive");
  EnsembleRunner runner(a.common.seed, a.common.threads);
  return finish(verify_timescale(runner, opt), a, out);
}

int cmd_fluctuations(const VerifyArgs& a, std::ostream& out) {
  check_dim(a.d);
  FluctuationOptions opt;
  opt.d = a.d;
  opt.seeds = seed_count(a.seeds, 10);
  opt.n_grid = a.n_grid.empty() ? std::vector<int>{32, 64, 128} : parse_grid(a.n_grid);
  EnsembleRunner runner(a.common.seed, a.common.threads);
  return finish(measure_fluctuations(runner, opt), a, out);
}

void add_verify_common(CLI::App* sub, VerifyArgs& v) {
  add_common(sub, v.common);
  sub->add_option("--d", v.d, "Lattice dimension");
  sub->add_option("--n-grid", v.n_grid, "Comma-separated increasing radii");
  sub->add_option("--seeds", v.seeds, "Number of independent runs (streams 0..seeds-1)");
  sub->add_option("--out-json", v.out_json, "JSON report path (default: stdout)");
  sub->add_option("--out-csv", v.out_csv, "CSV convergence table path");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Internal DLA odometer laboratory"};
  app.name(args.empty() ? "idla" : args.front());
  app.require_subcommand(1);

  GrowArgs grow_args;
  auto* grow = app.add_subcommand("grow", "Grow one cluster of floor(omega_d n^d) walkers");
  add_common(grow, grow_args.common);
  grow->add_option("--d", grow_args.d, "Lattice dimension");
  grow->add_option("--n", grow_args.n, "Radius n")->required();
  grow->add_option("--stream", grow_args.stream, "RNG stream id");
  grow->add_option("--out-odometer", grow_args.out_odometer, "Odometer CSV (x1..xd,u)");
  grow->add_option("--out-cluster", grow_args.out_cluster, "Cluster CSV (x1..xd), insertion order");
  grow->add_option("--out-record", grow_args.out_record, "Growth record JSON (default: <odometer>.json)");
  grow->add_option("--svg", grow_args.svg, "Odometer heat map (SVG)");

  SandpileArgs sp_args;
  auto* sandpile = app.add_subcommand("sandpile", "Relax omega_d n^d mass at the origin");
  add_common(sandpile, sp_args.common);
  sandpile->add_option("--d", sp_args.d, "Lattice dimension");
  sandpile->add_option("--n", sp_args.n, "Scale n")->required();
  sandpile->add_option("--order", sp_args.order, "Sweep order")->check(CLI::IsMember({"lex", "radial"}));
  sandpile->add_option("--tol", sp_args.tol, "Stop once max excess < tol");
  sandpile->add_flag("--majorant", sp_args.majorant, "Check u + gamma_n is the superharmonic majorant (d >= 3)");
  sandpile->add_option("--out-mass", sp_args.out_mass, "Final mass CSV");
  sandpile->add_option("--out-odometer", sp_args.out_odometer, "Odometer CSV");
  sandpile->add_option("--out-report", sp_args.out_report, "Summary JSON (default: stdout)");
  sandpile->add_option("--svg", sp_args.svg, "Odometer heat map (SVG)");

  GreenArgs green_args;
  auto* green = app.add_subcommand("green", "Dump a row of the stopped Green's function G_k");
  add_common(green, green_args.common);
  green->add_option("--d", green_args.d, "Lattice dimension");
  green->add_option("--k", green_args.k, "Ball radius")->required();
  green->add_flag("--exact", green_args.exact, "Linear-solve values (default)");
  green->add_flag("--asymptotic", green_args.asymptotic, "Leading-order asymptotic values (row at origin)");
  green->add_option("--row", green_args.row, "Row site x, comma separated (default: origin)");
  green->add_option("--out", green_args.out_path, "CSV path (default: stdout)");

  VerifyArgs t1, t2, ts, fl;
  auto* v1 = app.add_subcommand("verify-theorem1", "Bulk odometer u_n(z)/n^2 against its limit");
  add_verify_common(v1, t1);
  v1->add_option("--z", t1.z, "Macroscopic point, comma separated; repeatable (default 0.5,0,...)");
  v1->add_option("--band", t1.band, "Gate: final median |u/n^2 - f| <= band");

  auto* v2 = app.add_subcommand("verify-theorem2", "Near-origin odometer scaling");
  add_verify_common(v2, t2);
  v2->add_option("--rule", t2.rule, "fixed (y_n = a) or sqrt (y_n = (floor sqrt n, 0..))")
      ->check(CLI::IsMember({"fixed", "sqrt"}));
  v2->add_option("--a", t2.a_point, "Fixed point a (default origin)");
  v2->add_option("--band", t2.band, "Gate: final |median ratio - 1| <= band");
  v2->add_option("--green-radius", t2.green_radius, "Extrapolation radius for G(0, a)");

  auto* v3 = app.add_subcommand("verify-timescale", "Total steps sum(sigma)/n^{d+2} against d omega_d/(d+2)");
  add_verify_common(v3, ts);
  v3->add_option("--rel-tol", ts.rel_tol, "Gate on the final-n mean (default 0.10 for d=2, 0.15 otherwise)");

  auto* v4 = app.add_subcommand("fluctuations", "Inner/outer errors delta_I, delta_O");
  add_verify_common(v4, fl);

  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  if (argv.empty()) argv.push_back("idla");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*grow) return cmd_grow(grow_args, out);
    if (*sandpile) return cmd_sandpile(sp_args, out);
    if (*green) return cmd_green(green_args, out);
    if (*v1) return cmd_bulk_odometer(t1, out);
    if (*v2) return cmd_near_origin(t2, out);
    if (*v3) return cmd_timescale(ts, out);
    if (*v4) return cmd_fluctuations(fl, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerificationFailed;
  }
  return kExitUsage;
}

}  // namespace idla::cli
