// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Monte Carlo reports are written next to the binary for inspection.

#include "idla/cli.hpp"
#include "idla/green.hpp"
#include "idla/limits.hpp"
#include "idla/random_walk.hpp"
#include "idla/sandpile.hpp"
#include "idla/verify.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace idla;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

unsigned worker_threads() {
  if (const char* env = std::getenv("IDLA_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

const fs::path kOut = IDLA_ACCEPTANCE_TMP;
const fs::path kFixtures = IDLA_FIXTURE_DIR;
constexpr std::uint64_t kMasterSeed = 20261015;

void save(const VerificationReport& rep, const std::string& stem) {
  fs::create_directories(kOut);
  std::ofstream(kOut / (stem + ".json")) << rep.to_json().dump(2) << '\n';
  std::ofstream csv(kOut / (stem + ".csv"));
  rep.write_csv(csv);
}

std::string failed_checks(const VerificationReport& rep) {
  std::string s;
  for (const auto& c : rep.checks) {
    if (c.gate && !c.passed) s += c.name + " (" + c.detail + "); ";
  }
  return s;
}

double report_value(const VerificationReport& rep, const std::string& observable, int n,
                    const std::function<double(const GridRow&)>& pick) {
  for (const auto& g : rep.grid) {
    if (g.observable == observable && g.n == n) return pick(g);
  }
  throw std::runtime_error("missing row " + observable);
}

nlohmann::json fixture(const std::string& name) {
  std::ifstream in(kFixtures / name);
  if (!in) throw std::runtime_error("missing fixture " + name);
  return nlohmann::json::parse(in);
}

// ---------------------------------------------------------------------------

template <typename Table>
double table_defect(const Table& t) {
  const auto& idx = t.index();
  const int d = t.dim();
  double worst = (t.values() - t.values().transpose()).cwiseAbs().maxCoeff();
  for (Eigen::Index r = 0; r < idx.size(); ++r) {
    Eigen::RowVectorXd rhs = Eigen::RowVectorXd::Zero(idx.size());
    rhs(r) = 1.0;
    for (const auto& w : neighbors(idx.site(r)))
      if (auto c = idx.find(w)) rhs += t.values().row(*c) / (2.0 * d);
    worst = std::max(worst, (t.values().row(r) - rhs).cwiseAbs().maxCoeff());
  }
  return worst;
}

void exact_identities(Outcome& o) {
  double defect = 0;
  for (int k = 0; k <= 8; ++k) defect = std::max(defect, table_defect(stopped_green_exact(k, 2)));
  for (int k = 0; k <= 5; ++k) defect = std::max(defect, table_defect(stopped_green_exact(k, 3)));
  o.require(defect < 1e-10, "symmetry/row identity");
  const double g1 = stopped_green_exact(1, 2)(origin(2), origin(2));
  o.require(std::abs(g1 - 4.0 / 3.0) < 1e-12, "G_1(0,0) = 4/3");

  const std::vector<std::pair<double, LatticePoint>> pairs{
      {3, make_point({1, 0})},    {4, make_point({2, 1})},    {5, make_point({2, 1})},
      {5, make_point({5, 0})},    {6, make_point({-3, 2})},   {8, make_point({0, 7})},
      {2, make_point({1, 1, 0})}, {4, make_point({1, 1, 1})}, {5, make_point({0, -3, 2})},
      {6, make_point({1, 1, 1})}};
  double decomposition = 0;
  for (const auto& [k, z] : pairs) {
    const auto t = stopped_green_exact(k, static_cast<int>(z.size()));
    const auto law = chi_law(t, z);
    decomposition = std::max(decomposition, std::abs((1 - law.q0) * t(z, z) - t(origin(t.dim()), z)));
  }
  o.require(decomposition < 1e-10, "(1-q0) G(z,z) = G(0,z)");
  o.detail << "table defect " << defect << ", |G_1(0,0) - 4/3| " << std::abs(g1 - 4.0 / 3.0)
           << ", decomposition defect " << decomposition;
}

double sup_difference(const SandpileOdometer& a, const SandpileOdometer& b) {
  double worst = 0;
  a.grid().for_each([&](const LatticePoint& p, double v) { worst = std::max(worst, std::abs(v - b(p))); });
  b.grid().for_each([&](const LatticePoint& p, double v) { worst = std::max(worst, std::abs(v - a(p))); });
  return worst;
}

void sandpile_suite(Outcome& o) {
  double residual = 0, drift = 0, abelian = 0;
  for (auto [n, d] : {std::pair{32, 2}, std::pair{12, 3}}) {
    RelaxOptions radial;
    radial.order = SweepOrder::Radial;
    const auto lex = relax_point_mass(n, d);
    const auto rad = relax_point_mass(n, d, radial);
    residual = std::max({residual, laplacian_identity_residual(lex), laplacian_identity_residual(rad)});
    drift = std::max(drift, std::abs(lex.final_mass.total() - lex.initial.total()) / lex.initial.total());
    abelian = std::max(abelian, sup_difference(lex.odometer, rad.odometer));
  }
  o.require(residual < 1e-6, "Laplacian identity");
  o.require(drift <= 1e-9, "mass conservation");
  o.require(abelian <= 1e-6, "abelian property");

  const int n = 12;
  const auto res = relax_point_mass(n, 3);
  const double radius = n + 4.0;
  const FreeGreenField field(3, radius + 2);
  const auto rep = majorant_check(
      res.odometer, [&](const LatticePoint& z) { return gamma_fn(z, n, GreenMode::ExactNumeric, &field); }, radius);
  o.require(rep.min_gap >= 0, "u + gamma >= gamma");
  o.require(rep.max_superharmonic_violation < 1e-6, "superharmonic off origin");
  o.require(rep.max_interior_harmonic_violation < 1e-6, "harmonic on toppled set");
  o.detail << "residual " << residual << ", relative mass drift " << drift << ", order sup-diff " << abelian
           << ", superharmonic violation " << rep.max_superharmonic_violation << ", interior violation "
           << rep.max_interior_harmonic_violation;
}

void closed_forms(Outcome& o) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  double quad = 0, integral = 0, obstacle = 0;
  for (int d : {2, 3}) {
    for (int i = 0; i < 20; ++i) quad = std::max(quad, std::abs(limit_integral_check(u(gen), d).difference));
    integral = std::max(integral, std::abs(timescale_integral(d) - timescale_constant(d)));
  }
  for (int d : {3, 4}) {
    for (int i = 1; i < 1000; ++i) {
      const double r = i / 1000.0;
      obstacle = std::max(obstacle, std::abs(limit_f(r, d) - (majorant_limit(r, d) - gamma_limit(r, d))));
    }
  }
  o.require(quad < 1e-8, "quadrature");
  o.require(integral < 1e-6, "time-scale integral");
  o.require(obstacle < 1e-12, "f = s - gamma");
  o.detail << "quadrature " << quad << ", time-scale integral " << integral << ", s - gamma " << obstacle;
}

RealPoint half_axis(int d) {
  RealPoint z = RealPoint::Zero(d);
  z[0] = 0.5;
  return z;
}

void bulk_odometer(Outcome& o, EnsembleRunner& runner) {
  const auto pilot = fixture("pilot_bulk_d2.json");
  double pilot_max = 0;
  for (const auto& row : pilot["grid"])
    if (row["observable"] == "abs_error@(0.5,0)") pilot_max = std::max(pilot_max, row["observed"]["max"].get<double>());
  const double pilot_band = 2 * pilot_max;

  BulkOdometerOptions opt;
  opt.d = 2;
  opt.n_grid = {32, 64, 128};
  opt.z_list = {half_axis(2)};
  opt.seeds = 10;
  opt.final_band = 0.10;
  const auto rep = verify_bulk_odometer(runner, opt);
  save(rep, "bulk_d2");
  o.require(rep.verdict(), failed_checks(rep));
  o.detail << "median |u/n^2 - f| along n = 32,64,128: ";
  for (int n : {32, 64, 128})
    o.detail << report_value(rep, "abs_error@(0.5,0)", n, [](const GridRow& g) { return g.median; }) << ' ';
  o.detail << "(band 0.10; pilot band 2 x max deviation = " << pilot_band << ")";
}

void time_scale(Outcome& o, EnsembleRunner& runner2, EnsembleRunner& runner3) {
  TimescaleOptions two;
  two.d = 2;
  two.n_grid = {32, 64, 128};
  two.seeds = 5;
  two.rel_tol = 0.10;
  const auto r2 = verify_timescale(runner2, two);
  save(r2, "timescale_d2");
  TimescaleOptions three;
  three.d = 3;
  three.n_grid = {8, 16, 32};
  three.seeds = 5;
  three.rel_tol = 0.15;
  const auto r3 = verify_timescale(runner3, three);
  save(r3, "timescale_d3");
  o.require(r2.verdict(), "d=2: " + failed_checks(r2));
  o.require(r3.verdict(), "d=3: " + failed_checks(r3));
  auto mean = [](const GridRow& g) { return g.stats.mean(); };
  o.detail << "d=2 n=128 mean " << report_value(r2, "sigma_sum/n^(d+2)", 128, mean) << " vs "
           << timescale_constant(2) << "; d=3 n=32 mean " << report_value(r3, "sigma_sum/n^(d+2)", 32, mean)
           << " vs " << timescale_constant(3);
}

void near_origin(Outcome& o, EnsembleRunner& runner2, EnsembleRunner& runner3) {
  NearOriginOptions fixed;
  fixed.d = 3;
  fixed.rule = NearOriginOptions::Rule::FixedPoint;
  fixed.fixed_point = origin(3);
  fixed.n_grid = {16, 24, 32};
  fixed.seeds = 5;
  fixed.final_band = 0.2;
  const auto r3 = verify_near_origin(runner3, fixed);
  save(r3, "near_origin_d3");

  NearOriginOptions growing;
  growing.d = 2;
  growing.rule = NearOriginOptions::Rule::SqrtGrowing;
  growing.n_grid = {64, 128, 256};
  growing.seeds = 5;
  const auto r2 = verify_near_origin(runner2, growing);
  save(r2, "near_origin_d2");

  o.require(r3.verdict(), "d=3: " + failed_checks(r3));
  o.require(r2.verdict(), "d=2: " + failed_checks(r2));
  auto med = [](const GridRow& g) { return g.median; };
  o.detail << "d=3 median ratio at n=16,24,32: ";
  for (int n : {16, 24, 32}) o.detail << report_value(r3, "ratio", n, med) << ' ';
  o.detail << "; d=2 median ratio at n=64,128,256: ";
  for (int n : {64, 128, 256}) o.detail << report_value(r2, "ratio", n, med) << ' ';
  o.detail << "(to bulk limit: ";
  for (int n : {64, 128, 256}) o.detail << report_value(r2, "ratio_to_bulk_limit", n, med) << ' ';
  o.detail << ")";
}

void visit_law(Outcome& o) {
  const double k = 5;
  const auto z = make_point({2, 1});
  const auto table = stopped_green_exact(k, 2);
  const auto law = chi_law(table, z);

  constexpr int kWalks = 100000;
  WalkRng rng(kMasterSeed, 0);
  std::vector<std::uint64_t> counts;
  EnsembleStats stats;
  for (int i = 0; i < kWalks; ++i) {
    const auto v = visits_before_exit(origin(2), z, k, rng);
    if (v >= counts.size()) counts.resize(v + 1, 0);
    ++counts[v];
    stats.add(static_cast<double>(v));
  }

  // bins 0..m-1 and a pooled tail, each with expected count >= 5
  std::size_t m = 0;
  while (kWalks * law.pmf(m) >= 5 && kWalks * law.tail(m + 1) >= 5) ++m;
  double stat = 0;
  std::uint64_t seen = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double expected = kWalks * law.pmf(i);
    const double c = i < counts.size() ? static_cast<double>(counts[i]) : 0.0;
    seen += static_cast<std::uint64_t>(c);
    stat += (c - expected) * (c - expected) / expected;
  }
  const double tail_expected = kWalks * law.tail(m);
  const double tail_seen = static_cast<double>(kWalks - seen);
  stat += (tail_seen - tail_expected) * (tail_seen - tail_expected) / tail_expected;
  const boost::math::chi_squared dist(static_cast<double>(m));
  const double p_value = boost::math::cdf(boost::math::complement(dist, stat));
  const double se = stats.sd() / std::sqrt(double(kWalks));

  o.require(p_value > 1e-3, "chi-square");
  o.require(std::abs(stats.mean() - table(origin(2), z)) <= 3 * se, "mean within 3 sigma");
  o.detail << "chi-square " << stat << " on " << m << " dof, p = " << p_value << "; mean " << stats.mean()
           << " vs G " << table(origin(2), z) << " (se " << se << "); variance: law " << law.variance
           << ", closed-form expression " << chi_variance_closed_form(law) << ", Monte Carlo " << stats.variance();

  const auto t3 = stopped_green_exact(6, 3);
  const auto law3 = chi_law(t3, make_point({1, 1, 1}));
  o.detail << "; d=3 k=6 (1,1,1): law " << law3.variance << ", closed-form expression " << chi_variance_closed_form(law3);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism(Outcome& o) {
  const fs::path dir = kOut / "determinism";
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::vector<std::string>>> commands{
      {"grow", {"grow", "--d", "2", "--n", "24", "--stream", "3", "--out-odometer", "@u.csv", "--out-cluster",
                "@a.csv", "--svg", "@u.svg"}},
      {"sandpile", {"sandpile", "--d", "3", "--n", "6", "--majorant", "--out-odometer", "@u.csv", "--out-mass",
                    "@m.csv", "--out-report", "@r.json"}},
      {"green", {"green", "--d", "3", "--k", "4", "--row", "1,0,0", "--out", "@g.csv"}},
      {"verify-theorem1", {"verify-theorem1", "--n-grid", "8,16,24", "--seeds", "6", "--z", "0.5,0", "--z",
                           "0.3,0.3", "--out-json", "@r.json", "--out-csv", "@r.csv"}},
      {"verify-theorem2", {"verify-theorem2", "--d", "3", "--n-grid", "6,8", "--seeds", "4", "--green-radius",
                           "8", "--out-json", "@r.json", "--out-csv", "@r.csv"}},
      {"verify-timescale", {"verify-timescale", "--d", "3", "--n-grid", "4,8", "--seeds", "5", "--out-json",
                            "@r.json", "--out-csv", "@r.csv"}},
      {"fluctuations", {"fluctuations", "--n-grid", "8,16", "--seeds", "6", "--out-json", "@r.json", "--out-csv",
                        "@r.csv"}},
  };
  int compared = 0;
  for (const auto& [name, argv] : commands) {
    std::vector<std::string> files;
    for (const std::string threads : {"1", "2", "4"}) {
      std::vector<std::string> args{"idla"};
      for (const auto& a : argv) {
        if (a[0] == '@') {
          args.push_back((dir / (name + "_t" + threads + "_" + a.substr(1))).string());
        } else {
          args.push_back(a);
        }
      }
      args.insert(args.end(), {"--seed", "99", "--threads", threads});
      std::ostringstream out, err;
      const int code = cli::run(args, out, err);
      o.require(code != cli::kExitUsage, name + " usage: " + err.str());
      std::string joined;
      for (const auto& a : argv) {
        if (a[0] == '@') joined += slurp(dir / (name + "_t" + threads + "_" + a.substr(1))) + '\x1f';
      }
      files.push_back(joined);
    }
    o.require(files[0] == files[1] && files[1] == files[2], name + " outputs differ across thread counts");
    ++compared;
  }
  o.detail << compared << " subcommands byte-identical at --threads 1, 2, 4";
}

void fluctuation_report(Outcome& o, EnsembleRunner& runner) {
  FluctuationOptions opt;
  opt.d = 2;
  opt.n_grid = {32, 64, 128};
  opt.seeds = 10;
  const auto rep = measure_fluctuations(runner, opt);
  save(rep, "fluctuations_d2");
  o.require(fs::exists(kOut / "fluctuations_d2.json"), "report written");
  o.require(rep.verdict(), failed_checks(rep));
  auto med = [](const GridRow& g) { return g.median; };
  o.detail << "median delta_I/n: ";
  for (int n : {32, 64, 128}) o.detail << report_value(rep, "delta_inner/n", n, med) << ' ';
  o.detail << "; median delta_O/n: ";
  for (int n : {32, 64, 128}) o.detail << report_value(rep, "delta_outer/n", n, med) << ' ';
}

}  // namespace

int main() {
  const unsigned threads = worker_threads();
  EnsembleRunner runner2(kMasterSeed, threads);
  EnsembleRunner runner3(kMasterSeed, threads);

  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"C1 exact identities", exact_identities},
      {"C2 sandpile identities", sandpile_suite},
      {"C3 closed forms", closed_forms},
      {"C4 bulk odometer Monte Carlo (d=2)", [&](Outcome& o) { bulk_odometer(o, runner2); }},
      {"C5 time scale Monte Carlo", [&](Outcome& o) { time_scale(o, runner2, runner3); }},
      {"C6 near-origin Monte Carlo", [&](Outcome& o) { near_origin(o, runner2, runner3); }},
      {"C7 visit-count law", visit_law},
      {"C8 determinism across thread counts", determinism},
      {"C9 fluctuation report (d=2)", [&](Outcome& o) { fluctuation_report(o, runner2); }},
  };

  int failures = 0;
  for (const auto& [name, body] : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      body(o);
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail << "[exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.passed;
    std::cout << (o.passed ? "PASS " : "FAIL ") << name << " (" << std::fixed << std::setprecision(1) << secs
              << " s): " << std::defaultfloat << std::setprecision(6) << o.detail.str() << std::endl;
  }
  std::cout << (failures ? "acceptance: " + std::to_string(failures) + " criterion(s) failed" : "acceptance: all passed")
            << std::endl;
  return failures ? 1 : 0;
}
