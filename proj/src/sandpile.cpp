#include "idla/sandpile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace idla {

MassField MassField::point_mass(int d, double mass) {
  if (!(mass >= 0.0) || !std::isfinite(mass)) throw std::invalid_argument("mass must be finite and >= 0");
  const double r = std::pow(mass / unit_ball_volume(d), 1.0 / d);
  MassField f(d, static_cast<std::int64_t>(std::ceil(r)) + 4);
  f.add(origin(d), mass);
  return f;
}

double MassField::total() const {
  return std::accumulate(grid_.values().begin(), grid_.values().end(), 0.0);
}

RelaxationError::RelaxationError(std::uint64_t sweeps, double residual)
    : std::runtime_error("sandpile did not stabilize after " + std::to_string(sweeps) +
                         " sweeps (max excess " + std::to_string(residual) + ")"),
      sweeps_(sweeps),
      residual_(residual) {}

namespace {

struct SweepPlan {
  std::vector<std::size_t> order;
  std::vector<std::uint8_t> outer_layer;
};

SweepPlan make_plan(const BoxGrid<double>& g, SweepOrder order) {
  SweepPlan plan;
  plan.order.resize(g.size());
  plan.outer_layer.resize(g.size());
  std::iota(plan.order.begin(), plan.order.end(), std::size_t{0});
  std::vector<std::int64_t> norm2(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto p = g.point(i);
    norm2[i] = squared_norm(p);
    plan.outer_layer[i] = g.near_edge(p, 0) ? 1 : 0;
  }
  if (order == SweepOrder::Radial) {
    std::stable_sort(plan.order.begin(), plan.order.end(),
                     [&](std::size_t a, std::size_t b) { return norm2[a] < norm2[b]; });
  }
  return plan;
}

double max_excess(const BoxGrid<double>& mass) {
  double worst = 0.0;
  for (double m : mass.values()) worst = std::max(worst, m - 1.0);
  return worst;
}

}  // namespace

RelaxResult relax(const MassField& initial, const RelaxOptions& options, double n) {
  const int d = initial.dim();
  BoxGrid<double> mass = initial.grid();
  if (mass.size() == 0) throw std::invalid_argument("empty mass field");
  BoxGrid<double> u(d, mass.radius(), 0.0);
  SweepPlan plan = make_plan(mass, options.order);
  const double share_factor = 1.0 / (2 * d);
  const unsigned ndir = 2U * static_cast<unsigned>(d);

  std::uint64_t sweeps = 0;
  double excess = max_excess(mass);
  while (excess >= options.tol_stop) {
    if (sweeps == options.max_sweeps) throw RelaxationError(sweeps, excess);
    bool hit_edge = false;
    double* m = mass.data();
    double* odo = u.data();
    for (std::size_t idx : plan.order) {
      const double here = m[idx];
      if (here <= 1.0) continue;
      if (plan.outer_layer[idx]) {
        hit_edge = true;
        break;
      }
      const double e = here - 1.0;
      m[idx] = 1.0;
      odo[idx] += e;
      const double share = e * share_factor;
      for (unsigned dir = 0; dir < ndir; ++dir) {
        m[static_cast<std::ptrdiff_t>(idx) + mass.offset(dir)] += share;
      }
    }
    if (hit_edge) {
      const auto R = mass.radius() + std::max<std::int64_t>(4, mass.radius() / 4);
      mass = mass.regrown(R);
      u = u.regrown(R);
      plan = make_plan(mass, options.order);
    }
    ++sweeps;
    excess = max_excess(mass);
  }

  const std::int64_t R = mass.radius();
  BoxGrid<double> init = initial.grid().radius() == R ? initial.grid() : initial.grid().regrown(R);
  return RelaxResult{MassField(std::move(init)), MassField(std::move(mass)),
                     SandpileOdometer(std::move(u), n), sweeps, excess};
}

RelaxResult relax_point_mass(int n, int d, const RelaxOptions& options) {
  if (n < 1) throw std::invalid_argument("sandpile scale n must be >= 1");
  const double mass = unit_ball_volume(d) * std::pow(double(n), d);
  return relax(MassField::point_mass(d, mass), options, n);
}

double laplacian_identity_residual(const RelaxResult& result) {
  const auto& u = result.odometer.grid();
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const LatticePoint p = u.point(i);
    const double lap = discrete_laplacian(result.odometer, p);
    const double rhs = result.final_mass(p) - result.initial(p);
    worst = std::max(worst, std::abs(lap - rhs));
  }
  return worst;
}

std::size_t toppled_site_count(const SandpileOdometer& u) {
  const auto& v = u.grid().values();
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](double x) { return x > 0.0; }));
}

double gamma_fn(const LatticePoint& z, int n, GreenMode mode, const FreeGreenField* field) {
  const int d = static_cast<int>(z.size());
  if (d < 3) throw std::domain_error("gamma_n is only defined here for d >= 3");
  double g;
  if (mode == GreenMode::ExactNumeric && field) {
    g = (*field)(z);
  } else {
    g = free_green(z, mode);
  }
  return -static_cast<double>(squared_norm(z)) - unit_ball_volume(d) * std::pow(double(n), d) * g;
}

double gamma_limit(double r, int d) {
  if (d < 3) throw std::domain_error("gamma limit needs d >= 3");
  if (!(r > 0.0)) throw std::domain_error("gamma limit is singular at r = 0");
  return -r * r - 2.0 / (d - 2) * std::pow(r, 2 - d);
}

double majorant_limit(double r, int d) {
  if (d < 3) throw std::domain_error("majorant limit needs d >= 3");
  return r <= 1.0 ? -static_cast<double>(d) / (d - 2) : gamma_limit(r, d);
}

MajorantReport majorant_check(const SandpileOdometer& u, const SiteFunction& gamma,
                              double check_radius) {
  const int d = u.dim();
  MajorantReport rep;
  rep.min_gap = std::numeric_limits<double>::infinity();
  auto s = [&](const LatticePoint& x) { return u(x) + gamma(x); };
  for (const auto& x : ball_sites(check_radius, d)) {
    if (squared_norm(x) == 0) continue;
    const double gap = s(x) - gamma(x);
    rep.min_gap = std::min(rep.min_gap, gap);
    const double lap = discrete_laplacian(s, x);
    rep.max_superharmonic_violation = std::max(rep.max_superharmonic_violation, lap);
    if (u(x) > 0.0) {
      rep.max_interior_harmonic_violation = std::max(rep.max_interior_harmonic_violation, std::abs(lap));
      ++rep.interior_sites;
    }
    ++rep.sites_checked;
  }
  if (rep.sites_checked == 0) rep.min_gap = 0.0;
  return rep;
}

}  // namespace idla
