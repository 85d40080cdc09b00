#ifndef IDLA_SANDPILE_HPP
#define IDLA_SANDPILE_HPP

#include "idla/box_grid.hpp"
#include "idla/green.hpp"
#include "idla/lattice.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>

namespace idla {

/// Nonnegative mass per site over a centered box; zero outside it.
class MassField {
public:
  MassField(int d, std::int64_t box_radius) : grid_(d, box_radius, 0.0) {}
  explicit MassField(BoxGrid<double> grid) : grid_(std::move(grid)) {}

  /// `mass` at the origin, in a box large enough for the relaxed shape.
  static MassField point_mass(int d, double mass);

  int dim() const { return grid_.dim(); }
  double operator()(const LatticePoint& p) const { return grid_.value_or_default(p); }
  void add(const LatticePoint& p, double m) { grid_.at(p) += m; }
  double total() const;

  const BoxGrid<double>& grid() const { return grid_; }
  BoxGrid<double>& grid() { return grid_; }

private:
  BoxGrid<double> grid_;
};

/// Total mass emitted per site; zero outside its box.
class SandpileOdometer {
public:
  SandpileOdometer(BoxGrid<double> u, double n) : u_(std::move(u)), n_(n) {}

  int dim() const { return u_.dim(); }
  double n() const { return n_; }
  double operator()(const LatticePoint& p) const { return u_.value_or_default(p); }
  const BoxGrid<double>& grid() const { return u_; }

private:
  BoxGrid<double> u_;
  double n_;
};

enum class SweepOrder { Lexicographic, Radial };

struct RelaxOptions {
  SweepOrder order = SweepOrder::Lexicographic;
  double tol_stop = 1e-12;           ///< stop once every site holds <= 1 + tol_stop
  std::uint64_t max_sweeps = 2'000'000;
};

struct RelaxResult {
  MassField initial;
  MassField final_mass;
  SandpileOdometer odometer;
  std::uint64_t sweeps = 0;
  double max_excess = 0.0;  ///< max(mass - 1) after the last sweep
};

class RelaxationError : public std::runtime_error {
public:
  RelaxationError(std::uint64_t sweeps, double residual);
  std::uint64_t sweeps() const { return sweeps_; }
  double residual() const { return residual_; }

private:
  std::uint64_t sweeps_;
  double residual_;
};

/// Divisible-sandpile relaxation by in-place sweeps: every site holding more
/// than 1 keeps 1 and sends the excess in equal parts to its 2d neighbors.
/// The box grows whenever a toppling reaches its outer layer.
RelaxResult relax(const MassField& initial, const RelaxOptions& options = {}, double n = 0.0);

/// relax() of omega_d n^d at the origin.
RelaxResult relax_point_mass(int n, int d, const RelaxOptions& options = {});

/// max_x |Delta u(x) - (nu(x) - sigma(x))| over the odometer box.
double laplacian_identity_residual(const RelaxResult& result);

/// Sites with odometer > 0, i.e. the sites that toppled.
std::size_t toppled_site_count(const SandpileOdometer& u);

/// gamma_n(z) = -||z||^2 - omega_d n^d G(0, z), d >= 3. Exact mode reads
/// `field` when given, otherwise solves for G(0, z).
double gamma_fn(const LatticePoint& z, int n, GreenMode mode, const FreeGreenField* field = nullptr);

/// Radial limits of gamma_n / n^2 and of its least superharmonic majorant.
/// gamma(r) = -r^2 - (2/(d-2)) r^{2-d};  s(r) = -d/(d-2) for r <= 1, gamma(r) beyond.
double gamma_limit(double r, int d);
double majorant_limit(double r, int d);

struct MajorantReport {
  double min_gap = 0;                          ///< min (s_n - gamma_n) = min u
  double max_superharmonic_violation = 0;      ///< max(Delta s_n, 0) off the origin
  double max_interior_harmonic_violation = 0;  ///< max |Delta s_n| where u > 0, off the origin
  std::size_t sites_checked = 0;
  std::size_t interior_sites = 0;

  bool passes(double tol) const {
    return min_gap >= -tol && max_superharmonic_violation <= tol &&
           max_interior_harmonic_violation <= tol;
  }
};

using SiteFunction = std::function<double(const LatticePoint&)>;

/// Checks that s_n = u + gamma_n dominates gamma_n, is superharmonic off the
/// origin and harmonic on the toppled set off the origin, over ||x|| <= check_radius.
MajorantReport majorant_check(const SandpileOdometer& u, const SiteFunction& gamma,
                              double check_radius);

}  // namespace idla

#endif  // IDLA_SANDPILE_HPP
