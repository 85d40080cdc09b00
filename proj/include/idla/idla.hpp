#ifndef IDLA_IDLA_HPP
#define IDLA_IDLA_HPP

#include "idla/box_grid.hpp"
#include "idla/lattice.hpp"
#include "idla/random_walk.hpp"
#include "idla/rng.hpp"

#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

namespace idla {

/// Reading an odometer at a site that was not recorded (as opposed to a
/// recorded site with zero visits).
class UntrackedSite : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// Which odometer sites a growth run reports.
struct Tracking {
  enum class Mode { FullField, SiteList };
  Mode mode = Mode::FullField;
  std::vector<LatticePoint> sites;

  static Tracking full_field() { return {}; }
  static Tracking site_list(std::vector<LatticePoint> s) { return {Mode::SiteList, std::move(s)}; }
};

/// Occupied set A(j) with insertion order. Backed by a dense occupancy box that
/// always keeps at least one vacant layer around the cluster.
class Cluster {
public:
  Cluster(BoxGrid<std::uint8_t> occupancy, std::vector<LatticePoint> order);

  int dim() const { return occupancy_.dim(); }
  std::size_t size() const { return order_.size(); }
  bool contains(const LatticePoint& p) const { return occupancy_.value_or_default(p) != 0; }
  const std::vector<LatticePoint>& insertion_order() const { return order_; }
  SiteSet sites() const;

  std::int64_t max_squared_norm() const;
  /// min ||z||^2 over sites z not in the cluster.
  std::int64_t min_vacant_squared_norm() const;

private:
  BoxGrid<std::uint8_t> occupancy_;
  std::vector<LatticePoint> order_;
};

/// Visit counts u(z): number of (walker, time) pairs with S^i(t) = z, t = 0..sigma_i.
class OdometerField {
public:
  OdometerField(BoxGrid<std::uint64_t> full, std::uint64_t n_walkers);
  OdometerField(SiteMap<std::uint64_t> listed, int d, std::uint64_t n_walkers);

  int dim() const { return d_; }
  std::uint64_t n_walkers() const { return n_walkers_; }
  bool is_full_field() const { return std::holds_alternative<BoxGrid<std::uint64_t>>(store_); }
  bool is_tracked(const LatticePoint& p) const;

  /// Throws UntrackedSite for sites outside a site-list tracking set.
  std::uint64_t at(const LatticePoint& p) const;
  std::uint64_t operator()(const LatticePoint& p) const { return at(p); }

  /// Sum of all recorded counts.
  std::uint64_t total() const;

  /// Recorded (site, count) pairs with count > 0 for full fields, every listed
  /// site otherwise; lexicographic order.
  std::vector<std::pair<LatticePoint, std::uint64_t>> entries() const;

  const BoxGrid<std::uint64_t>* grid() const { return std::get_if<BoxGrid<std::uint64_t>>(&store_); }

private:
  int d_;
  std::uint64_t n_walkers_;
  std::variant<BoxGrid<std::uint64_t>, SiteMap<std::uint64_t>> store_;
};

/// Per-run bookkeeping. `n` is the radius the walker count was derived from,
/// or 0 for runs grown by explicit walker count (deltas are then NaN).
struct GrowthRecord {
  int d = 0;
  int n = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::uint64_t n_walkers = 0;
  std::vector<std::uint64_t> sigma;  ///< sigma_1..sigma_{n_walkers}
  std::uint64_t sigma_sum = 0;       ///< t'_n, total steps
  std::uint64_t visit_total = 0;     ///< sum_j (sigma_j + 1) over j = 0..n_walkers
  double delta_inner = 0.0;
  double delta_outer = 0.0;
};

/// Incremental cluster growth. Walker j starts at the origin and stops
/// at its first site outside A(j-1), which is then added. Walker 0 occupies
/// the origin with sigma_0 = 0 and contributes one visit there.
///
/// The process can be advanced in stages, so a single realization is observed
/// at an increasing sequence of walker counts.
class GrowthProcess {
public:
  GrowthProcess(int d, WalkRng rng, std::uint64_t expected_walkers = 0,
                std::uint64_t step_budget = kDefaultStepBudget);

  /// Releases walkers until `walkers` have been added after walker 0.
  void advance_to(std::uint64_t walkers);

  int dim() const { return d_; }
  std::uint64_t walkers() const { return sigma_.size(); }
  const WalkRng& rng() const { return rng_; }

  const BoxGrid<std::uint8_t>& occupancy() const { return occupied_; }
  const BoxGrid<std::uint64_t>& visit_counts() const { return visits_; }
  const std::vector<std::uint64_t>& sigma() const { return sigma_; }
  const std::vector<LatticePoint>& insertion_order() const { return order_; }
  std::uint64_t sigma_sum() const { return sigma_sum_; }
  std::uint64_t visit_total() const { return sigma_sum_ + walkers() + 1; }

  std::int64_t max_occupied_squared_norm() const { return max_norm2_; }
  std::int64_t min_vacant_squared_norm() const;

  /// n - inf_{z not in A} ||z||
  double delta_inner(double n) const;
  /// sup_{z in A} ||z|| - n
  double delta_outer(double n) const;

  Cluster cluster() const { return Cluster(occupied_, order_); }
  OdometerField odometer(const Tracking& track = {}) const;
  GrowthRecord record(int n = 0) const;

private:
  template <bool PowerOfTwo>
  void release_walker();
  void regrow();

  int d_;
  WalkRng rng_;
  DirectionSampler next_dir_;
  std::uint64_t step_budget_;
  BoxGrid<std::uint8_t> occupied_;
  BoxGrid<std::uint64_t> visits_;
  std::vector<std::uint64_t> sigma_;
  std::vector<LatticePoint> order_;
  std::uint64_t sigma_sum_ = 0;
  std::int64_t max_norm2_ = 0;
};

struct GrowthResult {
  Cluster cluster;
  OdometerField odometer;
  GrowthRecord record;
};

/// floor(omega_d n^d), the walker count whose cluster has the volume of B_n.
std::uint64_t walkers_for_radius(int n, int d);

GrowthResult grow(std::uint64_t n_walkers, int d, WalkRng rng, const Tracking& track = {},
                  std::uint64_t step_budget = kDefaultStepBudget);

/// grow() with floor(omega_d n^d) walkers; also records delta_inner/outer at n.
GrowthResult grow_for_radius(int n, int d, WalkRng rng, const Tracking& track = {},
                             std::uint64_t step_budget = kDefaultStepBudget);

/// u_n(z): the odometer at scale_point(z, n).
std::uint64_t odometer_at(const OdometerField& field, const RealPoint& z, std::int64_t n);

}  // namespace idla

#endif  // IDLA_IDLA_HPP
