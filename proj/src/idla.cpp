#include "idla/idla.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace idla {

namespace {

constexpr std::int64_t kEdgeMargin = 2;

std::int64_t initial_box_radius(std::uint64_t expected_walkers, int d) {
  const double r = std::pow(static_cast<double>(expected_walkers) / unit_ball_volume(d), 1.0 / d);
  return std::max<std::int64_t>(4, static_cast<std::int64_t>(std::ceil(1.2 * r)) + 4);
}

std::int64_t min_vacant_in(const BoxGrid<std::uint8_t>& occ) {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (!occ[i]) best = std::min(best, squared_norm(occ.point(i)));
  }
  // The box keeps a vacant layer, so the minimum is always attained inside it.
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// Cluster

Cluster::Cluster(BoxGrid<std::uint8_t> occupancy, std::vector<LatticePoint> order)
    : occupancy_(std::move(occupancy)), order_(std::move(order)) {}

SiteSet Cluster::sites() const { return SiteSet(order_.begin(), order_.end()); }

std::int64_t Cluster::max_squared_norm() const {
  std::int64_t best = 0;
  for (const auto& p : order_) best = std::max(best, squared_norm(p));
  return best;
}

std::int64_t Cluster::min_vacant_squared_norm() const { return min_vacant_in(occupancy_); }

// ---------------------------------------------------------------------------
// OdometerField

OdometerField::OdometerField(BoxGrid<std::uint64_t> full, std::uint64_t n_walkers)
    : d_(full.dim()), n_walkers_(n_walkers), store_(std::move(full)) {}

OdometerField::OdometerField(SiteMap<std::uint64_t> listed, int d, std::uint64_t n_walkers)
    : d_(d), n_walkers_(n_walkers), store_(std::move(listed)) {}

bool OdometerField::is_tracked(const LatticePoint& p) const {
  if (p.size() != d_) return false;
  if (is_full_field()) return true;
  return std::get<SiteMap<std::uint64_t>>(store_).count(p) != 0;
}

std::uint64_t OdometerField::at(const LatticePoint& p) const {
  if (p.size() != d_) throw std::invalid_argument("odometer query dimension mismatch");
  if (const auto* g = grid()) return g->value_or_default(p);
  const auto& m = std::get<SiteMap<std::uint64_t>>(store_);
  auto it = m.find(p);
  if (it == m.end()) throw UntrackedSite("odometer site " + to_string(p) + " was not tracked");
  return it->second;
}

std::uint64_t OdometerField::total() const {
  std::uint64_t sum = 0;
  if (const auto* g = grid()) {
    for (auto v : g->values()) sum += v;
  } else {
    for (const auto& [p, v] : std::get<SiteMap<std::uint64_t>>(store_)) sum += v;
  }
  return sum;
}

std::vector<std::pair<LatticePoint, std::uint64_t>> OdometerField::entries() const {
  std::vector<std::pair<LatticePoint, std::uint64_t>> out;
  if (const auto* g = grid()) {
    for (std::size_t i = 0; i < g->size(); ++i) {
      if ((*g)[i]) out.emplace_back(g->point(i), (*g)[i]);
    }
    return out;  // box order is already lexicographic
  }
  for (const auto& kv : std::get<SiteMap<std::uint64_t>>(store_)) out.emplace_back(kv);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return lexicographic_less(a.first, b.first); });
  return out;
}

// ---------------------------------------------------------------------------
// GrowthProcess

GrowthProcess::GrowthProcess(int d, WalkRng rng, std::uint64_t expected_walkers,
                             std::uint64_t step_budget)
    : d_(d), rng_(rng), next_dir_(d), step_budget_(step_budget) {
  check_dimension(d);
  const auto R = initial_box_radius(expected_walkers, d);
  occupied_ = BoxGrid<std::uint8_t>(d, R);
  visits_ = BoxGrid<std::uint64_t>(d, R);
  const auto o = occupied_.origin_index();
  occupied_[o] = 1;
  visits_[o] = 1;  // walker 0 sits at the origin for t = 0
  order_.push_back(origin(d));
}

template <bool PowerOfTwo>
void GrowthProcess::release_walker() {
  std::uint8_t* occ = occupied_.data();
  std::uint64_t* cnt = visits_.data();
  std::ptrdiff_t off[2 * kMaxDim];
  for (unsigned dir = 0; dir < next_dir_.count(); ++dir) off[dir] = occupied_.offset(dir);

  auto idx = static_cast<std::ptrdiff_t>(occupied_.origin_index());
  ++cnt[idx];
  std::uint64_t steps = 0;
  for (;;) {
    unsigned dir;
    if constexpr (PowerOfTwo) {
      dir = next_dir_(rng_);
    } else {
      dir = rng_.uniform_below(next_dir_.count());
    }
    idx += off[dir];
    ++steps;
    ++cnt[idx];
    if (!occ[idx]) break;
    if (steps == step_budget_) throw StepBudgetExceeded(step_budget_);
  }
  occ[idx] = 1;
  sigma_.push_back(steps);
  sigma_sum_ += steps;
  const LatticePoint site = occupied_.point(static_cast<std::size_t>(idx));
  max_norm2_ = std::max(max_norm2_, squared_norm(site));
  order_.push_back(site);
  if (occupied_.near_edge(site, kEdgeMargin)) regrow();
}

void GrowthProcess::regrow() {
  const auto R = occupied_.radius();
  const auto next = R + std::max<std::int64_t>(4, R / 4);
  occupied_ = occupied_.regrown(next);
  visits_ = visits_.regrown(next);
}

void GrowthProcess::advance_to(std::uint64_t walkers) {
  const bool pow2 = (next_dir_.count() & (next_dir_.count() - 1)) == 0;
  sigma_.reserve(walkers);
  order_.reserve(walkers + 1);
  while (sigma_.size() < walkers) {
    if (pow2) {
      release_walker<true>();
    } else {
      release_walker<false>();
    }
  }
}

std::int64_t GrowthProcess::min_vacant_squared_norm() const { return min_vacant_in(occupied_); }

double GrowthProcess::delta_inner(double n) const {
  return n - std::sqrt(static_cast<double>(min_vacant_squared_norm()));
}

double GrowthProcess::delta_outer(double n) const {
  return std::sqrt(static_cast<double>(max_norm2_)) - n;
}

OdometerField GrowthProcess::odometer(const Tracking& track) const {
  if (track.mode == Tracking::Mode::FullField) return OdometerField(visits_, walkers());
  SiteMap<std::uint64_t> listed;
  for (const auto& p : track.sites) {
    if (p.size() != d_) throw std::invalid_argument("tracked site dimension mismatch");
    listed[p] = visits_.value_or_default(p);
  }
  return OdometerField(std::move(listed), d_, walkers());
}

GrowthRecord GrowthProcess::record(int n) const {
  GrowthRecord r;
  r.d = d_;
  r.n = n;
  r.seed = rng_.seed();
  r.stream_id = rng_.stream_id();
  r.n_walkers = walkers();
  r.sigma = sigma_;
  r.sigma_sum = sigma_sum_;
  r.visit_total = visit_total();
  if (n > 0) {
    r.delta_inner = delta_inner(n);
    r.delta_outer = delta_outer(n);
  } else {
    r.delta_inner = r.delta_outer = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

// ---------------------------------------------------------------------------

std::uint64_t walkers_for_radius(int n, int d) {
  if (n < 1) throw std::invalid_argument("radius n must be >= 1");
  return static_cast<std::uint64_t>(std::floor(unit_ball_volume(d) * std::pow(double(n), d)));
}

GrowthResult grow(std::uint64_t n_walkers, int d, WalkRng rng, const Tracking& track,
                  std::uint64_t step_budget) {
  GrowthProcess proc(d, rng, n_walkers, step_budget);
  proc.advance_to(n_walkers);
  return {proc.cluster(), proc.odometer(track), proc.record()};
}

GrowthResult grow_for_radius(int n, int d, WalkRng rng, const Tracking& track,
                             std::uint64_t step_budget) {
  const auto walkers = walkers_for_radius(n, d);
  GrowthProcess proc(d, rng, walkers, step_budget);
  proc.advance_to(walkers);
  return {proc.cluster(), proc.odometer(track), proc.record(n)};
}

std::uint64_t odometer_at(const OdometerField& field, const RealPoint& z, std::int64_t n) {
  return field.at(scale_point(z, n));
}

}  // namespace idla
