#ifndef IDLA_RANDOM_WALK_HPP
#define IDLA_RANDOM_WALK_HPP

#include "idla/lattice.hpp"
#include "idla/rng.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace idla {

inline constexpr std::uint64_t kDefaultStepBudget = 10'000'000'000ULL;

/// A walk ran past its step budget; almost always a membership-predicate bug.
class StepBudgetExceeded : public std::runtime_error {
public:
  explicit StepBudgetExceeded(std::uint64_t budget)
      : std::runtime_error("random walk exceeded step budget of " + std::to_string(budget)),
        budget_(budget) {}
  std::uint64_t budget() const { return budget_; }

private:
  std::uint64_t budget_;
};

/// Realization of one stopped walk.
///
/// `visits` is present only when tracked sites were requested. A visit is a
/// time t in [0, path_length] with S(t) = y, so the landing site of the exit
/// step is counted too when it is tracked.
struct WalkOutcome {
  std::uint64_t path_length = 0;
  LatticePoint exit_site;
  std::optional<SiteMap<std::uint64_t>> visits;
};

/// Simple random walk from `start` until the first position where `inside`
/// is false. A start outside the region stops at t = 0.
template <typename Inside>
WalkOutcome walk_until_exit_set(const LatticePoint& start, Inside&& inside, WalkRng& rng,
                                const SiteSet* tracked = nullptr,
                                std::uint64_t step_budget = kDefaultStepBudget) {
  WalkOutcome out;
  const DirectionSampler next_dir(static_cast<int>(start.size()));
  if (tracked) {
    out.visits.emplace();
    for (const auto& y : *tracked) (*out.visits)[y] = 0;
  }
  auto record = [&](const LatticePoint& p) {
    if (tracked) {
      auto it = out.visits->find(p);
      if (it != out.visits->end()) ++it->second;
    }
  };

  LatticePoint pos = start;
  record(pos);
  while (inside(pos)) {
    if (out.path_length == step_budget) throw StepBudgetExceeded(step_budget);
    const unsigned dir = next_dir(rng);
    pos[dir / 2] += (dir & 1U) ? 1 : -1;
    ++out.path_length;
    record(pos);
  }
  out.exit_site = pos;
  return out;
}

/// Walk until the first exit from the closed ball of the given radius.
WalkOutcome walk_until_exit_ball(const LatticePoint& start, double radius, WalkRng& rng,
                                 const SiteSet* tracked = nullptr,
                                 std::uint64_t step_budget = kDefaultStepBudget);

/// True iff the walk reaches `target` strictly before leaving the ball.
/// Hitting time counts t = 0, so start == target is an immediate hit.
bool hitting_before_exit(const LatticePoint& start, const LatticePoint& target, double radius,
                         WalkRng& rng, std::uint64_t step_budget = kDefaultStepBudget);

/// Number of visits to `target` in t = 0..exit by a walk from `start` stopped
/// on leaving the ball (one sample of the visit-count variable).
std::uint64_t visits_before_exit(const LatticePoint& start, const LatticePoint& target,
                                 double radius, WalkRng& rng,
                                 std::uint64_t step_budget = kDefaultStepBudget);

}  // namespace idla

#endif  // IDLA_RANDOM_WALK_HPP
