#include "idla/random_walk.hpp"

namespace idla {

WalkOutcome walk_until_exit_ball(const LatticePoint& start, double radius, WalkRng& rng,
                                 const SiteSet* tracked, std::uint64_t step_budget) {
  const Ball ball(radius, static_cast<int>(start.size()));
  return walk_until_exit_set(
      start, [&](const LatticePoint& p) { return ball.contains(p); }, rng, tracked, step_budget);
}

bool hitting_before_exit(const LatticePoint& start, const LatticePoint& target, double radius,
                         WalkRng& rng, std::uint64_t step_budget) {
  const Ball ball(radius, static_cast<int>(start.size()));
  if (!ball.contains(start)) throw std::invalid_argument("walk must start inside the ball");
  if (LatticePointEqual{}(start, target)) return true;
  if (!ball.contains(target)) return false;

  const DirectionSampler next_dir(static_cast<int>(start.size()));
  LatticePoint pos = start;
  for (std::uint64_t t = 0;; ++t) {
    if (t == step_budget) throw StepBudgetExceeded(step_budget);
    const unsigned dir = next_dir(rng);
    pos[dir / 2] += (dir & 1U) ? 1 : -1;
    if (!ball.contains(pos)) return false;
    if (LatticePointEqual{}(pos, target)) return true;
  }
}

std::uint64_t visits_before_exit(const LatticePoint& start, const LatticePoint& target,
                                 double radius, WalkRng& rng, std::uint64_t step_budget) {
  const Ball ball(radius, static_cast<int>(start.size()));
  const DirectionSampler next_dir(static_cast<int>(start.size()));
  LatticePoint pos = start;
  std::uint64_t visits = LatticePointEqual{}(pos, target) ? 1 : 0;
  std::uint64_t t = 0;
  while (ball.contains(pos)) {
    if (t == step_budget) throw StepBudgetExceeded(step_budget);
    const unsigned dir = next_dir(rng);
    pos[dir / 2] += (dir & 1U) ? 1 : -1;
    ++t;
    if (LatticePointEqual{}(pos, target)) ++visits;
  }
  return visits;
}

}  // namespace idla
