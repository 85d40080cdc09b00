#include "idla/ensemble.hpp"

#include <algorithm>

namespace idla {

EnsembleRunner::EnsembleRunner(std::uint64_t master_seed, unsigned threads, std::uint64_t step_budget)
    : master_seed_(master_seed), threads_(std::max(1U, threads)), step_budget_(step_budget) {}

void EnsembleRunner::advance(Stream& s, int d, std::uint64_t stream_id,
                             const std::vector<int>& sorted_grid) {
  for (int n : sorted_grid) {
    if (s.snapshots.count(n)) continue;
    const auto walkers = walkers_for_radius(n, d);
    if (!s.process || s.process->walkers() > walkers) {
      // replay from the start; the realization is a function of (seed, stream)
      s.process = std::make_unique<GrowthProcess>(d, WalkRng(master_seed_, stream_id),
                                                  walkers_for_radius(sorted_grid.back(), d),
                                                  step_budget_);
    }
    s.process->advance_to(walkers);
    auto snap = std::make_unique<Snapshot>();
    snap->d = d;
    snap->n = n;
    snap->stream_id = stream_id;
    snap->n_walkers = walkers;
    snap->sigma_sum = s.process->sigma_sum();
    snap->visit_total = s.process->visit_total();
    snap->delta_inner = s.process->delta_inner(n);
    snap->delta_outer = s.process->delta_outer(n);
    snap->odometer = s.process->visit_counts();
    s.snapshots.emplace(n, std::move(snap));
  }
}

std::vector<std::vector<const Snapshot*>> EnsembleRunner::run(int d, const std::vector<int>& n_grid,
                                                              int seeds) {
  check_dimension(d);
  if (seeds < 1) throw std::invalid_argument("ensemble needs at least one seed");
  if (n_grid.empty()) throw std::invalid_argument("empty n grid");
  std::vector<int> sorted = n_grid;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.front() < 1) throw std::invalid_argument("grid radii must be >= 1");

  std::vector<Stream*> work;
  for (int r = 0; r < seeds; ++r) work.push_back(&streams_[{d, static_cast<std::uint64_t>(r)}]);

  parallel_for(work.size(), threads_, [&](std::size_t r) {
    advance(*work[r], d, static_cast<std::uint64_t>(r), sorted);
  });

  std::vector<std::vector<const Snapshot*>> out(n_grid.size());
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    for (int r = 0; r < seeds; ++r) out[g].push_back(work[static_cast<std::size_t>(r)]->snapshots.at(n_grid[g]).get());
  }
  return out;
}

}  // namespace idla
