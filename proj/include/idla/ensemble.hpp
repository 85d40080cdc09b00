#ifndef IDLA_ENSEMBLE_HPP
#define IDLA_ENSEMBLE_HPP

#include "idla/box_grid.hpp"
#include "idla/idla.hpp"

#include <atomic>
#include <cstdint>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace idla {

/// Runs f(i) for i in [0, count) on `threads` workers. The first exception
/// thrown by any task is rethrown after all workers join.
template <typename F>
void parallel_for(std::size_t count, unsigned threads, F&& f) {
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex guard;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            f(i);
          } catch (...) {
            std::lock_guard lock(guard);
            if (!first) first = std::current_exception();
          }
        }
      });
    }
  }
  if (first) std::rethrow_exception(first);
}

/// Observation of one growth realization at the walker count floor(omega_d n^d).
struct Snapshot {
  int d = 0;
  int n = 0;
  std::uint64_t stream_id = 0;
  std::uint64_t n_walkers = 0;
  std::uint64_t sigma_sum = 0;
  std::uint64_t visit_total = 0;
  double delta_inner = 0.0;
  double delta_outer = 0.0;
  BoxGrid<std::uint64_t> odometer;

  std::uint64_t u(const LatticePoint& p) const { return odometer.value_or_default(p); }
};

/// Ensemble of growth runs keyed by (d, stream_id), all sharing one master
/// seed. Stream r is a single realization observed at every requested n, so
/// the n-grid follows one sample path per seed. Runs execute concurrently;
/// results depend only on (master seed, d, stream, n), never on thread count.
class EnsembleRunner {
public:
  EnsembleRunner(std::uint64_t master_seed, unsigned threads,
                 std::uint64_t step_budget = kDefaultStepBudget);

  std::uint64_t master_seed() const { return master_seed_; }
  unsigned threads() const { return threads_; }

  /// Snapshots indexed [grid position][stream] for streams 0..seeds-1.
  std::vector<std::vector<const Snapshot*>> run(int d, const std::vector<int>& n_grid, int seeds);

private:
  struct Stream {
    std::unique_ptr<GrowthProcess> process;
    std::map<int, std::unique_ptr<Snapshot>> snapshots;
  };

  void advance(Stream& s, int d, std::uint64_t stream_id, const std::vector<int>& sorted_grid);

  std::uint64_t master_seed_;
  unsigned threads_;
  std::uint64_t step_budget_;
  std::map<std::pair<int, std::uint64_t>, Stream> streams_;
};

}  // namespace idla

#endif  // IDLA_ENSEMBLE_HPP
