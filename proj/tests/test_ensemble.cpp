#include <doctest.h>

#include "idla/ensemble.hpp"
#include "idla/verify.hpp"

#include <atomic>

using namespace idla;

TEST_CASE("parallel_for visits every index once and rethrows") {
  for (unsigned threads : {1U, 3U, 8U}) {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(10, threads,
                                 [](std::size_t i) {
                                   if (i == 7) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
  }
}

TEST_CASE("snapshots equal direct growth of the same stream") {
  EnsembleRunner runner(19, 2);
  const std::vector<int> grid{6, 12, 9};
  const auto snaps = runner.run(2, grid, 3);
  REQUIRE(snaps.size() == 3);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    REQUIRE(snaps[g].size() == 3);
    for (std::uint64_t r = 0; r < 3; ++r) {
      const auto direct = grow_for_radius(grid[g], 2, WalkRng(19, r));
      const auto* s = snaps[g][r];
      CHECK(s->n == grid[g]);
      CHECK(s->stream_id == r);
      CHECK(s->sigma_sum == direct.record.sigma_sum);
      CHECK(s->delta_inner == direct.record.delta_inner);
      CHECK(s->delta_outer == direct.record.delta_outer);
      for (const auto& [p, u] : direct.odometer.entries()) CHECK(s->u(p) == u);
    }
  }
}

TEST_CASE("a smaller radius requested later replays the stream") {
  EnsembleRunner runner(23, 1);
  runner.run(2, {20}, 2);
  const auto later = runner.run(2, {8}, 2);
  const auto direct = grow_for_radius(8, 2, WalkRng(23, 1));
  CHECK(later[0][1]->sigma_sum == direct.record.sigma_sum);
}

TEST_CASE("reports do not depend on the thread count") {
  TimescaleOptions opt;
  opt.n_grid = {8, 16};
  opt.seeds = 4;
  EnsembleRunner one(5, 1), many(5, 4);
  const auto a = verify_timescale(one, opt).to_json().dump();
  const auto b = verify_timescale(many, opt).to_json().dump();
  CHECK(a == b);
}

TEST_CASE("runner input validation") {
  EnsembleRunner runner(1, 1);
  CHECK_THROWS(runner.run(2, {}, 1));
  CHECK_THROWS(runner.run(2, {4}, 0));
  CHECK_THROWS(runner.run(1, {4}, 1));
}
