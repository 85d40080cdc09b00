#ifndef IDLA_VERIFY_HPP
#define IDLA_VERIFY_HPP

#include "idla/ensemble.hpp"
#include "idla/lattice.hpp"
#include "idla/limits.hpp"

#include <json.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace idla {

/// Summary of one observable at one grid radius.
struct GridRow {
  std::string observable;
  int n = 0;
  int seeds = 0;
  EnsembleStats stats;
  double median = 0.0;
  double predicted = 0.0;
  double rel_error = 0.0;  ///< (median - predicted) / |predicted|
};

/// Per-run value (one CSV line).
struct RunRow {
  int n = 0;
  std::uint64_t seed = 0;
  std::string observable;
  double value = 0.0;
  double predicted = 0.0;
};

struct Check {
  std::string name;
  bool gate = true;  ///< false: reported only, does not affect the verdict
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  std::string theorem;
  int d = 0;
  std::uint64_t master_seed = 0;
  std::vector<GridRow> grid;
  std::vector<RunRow> runs;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  bool verdict() const;
  nlohmann::ordered_json to_json() const;
  void write_csv(std::ostream& os) const;
};

struct BulkOdometerOptions {
  int d = 2;
  std::vector<int> n_grid{32, 64, 128};
  std::vector<RealPoint> z_list;
  int seeds = 10;
  std::optional<double> final_band;  ///< gate on the final median |u/n^2 - f|
};

/// u_n(z)/n^2 against limit_f(||z||) along the grid; gates on the median
/// absolute error decreasing strictly and, when set, on the final band.
VerificationReport verify_bulk_odometer(EnsembleRunner& runner, const BulkOdometerOptions& opt);

struct NearOriginOptions {
  enum class Rule { FixedPoint, SqrtGrowing };
  int d = 3;
  std::vector<int> n_grid{16, 24, 32};
  Rule rule = Rule::FixedPoint;
  LatticePoint fixed_point;  ///< a, for Rule::FixedPoint (d >= 3)
  int seeds = 5;
  std::optional<double> final_band;  ///< gate on |final median ratio - 1|
  double green_radius = 20.0;        ///< extrapolation radius for G(0, a)
};

/// Near-origin ratios u(y_n) / prediction; gates on |median ratio - 1|
/// decreasing strictly along the grid (and the final band when set).
/// SqrtGrowing uses y_n = (floor(sqrt n), 0, ..., 0).
VerificationReport verify_near_origin(EnsembleRunner& runner, const NearOriginOptions& opt);

struct TimescaleOptions {
  int d = 2;
  std::vector<int> n_grid{32, 64, 128};
  int seeds = 5;
  double rel_tol = 0.10;  ///< gate on the final-n mean of sum(sigma)/n^{d+2}
};

VerificationReport verify_timescale(EnsembleRunner& runner, const TimescaleOptions& opt);

struct FluctuationOptions {
  int d = 2;
  std::vector<int> n_grid{32, 64, 128};
  int seeds = 10;
};

/// delta_I, delta_O and their normalizations; gates on lattice-granularity
/// lower bounds and on median delta/n decreasing strictly.
VerificationReport measure_fluctuations(EnsembleRunner& runner, const FluctuationOptions& opt);

}  // namespace idla

#endif  // IDLA_VERIFY_HPP
