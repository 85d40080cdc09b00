#ifndef IDLA_LIMITS_HPP
#define IDLA_LIMITS_HPP

#include "idla/lattice.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace idla {

/// Bulk odometer limit f(r) = lim u_n(z)/n^2 at r = ||z|| in (0, 1):
///   d = 2:  r^2 - 1 - 2 ln r
///   d >= 3: r^2 + 2/((d-2) r^{d-2}) - d/(d-2)
template <typename Scalar = double>
Scalar limit_f(Scalar r, int d) {
  using std::log;
  using std::pow;
  if (!(r > Scalar(0) && r < Scalar(1))) throw std::domain_error("limit_f needs r in (0, 1)");
  if (d < 2) throw std::domain_error("limit_f needs d >= 2");
  if (d == 2) return r * r - Scalar(1) - Scalar(2) * log(r);
  const Scalar dm2 = Scalar(d - 2);
  return r * r + Scalar(2) / (dm2 * pow(r, Scalar(d - 2))) - Scalar(d) / dm2;
}

/// Integrand whose integral over t in [r, 1] equals limit_f(r, d):
/// 4 t ln(t/r) for d = 2, (2d/(d-2)) (t^{d-1} r^{2-d} - t) for d >= 3.
double limit_integrand(double t, double r, int d);

struct IntegralCheck {
  double quadrature;
  double closed_form;
  double difference;
};

/// Adaptive Gauss-Kronrod quadrature of `limit_integrand` against limit_f.
IntegralCheck limit_integral_check(double r, int d);

/// d omega_d / (d + 2), the cluster time-scale constant.
double timescale_constant(int d);

/// d omega_d * int_0^1 x^{d-1} f(x) dx by quadrature (should equal timescale_constant).
double timescale_integral(int d);

/// Near-origin odometer predictions.
///  fixed point a (d >= 3):  omega_d n^d G(0, a), given G(0, a)
///  growing ||y_n||:        n^2 * 4 ln(n/||y||) (d = 2), n^2 (2/(d-2)) (||y||/n)^{2-d} (d >= 3)
double near_origin_fixed(double green_0a, int n, int d);
double near_origin_growing(double y_norm, int n, int d);

/// n^2 f(||y||/n), the bulk limit evaluated at the scaled point; reported next
/// to near_origin_growing as a cross-check of its constant.
double near_origin_bulk(double y_norm, int n, int d);

/// Streaming moments (Welford) with Chan's pairwise merge.
class EnsembleStats {
public:
  void add(double x);
  void merge(const EnsembleStats& other);

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  double m2() const { return m2_; }
  /// Unbiased sample variance; 0 for fewer than two samples.
  double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }
  double sd() const { return std::sqrt(variance()); }
  double min() const { return min_; }
  double max() const { return max_; }

private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
};

double median(std::vector<double> values);

}  // namespace idla

#endif  // IDLA_LIMITS_HPP
