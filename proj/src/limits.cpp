#include "idla/limits.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>

namespace idla {

namespace {

template <typename F>
double integrate(F&& f, double a, double b) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, 1e-14, &err);
}

}  // namespace

double limit_integrand(double t, double r, int d) {
  if (d == 2) return 4.0 * t * std::log(t / r);
  const double dm2 = d - 2;
  return (2.0 * d / dm2) * (std::pow(t, d - 1) * std::pow(r, 2 - d) - t);
}

IntegralCheck limit_integral_check(double r, int d) {
  const double closed = limit_f(r, d);
  const double quad = integrate([&](double t) { return limit_integrand(t, r, d); }, r, 1.0);
  return {quad, closed, quad - closed};
}

double timescale_constant(int d) {
  if (d < 2) throw std::domain_error("time scale needs d >= 2");
  return d * unit_ball_volume(d) / (d + 2);
}

double timescale_integral(int d) {
  const double inner = integrate([&](double x) { return std::pow(x, d - 1) * limit_f(x, d); }, 0.0, 1.0);
  return d * unit_ball_volume(d) * inner;
}

double near_origin_fixed(double green_0a, int n, int d) {
  if (d < 3) throw std::domain_error("fixed-point near-origin prediction needs d >= 3");
  return unit_ball_volume(d) * std::pow(double(n), d) * green_0a;
}

double near_origin_growing(double y_norm, int n, int d) {
  if (!(y_norm > 0.0)) throw std::domain_error("near-origin prediction needs ||y|| > 0");
  const double nn = static_cast<double>(n);
  if (d == 2) return nn * nn * 4.0 * std::log(nn / y_norm);
  return nn * nn * (2.0 / (d - 2)) * std::pow(y_norm / nn, 2 - d);
}

double near_origin_bulk(double y_norm, int n, int d) {
  const double nn = static_cast<double>(n);
  return nn * nn * limit_f(y_norm / nn, d);
}

void EnsembleStats::add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
  min_ = std::min(min_, x);
  max_ = std::max(max_, x);
}

void EnsembleStats::merge(const EnsembleStats& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ = (na * mean_ + nb * other.mean_) / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  count_ += other.count_;
  min_ = std::min(min_, other.min_);
  max_ = std::max(max_, other.max_);
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

}  // namespace idla
