#ifndef IDLA_LATTICE_HPP
#define IDLA_LATTICE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace idla {

/// Largest lattice dimension supported by the fixed-capacity point type.
inline constexpr int kMaxDim = 6;

/// A site of Z^d. Fixed capacity, so no heap allocation per point.
using LatticePoint =
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

/// A point of R^d (macroscopic coordinates, e.g. z in the open unit ball).
using RealPoint = Eigen::VectorXd;

/// Raised when a site-indexed field is read outside its stored extent.
class FieldExtentError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

void check_dimension(int d);

LatticePoint origin(int d);

/// Builds a point from a coordinate list; the dimension is the list length.
LatticePoint make_point(std::initializer_list<std::int64_t> coords);
LatticePoint make_point(const std::vector<std::int64_t>& coords);

/// Exact ||p||^2. Accumulates in 128 bits and throws std::overflow_error if the
/// result does not fit in 64 bits.
std::int64_t squared_norm(const LatticePoint& p);

inline double norm(const LatticePoint& p) {
  return std::sqrt(static_cast<double>(squared_norm(p)));
}

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& p) const noexcept;
};

struct LatticePointEqual {
  bool operator()(const LatticePoint& a, const LatticePoint& b) const noexcept {
    return a.size() == b.size() && (a.size() == 0 || a == b);
  }
};

/// Strict weak ordering: dimension first, then lexicographic coordinates.
bool lexicographic_less(const LatticePoint& a, const LatticePoint& b);

using SiteSet = std::unordered_set<LatticePoint, LatticePointHash, LatticePointEqual>;

template <typename T>
using SiteMap = std::unordered_map<LatticePoint, T, LatticePointHash, LatticePointEqual>;

/// Neighbor p + step(dir), dir in [0, 2d): axis dir/2, minus before plus.
inline LatticePoint step(const LatticePoint& p, unsigned dir) {
  LatticePoint q = p;
  q[dir / 2] += (dir & 1U) ? 1 : -1;
  return q;
}

/// The 2d nearest neighbors of p, ordered by axis ascending, minus before plus:
/// p - e_0, p + e_0, p - e_1, p + e_1, ...
std::vector<LatticePoint> neighbors(const LatticePoint& p);

/// Closed Euclidean ball {p in Z^d : ||p|| <= radius}.
///
/// Membership compares the exact integer ||p||^2 against floor(radius^2), which
/// is equivalent to ||p||^2 <= radius^2 for any real radius.
class Ball {
public:
  Ball(double radius, int d);

  bool contains(const LatticePoint& p) const { return squared_norm(p) <= limit_; }
  double radius() const { return radius_; }
  int dim() const { return d_; }
  std::int64_t squared_radius_floor() const { return limit_; }
  /// Smallest r with every member inside [-r, r]^d.
  std::int64_t box_radius() const;

private:
  double radius_;
  int d_;
  std::int64_t limit_;
};

/// omega_d = pi^{d/2} / Gamma(d/2 + 1), the volume of the unit ball of R^d.
template <typename Scalar = double>
Scalar unit_ball_volume(int d) {
  check_dimension(d);
  using std::pow;
  using std::tgamma;
  return pow(std::numbers::pi_v<Scalar>, Scalar(d) / 2) / tgamma(Scalar(d) / 2 + 1);
}

/// All sites of the ball of radius r, each exactly once, in lexicographic order.
std::vector<LatticePoint> ball_sites(double r, int d);

/// Componentwise floor(n * z).
LatticePoint scale_point(const RealPoint& z, std::int64_t n);

/// Discrete Laplacian (1/2d) sum_{q~p} f(q) - f(p).
///
/// `f` is any callable LatticePoint -> Scalar; fields that do not cover p or one
/// of its neighbors are expected to throw FieldExtentError.
template <typename Field>
auto discrete_laplacian(const Field& f, const LatticePoint& p) {
  using Scalar = std::decay_t<decltype(f(p))>;
  const auto d = static_cast<unsigned>(p.size());
  Scalar acc{0};
  for (unsigned dir = 0; dir < 2 * d; ++dir) acc += f(step(p, dir));
  return acc / Scalar(2 * d) - f(p);
}

/// Sparse site-indexed field; reading a site that was never set throws.
template <typename Scalar>
class SiteField {
public:
  void set(const LatticePoint& p, Scalar v) { values_[p] = v; }
  bool contains(const LatticePoint& p) const { return values_.count(p) != 0; }
  std::size_t size() const { return values_.size(); }

  Scalar operator()(const LatticePoint& p) const {
    auto it = values_.find(p);
    if (it == values_.end()) throw FieldExtentError("site outside field extent");
    return it->second;
  }

private:
  SiteMap<Scalar> values_;
};

std::string to_string(const LatticePoint& p);

}  // namespace idla

#endif  // IDLA_LATTICE_HPP
