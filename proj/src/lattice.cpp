#include "idla/lattice.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace idla {

void check_dimension(int d) {
  if (d < 2 || d > kMaxDim) {
    throw std::invalid_argument("lattice dimension must be in [2, " + std::to_string(kMaxDim) +
                                "], got " + std::to_string(d));
  }
}

LatticePoint origin(int d) {
  check_dimension(d);
  return LatticePoint::Zero(d);
}

LatticePoint make_point(const std::vector<std::int64_t>& coords) {
  check_dimension(static_cast<int>(coords.size()));
  LatticePoint p(static_cast<Eigen::Index>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) p[static_cast<Eigen::Index>(i)] = coords[i];
  return p;
}

LatticePoint make_point(std::initializer_list<std::int64_t> coords) {
  return make_point(std::vector<std::int64_t>(coords));
}

std::int64_t squared_norm(const LatticePoint& p) {
  __int128 acc = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const __int128 c = p[i];
    acc += c * c;
  }
  if (acc > std::numeric_limits<std::int64_t>::max()) {
    throw std::overflow_error("squared norm exceeds 64-bit range");
  }
  return static_cast<std::int64_t>(acc);
}

std::size_t LatticePointHash::operator()(const LatticePoint& p) const noexcept {
  // splitmix64 finalizer folded over the coordinates
  std::uint64_t h = 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    h ^= static_cast<std::uint64_t>(p[i]) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9ULL;
    h = (h ^ (h >> 27)) * 0x94D049BB133111EBULL;
    h ^= h >> 31;
  }
  return static_cast<std::size_t>(h);
}

bool lexicographic_less(const LatticePoint& a, const LatticePoint& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

std::vector<LatticePoint> neighbors(const LatticePoint& p) {
  const auto d = static_cast<unsigned>(p.size());
  std::vector<LatticePoint> out;
  out.reserve(2 * d);
  for (unsigned dir = 0; dir < 2 * d; ++dir) out.push_back(step(p, dir));
  return out;
}

Ball::Ball(double radius, int d) : radius_(radius), d_(d) {
  check_dimension(d);
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("ball radius must be finite and nonnegative");
  }
  limit_ = static_cast<std::int64_t>(std::floor(radius * radius));
}

std::int64_t Ball::box_radius() const {
  auto r = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(limit_))));
  while ((r + 1) * (r + 1) <= limit_) ++r;
  while (r * r > limit_) --r;
  return r;
}

std::vector<LatticePoint> ball_sites(double r, int d) {
  const Ball ball(r, d);
  const std::int64_t R = ball.box_radius();
  std::vector<LatticePoint> out;
  LatticePoint p = LatticePoint::Constant(d, -R);
  // odometer-style enumeration of [-R, R]^d, last axis fastest
  for (;;) {
    if (ball.contains(p)) out.push_back(p);
    int axis = d - 1;
    while (axis >= 0 && p[axis] == R) {
      p[axis] = -R;
      --axis;
    }
    if (axis < 0) break;
    ++p[axis];
  }
  return out;
}

LatticePoint scale_point(const RealPoint& z, std::int64_t n) {
  check_dimension(static_cast<int>(z.size()));
  LatticePoint p(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    p[i] = static_cast<std::int64_t>(std::floor(static_cast<double>(n) * z[i]));
  }
  return p;
}

std::string to_string(const LatticePoint& p) {
  std::ostringstream os;
  os << '(';
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (i) os << ',';
    os << p[i];
  }
  os << ')';
  return os.str();
}

}  // namespace idla
