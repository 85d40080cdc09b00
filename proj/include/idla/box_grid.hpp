#ifndef IDLA_BOX_GRID_HPP
#define IDLA_BOX_GRID_HPP

#include "idla/lattice.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace idla {

/// Dense field over the centered box [-R, R]^d, row-major with the last axis
/// fastest. Sites outside the box read as T{} through `value_or_default` and
/// throw through `at`.
template <typename T>
class BoxGrid {
public:
  BoxGrid() = default;

  BoxGrid(int d, std::int64_t radius, T fill = T{}) : d_(d), radius_(radius) {
    check_dimension(d);
    if (radius < 0) throw std::invalid_argument("box radius must be nonnegative");
    side_ = 2 * radius + 1;
    std::size_t n = 1;
    for (int a = d - 1; a >= 0; --a) {
      strides_[static_cast<std::size_t>(a)] = static_cast<std::ptrdiff_t>(n);
      n *= static_cast<std::size_t>(side_);
    }
    data_.assign(n, fill);
    for (int dir = 0; dir < 2 * d; ++dir) {
      const auto s = strides_[static_cast<std::size_t>(dir / 2)];
      offsets_[static_cast<std::size_t>(dir)] = (dir & 1) ? s : -s;
    }
  }

  int dim() const { return d_; }
  std::int64_t radius() const { return radius_; }
  std::size_t size() const { return data_.size(); }

  bool in_box(const LatticePoint& p) const {
    if (p.size() != d_) return false;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (p[i] < -radius_ || p[i] > radius_) return false;
    }
    return true;
  }

  std::size_t index(const LatticePoint& p) const {
    std::ptrdiff_t idx = 0;
    for (int a = 0; a < d_; ++a) idx += (p[a] + radius_) * strides_[static_cast<std::size_t>(a)];
    return static_cast<std::size_t>(idx);
  }

  std::size_t origin_index() const { return index(LatticePoint::Zero(d_)); }

  LatticePoint point(std::size_t idx) const {
    LatticePoint p(d_);
    auto rem = static_cast<std::ptrdiff_t>(idx);
    for (int a = 0; a < d_; ++a) {
      const auto s = strides_[static_cast<std::size_t>(a)];
      p[a] = rem / s - radius_;
      rem %= s;
    }
    return p;
  }

  /// Flat-index offset of the neighbor in direction dir (same order as `step`).
  std::ptrdiff_t offset(unsigned dir) const { return offsets_[dir]; }

  const T& at(const LatticePoint& p) const {
    if (!in_box(p)) throw FieldExtentError("site " + to_string(p) + " outside grid box");
    return data_[index(p)];
  }
  T& at(const LatticePoint& p) {
    if (!in_box(p)) throw FieldExtentError("site " + to_string(p) + " outside grid box");
    return data_[index(p)];
  }

  T value_or_default(const LatticePoint& p) const { return in_box(p) ? data_[index(p)] : T{}; }

  T operator()(const LatticePoint& p) const { return at(p); }

  T& operator[](std::size_t idx) { return data_[idx]; }
  const T& operator[](std::size_t idx) const { return data_[idx]; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  const std::vector<T>& values() const { return data_; }

  /// True when p lies within `margin` sites of the box faces.
  bool near_edge(const LatticePoint& p, std::int64_t margin) const {
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (p[i] > radius_ - margin || p[i] < -radius_ + margin) return true;
    }
    return false;
  }

  /// Returns a copy over a box of at least `new_radius`, preserving values.
  BoxGrid regrown(std::int64_t new_radius) const {
    BoxGrid out(d_, std::max(new_radius, radius_));
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[out.index(point(i))] = data_[i];
    return out;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < data_.size(); ++i) f(point(i), data_[i]);
  }

private:
  int d_ = 0;
  std::int64_t radius_ = 0;
  std::int64_t side_ = 0;
  std::array<std::ptrdiff_t, kMaxDim> strides_{};
  std::array<std::ptrdiff_t, 2 * kMaxDim> offsets_{};
  std::vector<T> data_;
};

}  // namespace idla

#endif  // IDLA_BOX_GRID_HPP
