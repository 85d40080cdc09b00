#ifndef IDLA_GREEN_HPP
#define IDLA_GREEN_HPP

#include "idla/box_grid.hpp"
#include "idla/lattice.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace idla {

/// The linear system behind a Green's function could not be solved.
class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bijection between the sites of a ball and matrix rows (lexicographic order).
class BallIndex {
public:
  BallIndex(double radius, int d);

  double radius() const { return ball_.radius(); }
  int dim() const { return ball_.dim(); }
  const Ball& ball() const { return ball_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(sites_.size()); }
  const std::vector<LatticePoint>& sites() const { return sites_; }
  const LatticePoint& site(Eigen::Index row) const { return sites_[static_cast<std::size_t>(row)]; }

  bool contains(const LatticePoint& p) const { return p.size() == dim() && ball_.contains(p); }
  std::optional<Eigen::Index> find(const LatticePoint& p) const;
  /// Row of p; throws FieldExtentError when p is outside the ball.
  Eigen::Index row(const LatticePoint& p) const;

private:
  Ball ball_;
  std::vector<LatticePoint> sites_;
  BoxGrid<std::int64_t> rows_;
};

/// I - P restricted to the ball, where P is the simple-random-walk transition
/// matrix. Symmetric positive definite because the walk is killed on exit.
template <typename Scalar = double>
Eigen::SparseMatrix<Scalar> killed_walk_generator(const BallIndex& index) {
  const int d = index.dim();
  const Scalar w = Scalar(1) / Scalar(2 * d);
  std::vector<Eigen::Triplet<Scalar>> trips;
  trips.reserve(static_cast<std::size_t>(index.size()) * static_cast<std::size_t>(2 * d + 1));
  for (Eigen::Index r = 0; r < index.size(); ++r) {
    trips.emplace_back(r, r, Scalar(1));
    for (unsigned dir = 0; dir < 2U * static_cast<unsigned>(d); ++dir) {
      if (auto c = index.find(step(index.site(r), dir))) trips.emplace_back(r, *c, -w);
    }
  }
  Eigen::SparseMatrix<Scalar> A(index.size(), index.size());
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

namespace detail {

/// Solves A x = b for the SPD killed-walk systems. Sparse Cholesky for planar
/// or small problems, conjugate gradients otherwise; both checked on the
/// residual.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> solve_spd(const Eigen::SparseMatrix<Scalar>& A,
                                                   const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
                                                   int d) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vector x;
  const bool direct = d <= 2 ? A.rows() <= 400'000 : A.rows() <= 20'000;
  if (direct) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<Scalar>> ldlt(A);
    if (ldlt.info() != Eigen::Success) throw SolverError("sparse factorization failed");
    x = ldlt.solve(b);
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<Scalar>, Eigen::Lower | Eigen::Upper> cg(A);
    cg.setTolerance(Scalar(1e-13));
    cg.setMaxIterations(20'000);
    x = cg.solve(b);
  }
  const Scalar bnorm = b.norm();
  const Scalar res = (A * x - b).norm();
  if (!(res <= Scalar(1e-11) * (bnorm > 0 ? bnorm : Scalar(1)))) {
    throw SolverError("killed-walk solve did not converge (relative residual " +
                      std::to_string(static_cast<double>(res / bnorm)) + ")");
  }
  return x;
}

}  // namespace detail

/// Dense stopped Green's function G_k(x, y) over the sites of B_k.
template <typename Scalar = double>
class GreensTable {
public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  GreensTable(BallIndex index, Matrix values) : index_(std::move(index)), values_(std::move(values)) {}

  double radius() const { return index_.radius(); }
  int dim() const { return index_.dim(); }
  const BallIndex& index() const { return index_; }
  const Matrix& values() const { return values_; }

  /// Zero when either point lies outside the ball.
  Scalar operator()(const LatticePoint& x, const LatticePoint& y) const {
    const auto rx = index_.find(x);
    const auto ry = index_.find(y);
    if (!rx || !ry) return Scalar(0);
    return values_(*rx, *ry);
  }

private:
  BallIndex index_;
  Matrix values_;
};

inline constexpr std::size_t kDenseSiteLimit = 20'000;

/// Solves (I - P_in) G = I densely.
template <typename Scalar = double>
GreensTable<Scalar> stopped_green_exact(double k, int d) {
  BallIndex index(k, d);
  if (static_cast<std::size_t>(index.size()) > kDenseSiteLimit) {
    throw std::invalid_argument("ball too large for a dense Green table; use stopped_green_column");
  }
  using Matrix = typename GreensTable<Scalar>::Matrix;
  const Matrix A = Matrix(killed_walk_generator<Scalar>(index));
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success) throw SolverError("killed-walk generator is not SPD");
  Matrix G = llt.solve(Matrix::Identity(index.size(), index.size()));
  return GreensTable<Scalar>(std::move(index), std::move(G));
}

/// One column y -> G_k(y, source) (equal to G_k(source, y) by symmetry).
template <typename Scalar = double>
struct GreenColumn {
  BallIndex index;
  LatticePoint source;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;

  Scalar operator()(const LatticePoint& y) const {
    const auto r = index.find(y);
    return r ? values(*r) : Scalar(0);
  }
};

template <typename Scalar = double>
GreenColumn<Scalar> stopped_green_column(double k, const LatticePoint& source, int d) {
  BallIndex index(k, d);
  const auto src = index.find(source);
  if (!src) throw std::invalid_argument("Green column source outside the ball");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> e = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(index.size());
  e(*src) = Scalar(1);
  auto x = detail::solve_spd<Scalar>(killed_walk_generator<Scalar>(index), e, d);
  return {std::move(index), source, std::move(x)};
}

/// Free Green's function G(0, .) for d >= 3 on B_K, by Richardson extrapolation
/// of the stopped columns at radii K and 2K against the K^{2-d} deficit.
/// Each stopped column is harmonic off the origin, and so is the combination.
class FreeGreenField {
public:
  FreeGreenField(int d, double inner_radius);

  int dim() const { return d_; }
  double domain_radius() const { return index_.radius(); }
  const BallIndex& index() const { return index_; }

  /// G(0, z); throws FieldExtentError outside B_K.
  double operator()(const LatticePoint& z) const;
  /// Size of the extrapolation step at the origin; an error scale, not a bound.
  double extrapolation_step() const { return step_; }

private:
  int d_;
  BallIndex index_;
  Eigen::VectorXd values_;
  double step_;
};

enum class GreenMode { ExactNumeric, Asymptotic };

/// G(0, z) for d >= 3. Exact-numeric mode builds a FreeGreenField with inner
/// radius `k` (0 picks max(20, 2||z|| + 2)).
double free_green(const LatticePoint& z, GreenMode mode, double k = 0.0);

/// Leading term of G_k(0, z): (2/omega_2) ln(k/||z||) for d = 2,
/// (2/((d-2) omega_d)) (||z||^{2-d} - k^{2-d}) for d >= 3.
double green_asymptotic(double k, const LatticePoint& z);

/// P_from(walk hits target before leaving B_k), by the Dirichlet problem
/// h(target) = 1, h = 0 off B_k, h harmonic elsewhere in B_k.
double hit_probability(double k, const LatticePoint& from, const LatticePoint& target);

/// The whole harmonic-measure field h over B_k for a fixed target.
Eigen::VectorXd hit_probability_field(const BallIndex& index, const LatticePoint& target);

/// Law of chi = number of visits to z by a walk from 0 stopped on leaving B_k:
/// P(chi = 0) = q0, P(chi = i) = (1 - q0) p^{i-1} (1 - p) for i >= 1.
struct ChiLaw {
  double q0 = 0;        ///< P(no visit before exit)
  double p = 0;         ///< return probability to z before exit
  double g_0z = 0;      ///< G_k(0, z)
  double g_zz = 0;      ///< G_k(z, z)
  double mean = 0;
  double variance = 0;

  double pmf(std::uint64_t i) const;
  /// P(chi >= i)
  double tail(std::uint64_t i) const;
};

/// q0 from an independent Dirichlet solve; G entries from the table.
ChiLaw chi_law(const GreensTable<double>& table, const LatticePoint& z);
/// Same law with G entries from a sparse column solve (for large balls).
ChiLaw chi_law(double k, const LatticePoint& z);

/// Alternative closed form for Var(chi) built from q0, G_k(0, z) and
/// G_k(z, z):  (1 - q0/G0z) G0z Gzz (2 + 1/(Gzz - 1)) - G0z^2.
/// Reported beside ChiLaw::variance, never used in its place.
double chi_variance_closed_form(const ChiLaw& law);
double chi_variance_closed_form(const GreensTable<double>& table, const LatticePoint& z);

}  // namespace idla

#endif  // IDLA_GREEN_HPP
