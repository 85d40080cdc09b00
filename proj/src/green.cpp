#include "idla/green.hpp"

#include <algorithm>
#include <cmath>

namespace idla {

BallIndex::BallIndex(double radius, int d)
    : ball_(radius, d), sites_(ball_sites(radius, d)), rows_(d, ball_.box_radius(), -1) {
  for (std::size_t r = 0; r < sites_.size(); ++r) {
    rows_[rows_.index(sites_[r])] = static_cast<std::int64_t>(r);
  }
}

std::optional<Eigen::Index> BallIndex::find(const LatticePoint& p) const {
  if (!rows_.in_box(p)) return std::nullopt;
  const auto r = rows_[rows_.index(p)];
  if (r < 0) return std::nullopt;
  return static_cast<Eigen::Index>(r);
}

Eigen::Index BallIndex::row(const LatticePoint& p) const {
  if (auto r = find(p)) return *r;
  throw FieldExtentError("site " + to_string(p) + " outside ball of radius " +
                         std::to_string(radius()));
}

// ---------------------------------------------------------------------------

FreeGreenField::FreeGreenField(int d, double inner_radius)
    : d_(d), index_(inner_radius, d) {
  if (d < 3) throw std::domain_error("free Green's function needs d >= 3 (walk is recurrent)");
  if (!(inner_radius >= 1.0)) throw std::invalid_argument("extrapolation radius must be >= 1");
  const LatticePoint o = origin(d);
  const auto inner = stopped_green_column<double>(inner_radius, o, d);
  const auto outer = stopped_green_column<double>(2.0 * inner_radius, o, d);

  // G_K = G - c K^{2-d}  =>  G = (G_{2K} - r G_K) / (1 - r), r = 2^{2-d}
  const double ratio = std::pow(2.0, 2 - d);
  values_.resize(index_.size());
  for (Eigen::Index i = 0; i < index_.size(); ++i) {
    const auto& z = index_.site(i);
    values_(i) = (outer(z) - ratio * inner(z)) / (1.0 - ratio);
  }
  step_ = std::abs(values_(index_.row(o)) - outer(o));
}

double FreeGreenField::operator()(const LatticePoint& z) const { return values_(index_.row(z)); }

double free_green(const LatticePoint& z, GreenMode mode, double k) {
  const int d = static_cast<int>(z.size());
  if (d < 3) throw std::domain_error("free Green's function needs d >= 3 (walk is recurrent)");
  const double r = norm(z);
  if (mode == GreenMode::Asymptotic) {
    if (r == 0.0) throw std::domain_error("asymptotic Green's function is singular at z = 0");
    return 2.0 / ((d - 2) * unit_ball_volume(d)) * std::pow(r, 2 - d);
  }
  const double K = k > 0.0 ? k : std::max(20.0, std::ceil(2.0 * r) + 2.0);
  if (r > K) throw std::invalid_argument("extrapolation radius smaller than ||z||");
  return FreeGreenField(d, K)(z);
}

double green_asymptotic(double k, const LatticePoint& z) {
  const int d = static_cast<int>(z.size());
  check_dimension(d);
  const double r = norm(z);
  if (r == 0.0) throw std::domain_error("Green's function asymptotics are singular at z = 0");
  if (r > k) throw std::invalid_argument("green_asymptotic needs ||z|| <= k");
  const double omega = unit_ball_volume(d);
  if (d == 2) return 2.0 / omega * std::log(k / r);
  return 2.0 / ((d - 2) * omega) * (std::pow(r, 2 - d) - std::pow(k, 2 - d));
}

// ---------------------------------------------------------------------------

Eigen::VectorXd hit_probability_field(const BallIndex& index, const LatticePoint& target) {
  const int d = index.dim();
  Eigen::VectorXd h = Eigen::VectorXd::Zero(index.size());
  const auto t = index.find(target);
  if (!t) return h;

  // Unknowns: every ball site except the target, which is pinned to 1.
  const Eigen::Index n = index.size() - 1;
  auto compact = [&](Eigen::Index r) { return r < *t ? r : r - 1; };
  const double w = 1.0 / (2 * d);
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (Eigen::Index r = 0; r < index.size(); ++r) {
    if (r == *t) continue;
    const auto i = compact(r);
    trips.emplace_back(i, i, 1.0);
    for (unsigned dir = 0; dir < 2U * static_cast<unsigned>(d); ++dir) {
      const auto c = index.find(step(index.site(r), dir));
      if (!c) continue;
      if (*c == *t) {
        rhs(i) += w;
      } else {
        trips.emplace_back(i, compact(*c), -w);
      }
    }
  }
  if (n > 0) {
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trips.begin(), trips.end());
    const Eigen::VectorXd x = rhs.norm() > 0 ? detail::solve_spd<double>(A, rhs, d)
                                             : Eigen::VectorXd::Zero(n);
    for (Eigen::Index r = 0; r < index.size(); ++r) {
      if (r != *t) h(r) = x(compact(r));
    }
  }
  h(*t) = 1.0;
  return h;
}

double hit_probability(double k, const LatticePoint& from, const LatticePoint& target) {
  const int d = static_cast<int>(from.size());
  const BallIndex index(k, d);
  if (!index.contains(from)) throw std::invalid_argument("hit_probability: start outside the ball");
  if (LatticePointEqual{}(from, target)) return 1.0;
  if (!index.contains(target)) return 0.0;
  return hit_probability_field(index, target)(index.row(from));
}

// ---------------------------------------------------------------------------

double ChiLaw::pmf(std::uint64_t i) const {
  if (i == 0) return q0;
  return (1.0 - q0) * std::pow(p, static_cast<double>(i - 1)) * (1.0 - p);
}

double ChiLaw::tail(std::uint64_t i) const {
  if (i == 0) return 1.0;
  return (1.0 - q0) * std::pow(p, static_cast<double>(i - 1));
}

namespace {

ChiLaw make_chi_law(double q0, double g0z, double gzz) {
  ChiLaw law;
  law.q0 = q0;
  law.g_0z = g0z;
  law.g_zz = gzz;
  law.p = 1.0 - 1.0 / gzz;
  law.mean = g0z;
  // Bernoulli(1 - q0) times a geometric count on {1, 2, ...} with success 1 - p
  const double one_minus_p = 1.0 - law.p;
  const double second = (1.0 - q0) * (1.0 + law.p) / (one_minus_p * one_minus_p);
  const double first = (1.0 - q0) / one_minus_p;
  law.variance = second - first * first;
  return law;
}

void check_chi_site(const BallIndex& index, const LatticePoint& z) {
  if (!index.contains(z)) throw std::invalid_argument("chi law: site " + to_string(z) + " outside ball");
  if (squared_norm(z) == 0) throw std::invalid_argument("chi law: site must differ from the origin");
}

}  // namespace

ChiLaw chi_law(const GreensTable<double>& table, const LatticePoint& z) {
  check_chi_site(table.index(), z);
  const double q0 = 1.0 - hit_probability_field(table.index(), z)(table.index().row(origin(table.dim())));
  const LatticePoint o = origin(table.dim());
  return make_chi_law(q0, table(o, z), table(z, z));
}

ChiLaw chi_law(double k, const LatticePoint& z) {
  const int d = static_cast<int>(z.size());
  const BallIndex index(k, d);
  check_chi_site(index, z);
  const auto column = stopped_green_column<double>(k, z, d);
  const LatticePoint o = origin(d);
  const double q0 = 1.0 - hit_probability_field(index, z)(index.row(o));
  return make_chi_law(q0, column(o), column(z));
}

double chi_variance_closed_form(const ChiLaw& law) {
  if (!(law.g_zz > 1.0)) throw std::domain_error("chi variance expression needs G_k(z,z) > 1");
  const double g0 = law.g_0z;
  const double gz = law.g_zz;
  return (1.0 - law.q0 / g0) * g0 * gz * (2.0 + 1.0 / (gz - 1.0)) - g0 * g0;
}

double chi_variance_closed_form(const GreensTable<double>& table, const LatticePoint& z) {
  return chi_variance_closed_form(chi_law(table, z));
}

}  // namespace idla
