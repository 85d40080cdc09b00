#include "idla/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace idla {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string coordinate_header(int d, const std::string& extra) {
  std::string h;
  for (int i = 1; i <= d; ++i) {
    if (i > 1) h += ',';
    h += 'x' + std::to_string(i);
  }
  if (!extra.empty()) h += ',' + extra;
  return h;
}

namespace {

void write_coords(std::ostream& os, const LatticePoint& p) {
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (i) os << ',';
    os << p[i];
  }
}

}  // namespace

void write_cluster_csv(std::ostream& os, const Cluster& cluster) {
  os << coordinate_header(cluster.dim()) << '\n';
  for (const auto& p : cluster.insertion_order()) {
    write_coords(os, p);
    os << '\n';
  }
}

void write_odometer_csv(std::ostream& os, const OdometerField& field) {
  os << coordinate_header(field.dim(), "u") << '\n';
  for (const auto& [p, u] : field.entries()) {
    write_coords(os, p);
    os << ',' << u << '\n';
  }
}

nlohmann::ordered_json growth_record_json(const GrowthRecord& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["d"] = r.d;
  j["seed"] = r.seed;
  j["stream_id"] = r.stream_id;
  j["n_walkers"] = r.n_walkers;
  j["sigma_sum"] = r.sigma_sum;
  j["visit_total"] = r.visit_total;
  j["delta_inner"] = r.delta_inner;
  j["delta_outer"] = r.delta_outer;
  return j;
}

void write_field_csv(std::ostream& os, const BoxGrid<double>& field, const std::string& column) {
  os << coordinate_header(field.dim(), column) << '\n';
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] == 0.0) continue;
    write_coords(os, field.point(i));
    os << ',' << format_real(field[i]) << '\n';
  }
}

void write_green_row_csv(std::ostream& os, const BallIndex& index, const Eigen::VectorXd& row) {
  os << coordinate_header(index.dim(), "G") << '\n';
  for (Eigen::Index r = 0; r < index.size(); ++r) {
    write_coords(os, index.site(r));
    os << ',' << format_real(row(r)) << '\n';
  }
}

void write_heat_svg(std::ostream& os, const BoxGrid<double>& field, const std::string& title) {
  const auto R = field.radius();
  const std::int64_t side = 2 * R + 1;
  constexpr int cell = 4;
  double vmax = 0.0;
  for (double v : field.values()) vmax = std::max(vmax, v);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << side * cell << "\" height=\""
     << side * cell << "\">\n<title>" << title << "</title>\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  LatticePoint p = LatticePoint::Zero(field.dim());
  for (std::int64_t y = -R; y <= R; ++y) {
    for (std::int64_t x = -R; x <= R; ++x) {
      p[0] = x;
      p[1] = y;
      const double v = field.value_or_default(p);
      if (v <= 0.0) continue;
      const double t = vmax > 0 ? std::sqrt(v / vmax) : 0.0;
      const int red = static_cast<int>(std::lround(255 * t));
      const int blue = static_cast<int>(std::lround(255 * (1 - t)));
      os << "<rect x=\"" << (x + R) * cell << "\" y=\"" << (R - y) * cell << "\" width=\"" << cell
         << "\" height=\"" << cell << "\" fill=\"rgb(" << red << ",0," << blue << ")\"/>\n";
    }
  }
  os << "</svg>\n";
}

}  // namespace idla
