#ifndef IDLA_IO_HPP
#define IDLA_IO_HPP

#include "idla/box_grid.hpp"
#include "idla/green.hpp"
#include "idla/idla.hpp"
#include "idla/sandpile.hpp"

#include <json.hpp>

#include <ostream>
#include <string>

namespace idla {

/// 17 significant digits, round-trip safe; "nan"/"inf"/"-inf" for non-finite.
std::string format_real(double x);

/// Header x1..xd (plus extra columns), comma separated, LF line endings.
std::string coordinate_header(int d, const std::string& extra = {});

void write_cluster_csv(std::ostream& os, const Cluster& cluster);
void write_odometer_csv(std::ostream& os, const OdometerField& field);
nlohmann::ordered_json growth_record_json(const GrowthRecord& record);

/// Sites of the box with nonzero value, columns x1..xd,value.
void write_field_csv(std::ostream& os, const BoxGrid<double>& field, const std::string& column);

/// site coordinates and G_k(row, site) for every site of the table's ball.
void write_green_row_csv(std::ostream& os, const BallIndex& index, const Eigen::VectorXd& row);

/// Static heat map of a 2-d field (or the x_3 = ... = 0 slice in higher d).
void write_heat_svg(std::ostream& os, const BoxGrid<double>& field, const std::string& title);

}  // namespace idla

#endif  // IDLA_IO_HPP
