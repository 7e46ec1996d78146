// Point lists for re-plotting the trace-coordinate pictures: the boundary
// surface of V_3, its foliations by ellipses, single ellipses and families.

#ifndef CHARVAR_FIGURES_HPP
#define CHARVAR_FIGURES_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace charvar {

struct FigureData {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Surface x1^2 + x2^2 + x3^2 - x1 x2 x3 = 4, sampled as
/// (2 cos u, 2 cos v, 2 cos(u + v)) on a samples x samples grid.
/// Columns: x1, x2, x3.
FigureData tetrahedron_points(int samples = 64);

/// Slices of the surface at `levels` values of each coordinate in turn.
/// Columns: axis (0, 1, 2), level, x1, x2, x3.
FigureData foliation_points(int levels = 9, int samples = 128);

/// Boundary of the region b^2 + c^2 + y^2 - b c y <= 4 at one level, with the
/// four tangency points first. Columns: y, b, c. Throws std::domain_error for
/// |y| > 2.
FigureData ellipse_points(double y, int samples = 256);

/// ellipse_points over `levels` evenly spaced values of [y_lo, y_hi].
FigureData ellipse_family_points(double y_lo = 0.0, double y_hi = 1.8, int levels = 10,
                                 int samples = 256);

void write_csv(const FigureData& data, std::ostream& out);
nlohmann::ordered_json to_json(const FigureData& data);

}  // namespace charvar

#endif  // CHARVAR_FIGURES_HPP
