#include "charvar/figures.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "charvar/trace_geometry.hpp"

namespace charvar {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_positive(int n, const char* what) {
  if (n < 1) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

FigureData tetrahedron_points(int samples) {
  require_positive(samples, "samples");
  FigureData out{{"x1", "x2", "x3"}, {}};
  out.rows.reserve(static_cast<std::size_t>(samples) * samples);
  for (int i = 0; i < samples; ++i) {
    const double u = kTwoPi * i / samples;
    for (int j = 0; j < samples; ++j) {
      const double v = kTwoPi * j / samples;
      out.rows.push_back({2.0 * std::cos(u), 2.0 * std::cos(v), 2.0 * std::cos(u + v)});
    }
  }
  return out;
}

FigureData foliation_points(int levels, int samples) {
  require_positive(levels, "levels");
  require_positive(samples, "samples");
  FigureData out{{"axis", "level", "x1", "x2", "x3"}, {}};
  for (int axis = 0; axis < 3; ++axis) {
    for (int k = 0; k < levels; ++k) {
      // Interior levels only; the end slices collapse to segments.
      const double level = -2.0 + 4.0 * (k + 1) / (levels + 1);
      const EllipseRegion region(level);
      for (int s = 0; s < samples; ++s) {
        const auto [p, q] = region.boundary_point(kTwoPi * s / samples);
        std::vector<double> row{static_cast<double>(axis), level, 0.0, 0.0, 0.0};
        // The form is symmetric, so the slice x_axis = level is the ellipse at
        // that level in the remaining two coordinates.
        row[2 + axis] = level;
        row[2 + (axis + 1) % 3] = p;
        row[2 + (axis + 2) % 3] = q;
        out.rows.push_back(std::move(row));
      }
    }
  }
  return out;
}

FigureData ellipse_points(double y, int samples) {
  require_positive(samples, "samples");
  const EllipseRegion region(y);
  FigureData out{{"y", "b", "c"}, {}};
  if (std::abs(y) < 2.0) {
    for (const auto& [b, c] : ellipse_tangency_points(y)) out.rows.push_back({y, b, c});
  }
  for (int s = 0; s < samples; ++s) {
    const auto [b, c] = region.boundary_point(kTwoPi * s / samples);
    out.rows.push_back({y, b, c});
  }
  return out;
}

FigureData ellipse_family_points(double y_lo, double y_hi, int levels, int samples) {
  require_positive(levels, "levels");
  if (!(y_lo <= y_hi)) throw std::invalid_argument("ellipse family: empty level range");
  FigureData out{{"y", "b", "c"}, {}};
  for (int k = 0; k < levels; ++k) {
    const double y = levels == 1 ? y_lo : std::lerp(y_lo, y_hi, static_cast<double>(k) / (levels - 1));
    auto one = ellipse_points(y, samples);
    out.rows.insert(out.rows.end(), one.rows.begin(), one.rows.end());
  }
  return out;
}

void write_csv(const FigureData& data, std::ostream& out) {
  for (std::size_t i = 0; i < data.columns.size(); ++i) {
    out << (i ? "," : "") << data.columns[i];
  }
  out << '\n' << std::setprecision(17);
  for (const auto& row : data.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

nlohmann::ordered_json to_json(const FigureData& data) {
  nlohmann::ordered_json j;
  j["columns"] = data.columns;
  j["rows"] = data.rows;
  return j;
}

}  // namespace charvar
