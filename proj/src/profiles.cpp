#include "commlab/profiles.hpp"

#include <cmath>
#include <string>

#include "commlab/error.hpp"

namespace commlab {

double Bump::operator()(const Point& x) const {
  const Point dx{x[0] - center[0], x[1] - center[1], x[2] - center[2]};
  const double rho2 = dot(dx, dx) / (width * width);
  if (rho2 >= 1.0) return 0.0;
  const double q = 1.0 - rho2;
  switch (shape) {
    case BumpShape::smooth:
      return amplitude * std::exp(1.0 - 1.0 / q);
    case BumpShape::c1:
      return amplitude * q * q;
  }
  return 0.0;
}

bool Bump::fits_in_box(int dim, double half_width, double margin) const {
  for (int a = 0; a < dim; ++a) {
    if (center[a] - width < -half_width + margin) return false;
    if (center[a] + width > half_width - margin) return false;
  }
  return true;
}

BumpShape parse_bump_shape(std::string_view name) {
  if (name == "smooth") return BumpShape::smooth;
  if (name == "c1") return BumpShape::c1;
  throw InvalidArgument("unknown bump shape: " + std::string(name));
}

SampledField sample_bump(const Grid& grid, const Bump& bump) {
  if (!(bump.width > 0.0)) throw InvalidArgument("bump width must be positive");
  return sample_spatial(grid, [&](const Point& x) { return cplx{bump(x), 0.0}; });
}

}  // namespace commlab
