#pragma once

#include <string_view>

#include "commlab/grid.hpp"

namespace commlab {

// smooth: exp(1 - 1/(1 - rho^2)), C-infinity with compact support.
// c1:     (1 - rho^2)^2, continuously differentiable.
// Both peak at 1 and vanish for rho = |x - center| / width >= 1.
enum class BumpShape { smooth, c1 };

struct Bump {
  BumpShape shape = BumpShape::smooth;
  Point center{0.0, 0.0, 0.0};
  double width = 1.0;
  double amplitude = 1.0;

  double operator()(const Point& x) const;
  // True when the support sits inside [-L, L)^d with the given margin per axis.
  bool fits_in_box(int dim, double half_width, double margin) const;
};

BumpShape parse_bump_shape(std::string_view name);
SampledField sample_bump(const Grid& grid, const Bump& bump);

}  // namespace commlab
