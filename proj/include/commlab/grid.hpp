#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace commlab {

using cplx = std::complex<double>;

// Points in R^d, d <= 3. Unused trailing coordinates are kept at zero so that
// norms and dot products can always run over all three slots.
using Point = std::array<double, 3>;

inline double norm(const Point& p) {
  return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
}
inline double dot(const Point& a, const Point& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

enum class Side { spatial, frequency };

/// Periodic box [-L, L)^d with N samples per axis.
///
/// Spatial lattice:   x_m = -L + m dx,   m in {0..N-1}^d,     dx  = 2L/N
/// Frequency lattice: xi_k = k dxi,      k in {-N/2..N/2-1}^d, dxi = 1/(2L)
///
/// Both lattices are stored in lexicographic order with the last axis fastest;
/// frequency index c in [0, N) per axis stands for k = c - N/2.
class Grid {
 public:
  Grid(int dim, int n, double half_width);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double half_width() const { return half_width_; }
  double dx() const { return 2.0 * half_width_ / n_; }
  double dxi() const { return 1.0 / (2.0 * half_width_); }
  std::size_t size() const { return size_; }

  // dx^d and dxi^d.
  double cell_volume() const;
  double frequency_cell_volume() const;

  // Largest |xi_k| component reachable on the positive side, (N/2 - 1) dxi.
  double max_frequency() const { return (n_ / 2 - 1) * dxi(); }

  std::array<int, 3> unravel(std::size_t index) const;
  std::size_t ravel(const std::array<int, 3>& idx) const;

  Point x(std::size_t index) const;
  Point xi(std::size_t index) const;

  bool operator==(const Grid& other) const = default;

 private:
  int dim_;
  int n_;
  double half_width_;
  std::size_t size_;
};

Grid make_grid(int dim, int n, double half_width);

struct SampledField {
  Grid grid;
  Side side;
  std::vector<cplx> values;

  SampledField(Grid g, Side s);
  SampledField(Grid g, Side s, std::vector<cplx> v);

  std::size_t size() const { return values.size(); }
  cplx& operator[](std::size_t i) { return values[i]; }
  const cplx& operator[](std::size_t i) const { return values[i]; }
};

// Axis-aligned half-open box [lo, hi) used as a measurement region.
struct Box {
  Point lo{};
  Point hi{};
};

template <class F>
SampledField sample_spatial(const Grid& grid, F&& f) {
  SampledField out(grid, Side::spatial);
  for (std::size_t i = 0; i < grid.size(); ++i) out.values[i] = f(grid.x(i));
  return out;
}

template <class F>
SampledField sample_frequency(const Grid& grid, F&& f) {
  SampledField out(grid, Side::frequency);
  for (std::size_t i = 0; i < grid.size(); ++i) out.values[i] = f(grid.xi(i));
  return out;
}

// F(u)(xi) = int u(x) exp(-2 pi i x.xi) dx, discretized on the lattice.
SampledField forward_ft(const SampledField& u);
SampledField inverse_ft(const SampledField& v);

// Midpoint-rule L^p(V) norm. p = infinity gives the max over lattice points in
// V. Throws when V contains no lattice point.
double lp_norm(const SampledField& u, double p, const std::optional<Box>& region = std::nullopt);

SampledField pointwise_mul(const SampledField& u, const SampledField& w);

// Mismatch guards shared by the operator modules.
void require_same_grid(const SampledField& a, const SampledField& b, const char* what);
void require_side(const SampledField& a, Side side, const char* what);

// Lattice points of the region, in lexicographic order.
std::vector<std::size_t> lattice_points_in(const Grid& grid, const Box& region);

}  // namespace commlab
