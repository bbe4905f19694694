#include "commlab/reference.hpp"

#include <cmath>
#include <numbers>

#include "commlab/error.hpp"

namespace commlab::reference {

namespace {

SampledField naive_dft(const SampledField& in, Side out_side, double sign, double scale) {
  const Grid& g = in.grid;
  SampledField out(g, out_side);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Point xi = g.xi(k);
    const Point xk = g.x(k);
    cplx acc{0.0, 0.0};
    for (std::size_t m = 0; m < g.size(); ++m) {
      const double phase = out_side == Side::frequency ? dot(g.x(m), xi) : dot(xk, g.xi(m));
      acc += in.values[m] * std::polar(1.0, sign * 2.0 * std::numbers::pi * phase);
    }
    out.values[k] = acc * scale;
  }
  return out;
}

}  // namespace

SampledField naive_forward_ft(const SampledField& u) {
  require_side(u, Side::spatial, "naive_forward_ft");
  return naive_dft(u, Side::frequency, -1.0, u.grid.cell_volume());
}

SampledField naive_inverse_ft(const SampledField& v) {
  require_side(v, Side::frequency, "naive_inverse_ft");
  return naive_dft(v, Side::spatial, 1.0, v.grid.frequency_cell_volume());
}

std::vector<cplx> sample_symbol(const Grid& grid, const SymbolSpec& a, bool sphere) {
  std::vector<cplx> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Point xi = grid.xi(i);
    const double r = norm(xi);
    if (sphere && r > 0.0) xi = Point{xi[0] / r, xi[1] / r, xi[2] / r};
    out[i] = a(xi);
  }
  return out;
}

double shell_integral(const SymbolSpec& a, const MultiIndex& alpha, double inner, double outer, int resolution) {
  const int d = a.dim();
  const double h = 2.0 * outer / resolution;
  std::size_t cells = 1;
  for (int i = 0; i < d; ++i) cells *= static_cast<std::size_t>(resolution);
  double total = 0.0;
  std::size_t hits = 0;
  for (std::size_t c = 0; c < cells; ++c) {
    Point p{0.0, 0.0, 0.0};
    std::size_t rest = c;
    for (int axis = d - 1; axis >= 0; --axis) {
      p[axis] = -outer + (static_cast<double>(rest % resolution) + 0.5) * h;
      rest /= resolution;
    }
    const double r = norm(p);
    if (r < inner || r > outer) continue;
    total += std::norm(symbol_derivative(a, p, alpha));
    ++hits;
  }
  if (hits == 0) throw NumericalError("shell quadrature: no cell centre falls inside the shell");
  return total * std::pow(h, d);
}

SampledField truncated_kernel_apply(const KernelField& k, const SampledField& b, double s, const SampledField& u) {
  const Grid& g = u.grid;
  const int n = g.n();
  SampledField out(g, Side::spatial);
  for (std::size_t xi = 0; xi < g.size(); ++xi) {
    const auto ix = g.unravel(xi);
    cplx acc{0.0, 0.0};
    for (std::size_t yi = 0; yi < g.size(); ++yi) {
      const auto iy = g.unravel(yi);
      std::array<int, 3> kk{0, 0, 0};
      Point z{0.0, 0.0, 0.0};
      for (int a = 0; a < g.dim(); ++a) {
        // wrap the displacement into [-N/2, N/2)
        int delta = ix[a] - iy[a];
        while (delta < -n / 2) delta += n;
        while (delta >= n / 2) delta -= n;
        z[a] = delta * g.dx();
        kk[a] = delta + n / 2;
      }
      if (norm(z) <= s) continue;
      acc += k.samples.values[g.ravel(kk)] * (b.values[xi] - b.values[yi]) * u.values[yi];
    }
    out.values[xi] = acc * g.cell_volume();
  }
  return out;
}

DenseMatrix materialize(const OperatorHandle& op) {
  const Grid& g = op.grid();
  const auto n = static_cast<Eigen::Index>(g.size());
  DenseMatrix m(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    SampledField e(g, Side::spatial);
    e.values[col] = 1.0;
    const SampledField image = op.apply(e);
    for (Eigen::Index row = 0; row < n; ++row) m(row, col) = image.values[row];
  }
  return m;
}

SampledField cyclic_convolution(const KernelField& k, const SampledField& u) {
  const Grid& g = u.grid;
  const int n = g.n();
  SampledField out(g, Side::spatial);
  for (std::size_t xi = 0; xi < g.size(); ++xi) {
    const auto ix = g.unravel(xi);
    cplx acc{0.0, 0.0};
    for (std::size_t yi = 0; yi < g.size(); ++yi) {
      const auto iy = g.unravel(yi);
      std::array<int, 3> kk{0, 0, 0};
      for (int a = 0; a < g.dim(); ++a) kk[a] = ((ix[a] - iy[a] + n / 2) % n + n) % n;
      acc += k.samples.values[g.ravel(kk)] * u.values[yi];
    }
    out.values[xi] = acc * g.cell_volume();
  }
  return out;
}

}  // namespace commlab::reference
