#pragma once

// Independent reference computations for the tests. None of these call the
// library's transforms or quadrature rules.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "commlab/grid.hpp"

namespace oracle {

using commlab::cplx;
using commlab::Grid;
using commlab::Point;
inline constexpr double pi = std::numbers::pi;

// dx^d sum_m u(x_m) exp(-2 pi i x_m . xi) at one frequency.
inline cplx dft_at(const Grid& g, const std::vector<cplx>& u, const Point& xi) {
  cplx acc{0.0, 0.0};
  for (std::size_t m = 0; m < g.size(); ++m) {
    const Point x = g.x(m);
    acc += u[m] * std::polar(1.0, -2.0 * pi * (x[0] * xi[0] + x[1] * xi[1] + x[2] * xi[2]));
  }
  return acc * std::pow(g.dx(), g.dim());
}

// Matrix of the forward transform, rows indexed by frequency, columns by space.
inline Eigen::MatrixXcd dft_matrix(const Grid& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXcd f(n, n);
  const double vol = std::pow(g.dx(), g.dim());
  for (Eigen::Index k = 0; k < n; ++k) {
    const Point xi = g.xi(k);
    for (Eigen::Index m = 0; m < n; ++m) {
      const Point x = g.x(m);
      f(k, m) = vol * std::polar(1.0, -2.0 * pi * (x[0] * xi[0] + x[1] * xi[1] + x[2] * xi[2]));
    }
  }
  return f;
}

// Brute-force commutator F^-1 diag(a) F diag(b) - diag(b) F^-1 diag(a) F.
inline Eigen::MatrixXcd commutator_matrix(const Grid& g, const std::vector<cplx>& symbol, const std::vector<cplx>& b) {
  const Eigen::MatrixXcd f = dft_matrix(g);
  // the inverse transform is the adjoint scaled by dxi^d / dx^d
  const Eigen::MatrixXcd finv = f.adjoint() * (std::pow(1.0 / (2.0 * g.half_width()), g.dim()) / std::pow(g.dx(), g.dim()));
  Eigen::VectorXcd av(symbol.size());
  Eigen::VectorXcd bv(b.size());
  for (std::size_t i = 0; i < symbol.size(); ++i) av[i] = symbol[i];
  for (std::size_t i = 0; i < b.size(); ++i) bv[i] = b[i];
  const Eigen::MatrixXcd a = finv * av.asDiagonal() * f;
  return a * bv.asDiagonal() - bv.asDiagonal() * a;
}

// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double raw_bump(double t) { return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

// 1-d cutoff: int 1_{|xi - y| < 2} eps^-1 omega(y / eps) dy by Simpson.
inline double chi_1d(double xi, double eps) {
  const double mass = simpson(raw_bump, -1.0, 1.0, 20000);
  // |xi - eps t| < 2  <=>  t in ((xi - 2)/eps, (xi + 2)/eps)
  const double lo = std::max(-1.0, (xi - 2.0) / eps);
  const double hi = std::min(1.0, (xi + 2.0) / eps);
  return hi > lo ? simpson(raw_bump, lo, hi, 20000) / mass : 0.0;
}

inline double lp_bump(double r) {
  const double s = std::log2(r);
  return std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0;
}

inline std::vector<cplx> random_field(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<cplx> v(n);
  for (auto& z : v) z = cplx{normal(rng), normal(rng)};
  return v;
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const std::vector<cplx>& a) {
  double m = 0.0;
  for (const auto& z : a) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace oracle
