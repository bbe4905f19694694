#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "commlab/grid.hpp"

namespace commlab {

struct MultiIndex {
  std::array<int, 3> a{0, 0, 0};

  int order() const { return a[0] + a[1] + a[2]; }
  // "1-0" style, first `dim` components.
  std::string str(int dim) const;
  bool operator==(const MultiIndex&) const = default;
};

// All multi-indices of order <= max_order in `dim` variables, graded then lexicographic.
std::vector<MultiIndex> multi_indices(int dim, int max_order);

enum class SymbolKind { homogeneous, general, tabulated };

/// A multiplier symbol a(xi) on R^d.
///
/// Homogeneous (degree-zero) symbols take the value 0 at the origin. `deriv`,
/// when present, returns exact partial derivatives up to order kappa_max.
class SymbolSpec {
 public:
  using EvalFn = std::function<cplx(const Point&)>;
  using DerivFn = std::function<cplx(const Point&, const MultiIndex&)>;

  SymbolSpec(int dim, SymbolKind kind, int kappa_max, std::string name, EvalFn eval, DerivFn deriv = {});

  cplx operator()(const Point& xi) const { return eval_(xi); }

  int dim() const { return dim_; }
  SymbolKind kind() const { return kind_; }
  int kappa_max() const { return kappa_max_; }
  const std::string& name() const { return name_; }
  bool has_derivative() const { return static_cast<bool>(deriv_); }
  cplx analytic_derivative(const Point& xi, const MultiIndex& alpha) const { return deriv_(xi, alpha); }

  // Radius of a ball known to contain the support, if any.
  const std::optional<double>& support_radius() const { return support_radius_; }
  SymbolSpec& with_support_radius(double r) {
    support_radius_ = r;
    return *this;
  }

 private:
  int dim_;
  SymbolKind kind_;
  int kappa_max_;
  std::string name_;
  EvalFn eval_;
  DerivFn deriv_;
  std::optional<double> support_radius_;
};

SymbolSpec zero_symbol(int dim);
SymbolSpec constant_symbol(int dim, cplx c);
// xi_i / |xi|, component index 1-based.
SymbolSpec riesz_symbol(int dim, int component);
// d=1: sign(xi)^l; d=2: cos(l * arg xi); d=3: zonal Legendre P_l(xi_3/|xi|).
SymbolSpec sphere_harmonic_symbol(int dim, int degree);
// exp(-pi |xi|^2 / width^2)
SymbolSpec gaussian_symbol(int dim, double width = 1.0);
SymbolSpec sign_symbol();

struct TabulatedRow {
  Point xi{};
  cplx value;
};
// Values on a uniform lattice; evaluation returns the nearest lattice sample
// (zero outside the table).
SymbolSpec tabulated_symbol(int dim, const std::vector<TabulatedRow>& rows);
SymbolSpec load_tabulated_symbol(int dim, const std::string& csv_path);

SymbolSpec builtin_symbol(std::string_view name, int dim, const std::vector<double>& params = {});
// Parses "name" or "name(p1, p2)"; "tabulated(path)" loads a CSV table.
SymbolSpec parse_symbol(std::string_view text, int dim);

// Pointwise product with Leibniz-rule derivatives when both factors have them.
SymbolSpec multiply(const SymbolSpec& a, const SymbolSpec& b);

/// Mollified ball indicator chi = 1_{B(0,2)} * eps^-d prod omega(x_i / eps),
/// omega the unit-mass bump exp(-1/(1-t^2)) on (-1, 1).
class CutoffChi {
 public:
  CutoffChi(int dim, double eps);

  int dim() const { return dim_; }
  double eps() const { return eps_; }
  double operator()(const Point& xi) const;

  // chi and 1 - chi as symbols (no analytic derivatives).
  SymbolSpec as_symbol() const;
  SymbolSpec complement() const;

 private:
  int dim_;
  double eps_;
};

CutoffChi build_cutoff_chi(int dim, double eps = 0.25);

// The normalized 1-d mollifier and its distribution function, exposed for tests.
double mollifier(double t);
double mollifier_cdf(double t);

/// Littlewood-Paley bump Theta(xi) = exp(-1/(1 - log2|xi|^2)) on 1/2 < |xi| < 2
/// and theta = Theta / sum_j Theta(2^-j xi).
class LPPartition {
 public:
  LPPartition(int j_min, int j_max);

  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  static double Theta(const Point& xi);
  static double theta(const Point& xi);
  // sum_{j=j_min}^{j_max} theta(2^-j xi)
  double partition_sum(const Point& xi) const;
  // Radii between which partition_sum is identically one.
  double shell_inner() const;
  double shell_outer() const;

 private:
  int j_min_;
  int j_max_;
};

LPPartition build_lp_partition(int j_min, int j_max);

// a_j(xi) = a(xi) (1 - chi(xi)) theta(2^-j xi), supported in 2^(j-1) <= |xi| <= 2^(j+1).
SymbolSpec dyadic_piece(const SymbolSpec& a, const CutoffChi& chi, const LPPartition& part, int j);

struct DerivativeEstimate {
  cplx value;
  double error_estimate = 0.0;  // zero for analytic derivatives
};

// D^alpha a(xi): analytic when available, otherwise Richardson-extrapolated
// nested central differences with step max(|xi|, 1) * 1e-3.
cplx symbol_derivative(const SymbolSpec& a, const Point& xi, const MultiIndex& alpha);
DerivativeEstimate symbol_derivative_estimate(const SymbolSpec& a, const Point& xi, const MultiIndex& alpha);

// Plain nested central difference with step h, no extrapolation.
cplx central_difference(const SymbolSpec& a, const Point& xi, const MultiIndex& alpha, double h);

// Checks degree-zero homogeneity on a fixed set of sample directions.
bool is_degree_zero_homogeneous(const SymbolSpec& a, double tol = 1e-12);

}  // namespace commlab
