#pragma once

#include <vector>

#include "commlab/symbols.hpp"

namespace commlab {

// kappa = floor(d/2) + 1
inline int default_kappa(int dim) { return dim / 2 + 1; }

struct MikhlinEntry {
  MultiIndex alpha;
  int j = 0;
  double r = 0.0;
  double integral = 0.0;
  double ratio = 0.0;  // sqrt(integral / r^(d - 2|alpha|))
};

struct MikhlinReport {
  int dim = 0;
  int kappa = 0;
  std::vector<MikhlinEntry> entries;
  double k_hat = 0.0;
};

/// Midpoint rule for int_{inner <= |xi| <= outer} |D^alpha a|^2 over a uniform
/// `resolution`^d lattice of cells on [-outer, outer]^d; a cell counts when its
/// centre lies in the shell. Row partial sums are reduced in lattice order, so
/// the result does not depend on the thread count.
double shell_integral(const SymbolSpec& a, const MultiIndex& alpha, double inner, double outer, int resolution);

// The r/2 <= |xi| <= r annulus.
double annulus_integral(const SymbolSpec& a, const MultiIndex& alpha, double r, int resolution);

MikhlinReport mikhlin_constant(const SymbolSpec& a, int kappa, int j_min, int j_max, int resolution);

struct DyadicScalingRow {
  int j = 0;
  MultiIndex alpha;
  double lhs = 0.0;          // int |D^alpha a_j|^2
  double bound_ratio = 0.0;  // lhs / 2^(j (d - 2|alpha|))
};

struct DyadicScalingTable {
  int dim = 0;
  std::vector<DyadicScalingRow> rows;
  double sup_ratio = 0.0;

  // max_j / min_j of bound_ratio for one multi-index (infinity if some ratio vanishes).
  double spread(const MultiIndex& alpha) const;
  // Per-j supremum over multi-indices, in increasing j.
  std::vector<double> sup_over_alpha() const;
};

DyadicScalingTable dyadic_scaling_check(const SymbolSpec& a, const CutoffChi& chi, const LPPartition& part,
                                        int j_min, int j_max, int kappa, int resolution);

}  // namespace commlab
