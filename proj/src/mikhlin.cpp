#include "commlab/mikhlin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "commlab/error.hpp"

namespace commlab {

namespace {

void check_shell_request(const SymbolSpec& a, const MultiIndex& alpha, double inner, double outer, int resolution) {
  if (!(outer > 0.0) || !(inner >= 0.0) || !(inner < outer)) throw InvalidArgument("shell radii must satisfy 0 <= inner < outer");
  if (resolution < 32) throw InvalidArgument("shell quadrature resolution must be at least 32");
  if (alpha.order() > a.kappa_max()) throw InvalidArgument("derivative order exceeds the symbol's kappa_max");
}

}  // namespace

double shell_integral(const SymbolSpec& a, const MultiIndex& alpha, double inner, double outer, int resolution) {
  check_shell_request(a, alpha, inner, outer, resolution);
  const int d = a.dim();
  const double h = 2.0 * outer / resolution;
  const long rows = d == 1 ? 1 : static_cast<long>(std::pow(resolution, d - 1));
  std::vector<double> row_sum(rows, 0.0);
  std::vector<long> row_count(rows, 0);
  bool failed = false;
  std::string failure;

#pragma omp parallel for schedule(dynamic, 4)
  for (long row = 0; row < rows; ++row) {
    try {
      Point c{0.0, 0.0, 0.0};
      long rest = row;
      for (int axis = d - 2; axis >= 0; --axis) {
        c[axis] = -outer + (rest % resolution + 0.5) * h;
        rest /= resolution;
      }
      double sum = 0.0;
      long count = 0;
      for (int m = 0; m < resolution; ++m) {
        c[d - 1] = -outer + (m + 0.5) * h;
        const double r = norm(c);
        if (r < inner || r > outer) continue;
        sum += std::norm(symbol_derivative(a, c, alpha));
        ++count;
      }
      row_sum[row] = sum;
      row_count[row] = count;
    } catch (const std::exception& e) {
#pragma omp critical(commlab_shell_failure)
      {
        failed = true;
        failure = e.what();
      }
    }
  }
  if (failed) throw NumericalError("shell quadrature failed: " + failure);

  double total = 0.0;
  long cells = 0;
  for (long row = 0; row < rows; ++row) {
    total += row_sum[row];
    cells += row_count[row];
  }
  if (cells == 0) throw NumericalError("shell quadrature: no cell centre falls inside the shell");
  return total * std::pow(h, d);
}

double annulus_integral(const SymbolSpec& a, const MultiIndex& alpha, double r, int resolution) {
  if (!(r > 0.0)) throw InvalidArgument("annulus radius must be positive");
  return shell_integral(a, alpha, 0.5 * r, r, resolution);
}

MikhlinReport mikhlin_constant(const SymbolSpec& a, int kappa, int j_min, int j_max, int resolution) {
  if (kappa < 0 || kappa > a.kappa_max()) throw InvalidArgument("kappa exceeds the symbol's kappa_max");
  if (j_min > j_max) throw InvalidArgument("empty j range");
  MikhlinReport report;
  report.dim = a.dim();
  report.kappa = kappa;
  for (const auto& alpha : multi_indices(a.dim(), kappa)) {
    for (int j = j_min; j <= j_max; ++j) {
      MikhlinEntry e;
      e.alpha = alpha;
      e.j = j;
      e.r = std::ldexp(1.0, j);
      try {
        e.integral = annulus_integral(a, alpha, e.r, resolution);
      } catch (const NumericalError& err) {
        throw NumericalError(std::string(err.what()) + " (alpha " + alpha.str(a.dim()) + ", j " + std::to_string(j) + ")");
      }
      e.ratio = std::sqrt(e.integral / std::pow(e.r, a.dim() - 2 * alpha.order()));
      report.k_hat = std::max(report.k_hat, e.ratio);
      report.entries.push_back(e);
    }
  }
  return report;
}

double DyadicScalingTable::spread(const MultiIndex& alpha) const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& row : rows) {
    if (!(row.alpha == alpha)) continue;
    lo = std::min(lo, row.bound_ratio);
    hi = std::max(hi, row.bound_ratio);
  }
  if (hi == 0.0) return 1.0;
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

std::vector<double> DyadicScalingTable::sup_over_alpha() const {
  std::vector<std::pair<int, double>> per_j;
  for (const auto& row : rows) {
    auto it = std::find_if(per_j.begin(), per_j.end(), [&](const auto& p) { return p.first == row.j; });
    if (it == per_j.end()) {
      per_j.emplace_back(row.j, row.bound_ratio);
    } else {
      it->second = std::max(it->second, row.bound_ratio);
    }
  }
  std::sort(per_j.begin(), per_j.end());
  std::vector<double> out;
  for (const auto& p : per_j) out.push_back(p.second);
  return out;
}

DyadicScalingTable dyadic_scaling_check(const SymbolSpec& a, const CutoffChi& chi, const LPPartition& part,
                                        int j_min, int j_max, int kappa, int resolution) {
  if (j_min < 0 || j_min > j_max) throw InvalidArgument("dyadic scaling needs 0 <= j_min <= j_max");
  if (kappa > a.kappa_max()) throw InvalidArgument("kappa exceeds the symbol's kappa_max");
  DyadicScalingTable table;
  table.dim = a.dim();
  const auto alphas = multi_indices(a.dim(), kappa);
  for (int j = j_min; j <= j_max; ++j) {
    const SymbolSpec piece = dyadic_piece(a, chi, part, j);
    for (const auto& alpha : alphas) {
      DyadicScalingRow row;
      row.j = j;
      row.alpha = alpha;
      try {
        row.lhs = shell_integral(piece, alpha, std::ldexp(1.0, j - 1), std::ldexp(1.0, j + 1), resolution);
      } catch (const NumericalError& err) {
        throw NumericalError(std::string(err.what()) + " (alpha " + alpha.str(a.dim()) + ", j " + std::to_string(j) + ")");
      }
      row.bound_ratio = row.lhs / std::pow(2.0, j * (a.dim() - 2 * alpha.order()));
      table.sup_ratio = std::max(table.sup_ratio, row.bound_ratio);
      table.rows.push_back(row);
    }
  }
  return table;
}

}  // namespace commlab
