#pragma once

#include <vector>

namespace commlab {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1]. Rules are computed once and cached.
const QuadratureRule& gauss_legendre(int n);

// Integral of f over [a, b] with an n-point rule. An endpoint flagged singular
// is treated as a square-root endpoint: the substitution y = e +- (b-a) s^2
// makes the integrand smooth in s. Both flags set splits the interval in half.
template <class F>
double integrate(F&& f, double a, double b, bool singular_a, bool singular_b, int n) {
  if (!(b > a)) return 0.0;
  const auto& rule = gauss_legendre(n);
  if (singular_a && singular_b) {
    const double mid = 0.5 * (a + b);
    return integrate(f, a, mid, true, false, n / 2) + integrate(f, mid, b, false, true, n / 2);
  }
  const double len = b - a;
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double s = 0.5 * (rule.nodes[i] + 1.0);
    const double w = 0.5 * rule.weights[i];
    if (singular_a) {
      sum += w * f(a + len * s * s) * 2.0 * len * s;
    } else if (singular_b) {
      sum += w * f(b - len * s * s) * 2.0 * len * s;
    } else {
      sum += w * f(a + len * s) * len;
    }
  }
  return sum;
}

}  // namespace commlab
