#pragma once

#include <array>
#include <span>
#include <vector>

namespace commlab {

struct JetLayout;

/// Truncated multivariate Taylor polynomial in up to three variables.
///
/// A Jet of order K carries every coefficient c_alpha with |alpha| <= K of the
/// expansion of a function around a base point, so D^alpha f = alpha! c_alpha.
/// Arithmetic is exact up to the truncation order.
class Jet {
 public:
  static constexpr int max_order = 4;

  Jet(int dim, int order, double constant = 0.0);
  static Jet variable(int dim, int order, int axis, double value);

  int dim() const;
  int order() const;
  double value() const { return coeffs_[0]; }
  double coefficient(const std::array<int, 3>& alpha) const;
  double derivative(const std::array<int, 3>& alpha) const;

  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(const Jet& other);
  Jet& operator+=(double s);
  Jet& operator*=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a += -s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator-(Jet a) { return a *= -1.0; }

  // f(x) for a scalar f given its derivatives f^(k)(x.value()), k = 0..order.
  friend Jet compose(const Jet& x, std::span<const double> derivatives);

 private:
  const JetLayout* layout_;
  std::vector<double> coeffs_;
};

Jet exp(const Jet& x);
Jet pow(const Jet& x, double p);
Jet sqrt(const Jet& x);

}  // namespace commlab
