#include "commlab/jet.hpp"

#include <cmath>
#include <memory>

#include "commlab/error.hpp"

namespace commlab {

struct JetLayout {
  int dim = 0;
  int order = 0;
  std::vector<std::array<int, 3>> monomials;
  // index[a0][a1][a2], -1 when the monomial is not part of the layout
  std::array<std::array<std::array<int, Jet::max_order + 1>, Jet::max_order + 1>, Jet::max_order + 1> index{};
  struct Term {
    int lhs, rhs, out;
  };
  std::vector<Term> products;
};

namespace {

std::unique_ptr<JetLayout> build_layout(int dim, int order) {
  auto layout = std::make_unique<JetLayout>();
  layout->dim = dim;
  layout->order = order;
  for (auto& plane : layout->index)
    for (auto& row : plane) row.fill(-1);
  // graded order: total degree first, then lexicographic
  for (int deg = 0; deg <= order; ++deg) {
    for (int a0 = deg; a0 >= 0; --a0) {
      for (int a1 = deg - a0; a1 >= 0; --a1) {
        const int a2 = deg - a0 - a1;
        if (dim < 2 && a1 != 0) continue;
        if (dim < 3 && a2 != 0) continue;
        layout->index[a0][a1][a2] = static_cast<int>(layout->monomials.size());
        layout->monomials.push_back({a0, a1, a2});
      }
    }
  }
  const int count = static_cast<int>(layout->monomials.size());
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      const auto& p = layout->monomials[i];
      const auto& q = layout->monomials[j];
      const int deg = p[0] + q[0] + p[1] + q[1] + p[2] + q[2];
      if (deg > order) continue;
      layout->products.push_back({i, j, layout->index[p[0] + q[0]][p[1] + q[1]][p[2] + q[2]]});
    }
  }
  return layout;
}

const JetLayout* layout_for(int dim, int order) {
  static const auto table = [] {
    std::array<std::array<std::unique_ptr<JetLayout>, Jet::max_order + 1>, 4> t;
    for (int d = 1; d <= 3; ++d)
      for (int k = 0; k <= Jet::max_order; ++k) t[d][k] = build_layout(d, k);
    return t;
  }();
  if (dim < 1 || dim > 3 || order < 0 || order > Jet::max_order) {
    throw InvalidArgument("jet dimension or order out of range");
  }
  return table[dim][order].get();
}

}  // namespace

Jet::Jet(int dim, int order, double constant) : layout_(layout_for(dim, order)) {
  coeffs_.assign(layout_->monomials.size(), 0.0);
  coeffs_[0] = constant;
}

Jet Jet::variable(int dim, int order, int axis, double value) {
  Jet j(dim, order, value);
  if (order > 0) {
    std::array<int, 3> e{0, 0, 0};
    e[axis] = 1;
    j.coeffs_[j.layout_->index[e[0]][e[1]][e[2]]] = 1.0;
  }
  return j;
}

int Jet::dim() const { return layout_->dim; }
int Jet::order() const { return layout_->order; }

double Jet::coefficient(const std::array<int, 3>& alpha) const {
  if (alpha[0] + alpha[1] + alpha[2] > layout_->order) throw InvalidArgument("jet coefficient beyond truncation order");
  const int i = layout_->index[alpha[0]][alpha[1]][alpha[2]];
  return i < 0 ? 0.0 : coeffs_[i];
}

double Jet::derivative(const std::array<int, 3>& alpha) const {
  double factorial = 1.0;
  for (int a : alpha)
    for (int k = 2; k <= a; ++k) factorial *= k;
  return factorial * coefficient(alpha);
}

Jet& Jet::operator+=(const Jet& other) {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& other) {
  std::vector<double> out(coeffs_.size(), 0.0);
  for (const auto& t : layout_->products) out[t.out] += coeffs_[t.lhs] * other.coeffs_[t.rhs];
  coeffs_ = std::move(out);
  return *this;
}

Jet& Jet::operator+=(double s) {
  coeffs_[0] += s;
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Jet compose(const Jet& x, std::span<const double> derivatives) {
  const int order = x.order();
  if (static_cast<int>(derivatives.size()) < order + 1) throw InvalidArgument("compose needs order+1 derivatives");
  Jet h = x;
  h.coeffs_[0] = 0.0;
  Jet result(x.dim(), order, derivatives[0]);
  Jet power(x.dim(), order, 1.0);
  double factorial = 1.0;
  for (int k = 1; k <= order; ++k) {
    power *= h;
    factorial *= k;
    result += power * (derivatives[k] / factorial);
  }
  return result;
}

Jet exp(const Jet& x) {
  std::array<double, Jet::max_order + 1> d;
  d.fill(std::exp(x.value()));
  return compose(x, d);
}

Jet pow(const Jet& x, double p) {
  std::array<double, Jet::max_order + 1> d{};
  const double t = x.value();
  double falling = 1.0;
  for (int k = 0; k <= x.order(); ++k) {
    d[k] = falling * std::pow(t, p - k);
    falling *= (p - k);
  }
  return compose(x, std::span<const double>(d.data(), x.order() + 1));
}

Jet sqrt(const Jet& x) { return pow(x, 0.5); }

}  // namespace commlab
