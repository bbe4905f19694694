#include <algorithm>
#include <cmath>
#include <vector>

#include "commlab/error.hpp"
#include "commlab/quadrature.hpp"
#include "commlab/symbols.hpp"

namespace commlab {

namespace {

double raw_bump(double t) { return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

// Unit-mass bump on (-1, 1) and its distribution function, tabulated on a
// uniform mesh and interpolated with quintic Hermite polynomials using the
// exact first and second derivatives (the bump and its slope).
class MollifierTable {
 public:
  static constexpr int intervals = 2048;

  MollifierTable() {
    const auto& rule = gauss_legendre(20);
    const double h = 2.0 / intervals;
    cdf_.assign(intervals + 1, 0.0);
    double acc = 0.0;
    for (int i = 0; i < intervals; ++i) {
      const double a = -1.0 + i * h;
      double piece = 0.0;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        piece += rule.weights[q] * raw_bump(a + 0.5 * h * (rule.nodes[q] + 1.0));
      }
      acc += 0.5 * h * piece;
      cdf_[i + 1] = acc;
    }
    mass_ = acc;
    for (auto& v : cdf_) v /= mass_;
    cdf_[intervals] = 1.0;
  }

  double density(double t) const { return raw_bump(t) / mass_; }

  double slope(double t) const {
    if (std::abs(t) >= 1.0) return 0.0;
    const double q = 1.0 - t * t;
    return density(t) * (-2.0 * t / (q * q));
  }

  double cdf(double t) const {
    if (t <= -1.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double h = 2.0 / intervals;
    int i = static_cast<int>((t + 1.0) / h);
    if (i >= intervals) i = intervals - 1;
    const double t0 = -1.0 + i * h;
    const double t1 = t0 + h;
    const double s = (t - t0) / h;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
    const double h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
    const double h2 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
    const double h3 = 0.5 * (s3 - 2.0 * s4 + s5);
    const double h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
    const double h5 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
    return cdf_[i] * h0 + h * density(t0) * h1 + h * h * slope(t0) * h2 + cdf_[i + 1] * h5 + h * density(t1) * h4 +
           h * h * slope(t1) * h3;
  }

 private:
  std::vector<double> cdf_;
  double mass_ = 1.0;
};

const MollifierTable& table() {
  static const MollifierTable t;
  return t;
}

constexpr int kNodesPerAxis = 256;

// Mass that the tensor mollifier of width eps, centred at xi, puts inside the
// ball of radius R, over the trailing `k` coordinates of xi.
double mollified_ball(int k, double R, const double* xi, double eps) {
  const auto& t = table();
  if (k == 1) return t.cdf((xi[0] + R) / eps) - t.cdf((xi[0] - R) / eps);
  double rest = 0.0;
  for (int i = 0; i < k; ++i) rest += xi[i] * xi[i];
  rest = std::sqrt(rest);
  const double reach = eps * std::sqrt(static_cast<double>(k));
  if (rest + reach <= R) return 1.0;
  if (rest - reach >= R) return 0.0;

  const double lo = std::max(-eps, xi[0] - R);
  const double hi = std::min(eps, xi[0] + R);
  if (!(hi > lo)) return 0.0;
  // The chord half-length sqrt(R^2 - (xi0 - y)^2) has square-root endpoints
  // wherever the ball boundary cuts the mollifier support.
  const bool singular_lo = xi[0] - R > -eps;
  const bool singular_hi = xi[0] + R < eps;
  auto integrand = [&](double y) {
    const double dy = xi[0] - y;
    const double chord = std::sqrt(std::max(0.0, R * R - dy * dy));
    return t.density(y / eps) / eps * mollified_ball(k - 1, chord, xi + 1, eps);
  };
  return integrate(integrand, lo, hi, singular_lo, singular_hi, kNodesPerAxis);
}

}  // namespace

double mollifier(double t) { return table().density(t); }
double mollifier_cdf(double t) { return table().cdf(t); }

CutoffChi::CutoffChi(int dim, double eps) : dim_(dim), eps_(eps) {
  if (dim < 1 || dim > 3) throw InvalidArgument("cutoff dimension must be 1, 2 or 3");
  if (!(eps > 0.0 && eps <= 0.5)) throw InvalidArgument("cutoff width eps must lie in (0, 1/2]");
}

double CutoffChi::operator()(const Point& xi) const {
  const double v = mollified_ball(dim_, 2.0, xi.data(), eps_);
  return std::clamp(v, 0.0, 1.0);
}

SymbolSpec CutoffChi::as_symbol() const {
  const CutoffChi chi = *this;
  return SymbolSpec(dim_, SymbolKind::general, 4, "chi", [chi](const Point& xi) { return cplx{chi(xi), 0.0}; })
      .with_support_radius(2.0 + eps_ * std::sqrt(static_cast<double>(dim_)));
}

SymbolSpec CutoffChi::complement() const {
  const CutoffChi chi = *this;
  return SymbolSpec(dim_, SymbolKind::general, 4, "(1-chi)",
                    [chi](const Point& xi) { return cplx{1.0 - chi(xi), 0.0}; });
}

CutoffChi build_cutoff_chi(int dim, double eps) { return CutoffChi(dim, eps); }

}  // namespace commlab
