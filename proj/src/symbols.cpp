#include "commlab/symbols.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "commlab/error.hpp"
#include "commlab/jet.hpp"

namespace commlab {

std::string MultiIndex::str(int dim) const {
  std::string s;
  for (int i = 0; i < dim; ++i) {
    if (i) s += '-';
    s += std::to_string(a[i]);
  }
  return s;
}

std::vector<MultiIndex> multi_indices(int dim, int max_order) {
  std::vector<MultiIndex> out;
  for (int n = 0; n <= max_order; ++n) {
    for (int a0 = n; a0 >= 0; --a0) {
      for (int a1 = n - a0; a1 >= 0; --a1) {
        const int a2 = n - a0 - a1;
        if ((dim < 2 && a1) || (dim < 3 && a2)) continue;
        out.push_back(MultiIndex{{a0, a1, a2}});
      }
    }
  }
  return out;
}

SymbolSpec::SymbolSpec(int dim, SymbolKind kind, int kappa_max, std::string name, EvalFn eval, DerivFn deriv)
    : dim_(dim), kind_(kind), kappa_max_(kappa_max), name_(std::move(name)), eval_(std::move(eval)),
      deriv_(std::move(deriv)) {
  if (dim < 1 || dim > 3) throw InvalidArgument("symbol dimension must be 1, 2 or 3");
}

namespace {

constexpr int kJetKappa = Jet::max_order;

using JetBody = std::function<Jet(const std::array<Jet, 3>&)>;

// Wraps a jet-valued formula into an exact derivative callback.
SymbolSpec::DerivFn jet_derivative(int dim, JetBody body) {
  return [dim, body = std::move(body)](const Point& xi, const MultiIndex& alpha) -> cplx {
    const int order = alpha.order();
    std::array<Jet, 3> vars{Jet(dim, order), Jet(dim, order), Jet(dim, order)};
    for (int i = 0; i < dim; ++i) vars[i] = Jet::variable(dim, order, i, xi[i]);
    return body(vars).derivative(alpha.a);
  };
}

Jet squared_norm(const std::array<Jet, 3>& v, int dim) {
  Jet r2 = v[0] * v[0];
  for (int i = 1; i < dim; ++i) r2 += v[i] * v[i];
  return r2;
}

}  // namespace

SymbolSpec zero_symbol(int dim) {
  return SymbolSpec(
      dim, SymbolKind::homogeneous, kJetKappa, "zero", [](const Point&) { return cplx{0.0, 0.0}; },
      [](const Point&, const MultiIndex&) { return cplx{0.0, 0.0}; });
}

SymbolSpec constant_symbol(int dim, cplx c) {
  std::ostringstream name;
  name << "constant(" << c.real() << ")";
  return SymbolSpec(
      dim, SymbolKind::general, kJetKappa, name.str(), [c](const Point&) { return c; },
      [c](const Point&, const MultiIndex& alpha) { return alpha.order() == 0 ? c : cplx{0.0, 0.0}; });
}

SymbolSpec riesz_symbol(int dim, int component) {
  if (component < 1 || component > dim) throw InvalidArgument("riesz component out of range");
  const int c = component - 1;
  return SymbolSpec(
      dim, SymbolKind::homogeneous, kJetKappa, "riesz(" + std::to_string(component) + ")",
      [c](const Point& xi) {
        const double r = norm(xi);
        return r == 0.0 ? cplx{0.0, 0.0} : cplx{xi[c] / r, 0.0};
      },
      jet_derivative(dim, [dim, c](const std::array<Jet, 3>& v) {
        return v[c] * pow(squared_norm(v, dim), -0.5);
      }));
}

SymbolSpec sphere_harmonic_symbol(int dim, int degree) {
  if (degree < 0) throw InvalidArgument("sphere-harmonic degree must be nonnegative");
  const std::string name = "sphere-harmonic(" + std::to_string(degree) + ")";
  if (dim == 1) {
    return SymbolSpec(
        1, SymbolKind::homogeneous, kJetKappa, name,
        [degree](const Point& xi) {
          if (xi[0] == 0.0) return cplx{0.0, 0.0};
          return cplx{(degree % 2 == 1 && xi[0] < 0.0) ? -1.0 : 1.0, 0.0};
        },
        [degree](const Point& xi, const MultiIndex& alpha) {
          if (alpha.order() > 0 || xi[0] == 0.0) return cplx{0.0, 0.0};
          return cplx{(degree % 2 == 1 && xi[0] < 0.0) ? -1.0 : 1.0, 0.0};
        });
  }
  // Chebyshev (d=2) or Legendre (d=3) recurrence in t = xi_last / |xi|.
  auto recurrence = [dim, degree](auto t, auto one) {
    auto prev = one;
    auto cur = t;
    if (degree == 0) return prev;
    for (int k = 1; k < degree; ++k) {
      auto next = dim == 2 ? (2.0 * t * cur - prev) : (((2.0 * k + 1.0) * t * cur - k * prev) * (1.0 / (k + 1.0)));
      prev = cur;
      cur = next;
    }
    return cur;
  };
  const int axis = dim == 2 ? 0 : 2;
  return SymbolSpec(
      dim, SymbolKind::homogeneous, kJetKappa, name,
      [recurrence, axis](const Point& xi) {
        const double r = norm(xi);
        if (r == 0.0) return cplx{0.0, 0.0};
        return cplx{recurrence(xi[axis] / r, 1.0), 0.0};
      },
      jet_derivative(dim, [dim, axis, recurrence](const std::array<Jet, 3>& v) {
        const Jet t = v[axis] * pow(squared_norm(v, dim), -0.5);
        return recurrence(t, Jet(dim, t.order(), 1.0));
      }));
}

SymbolSpec gaussian_symbol(int dim, double width) {
  if (!(width > 0.0)) throw InvalidArgument("gaussian width must be positive");
  const double scale = -std::numbers::pi / (width * width);
  std::ostringstream name;
  name << "gaussian";
  if (width != 1.0) name << "(" << width << ")";
  return SymbolSpec(
      dim, SymbolKind::general, kJetKappa, name.str(),
      [scale](const Point& xi) { return cplx{std::exp(scale * dot(xi, xi)), 0.0}; },
      jet_derivative(dim, [dim, scale](const std::array<Jet, 3>& v) { return exp(squared_norm(v, dim) * scale); }));
}

SymbolSpec sign_symbol() {
  SymbolSpec s = sphere_harmonic_symbol(1, 1);
  return SymbolSpec(
      1, SymbolKind::homogeneous, kJetKappa, "sign-1d", [s](const Point& xi) { return s(xi); },
      [s](const Point& xi, const MultiIndex& alpha) { return s.analytic_derivative(xi, alpha); });
}

SymbolSpec tabulated_symbol(int dim, const std::vector<TabulatedRow>& rows) {
  if (rows.empty()) throw InvalidArgument("tabulated symbol needs at least one row");
  struct Table {
    int dim;
    std::array<double, 3> origin{};
    std::array<double, 3> spacing{1.0, 1.0, 1.0};
    std::array<int, 3> count{1, 1, 1};
    std::vector<cplx> values;
    std::vector<char> present;
  };
  auto table = std::make_shared<Table>();
  table->dim = dim;
  for (int a = 0; a < dim; ++a) {
    std::vector<double> coords;
    for (const auto& row : rows) coords.push_back(row.xi[a]);
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end(),
                             [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x)); }),
                 coords.end());
    table->origin[a] = coords.front();
    table->count[a] = static_cast<int>(coords.size());
    if (coords.size() > 1) {
      double h = coords[1] - coords[0];
      for (std::size_t i = 2; i < coords.size(); ++i) h = std::min(h, coords[i] - coords[i - 1]);
      table->spacing[a] = h;
      table->count[a] = static_cast<int>(std::lround((coords.back() - coords.front()) / h)) + 1;
    }
  }
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(table->count[a]);
  table->values.assign(total, cplx{0.0, 0.0});
  table->present.assign(total, 0);

  auto locate = [table](const Point& xi, bool strict) -> long {
    long index = 0;
    for (int a = 0; a < table->dim; ++a) {
      const double u = (xi[a] - table->origin[a]) / table->spacing[a];
      const long k = std::lround(u);
      if (strict && std::abs(u - k) > 1e-6) return -2;
      if (k < 0 || k >= table->count[a]) return -1;
      index = index * table->count[a] + k;
    }
    return index;
  };
  for (const auto& row : rows) {
    const long i = locate(row.xi, true);
    if (i < 0) throw InvalidArgument("tabulated symbol rows do not lie on a uniform lattice");
    table->values[i] = row.value;
    table->present[i] = 1;
  }
  return SymbolSpec(dim, SymbolKind::tabulated, 0, "tabulated", [table, locate](const Point& xi) {
    const long i = locate(xi, false);
    return (i < 0 || !table->present[i]) ? cplx{0.0, 0.0} : table->values[i];
  });
}

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_double(const std::string& s, double& out) {
  const auto t = trim(s);
  if (t.empty()) return false;
  auto res = std::from_chars(t.data(), t.data() + t.size(), out);
  return res.ec == std::errc() && res.ptr == t.data() + t.size();
}

}  // namespace

SymbolSpec load_tabulated_symbol(int dim, const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw InvalidArgument("cannot open tabulated symbol file: " + csv_path);
  std::vector<TabulatedRow> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto cols = split(t, ',');
    std::vector<double> nums;
    bool numeric = true;
    for (const auto& c : cols) {
      double v;
      if (!parse_double(c, v)) {
        numeric = false;
        break;
      }
      nums.push_back(v);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw InvalidArgument("tabulated symbol: non-numeric row in " + csv_path);
    }
    first = false;
    if (static_cast<int>(nums.size()) != dim + 2) {
      throw InvalidArgument("tabulated symbol: expected " + std::to_string(dim + 2) + " columns");
    }
    TabulatedRow row;
    for (int a = 0; a < dim; ++a) row.xi[a] = nums[a];
    row.value = cplx{nums[dim], nums[dim + 1]};
    rows.push_back(row);
  }
  return tabulated_symbol(dim, rows);
}

SymbolSpec builtin_symbol(std::string_view name, int dim, const std::vector<double>& params) {
  auto param = [&](std::size_t i, double fallback) { return i < params.size() ? params[i] : fallback; };
  auto as_int = [](double v, const char* what) {
    if (v != std::floor(v)) throw InvalidArgument(std::string(what) + " parameter must be an integer");
    return static_cast<int>(v);
  };
  if (name == "zero") return zero_symbol(dim);
  if (name == "constant") return constant_symbol(dim, cplx{param(0, 1.0), param(1, 0.0)});
  if (name == "riesz") return riesz_symbol(dim, as_int(param(0, 1.0), "riesz"));
  if (name == "sphere-harmonic") return sphere_harmonic_symbol(dim, as_int(param(0, 1.0), "sphere-harmonic"));
  if (name == "gaussian") return gaussian_symbol(dim, param(0, 1.0));
  if (name == "sign-1d") {
    if (dim != 1) throw InvalidArgument("sign-1d is only defined for d = 1");
    return sign_symbol();
  }
  throw InvalidArgument("unknown symbol: " + std::string(name));
}

SymbolSpec parse_symbol(std::string_view text, int dim) {
  const std::string t = trim(text);
  const auto open = t.find('(');
  if (open == std::string::npos) return builtin_symbol(t, dim);
  if (t.back() != ')') throw InvalidArgument("malformed symbol expression: " + t);
  const std::string name = trim(std::string_view(t).substr(0, open));
  const std::string inner = t.substr(open + 1, t.size() - open - 2);
  if (name == "tabulated") return load_tabulated_symbol(dim, trim(inner));
  std::vector<double> params;
  if (!trim(inner).empty()) {
    for (const auto& p : split(inner, ',')) {
      double v;
      if (!parse_double(p, v)) throw InvalidArgument("bad symbol parameter: " + p);
      params.push_back(v);
    }
  }
  return builtin_symbol(name, dim, params);
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

SymbolSpec multiply(const SymbolSpec& a, const SymbolSpec& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("multiply: symbol dimensions differ");
  const SymbolKind kind = (a.kind() == SymbolKind::homogeneous && b.kind() == SymbolKind::homogeneous)
                              ? SymbolKind::homogeneous
                              : SymbolKind::general;
  SymbolSpec::DerivFn deriv;
  if (a.has_derivative() && b.has_derivative()) {
    deriv = [a, b](const Point& xi, const MultiIndex& alpha) {
      cplx sum{0.0, 0.0};
      for (int b0 = 0; b0 <= alpha.a[0]; ++b0)
        for (int b1 = 0; b1 <= alpha.a[1]; ++b1)
          for (int b2 = 0; b2 <= alpha.a[2]; ++b2) {
            const MultiIndex beta{{b0, b1, b2}};
            const MultiIndex rest{{alpha.a[0] - b0, alpha.a[1] - b1, alpha.a[2] - b2}};
            const double c = binomial(alpha.a[0], b0) * binomial(alpha.a[1], b1) * binomial(alpha.a[2], b2);
            sum += c * a.analytic_derivative(xi, beta) * b.analytic_derivative(xi, rest);
          }
      return sum;
    };
  }
  SymbolSpec out(
      a.dim(), kind, std::min(a.kappa_max(), b.kappa_max()), a.name() + "*" + b.name(),
      [a, b](const Point& xi) { return a(xi) * b(xi); }, std::move(deriv));
  if (a.support_radius() || b.support_radius()) {
    out.with_support_radius(std::min(a.support_radius().value_or(INFINITY), b.support_radius().value_or(INFINITY)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Littlewood-Paley partition

namespace {

double annular_profile(double s) { return std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }

}  // namespace

LPPartition::LPPartition(int j_min, int j_max) : j_min_(j_min), j_max_(j_max) {
  if (j_min > j_max) throw InvalidArgument("LP partition: empty j range");
  if (j_min > 0 || j_max < 0) throw InvalidArgument("LP partition: j range must contain 0");
}

double LPPartition::Theta(const Point& xi) {
  const double r = norm(xi);
  if (r <= 0.5 || r >= 2.0) return 0.0;
  return annular_profile(std::log2(r));
}

double LPPartition::theta(const Point& xi) {
  const double r = norm(xi);
  if (r <= 0.5 || r >= 2.0) return 0.0;
  const double t = std::log2(r);
  // Only the two translates Theta(2^-j xi) with |t - j| < 1 are nonzero.
  const double f = std::floor(t);
  const double total = annular_profile(t - f) + annular_profile(t - f - 1.0);
  return annular_profile(t) / total;
}

double LPPartition::partition_sum(const Point& xi) const {
  double sum = 0.0;
  for (int j = j_min_; j <= j_max_; ++j) {
    const double scale = std::ldexp(1.0, -j);
    sum += theta(Point{xi[0] * scale, xi[1] * scale, xi[2] * scale});
  }
  return sum;
}

double LPPartition::shell_inner() const { return std::ldexp(1.0, j_min_ + 1); }
double LPPartition::shell_outer() const { return std::ldexp(1.0, j_max_ - 1); }

LPPartition build_lp_partition(int j_min, int j_max) { return LPPartition(j_min, j_max); }

SymbolSpec dyadic_piece(const SymbolSpec& a, const CutoffChi& chi, const LPPartition& part, int j) {
  (void)part;  // theta does not depend on the partition's j range
  if (j < 0) throw InvalidArgument("dyadic piece index must be nonnegative");
  if (a.dim() != chi.dim()) throw InvalidArgument("dyadic piece: symbol and cutoff dimensions differ");
  const double inner = std::ldexp(1.0, j - 1);
  const double outer = std::ldexp(1.0, j + 1);
  const double scale = std::ldexp(1.0, -j);
  SymbolSpec piece(a.dim(), SymbolKind::general, std::min(a.kappa_max(), kJetKappa),
                   "piece" + std::to_string(j) + "(" + a.name() + ")", [a, chi, inner, outer, scale](const Point& xi) {
                     const double r = norm(xi);
                     if (r <= inner || r >= outer) return cplx{0.0, 0.0};
                     const double th = LPPartition::theta(Point{xi[0] * scale, xi[1] * scale, xi[2] * scale});
                     if (th == 0.0) return cplx{0.0, 0.0};
                     return a(xi) * ((1.0 - chi(xi)) * th);
                   });
  piece.with_support_radius(outer);
  return piece;
}

// ---------------------------------------------------------------------------
// Derivatives

cplx central_difference(const SymbolSpec& a, const Point& xi, const MultiIndex& alpha, double h) {
  // Tensor product of 1-d central stencils: offsets (alpha_i/2 - k) h, weights (-1)^k C(alpha_i, k).
  cplx sum{0.0, 0.0};
  std::array<int, 3> k{0, 0, 0};
  while (true) {
    double weight = 1.0;
    Point p = xi;
    for (int i = 0; i < 3; ++i) {
      weight *= ((k[i] % 2) ? -1.0 : 1.0) * binomial(alpha.a[i], k[i]);
      p[i] += (0.5 * alpha.a[i] - k[i]) * h;
    }
    sum += weight * a(p);
    int i = 2;
    while (i >= 0 && ++k[i] > alpha.a[i]) k[i--] = 0;
    if (i < 0) break;
  }
  return sum / std::pow(h, alpha.order());
}

namespace {

void check_derivative_request(const SymbolSpec& a, const Point& xi, const MultiIndex& alpha) {
  for (int i = a.dim(); i < 3; ++i)
    if (alpha.a[i] != 0) throw InvalidArgument("multi-index has components beyond the symbol dimension");
  if (alpha.a[0] < 0 || alpha.a[1] < 0 || alpha.a[2] < 0) throw InvalidArgument("multi-index must be nonnegative");
  if (alpha.order() > a.kappa_max()) throw InvalidArgument("derivative order exceeds the symbol's kappa_max");
  if (a.kind() == SymbolKind::homogeneous && norm(xi) == 0.0 && alpha.order() > 0) {
    throw InvalidArgument("derivative of a homogeneous symbol requested at the origin");
  }
}

}  // namespace

DerivativeEstimate symbol_derivative_estimate(const SymbolSpec& a, const Point& xi, const MultiIndex& alpha) {
  check_derivative_request(a, xi, alpha);
  if (alpha.order() == 0) return {a(xi), 0.0};
  if (a.has_derivative()) return {a.analytic_derivative(xi, alpha), 0.0};
  const double h = std::max(norm(xi), 1.0) * 1e-3;
  const cplx coarse = central_difference(a, xi, alpha, h);
  const cplx fine = central_difference(a, xi, alpha, 0.5 * h);
  return {(4.0 * fine - coarse) / 3.0, std::abs(fine - coarse)};
}

cplx symbol_derivative(const SymbolSpec& a, const Point& xi, const MultiIndex& alpha) {
  return symbol_derivative_estimate(a, xi, alpha).value;
}

bool is_degree_zero_homogeneous(const SymbolSpec& a, double tol) {
  std::mt19937 rng(20240517u);
  std::normal_distribution<double> normal;
  for (int sample = 0; sample < 16; ++sample) {
    Point xi{0.0, 0.0, 0.0};
    for (int i = 0; i < a.dim(); ++i) xi[i] = normal(rng);
    const cplx base = a(xi);
    for (double t : {0.5, 2.0, 10.0}) {
      const cplx scaled = a(Point{t * xi[0], t * xi[1], t * xi[2]});
      if (std::abs(scaled - base) > tol * std::max(1.0, std::abs(base))) return false;
    }
  }
  return true;
}

}  // namespace commlab
