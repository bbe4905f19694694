#include "commlab/operators.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <random>
#include <sstream>

#include "commlab/error.hpp"

namespace commlab {

std::vector<cplx> sample_symbol(const Grid& grid, const SymbolSpec& a, bool sphere) {
  if (a.dim() != grid.dim()) throw InvalidArgument("symbol dimension does not match the grid");
  std::vector<cplx> out(grid.size());
  const long total = static_cast<long>(grid.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < total; ++i) {
    Point xi = grid.xi(static_cast<std::size_t>(i));
    if (sphere) {
      const double r = norm(xi);
      if (r > 0.0) xi = Point{xi[0] / r, xi[1] / r, xi[2] / r};
    }
    out[i] = a(xi);
  }
  return out;
}

SampledField apply_sampled_multiplier(const std::vector<cplx>& symbol, const SampledField& u) {
  require_side(u, Side::spatial, "multiplier");
  if (symbol.size() != u.size()) throw InvalidArgument("multiplier: symbol samples do not match the grid");
  SampledField v = forward_ft(u);
  for (std::size_t i = 0; i < v.size(); ++i) v.values[i] *= symbol[i];
  return inverse_ft(v);
}

SampledField apply_multiplier(const SymbolSpec& a, bool sphere, const SampledField& u) {
  return apply_sampled_multiplier(sample_symbol(u.grid, a, sphere), u);
}

namespace {

SampledField commutator_apply(const std::vector<cplx>& symbol, const SampledField& b, const SampledField& u) {
  require_same_grid(b, u, "commutator");
  require_side(b, Side::spatial, "commutator");
  SampledField left = apply_sampled_multiplier(symbol, pointwise_mul(b, u));
  const SampledField right = pointwise_mul(b, apply_sampled_multiplier(symbol, u));
  for (std::size_t i = 0; i < left.size(); ++i) left.values[i] -= right.values[i];
  return left;
}

std::vector<cplx> conj_all(const std::vector<cplx>& v) {
  std::vector<cplx> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](cplx z) { return std::conj(z); });
  return out;
}

}  // namespace

SampledField apply_commutator(const SymbolSpec& a, bool sphere, const SampledField& b, const SampledField& u) {
  return commutator_apply(sample_symbol(u.grid, a, sphere), b, u);
}

KernelField compact_part_kernel(const SymbolSpec& a, const CutoffChi& chi, const Grid& grid) {
  if (a.dim() != grid.dim() || chi.dim() != grid.dim()) throw InvalidArgument("compact part kernel: dimension mismatch");
  if (grid.n() / 2 * grid.dxi() < 3.0) {
    std::ostringstream msg;
    msg << "grid too coarse in frequency: N / (4L) = " << grid.n() / 2 * grid.dxi() << " must reach 3";
    throw InvalidArgument(msg.str());
  }
  SampledField v(grid, Side::frequency, sample_symbol(grid, multiply(a, chi.as_symbol()), false));
  return KernelField{inverse_ft(v)};
}

KernelField dyadic_kernel(const SymbolSpec& a_j, const Grid& grid) {
  if (a_j.dim() != grid.dim()) throw InvalidArgument("dyadic kernel: dimension mismatch");
  if (!a_j.support_radius()) throw InvalidArgument("dyadic kernel: symbol has no declared compact support");
  const double radius = *a_j.support_radius();
  // The piece vanishes on |xi| = radius, so the lattice edge N/(4L) may coincide with it.
  const double edge = grid.n() / 2 * grid.dxi();
  if (radius > edge) {
    const int needed_n = 2 * static_cast<int>(std::ceil(2.0 * grid.half_width() * radius));
    const double needed_l = grid.n() / (4.0 * radius);
    std::ostringstream msg;
    msg << "dyadic annulus radius " << radius << " exceeds the frequency range " << edge
        << "; need N >= " << needed_n << " at L = " << grid.half_width() << ", or L <= " << needed_l << " at N = "
        << grid.n();
    throw InvalidArgument(msg.str());
  }
  SampledField v(grid, Side::frequency, sample_symbol(grid, a_j, false));
  return KernelField{inverse_ft(v)};
}

KernelField partial_kernel_sum(const SymbolSpec& a, const CutoffChi& chi, const LPPartition& part, const Grid& grid,
                               int n) {
  if (n < 0) throw InvalidArgument("partial kernel sum needs n >= 0");
  KernelField sum{SampledField(grid, Side::spatial)};
  for (int j = 0; j <= n; ++j) {
    const KernelField piece = dyadic_kernel(dyadic_piece(a, chi, part, j), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) sum.samples.values[i] += piece.samples.values[i];
  }
  return sum;
}

double kernel_tail_mass(const KernelField& k, double s) {
  const Grid& grid = k.grid();
  if (!(s > 0.0 && s < grid.half_width())) throw InvalidArgument("tail radius must satisfy 0 < s < L");
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (norm(grid.x(i)) > s) sum += std::abs(k.samples.values[i]);
  }
  return sum * grid.cell_volume();
}

double small_ball_moment(const KernelField& k, double s) {
  const Grid& grid = k.grid();
  if (!(s > 0.0 && s <= grid.half_width())) throw InvalidArgument("ball radius must satisfy 0 < s <= L");
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = norm(grid.x(i));
    if (r < s) sum += r * std::abs(k.samples.values[i]);
  }
  return sum * grid.cell_volume();
}

SampledField truncated_kernel_apply(const KernelField& k, const SampledField& b, double s, const SampledField& u) {
  require_same_grid(k.samples, b, "truncated kernel");
  require_same_grid(b, u, "truncated kernel");
  require_side(u, Side::spatial, "truncated kernel");
  if (!(s > 0.0)) throw InvalidArgument("truncation radius must be positive");
  const Grid& grid = u.grid;
  const int n = grid.n();
  const int d = grid.dim();
  const double s2 = s * s;

  // Squared displacement coordinate and kernel index offset per axis step.
  std::vector<double> coord2(n);
  std::vector<int> kidx(n);
  for (int delta = 0; delta < n; ++delta) {
    kidx[delta] = (delta + n / 2) % n;
    const double c = (kidx[delta] - n / 2) * grid.dx();
    coord2[delta] = c * c;
  }

  SampledField out(grid, Side::spatial);
  const long total = static_cast<long>(grid.size());
  const double vol = grid.cell_volume();
#pragma omp parallel for schedule(static)
  for (long xi = 0; xi < total; ++xi) {
    const auto ix = grid.unravel(static_cast<std::size_t>(xi));
    const cplx bx = b.values[xi];
    cplx acc{0.0, 0.0};
    for (std::size_t yi = 0; yi < grid.size(); ++yi) {
      const auto iy = grid.unravel(yi);
      double dist2 = 0.0;
      std::array<int, 3> kk{0, 0, 0};
      for (int a = 0; a < d; ++a) {
        const int delta = ((ix[a] - iy[a]) % n + n) % n;
        dist2 += coord2[delta];
        kk[a] = kidx[delta];
      }
      if (dist2 <= s2) continue;
      acc += k.samples.values[grid.ravel(kk)] * (bx - b.values[yi]) * u.values[yi];
    }
    out.values[xi] = acc * vol;
  }
  return out;
}

// ---------------------------------------------------------------------------

OperatorHandle OperatorHandle::multiplier(const Grid& grid, const SymbolSpec& a, bool sphere) {
  OperatorHandle op(grid, OperatorKind::multiplier, "multiplier[" + a.name() + (sphere ? ",sphere]" : "]"));
  op.symbol_ = sample_symbol(grid, a, sphere);
  return op;
}

OperatorHandle OperatorHandle::multiplier_from_samples(const Grid& grid, std::vector<cplx> symbol,
                                                       std::string description) {
  if (symbol.size() != grid.size()) throw InvalidArgument("multiplier samples do not match the grid");
  OperatorHandle op(grid, OperatorKind::multiplier, std::move(description));
  op.symbol_ = std::move(symbol);
  return op;
}

OperatorHandle OperatorHandle::multiplication(const SampledField& b) {
  require_side(b, Side::spatial, "multiplication operator");
  OperatorHandle op(b.grid, OperatorKind::multiplication, "multiplication");
  op.b_ = b.values;
  return op;
}

OperatorHandle OperatorHandle::commutator(const SymbolSpec& a, bool sphere, const SampledField& b) {
  require_side(b, Side::spatial, "commutator");
  return commutator_from_samples(sample_symbol(b.grid, a, sphere), b,
                                 "commutator[" + a.name() + (sphere ? ",sphere]" : "]"));
}

OperatorHandle OperatorHandle::commutator_from_samples(std::vector<cplx> symbol, const SampledField& b,
                                                       std::string description) {
  require_side(b, Side::spatial, "commutator");
  if (symbol.size() != b.size()) throw InvalidArgument("commutator: symbol samples do not match the grid");
  OperatorHandle op(b.grid, OperatorKind::commutator, std::move(description));
  op.symbol_ = std::move(symbol);
  op.b_ = b.values;
  return op;
}

OperatorHandle OperatorHandle::truncated_commutator(const KernelField& kernel, const SampledField& b) {
  require_same_grid(kernel.samples, b, "truncated commutator");
  OperatorHandle op(b.grid, OperatorKind::truncated_commutator, "truncated-commutator");
  // cyclic convolution by k is the multiplier with symbol F(k)
  op.symbol_ = forward_ft(kernel.samples).values;
  op.b_ = b.values;
  op.kernel_ = kernel;
  return op;
}

OperatorHandle OperatorHandle::truncated_kernel(const KernelField& kernel, const SampledField& b, double s) {
  require_same_grid(kernel.samples, b, "truncated kernel");
  if (!(s > 0.0)) throw InvalidArgument("truncation radius must be positive");
  std::ostringstream desc;
  desc << "truncated-kernel[s=" << s << "]";
  OperatorHandle op(b.grid, OperatorKind::truncated_kernel, desc.str());
  op.b_ = b.values;
  op.kernel_ = kernel;
  op.radius_ = s;
  return op;
}

SampledField OperatorHandle::apply(const SampledField& u) const {
  if (!(u.grid == grid_)) throw InvalidArgument("operator applied to a field on another grid");
  require_side(u, Side::spatial, "operator");
  const SampledField b(grid_, Side::spatial, b_.empty() ? std::vector<cplx>(grid_.size()) : b_);
  switch (kind_) {
    case OperatorKind::multiplier:
      return apply_sampled_multiplier(symbol_, u);
    case OperatorKind::multiplication:
      return pointwise_mul(b, u);
    case OperatorKind::commutator:
    case OperatorKind::truncated_commutator:
      return commutator_apply(symbol_, b, u);
    case OperatorKind::truncated_kernel:
      return truncated_kernel_apply(*kernel_, b, radius_, u);
  }
  throw InvalidArgument("unknown operator kind");
}

SampledField OperatorHandle::apply_adjoint(const SampledField& u) const {
  if (!(u.grid == grid_)) throw InvalidArgument("operator applied to a field on another grid");
  require_side(u, Side::spatial, "operator");
  const SampledField bc(grid_, Side::spatial, b_.empty() ? std::vector<cplx>(grid_.size()) : conj_all(b_));
  switch (kind_) {
    case OperatorKind::multiplier:
      return apply_sampled_multiplier(conj_all(symbol_), u);
    case OperatorKind::multiplication:
      return pointwise_mul(bc, u);
    case OperatorKind::commutator:
    case OperatorKind::truncated_commutator: {
      // (AB - BA)^* = -(A^* B^* - B^* A^*)
      SampledField out = commutator_apply(conj_all(symbol_), bc, u);
      for (auto& v : out.values) v = -v;
      return out;
    }
    case OperatorKind::truncated_kernel: {
      // T^* = -T[k~, conj b] with k~(z) = conj k(-z)
      const int n = grid_.n();
      KernelField reflected{SampledField(grid_, Side::spatial)};
      for (std::size_t i = 0; i < grid_.size(); ++i) {
        auto idx = grid_.unravel(i);
        for (int a = 0; a < grid_.dim(); ++a) idx[a] = (n - idx[a]) % n;
        reflected.samples.values[i] = std::conj(kernel_->samples.values[grid_.ravel(idx)]);
      }
      SampledField out = truncated_kernel_apply(reflected, bc, radius_, u);
      for (auto& v : out.values) v = -v;
      return out;
    }
  }
  throw InvalidArgument("unknown operator kind");
}

DenseMatrix materialize(const OperatorHandle& op) {
  const Grid& grid = op.grid();
  if (grid.size() > kMaterializeLimit) {
    throw InvalidArgument("materialize: matrix side " + std::to_string(grid.size()) + " exceeds " +
                          std::to_string(kMaterializeLimit));
  }
  const long n = static_cast<long>(grid.size());
  DenseMatrix m(n, n);
  bool failed = false;
  std::string failure;
#pragma omp parallel for schedule(dynamic, 8)
  for (long col = 0; col < n; ++col) {
    try {
      SampledField e(grid, Side::spatial);
      e.values[col] = 1.0;
      const SampledField image = op.apply(e);
      for (long row = 0; row < n; ++row) m(row, col) = image.values[row];
    } catch (const std::exception& ex) {
#pragma omp critical(commlab_materialize_failure)
      {
        failed = true;
        failure = ex.what();
      }
    }
  }
  if (failed) throw NumericalError("materialize failed: " + failure);
  return m;
}

double SingularSpectrum::tail_energy(std::size_t head) const {
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double e = values[k] * values[k];
    total += e;
    if (k >= head) tail += e;
  }
  return total > 0.0 ? tail / total : 0.0;
}

SingularSpectrum singular_values(const DenseMatrix& m) {
  if (!m.allFinite()) throw NumericalError("singular_values: matrix has non-finite entries");
  Eigen::BDCSVD<DenseMatrix> svd(m);
  if (svd.info() != Eigen::Success) throw NumericalError("singular_values: SVD did not converge");
  SingularSpectrum spec;
  const auto& sv = svd.singularValues();
  spec.values.assign(sv.data(), sv.data() + sv.size());
  std::sort(spec.values.begin(), spec.values.end(), std::greater<>());

  const double frob = m.squaredNorm();
  double energy = 0.0;
  for (double s : spec.values) energy += s * s;
  if (std::abs(energy - frob) > 1e-8 * std::max(frob, 1e-300)) {
    throw NumericalError("singular_values: Frobenius consistency check failed");
  }
  return spec;
}

SingularSpectrum singular_values(const OperatorHandle& op) {
  SingularSpectrum spec = singular_values(materialize(op));
  spec.dim = op.grid().dim();
  spec.n = op.grid().n();
  spec.half_width = op.grid().half_width();
  spec.descriptor = op.description();
  return spec;
}

namespace {

double l2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace

NormEstimate operator_norm_l2(const OperatorHandle& op, int iterations) {
  if (iterations < 20) throw InvalidArgument("operator_norm_l2 needs at least 20 iterations");
  const Grid& grid = op.grid();
  std::mt19937_64 rng(0x5eed5eedULL);
  std::normal_distribution<double> normal;
  SampledField v(grid, Side::spatial);
  for (auto& z : v.values) z = cplx{normal(rng), normal(rng)};
  double nv = l2(v.values);
  for (auto& z : v.values) z /= nv;

  NormEstimate est;
  double previous = -1.0;
  for (int it = 1; it <= iterations; ++it) {
    const SampledField w = op.apply(v);
    est.value = l2(w.values);
    est.iterations = it;
    SampledField z = op.apply_adjoint(w);
    const double nz = l2(z.values);
    if (nz == 0.0) {
      est.converged = true;
      return est;
    }
    for (auto& c : z.values) c /= nz;
    v = std::move(z);
    if (previous >= 0.0 && std::abs(est.value - previous) <= 1e-12 * est.value) {
      est.converged = true;
      return est;
    }
    previous = est.value;
  }
  return est;
}

}  // namespace commlab
