#include "commlab/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "commlab/error.hpp"

namespace commlab {

Grid::Grid(int dim, int n, double half_width) : dim_(dim), n_(n), half_width_(half_width) {
  if (dim < 1 || dim > 3) throw InvalidArgument("grid dimension must be 1, 2 or 3");
  if (n < 8) throw InvalidArgument("grid needs at least 8 samples per axis");
  if (n % 2 != 0) throw InvalidArgument("grid samples per axis must be even");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw InvalidArgument("grid half-width must be positive");
  size_ = 1;
  for (int i = 0; i < dim; ++i) size_ *= static_cast<std::size_t>(n);
}

double Grid::cell_volume() const { return std::pow(dx(), dim_); }

double Grid::frequency_cell_volume() const { return std::pow(dxi(), dim_); }

std::array<int, 3> Grid::unravel(std::size_t index) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(index % n_);
    index /= n_;
  }
  return idx;
}

std::size_t Grid::ravel(const std::array<int, 3>& idx) const {
  std::size_t index = 0;
  for (int a = 0; a < dim_; ++a) index = index * n_ + static_cast<std::size_t>(idx[a]);
  return index;
}

Point Grid::x(std::size_t index) const {
  const auto idx = unravel(index);
  Point p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) p[a] = -half_width_ + idx[a] * dx();
  return p;
}

Point Grid::xi(std::size_t index) const {
  const auto idx = unravel(index);
  Point p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) p[a] = (idx[a] - n_ / 2) * dxi();
  return p;
}

Grid make_grid(int dim, int n, double half_width) { return Grid(dim, n, half_width); }

SampledField::SampledField(Grid g, Side s) : grid(g), side(s), values(g.size(), cplx{0.0, 0.0}) {}

SampledField::SampledField(Grid g, Side s, std::vector<cplx> v) : grid(g), side(s), values(std::move(v)) {
  if (values.size() != grid.size()) throw InvalidArgument("field length does not match grid size");
}

void require_same_grid(const SampledField& a, const SampledField& b, const char* what) {
  if (!(a.grid == b.grid)) throw InvalidArgument(std::string(what) + ": fields live on different grids");
}

void require_side(const SampledField& a, Side side, const char* what) {
  if (a.side != side) {
    throw InvalidArgument(std::string(what) + ": expected a " +
                          (side == Side::spatial ? "spatial" : "frequency") + "-side field");
  }
}

namespace {

// FFTW planning is not thread-safe; execution through the new-array interface
// is, so plans are created once under a lock and shared.
class PlanCache {
 public:
  fftw_plan get(int dim, int n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(dim, n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::size_t size = 1;
    for (int i = 0; i < dim; ++i) size *= static_cast<std::size_t>(n);
    auto* in = fftw_alloc_complex(size);
    auto* out = fftw_alloc_complex(size);
    int dims[3] = {n, n, n};
    fftw_plan plan = fftw_plan_dft(dim, dims, in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    if (plan == nullptr) throw NumericalError("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void execute(const Grid& grid, int sign, std::vector<cplx>& in, std::vector<cplx>& out) {
  fftw_plan plan = plan_cache().get(grid.dim(), grid.n(), sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
}

// (-1)^(sum of per-axis indices), optionally offset by N/2 per axis.
double parity_sign(const Grid& grid, std::size_t index, bool shift_half) {
  const auto idx = grid.unravel(index);
  long total = 0;
  for (int a = 0; a < grid.dim(); ++a) total += idx[a] + (shift_half ? grid.n() / 2 : 0);
  return (total % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace

// With x_m = -L + m dx and xi_k = k dxi, exp(-2 pi i x_m xi_k) = (-1)^k exp(-2 pi i m k / N),
// and storing k at c = k + N/2 amounts to pre-multiplying the input by (-1)^m.
SampledField forward_ft(const SampledField& u) {
  require_side(u, Side::spatial, "forward_ft");
  const Grid& grid = u.grid;
  std::vector<cplx> in(grid.size());
  std::vector<cplx> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) in[i] = u.values[i] * parity_sign(grid, i, false);
  execute(grid, FFTW_FORWARD, in, out);
  const double scale = grid.cell_volume();
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] *= scale * parity_sign(grid, i, true);
  return SampledField(grid, Side::frequency, std::move(out));
}

SampledField inverse_ft(const SampledField& v) {
  require_side(v, Side::frequency, "inverse_ft");
  const Grid& grid = v.grid;
  std::vector<cplx> in(grid.size());
  std::vector<cplx> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) in[i] = v.values[i] * parity_sign(grid, i, true);
  execute(grid, FFTW_BACKWARD, in, out);
  const double scale = grid.frequency_cell_volume();
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] *= scale * parity_sign(grid, i, false);
  return SampledField(grid, Side::spatial, std::move(out));
}

std::vector<std::size_t> lattice_points_in(const Grid& grid, const Box& region) {
  const double tol = 1e-9 * grid.dx();
  std::array<std::vector<int>, 3> axis;
  for (int a = 0; a < grid.dim(); ++a) {
    for (int m = 0; m < grid.n(); ++m) {
      const double x = -grid.half_width() + m * grid.dx();
      if (x >= region.lo[a] - tol && x < region.hi[a] - tol) axis[a].push_back(m);
    }
    if (axis[a].empty()) return {};
  }
  std::vector<std::size_t> points;
  std::array<int, 3> idx{0, 0, 0};
  std::array<std::size_t, 3> pos{0, 0, 0};
  while (true) {
    for (int a = 0; a < grid.dim(); ++a) idx[a] = axis[a][pos[a]];
    points.push_back(grid.ravel(idx));
    int a = grid.dim() - 1;
    while (a >= 0 && ++pos[a] == axis[a].size()) pos[a--] = 0;
    if (a < 0) break;
  }
  return points;
}

double lp_norm(const SampledField& u, double p, const std::optional<Box>& region) {
  require_side(u, Side::spatial, "lp_norm");
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm exponent must be >= 1 or infinity");

  std::vector<std::size_t> points;
  if (region) {
    points = lattice_points_in(u.grid, *region);
    if (points.empty()) throw InvalidArgument("lp_norm: region contains no lattice point");
  } else {
    points.resize(u.size());
    for (std::size_t i = 0; i < points.size(); ++i) points[i] = i;
  }

  if (std::isinf(p)) {
    double m = 0.0;
    for (auto i : points) m = std::max(m, std::abs(u.values[i]));
    return m;
  }
  double sum = 0.0;
  for (auto i : points) sum += std::pow(std::abs(u.values[i]), p);
  return std::pow(u.grid.cell_volume() * sum, 1.0 / p);
}

SampledField pointwise_mul(const SampledField& u, const SampledField& w) {
  require_same_grid(u, w, "pointwise_mul");
  if (u.side != w.side) throw InvalidArgument("pointwise_mul: fields live on different sides");
  SampledField out(u.grid, u.side);
  for (std::size_t i = 0; i < u.size(); ++i) out.values[i] = u.values[i] * w.values[i];
  return out;
}

}  // namespace commlab
