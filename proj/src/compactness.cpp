#include "commlab/compactness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "commlab/error.hpp"

namespace commlab {

SequenceKind parse_sequence_kind(std::string_view name) {
  if (name == "oscillation") return SequenceKind::oscillation;
  if (name == "concentration") return SequenceKind::concentration;
  if (name == "translation") return SequenceKind::translation;
  throw InvalidArgument("unknown sequence kind: " + std::string(name));
}

SpectrumTarget parse_spectrum_target(std::string_view name) {
  if (name == "commutator") return SpectrumTarget::commutator;
  if (name == "multiplier") return SpectrumTarget::multiplier;
  if (name == "multiplication") return SpectrumTarget::multiplication;
  throw InvalidArgument("unknown operator: " + std::string(name));
}

namespace {

double direction_length(const TestSequenceSpec& spec, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += spec.direction[a] * spec.direction[a];
  return std::sqrt(s);
}

void require_profile_inside(const Bump& bump, const Grid& grid, const char* what) {
  if (!bump.fits_in_box(grid.dim(), grid.half_width(), grid.half_width() / 4)) {
    throw InvalidArgument(std::string(what) + ": profile support must stay L/4 inside the box");
  }
}

}  // namespace

int max_nyquist_index(const TestSequenceSpec& spec, const Grid& grid) {
  const double speed = spec.base * direction_length(spec, grid.dim());
  if (!(speed > 0.0)) throw InvalidArgument("oscillation needs base > 0 and a nonzero direction");
  const double limit = grid.n() / (4.0 * grid.half_width());
  int n = static_cast<int>(std::floor(limit / speed));
  while (n > 0 && !(speed * n < limit)) --n;
  return n;
}

SampledField gen_sequence(const TestSequenceSpec& spec, int n, const Grid& grid) {
  if (n < 0) throw InvalidArgument("sequence index must be nonnegative");
  if (!(spec.profile.width > 0.0)) throw InvalidArgument("profile width must be positive");
  const int d = grid.dim();
  switch (spec.kind) {
    case SequenceKind::oscillation: {
      require_profile_inside(spec.profile, grid, "oscillation");
      const double speed = spec.base * direction_length(spec, d);
      const double lambda = spec.base * n;
      if (n > 0 && !(speed * n < grid.n() / (4.0 * grid.half_width()))) {
        std::ostringstream msg;
        msg << "oscillation index " << n << " violates the Nyquist guard base*n*|xi0| < N/(4L) = "
            << grid.n() / (4.0 * grid.half_width()) << "; largest valid n is " << max_nyquist_index(spec, grid);
        throw InvalidArgument(msg.str());
      }
      return sample_spatial(grid, [&](const Point& x) {
        double phase = 0.0;
        for (int a = 0; a < d; ++a) phase += spec.direction[a] * x[a];
        return spec.profile(x) * std::polar(1.0, 2.0 * std::numbers::pi * lambda * phase);
      });
    }
    case SequenceKind::concentration: {
      if (n < 1) throw InvalidArgument("concentration needs n >= 1");
      if (!(spec.p >= 1.0)) throw InvalidArgument("concentration exponent must satisfy p >= 1");
      require_profile_inside(spec.profile, grid, "concentration");
      Bump scaled = spec.profile;
      scaled.width = spec.profile.width / n;
      scaled.amplitude = spec.profile.amplitude * std::pow(static_cast<double>(n), d / spec.p);
      return sample_spatial(grid, [&](const Point& x) {
        const double v = scaled(x);
        return cplx{std::clamp(v, -spec.bound, spec.bound), 0.0};
      });
    }
    case SequenceKind::translation: {
      const double len = direction_length(spec, d);
      if (!(len > 0.0)) throw InvalidArgument("translation needs a nonzero direction");
      Bump moved = spec.profile;
      for (int a = 0; a < d; ++a) moved.center[a] += n * grid.dx() * spec.direction[a] / len;
      require_profile_inside(moved, grid, "translation");
      return sample_bump(grid, moved);
    }
  }
  throw InvalidArgument("unknown sequence kind");
}

Box central_box(const Grid& grid) {
  Box box;
  for (int a = 0; a < grid.dim(); ++a) {
    box.lo[a] = -grid.half_width() / 2;
    box.hi[a] = grid.half_width() / 2;
  }
  return box;
}

double DecayCurve::value_at(int n) const {
  for (const auto& p : points) {
    if (p.n == n) return p.value;
  }
  throw InvalidArgument("decay curve has no point at n = " + std::to_string(n));
}

bool DecayCurve::eventually_decreasing() const {
  if (points.size() < 2) return false;
  const int quarter = points.back().n / 4;
  const DecayPoint* ref = nullptr;
  for (const auto& p : points) {
    if (p.n <= quarter) ref = &p;
  }
  if (ref == nullptr) return false;
  return points.back().value <= 0.5 * ref->value;
}

DecayCurve commutator_decay_experiment(const SymbolSpec& a, bool sphere, const SampledField& b,
                                       const TestSequenceSpec& spec, std::vector<int> n_list, double p0,
                                       std::optional<Box> region) {
  const Grid& grid = b.grid;
  if (n_list.empty()) throw InvalidArgument("n_list is empty");
  if (!(p0 >= 1.0)) throw InvalidArgument("p0 must satisfy p0 >= 1");
  std::sort(n_list.begin(), n_list.end());
  n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());

  // Validate every index before any work.
  for (int n : n_list) gen_sequence(spec, n, grid);

  const OperatorHandle op = OperatorHandle::commutator(a, sphere, b);
  DecayCurve curve;
  curve.p0 = p0;
  curve.region = region.value_or(central_box(grid));
  curve.points.resize(n_list.size());
  const long count = static_cast<long>(n_list.size());
  bool failed = false;
  std::string failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    try {
      const int n = n_list[i];
      const SampledField u = gen_sequence(spec, n, grid);
      DecayPoint pt;
      pt.n = n;
      pt.lambda = spec.kind == SequenceKind::oscillation ? spec.base * n : static_cast<double>(n);
      pt.value = lp_norm(op.apply(u), p0, curve.region);
      curve.points[i] = pt;
    } catch (const std::exception& e) {
#pragma omp critical(commlab_decay_failure)
      {
        failed = true;
        failure = e.what();
      }
    }
  }
  if (failed) throw NumericalError("commutator decay experiment failed: " + failure);
  return curve;
}

std::vector<SvdTailRow> svd_tail_experiment(const SymbolSpec& a, bool sphere, const Bump& b,
                                            const std::vector<std::pair<int, double>>& grids, std::size_t head,
                                            SpectrumTarget target) {
  if (grids.empty()) throw InvalidArgument("no grids given");
  if (head < 1) throw InvalidArgument("head size K must be at least 1");
  std::vector<Grid> built;
  for (const auto& [n, l] : grids) {
    Grid g = make_grid(a.dim(), n, l);
    if (g.size() > kMaterializeLimit) {
      throw InvalidArgument("grid N = " + std::to_string(n) + " exceeds the materialization limit");
    }
    if (head > g.size()) throw InvalidArgument("head size K exceeds the matrix side");
    built.push_back(g);
  }
  std::vector<SvdTailRow> rows;
  for (const Grid& g : built) {
    const SampledField bs = sample_bump(g, b);
    OperatorHandle op = [&] {
      switch (target) {
        case SpectrumTarget::multiplier:
          return OperatorHandle::multiplier(g, a, sphere);
        case SpectrumTarget::multiplication:
          return OperatorHandle::multiplication(bs);
        case SpectrumTarget::commutator:
          break;
      }
      return OperatorHandle::commutator(a, sphere, bs);
    }();
    const SingularSpectrum spec = singular_values(op);
    rows.push_back({g.n(), g.half_width(), spec.sigma(head), spec.tail_energy(head)});
  }
  return rows;
}

}  // namespace commlab
