#include "commlab/hmeasure.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <string>

#include "commlab/error.hpp"

namespace commlab {

FormVariant parse_form_variant(std::string_view name) {
  if (name == "hermitian") return FormVariant::hermitian;
  if (name == "bilinear") return FormVariant::bilinear;
  throw InvalidArgument("unknown form variant: " + std::string(name));
}

namespace {

void require_sphere_symbol(const SymbolSpec& psi) {
  if (!is_degree_zero_homogeneous(psi)) {
    throw InvalidArgument("hform: symbol '" + psi.name() + "' is not homogeneous of degree zero");
  }
}

cplx form_with_samples(FormVariant variant, const SampledField& u, const SampledField& second,
                       const SampledField& phi1, const SampledField& phi2, const std::vector<cplx>& symbol) {
  require_same_grid(u, second, "hform");
  require_same_grid(u, phi1, "hform");
  require_same_grid(u, phi2, "hform");
  const SampledField left = pointwise_mul(phi1, u);
  const SampledField right = apply_sampled_multiplier(symbol, pointwise_mul(phi2, second));
  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i < left.size(); ++i) {
    sum += left.values[i] * (variant == FormVariant::hermitian ? std::conj(right.values[i]) : right.values[i]);
  }
  return sum * u.grid.cell_volume();
}

}  // namespace

cplx hform(FormVariant variant, const SampledField& u, const SampledField& second, const SampledField& phi1,
           const SampledField& phi2, const SymbolSpec& psi) {
  require_sphere_symbol(psi);
  return form_with_samples(variant, u, second, phi1, phi2, sample_symbol(u.grid, psi, true));
}

cplx oscillation_oracle(const SampledField& profile, const Point& xi0, const SampledField& phi1,
                        const SampledField& phi2, const SymbolSpec& psi) {
  require_same_grid(profile, phi1, "oscillation oracle");
  require_same_grid(profile, phi2, "oscillation oracle");
  const double r = norm(xi0);
  if (!(r > 0.0)) throw InvalidArgument("oscillation oracle needs a nonzero direction");
  const cplx factor = std::conj(psi(Point{xi0[0] / r, xi0[1] / r, xi0[2] / r}));
  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i < profile.size(); ++i) {
    sum += phi1.values[i] * std::conj(phi2.values[i]) * std::norm(profile.values[i]);
  }
  return factor * sum * profile.grid.cell_volume();
}

double HFormStudy::scaled_error(const HFormRow& row) const {
  if (std::abs(oracle) > 0.0) return row.error / std::abs(oracle);
  return profile_norm2 > 0.0 ? row.error / profile_norm2 : row.error;
}

HFormStudy hform_convergence_study(const TestSequenceSpec& spec, const SampledField& phi1, const SampledField& phi2,
                                   const SymbolSpec& psi, std::vector<int> n_list) {
  if (spec.kind != SequenceKind::oscillation) throw InvalidArgument("hform study needs an oscillation sequence");
  if (n_list.empty()) throw InvalidArgument("n_list is empty");
  require_sphere_symbol(psi);
  const Grid& grid = phi1.grid;
  std::sort(n_list.begin(), n_list.end());
  n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());
  for (int n : n_list) gen_sequence(spec, n, grid);

  const SampledField profile = gen_sequence(spec, 0, grid);
  HFormStudy study;
  study.oracle = oscillation_oracle(profile, spec.direction, phi1, phi2, psi);
  study.profile_norm2 = std::pow(lp_norm(profile, 2.0), 2);
  study.rows.resize(n_list.size());
  const std::vector<cplx> symbol = sample_symbol(grid, psi, true);

  const long count = static_cast<long>(n_list.size());
  bool failed = false;
  std::string failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    try {
      const SampledField u = gen_sequence(spec, n_list[i], grid);
      HFormRow row;
      row.n = n_list[i];
      row.value = form_with_samples(FormVariant::hermitian, u, u, phi1, phi2, symbol);
      row.error = std::abs(row.value - study.oracle);
      study.rows[i] = row;
    } catch (const std::exception& e) {
#pragma omp critical(commlab_hform_failure)
      {
        failed = true;
        failure = e.what();
      }
    }
  }
  if (failed) throw NumericalError("hform study failed: " + failure);
  return study;
}

double HMatrix::hermitian_defect() const {
  double worst = 0.0;
  for (int i = 0; i < rank; ++i) {
    for (int j = 0; j < rank; ++j) worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  }
  return worst;
}

double HMatrix::min_eigenvalue() const {
  Eigen::MatrixXcd m(rank, rank);
  for (int i = 0; i < rank; ++i) {
    for (int j = 0; j < rank; ++j) m(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue solver failed");
  return solver.eigenvalues().minCoeff();
}

HMatrix hform_matrix(const std::vector<TestSequenceSpec>& components, int n, const SampledField& phi,
                     const SymbolSpec& psi) {
  if (components.empty()) throw InvalidArgument("hform matrix needs at least one component");
  require_sphere_symbol(psi);
  const Grid& grid = phi.grid;
  std::vector<SampledField> u;
  for (const auto& spec : components) u.push_back(gen_sequence(spec, n, grid));
  const std::vector<cplx> symbol = sample_symbol(grid, psi, true);
  HMatrix m;
  m.n = n;
  m.rank = static_cast<int>(components.size());
  m.entries.resize(components.size() * components.size());
  for (int i = 0; i < m.rank; ++i) {
    for (int j = 0; j < m.rank; ++j) {
      m.entries[static_cast<std::size_t>(i * m.rank + j)] =
          form_with_samples(FormVariant::hermitian, u[i], u[j], phi, phi, symbol);
    }
  }
  return m;
}

}  // namespace commlab
