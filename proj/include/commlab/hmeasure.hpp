#pragma once

#include <vector>

#include "commlab/compactness.hpp"

namespace commlab {

enum class FormVariant { hermitian, bilinear };

FormVariant parse_form_variant(std::string_view name);

/// dx^d sum (phi1 u)(x) * w(x), w = conj(A(phi2 second)) for the hermitian
/// variant and A(phi2 second) for the bilinear one. A is the sphere-form
/// multiplier of psi, which must be degree-zero homogeneous.
cplx hform(FormVariant variant, const SampledField& u, const SampledField& second, const SampledField& phi1,
           const SampledField& phi2, const SymbolSpec& psi);

/// Limit of the hermitian form for u_n = phi exp(2 pi i lambda_n xi0.x):
/// conj(psi(xi0/|xi0|)) * int phi1 conj(phi2) |phi|^2 dx, by lattice quadrature.
cplx oscillation_oracle(const SampledField& profile, const Point& xi0, const SampledField& phi1,
                        const SampledField& phi2, const SymbolSpec& psi);

struct HFormRow {
  int n = 0;
  cplx value;
  double error = 0.0;  // |value - oracle|
};

struct HFormStudy {
  cplx oracle;
  double profile_norm2 = 0.0;  // ||phi||_2^2
  std::vector<HFormRow> rows;  // sorted by n

  // Relative error when the oracle is nonzero, else error / ||phi||_2^2.
  double scaled_error(const HFormRow& row) const;
};

// Hermitian form along an oscillation sequence against its oracle.
HFormStudy hform_convergence_study(const TestSequenceSpec& spec, const SampledField& phi1, const SampledField& phi2,
                                   const SymbolSpec& psi, std::vector<int> n_list);

/// r x r matrix M_ij = hform(hermitian, u^i, u^j, phi, phi, psi) for
/// oscillating components u^i_n sharing the index n.
struct HMatrix {
  int n = 0;
  std::vector<cplx> entries;  // row-major r x r
  int rank = 0;

  cplx operator()(int i, int j) const { return entries[static_cast<std::size_t>(i * rank + j)]; }
  // max |M_ij - conj M_ji|
  double hermitian_defect() const;
  // smallest eigenvalue of (M + M^*)/2
  double min_eigenvalue() const;
};

HMatrix hform_matrix(const std::vector<TestSequenceSpec>& components, int n, const SampledField& phi,
                     const SymbolSpec& psi);

}  // namespace commlab
