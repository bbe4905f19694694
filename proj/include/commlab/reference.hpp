#pragma once

// Serial, deliberately plain implementations of the parallel kernels. They
// serve as test oracles and as the baseline in the benchmarks.

#include "commlab/mikhlin.hpp"
#include "commlab/operators.hpp"

namespace commlab::reference {

// Direct O(N^{2d}) sums with the same normalization as forward_ft/inverse_ft.
SampledField naive_forward_ft(const SampledField& u);
SampledField naive_inverse_ft(const SampledField& v);

std::vector<cplx> sample_symbol(const Grid& grid, const SymbolSpec& a, bool sphere);
double shell_integral(const SymbolSpec& a, const MultiIndex& alpha, double inner, double outer, int resolution);
SampledField truncated_kernel_apply(const KernelField& k, const SampledField& b, double s, const SampledField& u);
DenseMatrix materialize(const OperatorHandle& op);

// dx^d sum_y k(x - y) u(y) with cyclic indexing.
SampledField cyclic_convolution(const KernelField& k, const SampledField& u);

}  // namespace commlab::reference
