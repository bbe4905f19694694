#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "commlab/grid.hpp"
#include "commlab/symbols.hpp"

namespace commlab {

using DenseMatrix = Eigen::MatrixXcd;

// Largest matrix side the dense routines accept.
inline constexpr std::size_t kMaterializeLimit = 4096;

struct KernelField {
  SampledField samples;  // spatial side, centred at x = 0

  const Grid& grid() const { return samples.grid; }
};

/// Symbol samples on the frequency lattice. With `sphere`, a(xi/|xi|) is used
/// away from the origin and a(0) at the origin (0 for every homogeneous symbol).
std::vector<cplx> sample_symbol(const Grid& grid, const SymbolSpec& a, bool sphere);

SampledField apply_sampled_multiplier(const std::vector<cplx>& symbol, const SampledField& u);
SampledField apply_multiplier(const SymbolSpec& a, bool sphere, const SampledField& u);
// A(b u) - b A(u)
SampledField apply_commutator(const SymbolSpec& a, bool sphere, const SampledField& b, const SampledField& u);

// psi = inverse FT of a chi; the grid must resolve |xi| <= 3.
KernelField compact_part_kernel(const SymbolSpec& a, const CutoffChi& chi, const Grid& grid);
// Inverse FT of a compactly supported symbol (a dyadic piece).
KernelField dyadic_kernel(const SymbolSpec& a_j, const Grid& grid);
// sum_{j=0}^{n} of the dyadic kernels of a.
KernelField partial_kernel_sum(const SymbolSpec& a, const CutoffChi& chi, const LPPartition& part, const Grid& grid,
                               int n);

// int_{|x| > s} |k| dx
double kernel_tail_mass(const KernelField& k, double s);
// int_{|x| < s} |x| |k(x)| dx
double small_ball_moment(const KernelField& k, double s);

// dx^d sum_{|x-y| > s} k(x - y) (b(x) - b(y)) u(y), cyclic distance on the torus.
SampledField truncated_kernel_apply(const KernelField& k, const SampledField& b, double s, const SampledField& u);

enum class OperatorKind { multiplier, multiplication, commutator, truncated_commutator, truncated_kernel };

class OperatorHandle {
 public:
  static OperatorHandle multiplier(const Grid& grid, const SymbolSpec& a, bool sphere);
  static OperatorHandle multiplier_from_samples(const Grid& grid, std::vector<cplx> symbol, std::string description);
  static OperatorHandle multiplication(const SampledField& b);
  static OperatorHandle commutator(const SymbolSpec& a, bool sphere, const SampledField& b);
  static OperatorHandle commutator_from_samples(std::vector<cplx> symbol, const SampledField& b, std::string description);
  // A_n B - B A_n with A_n the cyclic convolution by the kernel.
  static OperatorHandle truncated_commutator(const KernelField& kernel, const SampledField& b);
  static OperatorHandle truncated_kernel(const KernelField& kernel, const SampledField& b, double s);

  SampledField apply(const SampledField& u) const;
  SampledField apply_adjoint(const SampledField& u) const;

  OperatorKind kind() const { return kind_; }
  const Grid& grid() const { return grid_; }
  const std::string& description() const { return description_; }

 private:
  OperatorHandle(Grid grid, OperatorKind kind, std::string description)
      : grid_(grid), kind_(kind), description_(std::move(description)) {}

  Grid grid_;
  OperatorKind kind_;
  std::string description_;
  std::vector<cplx> symbol_;
  std::vector<cplx> b_;
  std::optional<KernelField> kernel_;
  double radius_ = 0.0;
};

// Column j is op(e_j); columns are built in parallel.
DenseMatrix materialize(const OperatorHandle& op);

struct SingularSpectrum {
  std::vector<double> values;  // nonincreasing
  int dim = 0;
  int n = 0;
  double half_width = 0.0;
  std::string descriptor;

  double sigma(std::size_t k) const { return values.at(k - 1); }  // 1-based
  // sum_{k > K} sigma_k^2 / sum sigma_k^2 (0 for the zero operator).
  double tail_energy(std::size_t head) const;
};

SingularSpectrum singular_values(const DenseMatrix& m);
SingularSpectrum singular_values(const OperatorHandle& op);

struct NormEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Power iteration on op^* op from a fixed pseudo-random start.
NormEstimate operator_norm_l2(const OperatorHandle& op, int iterations = 200);

}  // namespace commlab
