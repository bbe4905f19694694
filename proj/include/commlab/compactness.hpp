#pragma once

#include <limits>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "commlab/operators.hpp"
#include "commlab/profiles.hpp"

namespace commlab {

enum class SequenceKind { oscillation, concentration, translation };

/// Bounded test sequences built from one bump profile phi.
///   oscillation:   phi(x) exp(2 pi i lambda_n direction.x), lambda_n = base n
///   concentration: n^(d/p) phi(n (x - c)) with c the profile centre, capped at `bound`
///   translation:   phi(x - n dx direction)
struct TestSequenceSpec {
  SequenceKind kind = SequenceKind::oscillation;
  Bump profile;
  Point direction{1.0, 0.0, 0.0};
  double base = 1.0;
  double bound = std::numeric_limits<double>::infinity();
  double p = 2.0;
};

SequenceKind parse_sequence_kind(std::string_view name);

// Largest n with base n |direction| < N/(4L) (oscillation only).
int max_nyquist_index(const TestSequenceSpec& spec, const Grid& grid);

SampledField gen_sequence(const TestSequenceSpec& spec, int n, const Grid& grid);

// Default measurement box [-L/2, L/2)^d.
Box central_box(const Grid& grid);

struct DecayPoint {
  int n = 0;
  double lambda = 0.0;  // frequency scale, concentration rate or shift index
  double value = 0.0;
};

struct DecayCurve {
  std::vector<DecayPoint> points;  // sorted by n
  double p0 = 2.0;
  Box region;

  // last value <= 0.5 * value at n = max_n / 4 (nearest tabulated n below).
  bool eventually_decreasing() const;
  double value_at(int n) const;
};

// ||C u_n||_{L^p0(V)} along the sequence, C the commutator of the multiplier a with b.
DecayCurve commutator_decay_experiment(const SymbolSpec& a, bool sphere, const SampledField& b,
                                       const TestSequenceSpec& spec, std::vector<int> n_list, double p0,
                                       std::optional<Box> region = std::nullopt);

enum class SpectrumTarget { commutator, multiplier, multiplication };

SpectrumTarget parse_spectrum_target(std::string_view name);

struct SvdTailRow {
  int n = 0;
  double half_width = 0.0;
  double sigma_k = 0.0;
  double tail_energy = 0.0;
};

// Singular spectrum tail per grid for the chosen operator built from (a, bump b).
std::vector<SvdTailRow> svd_tail_experiment(const SymbolSpec& a, bool sphere, const Bump& b,
                                            const std::vector<std::pair<int, double>>& grids, std::size_t head,
                                            SpectrumTarget target = SpectrumTarget::commutator);

}  // namespace commlab
