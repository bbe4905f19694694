// Acceptance suite: one PASS/FAIL line per criterion, evaluated at the stated
// tolerances. Usage: acceptance <commlab-binary> <configs-dir>
//
// Criteria 4, 5 and 8 are known not to hold with this discretization (see
// README). They are still evaluated and reported as FAIL; only failures
// outside that set make the process exit nonzero.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "commlab/compactness.hpp"
#include "commlab/error.hpp"
#include "commlab/hmeasure.hpp"
#include "commlab/mikhlin.hpp"
#include "commlab/operators.hpp"

namespace fs = std::filesystem;
using namespace commlab;

namespace {

const std::set<int> kDocumentedUnattainable{4, 5, 8};

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [violated]");
  }
};

std::string g3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<cplx> random_values(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<cplx> v(n);
  for (auto& z : v) z = cplx{normal(rng), normal(rng)};
  return v;
}

Bump make_bump(BumpShape shape, Point centre, double width) {
  Bump b;
  b.shape = shape;
  b.center = centre;
  b.width = width;
  return b;
}

Verdict grid_self_test() {
  Verdict v;
  std::mt19937_64 rng(1);
  double worst_rt = 0.0;
  double worst_pl = 0.0;
  for (const auto& [d, n] : std::vector<std::pair<int, int>>{{1, 64}, {1, 256}, {2, 64}}) {
    const Grid g = make_grid(d, n, 2.0);
    for (int k = 0; k < 3; ++k) {
      const SampledField u(g, Side::spatial, random_values(g.size(), rng));
      const SampledField uh = forward_ft(u);
      const SampledField back = inverse_ft(uh);
      double diff = 0.0, ref = 0.0, spectral = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        diff += std::norm(back[i] - u[i]);
        ref += std::norm(u[i]);
        spectral += std::norm(uh[i]);
      }
      worst_rt = std::max(worst_rt, std::sqrt(diff / ref));
      const double spatial = ref * g.cell_volume();
      worst_pl = std::max(worst_pl, std::abs(spatial - spectral * g.frequency_cell_volume()) / spatial);
    }
  }
  v.require(worst_rt < 1e-12, "roundtrip " + g3(worst_rt) + " < 1e-12");
  v.require(worst_pl < 1e-10, "Plancherel " + g3(worst_pl) + " < 1e-10");
  return v;
}

Verdict cutoff_and_partition() {
  Verdict v;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> radius(0.0, 4.0);
  int bad_chi = 0;
  for (int d : {1, 2}) {
    const CutoffChi chi = build_cutoff_chi(d);
    for (int k = 0; k < 10000; ++k) {
      Point dir{unit(rng), d > 1 ? unit(rng) : 0.0, 0.0};
      const double len = norm(dir);
      if (len == 0.0) continue;
      const double r = radius(rng);
      const Point xi{dir[0] / len * r, dir[1] / len * r, 0.0};
      const double c = chi(xi);
      const bool ok = c >= -1e-10 && c <= 1.0 + 1e-10 && (r > 1.0 || std::abs(c - 1.0) < 1e-10) &&
                      (r < 3.0 || std::abs(c) < 1e-10);
      bad_chi += !ok;
    }
  }
  v.require(bad_chi == 0, "chi plateau/support/range violations " + std::to_string(bad_chi) + " of 2e4 samples");

  const LPPartition part = build_lp_partition(-8, 8);
  std::uniform_real_distribution<double> log_r(std::log2(part.shell_inner()), std::log2(part.shell_outer()));
  double worst = 0.0;
  for (int d : {1, 2, 3}) {
    for (int k = 0; k < 10000; ++k) {
      Point dir{unit(rng), d > 1 ? unit(rng) : 0.0, d > 2 ? unit(rng) : 0.0};
      const double len = norm(dir);
      if (len == 0.0) continue;
      const double r = std::exp2(log_r(rng));
      worst = std::max(worst, std::abs(part.partition_sum({dir[0] / len * r, dir[1] / len * r, dir[2] / len * r}) - 1.0));
    }
  }
  v.require(worst < 1e-10, "partition deviation " + g3(worst) + " < 1e-10 on the j in [-8, 8] shell");
  return v;
}

Verdict mikhlin_checker() {
  Verdict v;
  const double target = std::sqrt(3.0 * std::numbers::pi / 4.0);
  const MikhlinReport c = mikhlin_constant(constant_symbol(2, 1.0), 2, -4, 8, 512);
  v.require(std::abs(c.k_hat - target) < 0.01 * target,
            "constant k_hat " + g3(c.k_hat) + " vs " + g3(target) + " within 1%");
  const MikhlinReport r = mikhlin_constant(riesz_symbol(2, 1), 2, -4, 8, 256);
  double worst = 0.0;
  for (const auto& alpha : multi_indices(2, 2)) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& e : r.entries) {
      if (!(e.alpha == alpha)) continue;
      lo = std::min(lo, e.ratio);
      hi = std::max(hi, e.ratio);
    }
    if (hi > 0.0) worst = std::max(worst, hi / lo - 1.0);
  }
  v.require(worst < 0.02, "riesz ratio spread " + g3(worst) + " < 2% over j in [-4, 8]");
  return v;
}

Verdict dyadic_scaling() {
  Verdict v;
  const CutoffChi chi = build_cutoff_chi(2);
  const LPPartition part = build_lp_partition(0, 12);
  for (const SymbolSpec& a : {riesz_symbol(2, 1), gaussian_symbol(2)}) {
    const DyadicScalingTable t = dyadic_scaling_check(a, chi, part, 0, 6, 2, 256);
    double worst = 0.0;
    std::string where;
    for (const auto& alpha : multi_indices(2, 2)) {
      const double s = t.spread(alpha);
      if (s > worst || std::isinf(s)) {
        worst = s;
        where = alpha.str(2);
      }
    }
    v.require(worst <= 4.0, a.name() + " max/min " + g3(worst) + " (alpha " + where + ") <= 4");
  }
  return v;
}

Verdict kernel_tails() {
  Verdict v;
  const Grid g = make_grid(1, 4096, 16.0);
  const CutoffChi chi = build_cutoff_chi(1);
  const LPPartition part = build_lp_partition(0, 12);
  const SymbolSpec a = sign_symbol();
  const int kappa = default_kappa(1);
  std::vector<double> tails;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int j = 0; j <= 5; ++j) {
    const double tail = kernel_tail_mass(dyadic_kernel(dyadic_piece(a, chi, part, j), g), 0.5);
    tails.push_back(tail);
    const double scaled = tail * std::pow(std::ldexp(0.5, j), kappa - 0.5);
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
  }
  v.require(hi / lo < 8.0, "scaled tail max/min " + g3(hi / lo) + " < 8 over j in [0, 5]");
  // the increment of the partial sum from n - 1 to n is the dyadic kernel of index n
  const double limit = std::pow(2.0, 0.5 - kappa) + 0.1;
  double worst = 0.0;
  for (std::size_t n = 1; n < tails.size(); ++n) worst = std::max(worst, tails[n] / tails[n - 1]);
  v.require(worst <= limit, "increment ratio max " + g3(worst) + " <= " + g3(limit));
  return v;
}

Verdict small_ball() {
  Verdict v;
  const Grid g = make_grid(1, 4096, 16.0);
  const KernelField a3 =
      partial_kernel_sum(gaussian_symbol(1), build_cutoff_chi(1), build_lp_partition(0, 12), g, 3);
  const double m4 = small_ball_moment(a3, 0.4);
  const double m2 = small_ball_moment(a3, 0.2);
  const double m1 = small_ball_moment(a3, 0.1);
  v.require(m4 > m2 && m2 > m1, "moments " + g3(m4) + " > " + g3(m2) + " > " + g3(m1));
  v.require(m1 < 0.35 * m4, "ratio " + g3(m1 / m4) + " < 0.35");
  return v;
}

Verdict commutator_algebra() {
  Verdict v;
  double worst_zero = 0.0;
  double worst_bound = -std::numeric_limits<double>::infinity();
  double worst_split = 0.0;
  int cases = 0;

  struct Case {
    Grid grid;
    SymbolSpec a;
    bool sphere;
    Bump b;
  };
  std::vector<Case> list;
  for (int n : {128, 256, 512}) {
    list.push_back({make_grid(1, n, 2.0), sign_symbol(), true, make_bump(BumpShape::c1, {0, 0, 0}, 1.0)});
    list.push_back({make_grid(1, n, 2.0), sign_symbol(), true, make_bump(BumpShape::smooth, {0.1, 0, 0}, 0.8)});
  }
  list.push_back({make_grid(1, 128, 4.0), gaussian_symbol(1, 2.0), false, make_bump(BumpShape::smooth, {0.3, 0, 0}, 1.5)});
  list.push_back({make_grid(2, 16, 2.0), riesz_symbol(2, 1), true, make_bump(BumpShape::smooth, {0.2, -0.1, 0}, 1.2)});
  list.push_back({make_grid(2, 32, 2.0), riesz_symbol(2, 2), true, make_bump(BumpShape::c1, {0, 0, 0}, 1.0)});

  for (const auto& c : list) {
    const SampledField b = sample_bump(c.grid, c.b);
    const SampledField flat = sample_spatial(c.grid, [](const Point&) { return cplx{1.7, 0.0}; });
    worst_zero = std::max(worst_zero, materialize(OperatorHandle::commutator(c.a, c.sphere, flat)).cwiseAbs().maxCoeff());
    worst_zero = std::max(
        worst_zero,
        materialize(OperatorHandle::commutator(constant_symbol(c.grid.dim(), 0.6), false, b)).cwiseAbs().maxCoeff());

    const DenseMatrix m = materialize(OperatorHandle::commutator(c.a, c.sphere, b));
    double sup_a = 0.0, sup_b = 0.0;
    for (const auto& z : sample_symbol(c.grid, c.a, c.sphere)) sup_a = std::max(sup_a, std::abs(z));
    for (const auto& z : b.values) sup_b = std::max(sup_b, std::abs(z));
    const double sigma1 = singular_values(m).sigma(1);
    worst_bound = std::max(worst_bound, sigma1 / (2.0 * sup_a * sup_b));
    ++cases;

    if (c.grid.size() <= 256) {
      // the split acts on a itself; for the homogeneous cases that equals the sphere form
      const CutoffChi chi = build_cutoff_chi(c.grid.dim());
      const DenseMatrix low = materialize(OperatorHandle::commutator(multiply(c.a, chi.as_symbol()), false, b));
      const DenseMatrix high = materialize(OperatorHandle::commutator(multiply(c.a, chi.complement()), false, b));
      const DenseMatrix whole = materialize(OperatorHandle::commutator(c.a, false, b));
      worst_split = std::max(worst_split, (whole - low - high).cwiseAbs().maxCoeff());
    }
  }
  v.require(worst_zero < 1e-12, "constant a or b: max entry " + g3(worst_zero) + " < 1e-12");
  v.require(worst_bound <= 1.0, "sigma_1 / (2 sup|a| sup|b|) max " + g3(worst_bound) + " <= 1 over " +
                                     std::to_string(cases) + " cases");
  v.require(worst_split < 1e-10, "splitting residual " + g3(worst_split) + " < 1e-10");
  return v;
}

Verdict compactness_contrast() {
  Verdict v;
  const Bump b = make_bump(BumpShape::c1, {0, 0, 0}, 1.0);
  const std::vector<std::pair<int, double>> grids{{128, 2.0}, {256, 2.0}, {512, 2.0}};
  const auto comm = svd_tail_experiment(sign_symbol(), true, b, grids, 32);
  const auto plain = svd_tail_experiment(sign_symbol(), true, b, grids, 32, SpectrumTarget::multiplier);
  std::string comm_values, plain_values;
  bool small = true, nonincreasing = true, control = true;
  for (std::size_t i = 0; i < grids.size(); ++i) {
    comm_values += (i ? ", " : "") + g3(comm[i].tail_energy);
    plain_values += (i ? ", " : "") + g3(plain[i].tail_energy);
    small = small && comm[i].tail_energy <= 0.05;
    control = control && plain[i].tail_energy >= 0.5;
    if (i > 0) nonincreasing = nonincreasing && comm[i].tail_energy <= comm[i - 1].tail_energy;
  }
  v.require(small, "commutator tails [" + comm_values + "] <= 0.05");
  v.require(nonincreasing, "commutator tails nonincreasing in N");
  v.require(control, "multiplier tails [" + plain_values + "] >= 0.5");
  return v;
}

Verdict oscillation_decay() {
  Verdict v;
  const Grid g = make_grid(1, 512, 2.0);
  const SampledField b = sample_bump(g, make_bump(BumpShape::smooth, {0.1, 0, 0}, 0.8));
  TestSequenceSpec spec;
  spec.profile = make_bump(BumpShape::smooth, {0, 0, 0}, 1.0);
  const DecayCurve c = commutator_decay_experiment(sign_symbol(), true, b, spec, {4, 8, 16, 32}, 2.0);
  const double at8 = c.value_at(8);
  const double at32 = c.value_at(32);
  v.require(at32 <= 0.5 * at8, "n=32 " + g3(at32) + " <= 0.5 x n=8 " + g3(at8));
  return v;
}

Verdict hmeasure_form() {
  Verdict v;
  {
    const Grid g = make_grid(1, 1024, 4.0);
    TestSequenceSpec spec;
    spec.profile = make_bump(BumpShape::smooth, {0, 0, 0}, 1.0);
    const SampledField phi1 = sample_bump(g, make_bump(BumpShape::smooth, {0.2, 0, 0}, 1.0));
    const SampledField phi2 = sample_bump(g, make_bump(BumpShape::smooth, {-0.1, 0, 0}, 1.0));
    const int top = max_nyquist_index(spec, g);
    const HFormStudy s = hform_convergence_study(spec, phi1, phi2, sign_symbol(), {top});
    const double err = s.scaled_error(s.rows.back());
    v.require(err < 0.01, "d=1 relative error " + g3(err) + " at n=" + std::to_string(top) + " < 1%");
  }
  {
    const Grid g = make_grid(2, 64, 4.0);
    TestSequenceSpec spec;
    spec.profile = make_bump(BumpShape::smooth, {0, 0, 0}, 1.0);
    const SampledField phi1 = sample_bump(g, make_bump(BumpShape::smooth, {0.2, 0, 0}, 1.0));
    const SampledField phi2 = sample_bump(g, make_bump(BumpShape::smooth, {-0.1, 0, 0}, 1.0));
    const int top = max_nyquist_index(spec, g);
    const HFormStudy s = hform_convergence_study(spec, phi1, phi2, riesz_symbol(2, 2), {top});
    const double err = s.rows.back().error;
    v.require(std::abs(s.oracle) == 0.0 && err < 1e-3 * s.profile_norm2,
              "d=2 zero-oracle error " + g3(err) + " < 1e-3 ||phi||^2 = " + g3(1e-3 * s.profile_norm2));
  }
  {
    const Grid g = make_grid(2, 64, 4.0);
    const SampledField phi = sample_bump(g, make_bump(BumpShape::smooth, {0, 0, 0}, 1.8));
    TestSequenceSpec first, second;
    first.profile = make_bump(BumpShape::smooth, {0.2, 0, 0}, 1.0);
    second.profile = make_bump(BumpShape::smooth, {-0.3, 0.1, 0}, 1.2);
    const SymbolSpec psi = multiply(riesz_symbol(2, 1), riesz_symbol(2, 1));
    const HMatrix m = hform_matrix({first, second}, max_nyquist_index(first, g), phi, psi);
    double scale = 0.0;
    for (const auto& z : m.entries) scale = std::max(scale, std::abs(z));
    const double defect = m.hermitian_defect() / scale;
    const double lowest = m.min_eigenvalue() / scale;
    v.require(defect < 1e-3 && lowest > -1e-3,
              "2x2 matrix hermitian defect " + g3(defect) + ", min eigenvalue " + g3(lowest) + " (relative)");
  }
  return v;
}

std::vector<std::string> report_rows(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> rows;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("# generated:", 0) == 0) continue;
    rows.push_back(line);
  }
  return rows;
}

Verdict cli_determinism(const std::string& binary, const fs::path& configs) {
  Verdict v;
  const fs::path scratch = fs::temp_directory_path() / ("commlab_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(scratch);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(configs)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  int identical = 0;
  for (const auto& cfg : files) {
    std::vector<std::vector<std::string>> runs;
    bool ran = true;
    for (const char* tag : {"a", "b"}) {
      const fs::path out = scratch / (cfg.stem().string() + "." + tag + ".csv");
      const std::string cmd = "\"" + binary + "\" run \"" + cfg.string() + "\" -o \"" + out.string() + "\" 2>/dev/null";
      ran = ran && std::system(cmd.c_str()) == 0;
      runs.push_back(report_rows(out));
    }
    const bool same = ran && !runs[0].empty() && runs[0] == runs[1];
    identical += same;
    if (!same) v.require(false, cfg.filename().string() + " differs or failed");
  }
  std::error_code ec;
  fs::remove_all(scratch, ec);
  v.require(!files.empty() && identical == static_cast<int>(files.size()),
            std::to_string(identical) + "/" + std::to_string(files.size()) + " configs byte-identical");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: %s <commlab-binary> <configs-dir>\n", argv[0]);
    return 1;
  }
  const std::string binary = argv[1];
  const fs::path configs = argv[2];

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"grid self-test", grid_self_test},
      {"cutoff and partition", cutoff_and_partition},
      {"Mikhlin checker", mikhlin_checker},
      {"dyadic scaling", dyadic_scaling},
      {"kernel tails", kernel_tails},
      {"small-ball moment", small_ball},
      {"commutator algebra", commutator_algebra},
      {"compactness contrast", compactness_contrast},
      {"oscillation decay", oscillation_decay},
      {"H-measure form", hmeasure_form},
      {"CLI determinism", [&] { return cli_determinism(binary, configs); }},
  };

  int passed = 0, expected_failures = 0, unexpected_failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("threw: ") + e.what();
    }
    const bool documented = kDocumentedUnattainable.count(id) > 0;
    std::string suffix;
    if (!v.pass && documented) suffix = " [documented as unattainable]";
    if (v.pass && documented) suffix = " [listed as unattainable but passed]";
    std::printf("%s %2d %s: %s%s\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), v.detail.c_str(),
                suffix.c_str());
    std::fflush(stdout);
    if (v.pass) {
      ++passed;
    } else if (documented) {
      ++expected_failures;
    } else {
      ++unexpected_failures;
    }
  }
  std::printf("summary: %d passed, %d failed as documented, %d failed unexpectedly\n", passed, expected_failures,
              unexpected_failures);
  return unexpected_failures == 0 ? 0 : 1;
}
