#include "commlab/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "commlab/compactness.hpp"
#include "commlab/error.hpp"
#include "commlab/hmeasure.hpp"
#include "commlab/mikhlin.hpp"

namespace commlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ParseFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// config field access

const json& need(const json& cfg, const std::string& key) {
  auto it = cfg.find(key);
  if (it == cfg.end()) throw InvalidArgument("missing required field '" + key + "'");
  return *it;
}

template <class T>
T as(const json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument("field '" + key + "' has the wrong type");
  }
}

template <class T>
T get_or(const json& cfg, const std::string& key, T fallback) {
  auto it = cfg.find(key);
  return it == cfg.end() ? fallback : as<T>(*it, key);
}

int positive_int(const json& cfg, const std::string& key, int fallback) {
  const int v = get_or<int>(cfg, key, fallback);
  if (v <= 0) throw InvalidArgument("field '" + key + "' must be positive");
  return v;
}

Point point_field(const json& value, int dim, const std::string& key) {
  const auto coords = as<std::vector<double>>(value, key);
  if (static_cast<int>(coords.size()) != dim) {
    throw InvalidArgument("field '" + key + "' needs " + std::to_string(dim) + " coordinates");
  }
  Point p{0.0, 0.0, 0.0};
  std::copy(coords.begin(), coords.end(), p.begin());
  return p;
}

Grid grid_field(const json& cfg) {
  const json& g = need(cfg, "grid");
  if (!g.is_object()) throw InvalidArgument("field 'grid' must be an object with d, N, L");
  return make_grid(as<int>(need(g, "d"), "grid.d"), as<int>(need(g, "N"), "grid.N"), as<double>(need(g, "L"), "grid.L"));
}

Bump bump_field(const json& value, int dim, const std::string& key) {
  if (!value.is_object()) throw InvalidArgument("field '" + key + "' must be an object");
  Bump b;
  b.shape = parse_bump_shape(get_or<std::string>(value, "shape", "smooth"));
  if (value.contains("center")) b.center = point_field(value["center"], dim, key + ".center");
  b.width = as<double>(need(value, "width"), key + ".width");
  b.amplitude = get_or<double>(value, "amplitude", 1.0);
  if (!(b.width > 0.0)) throw InvalidArgument("field '" + key + ".width' must be positive");
  return b;
}

SymbolSpec symbol_field(const json& cfg, const std::string& key, int dim, const fs::path& base_dir) {
  std::string text = as<std::string>(need(cfg, key), key);
  // Tabulated symbol paths are taken relative to the config file.
  const std::string prefix = "tabulated(";
  if (text.rfind(prefix, 0) == 0 && text.size() > prefix.size() && text.back() == ')') {
    fs::path p = text.substr(prefix.size(), text.size() - prefix.size() - 1);
    if (p.is_relative()) p = base_dir / p;
    text = prefix + p.string() + ")";
  }
  return parse_symbol(text, dim);
}

std::pair<int, int> range_field(const json& cfg, const std::string& key, std::pair<int, int> fallback) {
  if (!cfg.contains(key)) return fallback;
  const auto v = as<std::vector<int>>(cfg[key], key);
  if (v.size() != 2 || v[0] > v[1]) throw InvalidArgument("field '" + key + "' must be [lo, hi] with lo <= hi");
  return {v[0], v[1]};
}

std::vector<int> n_list_field(const json& cfg) {
  auto v = as<std::vector<int>>(need(cfg, "n_list"), "n_list");
  if (v.empty()) throw InvalidArgument("field 'n_list' is empty");
  return v;
}

TestSequenceSpec sequence_field(const json& cfg, int dim) {
  const json& s = need(cfg, "sequence");
  if (!s.is_object()) throw InvalidArgument("field 'sequence' must be an object");
  TestSequenceSpec spec;
  spec.kind = parse_sequence_kind(get_or<std::string>(s, "kind", "oscillation"));
  spec.profile = bump_field(need(s, "profile"), dim, "sequence.profile");
  if (s.contains("direction")) spec.direction = point_field(s["direction"], dim, "sequence.direction");
  spec.base = get_or<double>(s, "base", 1.0);
  spec.p = get_or<double>(s, "p", 2.0);
  if (s.contains("bound")) spec.bound = as<double>(s["bound"], "sequence.bound");
  return spec;
}

Box region_field(const json& cfg, const Grid& grid) {
  if (!cfg.contains("region")) return central_box(grid);
  const json& r = cfg["region"];
  Box box;
  box.lo = point_field(need(r, "lo"), grid.dim(), "region.lo");
  box.hi = point_field(need(r, "hi"), grid.dim(), "region.hi");
  return box;
}

void check_keys(const json& cfg, const std::string& required, const std::set<std::string>& optional) {
  std::set<std::string> allowed{"schema_version", "experiment", "output"};
  allowed.insert(optional.begin(), optional.end());
  std::stringstream names(required);
  for (std::string key; std::getline(names, key, ',');) {
    key.erase(0, key.find_first_not_of(' '));
    allowed.insert(key);
    need(cfg, key);
  }
  for (const auto& [key, value] : cfg.items()) {
    if (!allowed.count(key)) throw InvalidArgument("unknown field '" + key + "'");
  }
}

std::string num(double v) { return format_number(v); }
std::string num(int v) { return std::to_string(v); }

// ---------------------------------------------------------------------------
// experiments

Report mikhlin_check(const json& cfg, const fs::path& base) {
  const int d = as<int>(need(cfg, "d"), "d");
  const SymbolSpec a = symbol_field(cfg, "symbol", d, base);
  const int kappa = get_or<int>(cfg, "kappa", default_kappa(d));
  const auto [j_min, j_max] = range_field(cfg, "j_range", {-4, 8});
  const MikhlinReport rep = mikhlin_constant(a, kappa, j_min, j_max, get_or<int>(cfg, "resolution", 128));
  Report out;
  out.columns = {"alpha", "j", "r", "integral", "ratio"};
  for (const auto& e : rep.entries) out.rows.push_back({e.alpha.str(d), num(e.j), num(e.r), num(e.integral), num(e.ratio)});
  out.rows.push_back({"k_hat", "", "", "", num(rep.k_hat)});
  return out;
}

Report dyadic_scaling(const json& cfg, const fs::path& base) {
  const int d = as<int>(need(cfg, "d"), "d");
  const SymbolSpec a = symbol_field(cfg, "symbol", d, base);
  const auto [j_min, j_max] = range_field(cfg, "j_range", {0, 6});
  const CutoffChi chi = build_cutoff_chi(d, get_or<double>(cfg, "epsilon", 0.25));
  const LPPartition part = build_lp_partition(-8, std::max(8, j_max + 2));
  const DyadicScalingTable table = dyadic_scaling_check(a, chi, part, j_min, j_max, get_or<int>(cfg, "kappa", default_kappa(d)),
                                                        get_or<int>(cfg, "resolution", 128));
  Report out;
  out.columns = {"j", "alpha", "lhs", "bound_ratio"};
  for (const auto& r : table.rows) out.rows.push_back({num(r.j), r.alpha.str(d), num(r.lhs), num(r.bound_ratio)});
  out.rows.push_back({"sup_ratio", "", "", num(table.sup_ratio)});
  return out;
}

Report kernel_tails(const json& cfg, const fs::path& base) {
  const Grid grid = grid_field(cfg);
  const int d = grid.dim();
  const SymbolSpec a = symbol_field(cfg, "symbol", d, base);
  const auto [j_min, j_max] = range_field(cfg, "j_range", {0, 5});
  if (j_min < 0) throw InvalidArgument("kernel-tails needs j >= 0");
  const double s = get_or<double>(cfg, "s", 0.5);
  const int kappa = get_or<int>(cfg, "kappa", default_kappa(d));
  const CutoffChi chi = build_cutoff_chi(d, get_or<double>(cfg, "epsilon", 0.25));
  const LPPartition part = build_lp_partition(-8, std::max(8, j_max + 2));
  // check every annulus against the grid before any transform
  for (int j = j_min; j <= j_max; ++j) {
    const double radius = std::ldexp(1.0, j + 1);
    if (radius > grid.n() / (4.0 * grid.half_width())) dyadic_kernel(dyadic_piece(a, chi, part, j), grid);
  }
  Report out;
  out.columns = {"j", "tail_mass", "scaled_tail"};
  for (int j = j_min; j <= j_max; ++j) {
    const double tail = kernel_tail_mass(dyadic_kernel(dyadic_piece(a, chi, part, j), grid), s);
    out.rows.push_back({num(j), num(tail), num(tail * std::pow(std::ldexp(s, j), kappa - 0.5 * d))});
  }
  return out;
}

Report kernel_sums(const json& cfg, const fs::path& base) {
  const Grid grid = grid_field(cfg);
  const int d = grid.dim();
  const SymbolSpec a = symbol_field(cfg, "symbol", d, base);
  const int n_max = get_or<int>(cfg, "n_max", 5);
  if (n_max < 0) throw InvalidArgument("field 'n_max' must be nonnegative");
  const double s = get_or<double>(cfg, "s", 0.5);
  const auto radii = get_or<std::vector<double>>(cfg, "moment_radii", {0.4, 0.2, 0.1});
  const CutoffChi chi = build_cutoff_chi(d, get_or<double>(cfg, "epsilon", 0.25));
  const LPPartition part = build_lp_partition(-8, std::max(8, n_max + 2));
  if (std::ldexp(1.0, n_max + 1) > grid.n() / (4.0 * grid.half_width())) {
    dyadic_kernel(dyadic_piece(a, chi, part, n_max), grid);
  }
  if (!(s > 0.0 && s < grid.half_width())) throw InvalidArgument("field 's' must satisfy 0 < s < L");
  for (double r : radii) {
    if (!(r > 0.0 && r <= grid.half_width())) throw InvalidArgument("moment radii must satisfy 0 < s <= L");
  }

  Report out;
  out.columns = {"n", "tail_increment", "increment_ratio"};
  for (double r : radii) out.columns.push_back("moment_s=" + num(r));
  KernelField sum{SampledField(grid, Side::spatial)};
  double previous = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const KernelField piece = dyadic_kernel(dyadic_piece(a, chi, part, n), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) sum.samples.values[i] += piece.samples.values[i];
    const double inc = kernel_tail_mass(piece, s);
    std::vector<std::string> row{num(n), num(inc), n == 0 || previous == 0.0 ? "" : num(inc / previous)};
    for (double r : radii) row.push_back(num(small_ball_moment(sum, r)));
    out.rows.push_back(std::move(row));
    previous = inc;
  }
  return out;
}

Report commutator_svd(const json& cfg, const fs::path& base) {
  const int d = get_or<int>(cfg, "d", 1);
  const SymbolSpec a = symbol_field(cfg, "symbol", d, base);
  const Bump b = bump_field(need(cfg, "b"), d, "b");
  std::vector<std::pair<int, double>> grids;
  for (const auto& g : as<std::vector<json>>(need(cfg, "grids"), "grids")) {
    const auto v = as<std::vector<double>>(g, "grids");
    if (v.size() != 2) throw InvalidArgument("each entry of 'grids' must be [N, L]");
    if (v[0] != std::floor(v[0])) throw InvalidArgument("grid N must be an integer");
    grids.emplace_back(static_cast<int>(v[0]), v[1]);
  }
  for (const auto& [n, l] : grids) {
    if (!b.fits_in_box(d, l, l / 4)) throw InvalidArgument("bump 'b' must stay L/4 inside every grid box");
  }
  const int head = positive_int(cfg, "K", 32);
  const auto target = parse_spectrum_target(get_or<std::string>(cfg, "operator", "commutator"));
  const auto rows = svd_tail_experiment(a, get_or<bool>(cfg, "sphere", false), b, grids, head, target);
  Report out;
  out.columns = {"N", "L", "sigma_K", "tail_energy"};
  for (const auto& r : rows) out.rows.push_back({num(r.n), num(r.half_width), num(r.sigma_k), num(r.tail_energy)});
  return out;
}

Report oscillation_decay(const json& cfg, const fs::path& base) {
  const Grid grid = grid_field(cfg);
  const int d = grid.dim();
  const SymbolSpec a = symbol_field(cfg, "symbol", d, base);
  const Bump b = bump_field(need(cfg, "b"), d, "b");
  if (!b.fits_in_box(d, grid.half_width(), grid.half_width() / 4)) {
    throw InvalidArgument("bump 'b' must stay L/4 inside the box");
  }
  const TestSequenceSpec spec = sequence_field(cfg, d);
  const auto n_list = n_list_field(cfg);
  std::vector<double> exponents;
  if (cfg.contains("p0") && cfg["p0"].is_array()) {
    exponents = as<std::vector<double>>(cfg["p0"], "p0");
  } else {
    exponents.push_back(get_or<double>(cfg, "p0", 2.0));
  }
  const Box region = region_field(cfg, grid);
  Report out;
  out.columns = {"n", "lambda", "p0", "norm"};
  const SampledField bs = sample_bump(grid, b);
  for (double p0 : exponents) {
    const DecayCurve curve = commutator_decay_experiment(a, get_or<bool>(cfg, "sphere", false), bs, spec, n_list, p0, region);
    for (const auto& p : curve.points) out.rows.push_back({num(p.n), num(p.lambda), num(p0), num(p.value)});
  }
  return out;
}

Report hmeasure(const json& cfg, const fs::path& base) {
  const Grid grid = grid_field(cfg);
  const int d = grid.dim();
  const SymbolSpec psi = symbol_field(cfg, "psi", d, base);
  const TestSequenceSpec spec = sequence_field(cfg, d);
  const SampledField phi1 = sample_bump(grid, bump_field(need(cfg, "phi1"), d, "phi1"));
  const SampledField phi2 = sample_bump(grid, bump_field(need(cfg, "phi2"), d, "phi2"));
  const HFormStudy study = hform_convergence_study(spec, phi1, phi2, psi, n_list_field(cfg));
  Report out;
  out.notes.push_back("oracle: " + num(study.oracle.real()) + " " + num(study.oracle.imag()));
  out.columns = {"n", "re", "im", "err"};
  for (const auto& r : study.rows) out.rows.push_back({num(r.n), num(r.value.real()), num(r.value.imag()), num(r.error)});
  return out;
}

Report roundtrip_selftest(const json& cfg, const fs::path&) {
  const auto seed = get_or<std::uint64_t>(cfg, "seed", 20240517);
  const int samples = positive_int(cfg, "samples", 3);
  std::vector<Grid> grids;
  for (const auto& g : as<std::vector<json>>(need(cfg, "grids"), "grids")) {
    grids.push_back(make_grid(as<int>(need(g, "d"), "grids.d"), as<int>(need(g, "N"), "grids.N"),
                              as<double>(need(g, "L"), "grids.L")));
  }
  if (grids.empty()) throw InvalidArgument("field 'grids' is empty");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Report out;
  out.columns = {"d", "N", "L", "roundtrip_error", "plancherel_error"};
  double worst_rt = 0.0;
  double worst_pl = 0.0;
  for (const Grid& g : grids) {
    double rt = 0.0;
    double pl = 0.0;
    for (int k = 0; k < samples; ++k) {
      SampledField u(g, Side::spatial);
      for (auto& z : u.values) z = cplx{normal(rng), normal(rng)};
      const SampledField uh = forward_ft(u);
      const SampledField back = inverse_ft(uh);
      double diff = 0.0;
      double ref = 0.0;
      double spectral = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        diff += std::norm(back.values[i] - u.values[i]);
        ref += std::norm(u.values[i]);
        spectral += std::norm(uh.values[i]);
      }
      rt = std::max(rt, std::sqrt(diff / ref));
      const double spatial = std::pow(lp_norm(u, 2.0), 2);
      pl = std::max(pl, std::abs(spatial - spectral * g.frequency_cell_volume()) / spatial);
    }
    worst_rt = std::max(worst_rt, rt);
    worst_pl = std::max(worst_pl, pl);
    out.rows.push_back({num(g.dim()), num(g.n()), num(g.half_width()), num(rt), num(pl)});
  }
  out.rows.push_back({"max", "", "", num(worst_rt), num(worst_pl)});
  if (!(worst_rt < 1e-12 && worst_pl < 1e-10)) {
    throw NumericalError("transform self-test failed: roundtrip " + num(worst_rt) + ", Plancherel " + num(worst_pl));
  }
  return out;
}

struct Experiment {
  ExperimentInfo info;
  std::set<std::string> optional;
  Report (*fn)(const json&, const fs::path&);
};

const std::vector<Experiment>& registry() {
  static const std::vector<Experiment> table{
      {{"mikhlin-check", "dyadic annulus bound: integrals, ratios and k_hat over (alpha, j)", "d, symbol"},
       {"kappa", "j_range", "resolution"},
       mikhlin_check},
      {{"dyadic-scaling", "integrals of D^alpha a_j against 2^(j(d - 2|alpha|))", "d, symbol"},
       {"kappa", "j_range", "resolution", "epsilon"},
       dyadic_scaling},
      {{"kernel-tails", "off-ball L1 mass of the dyadic kernels and its scaled form", "grid, symbol"},
       {"kappa", "j_range", "s", "epsilon"},
       kernel_tails},
      {{"kernel-sums", "partial kernel sums: tail increments and small-ball moments", "grid, symbol"},
       {"n_max", "s", "moment_radii", "epsilon"},
       kernel_sums},
      {{"commutator-svd", "singular spectrum head and tail energy per grid", "symbol, b, grids, K"},
       {"d", "sphere", "operator"},
       commutator_svd},
      {{"oscillation-decay", "L^p0 norm of the commutator along a test sequence", "grid, symbol, b, sequence, n_list"},
       {"sphere", "p0", "region"},
       oscillation_decay},
      {{"hmeasure", "hermitian form along an oscillation against its limit", "grid, psi, sequence, phi1, phi2, n_list"},
       {},
       hmeasure},
      {{"roundtrip-selftest", "transform roundtrip and Plancherel errors on random fields", "grids"},
       {"seed", "samples"},
       roundtrip_selftest},
  };
  return table;
}

// ---------------------------------------------------------------------------
// output

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

void write_report(const Report& report, const json& cfg, const fs::path& target) {
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << "# commlab " << kToolVersion << "\n";
    out << "# experiment: " << report.experiment << "\n";
    out << "# config: " << cfg.dump() << "\n";
    out << "# generated: " << timestamp() << "\n";
    for (const auto& note : report.notes) out << "# " << note << "\n";
    for (std::size_t i = 0; i < report.columns.size(); ++i) out << (i ? "," : "") << report.columns[i];
    out << "\n";
    for (const auto& row : report.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << "\n";
    }
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  fs::rename(tmp, target);
}

void report_error(std::ostream& err, const char* kind, int code, const std::string& message) {
  err << json{{"error", kind}, {"exit_code", code}, {"message", message}}.dump() << std::endl;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

const std::vector<ExperimentInfo>& experiments() {
  static const std::vector<ExperimentInfo> infos = [] {
    std::vector<ExperimentInfo> out;
    for (const auto& e : registry()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

std::string list_experiments() {
  std::ostringstream out;
  for (const auto& e : experiments()) out << e.name << "\t" << e.description << " (required: " << e.required << ")\n";
  return out.str();
}

int run(const std::string& config_path, const std::optional<std::string>& output_override, std::ostream& err) {
  json cfg;
  const Experiment* experiment = nullptr;
  try {
    std::ifstream in(config_path);
    if (!in) throw ParseFailure("cannot read config file " + config_path);
    try {
      cfg = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
      throw ParseFailure(e.what());
    }
    if (!cfg.is_object()) throw ParseFailure("config must be a JSON object");

    const int version = as<int>(need(cfg, "schema_version"), "schema_version");
    if (version != kSchemaVersion) {
      throw InvalidArgument("unsupported schema_version " + std::to_string(version) + " (expected " +
                            std::to_string(kSchemaVersion) + ")");
    }
    const std::string name = as<std::string>(need(cfg, "experiment"), "experiment");
    for (const auto& e : registry()) {
      if (e.info.name == name) experiment = &e;
    }
    if (experiment == nullptr) throw InvalidArgument("unknown experiment '" + name + "'");
    check_keys(cfg, experiment->info.required, experiment->optional);

    fs::path target = output_override ? fs::path(*output_override)
                                      : fs::path(get_or<std::string>(cfg, "output", name + ".csv"));
    const fs::path base_dir = fs::absolute(config_path).parent_path();

    Report report = experiment->fn(cfg, base_dir);
    report.experiment = name;
    write_report(report, cfg, target);
    return ok;
  } catch (const ParseFailure& e) {
    report_error(err, "parse", parse_error, e.what());
    return parse_error;
  } catch (const InvalidArgument& e) {
    report_error(err, "validation", validation_error, e.what());
    return validation_error;
  } catch (const NumericalError& e) {
    report_error(err, "numerical", numerical_error, e.what());
    return numerical_error;
  } catch (const std::exception& e) {
    report_error(err, "io", numerical_error, e.what());
    return numerical_error;
  }
}

int main_entry(int argc, char** argv) {
  if (const char* cap = std::getenv(kThreadsVariable)) {
    int threads = 0;
    const std::string_view text(cap);
    const auto res = std::from_chars(text.data(), text.data() + text.size(), threads);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || threads < 1) {
      report_error(std::cerr, "validation", validation_error,
                   std::string(kThreadsVariable) + " must be a positive integer, got '" + cap + "'");
      return validation_error;
    }
    omp_set_num_threads(threads);
  }

  CLI::App app{"commlab: Fourier multiplier and commutator experiments"};
  app.require_subcommand(1);
  std::string config;
  std::string output;
  auto* run_cmd = app.add_subcommand("run", "run the experiment described by a JSON config");
  run_cmd->add_option("config", config, "config file")->required();
  run_cmd->add_option("-o,--output", output, "CSV path, overrides the config's 'output'");
  auto* list_cmd = app.add_subcommand("list", "list the available experiments");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }
  if (list_cmd->parsed()) {
    std::cout << list_experiments();
    return ok;
  }
  return run(config, output.empty() ? std::nullopt : std::optional<std::string>(output), std::cerr);
}

}  // namespace commlab::cli
