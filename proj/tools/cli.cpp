#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "axeuler/biot_savart.hpp"
#include "axeuler/field_io.hpp"
#include "axeuler/kernel.hpp"
#include "axeuler/lorentz.hpp"
#include "axeuler/simulator.hpp"
#include "axeuler/verify.hpp"

#ifndef AXEULER_DEFAULT_BASELINE
#define AXEULER_DEFAULT_BASELINE ""
#endif

namespace axeuler::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  int threads = 0;

  double s_min = 0.0;
  double s_max = 0.9;
  std::size_t s_count = 10;
  int h_order = 64;

  std::string lemma;
  std::size_t resolution = 2048;
  std::size_t corpus_size = 50;
  std::size_t corpus_resolution = 128;
  std::uint64_t seed = 7;
  bool json_out = false;
  std::string baseline_path = AXEULER_DEFAULT_BASELINE;
  std::string write_baseline;

  double p = 2.0;
  std::string q = "1";
  int weight_dim = 4;
  std::string field_path;

  int dim = 4;
  double epsilon = -1.0;
  int tau_order = 32;
  std::string targets = "grid";
  std::string output;

  std::string config_path;
};

void set_threads(int n) {
  if (n <= 0) {
    if (const char* env = std::getenv("AXEULER_NUM_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || v < 1) throw UsageError("AXEULER_NUM_THREADS must be a positive integer");
      n = static_cast<int>(v);
    }
  }
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#endif
}

// Writes to `path` atomically, or to `out` when path is empty or "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    io::write_atomically(path, text);
  }
}

int cmd_kernel(const Flags& f, std::ostream& out) {
  if (!(f.s_min >= 0.0) || !(f.s_max < 1.0) || !(f.s_min <= f.s_max))
    throw UsageError("need 0 <= --s-min <= --s-max < 1");
  if (f.s_count < 1) throw UsageError("--s-count must be >= 1");
  if (f.h_order < 1) throw UsageError("--order must be >= 1");
  std::ostringstream os;
  os << "s,H_closed,H_quad,upper_bound\n";
  for (std::size_t k = 0; k < f.s_count; ++k) {
    const double s = f.s_count == 1 ? f.s_min
                                    : f.s_min + (f.s_max - f.s_min) * static_cast<double>(k) /
                                                    static_cast<double>(f.s_count - 1);
    os << io::format_exact(s) << ',' << io::format_exact(kernel::h_closed(s)) << ','
       << io::format_exact(kernel::h_quad(s, f.h_order)) << ',' << io::format_exact(kernel::h_upper_bound(s)) << '\n';
  }
  out << os.str();
  return kOk;
}

int cmd_verify(const Flags& f, std::ostream& out, std::ostream& err) {
  verify::VerifyOptions o;
  o.lemma = f.lemma;
  o.resolution = f.resolution;
  o.corpus_size = f.corpus_size;
  o.corpus_resolution = f.corpus_resolution;
  o.seed = f.seed;
  if (!verify::lemma_known(o.lemma)) throw UsageError("unknown --lemma '" + o.lemma + "'");
  if (!f.baseline_path.empty() && f.write_baseline.empty()) {
    if (fs::exists(f.baseline_path)) {
      o.baseline = verify::read_baseline(f.baseline_path);
    } else {
      err << "note: baseline '" << f.baseline_path << "' not found; corpus regression guard disabled\n";
    }
  }
  const auto report = verify::run_verification(o);
  out << (f.json_out ? verify::report_to_json(report) : verify::report_to_text(report));
  if (!f.write_baseline.empty()) {
    if (!report.stretching_ratio_max || !report.holder_ratio_max)
      throw UsageError("--write-baseline needs the holder and stretching checks (drop --lemma)");
    io::write_atomically(f.write_baseline, verify::baseline_to_json(report.to_baseline()));
    err << "wrote baseline " << f.write_baseline << '\n';
  }
  return report.passed() ? kOk : kVerificationFailed;
}

double parse_q(const std::string& q) {
  if (q == "inf" || q == "INF" || q == "infinity") return lorentz::kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(q, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != q.size()) throw UsageError("--q must be a number or 'inf'");
  return v;
}

int cmd_norms(const Flags& f, std::ostream& out) {
  const double q = parse_q(f.q);
  if (!(f.p >= 1.0) || !(q >= 1.0)) throw UsageError("need --p >= 1 and --q >= 1");
  const Dimension d(f.weight_dim);
  const auto field = io::read_scalar_field(f.field_path);
  const double value = lorentz::lorentz_quasinorm(lorentz::samples_from_field(field, d), {f.p, q});
  // Exponents as plain shortest decimals (2, 1.75, inf); the value keeps its ".0".
  auto exponent = [](double x) {
    if (std::isinf(x)) return std::string("inf");
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
  };
  out << exponent(f.p) << ',' << exponent(q) << ',' << io::format_shortest(value) << '\n';
  return kOk;
}

int cmd_reconstruct(const Flags& f, std::ostream& out) {
  const auto omega = io::read_scalar_field(f.field_path);
  const double h = std::max(omega.grid.hr(), omega.grid.hz());
  const double eps = f.epsilon < 0.0 ? h : f.epsilon;
  const kernel::KernelParams params(Dimension(f.dim), f.tau_order, eps);
  std::vector<Point> targets;
  if (f.targets == "grid") {
    for (std::size_t i = 0; i < omega.grid.nr(); ++i)
      for (std::size_t j = 0; j < omega.grid.nz(); ++j) targets.push_back(omega.grid.node(i, j));
  } else {
    targets = io::read_targets(f.targets);
  }
  const auto v = biot_savart::velocity_from_vorticity(biot_savart::ReconstructionJob(omega, std::move(targets), params));
  std::ostringstream os;
  io::write_velocity_samples(os, v);
  emit(f.output, os.str(), out);
  return kOk;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) && !j.at(key).is_null() ? j.at(key).get<T>() : fallback;
}

int cmd_simulate(const Flags& f, std::ostream& out, std::ostream& err) {
  std::ifstream in(f.config_path);
  if (!in) throw std::runtime_error("cannot open config '" + f.config_path + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error("config '" + f.config_path + "': " + e.what());
  }
  const fs::path base = fs::path(f.config_path).parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };

  try {
    const Dimension d(get_or<int>(cfg, "dimension", 4));
    const auto& g = cfg.at("grid");
    const CylGrid grid(g.at("r_max").get<double>(), g.at("z_min").get<double>(), g.at("z_max").get<double>(),
                       g.at("nr").get<std::size_t>(), g.at("nz").get<std::size_t>());
    const bool has_preset = cfg.contains("preset");
    const bool has_csv = cfg.contains("initial_csv");
    if (has_preset == has_csv) throw UsageError("config needs exactly one of 'preset' and 'initial_csv'");
    ScalarField initial = has_preset ? simulator::preset_initial_data(cfg.at("preset").get<std::string>(), grid)
                                     : io::read_scalar_field(resolve(cfg.at("initial_csv").get<std::string>()));

    const double h = std::max(initial.grid.hr(), initial.grid.hz());
    const kernel::KernelParams kp(d, get_or<int>(cfg, "tau_order", 32), get_or<double>(cfg, "epsilon", h));
    simulator::SimulationConfig sc(std::move(initial), cfg.at("dt").get<double>(), cfg.at("t_end").get<double>(), kp);
    sc.diagnostics_every = get_or<std::size_t>(cfg, "diagnostics_every", 1);
    sc.snapshot_every = get_or<std::size_t>(cfg, "snapshot_every", 0);
    sc.seed = get_or<std::uint64_t>(cfg, "seed", 0);

    if (cfg.contains("envelope_constant")) {
      sc.envelope_constant = cfg.at("envelope_constant").get<double>();
    } else {
      const std::string path = cfg.contains("baseline") ? resolve(cfg.at("baseline").get<std::string>()).string()
                                                        : f.baseline_path;
      if (!path.empty() && fs::exists(path)) {
        sc.envelope_constant = verify::read_baseline(path).envelope_constant;
      } else {
        err << "warning: no envelope constant or baseline; envelope is the initial sup\n";
      }
    }

    const fs::path out_dir = resolve(get_or<std::string>(cfg, "out_dir", "."));
    fs::create_directories(out_dir);

    simulator::RunObserver observer;
    observer.on_snapshot = [&](std::size_t step, const simulator::ParticleSet& p) {
      std::ostringstream os;
      io::write_particles(os, p);
      io::write_atomically(out_dir / ("particles_" + std::to_string(step) + ".csv"), os.str());
    };
    const auto result = simulator::run(sc, observer);

    std::ostringstream diag;
    io::write_diagnostics_header(diag);
    for (const auto& r : result.records) io::write_diagnostics_row(diag, r);
    io::write_atomically(out_dir / "diagnostics.csv", diag.str());
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    out << "wrote " << (out_dir / "diagnostics.csv").string() << " (" << result.records.size() << " records, "
        << result.initial_particles.size() << " particles)\n";
    return kOk;
  } catch (const json::exception& e) {
    throw UsageError("config '" + f.config_path + "': " + e.what());
  } catch (const simulator::SimulationError& e) {
    err << "error: " << e.what() << '\n' << e.dump() << '\n';
    return kUsageError;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Axisymmetric swirl-free Euler kernels, norms, reconstruction and simulation", "axeuler"};
  app.require_subcommand(1);
  app.add_option("--threads", f.threads, "Worker threads (overrides AXEULER_NUM_THREADS)")->check(CLI::PositiveNumber);

  auto* kernel_cmd = app.add_subcommand("kernel", "Tabulate H(s) in closed form and by quadrature");
  kernel_cmd->add_option("--s-min", f.s_min, "Smallest s")->capture_default_str();
  kernel_cmd->add_option("--s-max", f.s_max, "Largest s (< 1)")->capture_default_str();
  kernel_cmd->add_option("--s-count", f.s_count, "Number of rows")->capture_default_str();
  kernel_cmd->add_option("--order", f.h_order, "Gauss-Legendre nodes for H_quad")->capture_default_str();
  kernel_cmd->add_flag("--table", "Emit the CSV table (default)");

  auto* verify_cmd = app.add_subcommand("verify", "Run the numerical verification suite");
  verify_cmd->add_option("--lemma", f.lemma, "Run only this check or check group");
  verify_cmd->add_option("--resolution", f.resolution, "Cells per axis for the weak-norm checks")->capture_default_str();
  verify_cmd->add_option("--corpus-size", f.corpus_size, "Random fields in the corpus")->capture_default_str();
  verify_cmd->add_option("--corpus-resolution", f.corpus_resolution, "Cells per axis for corpus fields")
      ->capture_default_str();
  verify_cmd->add_option("--seed", f.seed, "Corpus seed")->capture_default_str();
  verify_cmd->add_flag("--json", f.json_out, "JSON report");
  verify_cmd->add_option("--baseline", f.baseline_path, "Baseline constants file")->capture_default_str();
  verify_cmd->add_option("--write-baseline", f.write_baseline, "Write this run's corpus constants to a file");

  auto* norms_cmd = app.add_subcommand("norms", "Lorentz quasinorm of a scalar field CSV");
  norms_cmd->add_option("--p", f.p, "Exponent p >= 1")->capture_default_str();
  norms_cmd->add_option("--q", f.q, "Exponent q >= 1 or inf")->capture_default_str();
  norms_cmd->add_option("--weight-dim", f.weight_dim, "Dimension d of the weight r^(d-2)")->capture_default_str();
  norms_cmd->add_option("file", f.field_path, "Field CSV (r,z,value)")->required();

  auto* recon_cmd = app.add_subcommand("reconstruct", "Velocity from a vorticity CSV");
  recon_cmd->add_option("--dim", f.dim, "Dimension d")->capture_default_str();
  recon_cmd->add_option("--epsilon", f.epsilon, "Blob length; 0 excludes the target cell (default: grid spacing)");
  recon_cmd->add_option("--tau-order", f.tau_order, "Quadrature nodes for the tau integral")->capture_default_str();
  recon_cmd->add_option("--targets", f.targets, "Targets CSV (r,z) or 'grid'")->capture_default_str();
  recon_cmd->add_option("-o,--output", f.output, "Output file (default: stdout)");
  recon_cmd->add_option("file", f.field_path, "Vorticity CSV (r,z,value)")->required();

  auto* sim_cmd = app.add_subcommand("simulate", "Vortex-particle run from a JSON config");
  sim_cmd->add_option("--config", f.config_path, "Config file")->required();
  sim_cmd->add_option("--baseline", f.baseline_path, "Baseline used when the config has no envelope constant")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    set_threads(f.threads);
    if (*kernel_cmd) return cmd_kernel(f, out);
    if (*verify_cmd) return cmd_verify(f, out, err);
    if (*norms_cmd) return cmd_norms(f, out);
    if (*recon_cmd) return cmd_reconstruct(f, out);
    if (*sim_cmd) return cmd_simulate(f, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace axeuler::cli
