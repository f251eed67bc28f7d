#include "axeuler/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "axeuler/biot_savart.hpp"
#include "axeuler/corpus.hpp"
#include "axeuler/kernel.hpp"
#include "axeuler/lorentz.hpp"

namespace axeuler::verify {

using json = nlohmann::ordered_json;

namespace {

CheckResult inequality(std::string name, double measured, double bound, double tolerance, std::string detail = {}) {
  CheckResult c;
  c.name = std::move(name);
  c.kind = CheckKind::Inequality;
  c.measured = measured;
  c.bound = bound;
  c.tolerance = tolerance;
  c.passed = std::isfinite(measured) && measured <= bound * (1.0 + tolerance);
  c.detail = std::move(detail);
  return c;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

const double kSqrt8Pi = std::sqrt(8.0 * std::numbers::pi);

// s_k = s_max k / (n - 1), k = 0..n-1.
std::vector<double> s_grid(double s_max, std::size_t n) {
  std::vector<double> s(n);
  for (std::size_t k = 0; k < n; ++k) s[k] = s_max * static_cast<double>(k) / static_cast<double>(n - 1);
  return s;
}

void kernel_identity(const VerifyOptions&, VerifyReport& out) {
  double worst = 0.0;
  double at = 0.0;
  for (double s : s_grid(0.99, 10000)) {
    const double e = std::abs(kernel::h_closed(s) - kernel::h_quad(s, 64));
    if (e > worst) {
      worst = e;
      at = s;
    }
  }
  out.checks.push_back(inequality("kernel-identity", worst, 1e-10, 0.0, "max |H_closed - H_quad(64)| at s = " + fmt("%.6g", at)));
}

void h_bounds(const VerifyOptions&, VerifyReport& out) {
  std::size_t violations = 0;
  std::size_t non_monotone = 0;
  double prev = -1.0;
  for (double s : s_grid(0.999, 10000)) {
    const double h = kernel::h_closed(s);
    if (!(h >= 0.0) || !(h <= kernel::h_upper_bound(s))) ++violations;
    if (!(h >= prev)) ++non_monotone;
    prev = h;
  }
  auto c = inequality("h-bounds", static_cast<double>(violations + non_monotone), 0.0, 0.0,
                      std::to_string(violations) + " bound violations, " + std::to_string(non_monotone) +
                          " monotonicity violations over 10000 samples");
  out.checks.push_back(std::move(c));
}

void g_weak_norm(const VerifyOptions& o, VerifyReport& out) {
  const auto base = lorentz::weak_norm_of_g(1.0, 0.0, o.resolution, 8.0);
  out.checks.push_back(inequality("g-weak-norm", base.value, kSqrt8Pi, 0.02,
                                  "a = 1, b = 0, extent 8, resolution " + std::to_string(o.resolution) +
                                      ", sup attained near level " + fmt("%.6g", base.tau_star)));

  const auto fine = lorentz::weak_norm_of_g(1.0, 0.0, 2 * o.resolution, 8.0);
  out.checks.push_back(inequality("g-weak-norm-stability", std::abs(fine.value - base.value) / base.value, 0.01, 0.0,
                                  "relative change " + std::to_string(o.resolution) + " -> " +
                                      std::to_string(2 * o.resolution) + ", refined value " + fmt("%.10g", fine.value)));

  double worst = 0.0;
  std::string detail;
  for (auto [a, b] : {std::pair{2.0, 5.0}, std::pair{0.5, -3.0}}) {
    const auto w = lorentz::weak_norm_of_g(a, b, o.resolution, 8.0 * a);
    worst = std::max(worst, std::abs(w.value - base.value) / base.value);
    detail += (detail.empty() ? "" : ", ") + fmt("(a, b) = (%g, ", a) + fmt("%g): ", b) + fmt("%.10g", w.value);
  }
  out.checks.push_back(inequality("g-weak-norm-invariance", worst, 0.01, 0.0, detail));

  out.checks.push_back(inequality("g-weak-norm-far-field", base.far_field_relative_change, 1e-3, 0.0,
                                  "radius " + fmt("%.6g", base.far_field_radius) +
                                      (base.extent_sufficient ? " inside" : " outside") + " the sampled extent"));
  if (!base.extent_sufficient) out.checks.back().passed = false;
}

// Random simple functions on shared weights, with repeated values to
// exercise tie merging.
void holder(const VerifyOptions& o, VerifyReport& out) {
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<int> size(1, 40);
  std::uniform_real_distribution<double> weight(0.01, 1.0);
  std::uniform_real_distribution<double> value(0.0, 1.0);
  std::uniform_int_distribution<int> level(0, 4);
  std::bernoulli_distribution quantize(0.5);
  auto draw = [&]() { return quantize(rng) ? 0.25 * level(rng) : value(rng); };

  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = size(rng);
    std::vector<double> w(static_cast<std::size_t>(n));
    std::vector<double> f(w.size());
    std::vector<double> g(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
      w[k] = weight(rng);
      f[k] = draw();
      g[k] = draw();
    }
    const auto p = lorentz::holder_pairing(lorentz::WeightedSamples(f, w), lorentz::WeightedSamples(g, w));
    worst = std::max(worst, p.ratio);
  }
  out.holder_ratio_max = worst;
  out.checks.push_back(inequality("holder", worst, 1.0, 0.0, "max lhs / rhs over 1000 random simple functions"));
}

std::vector<Point> probe_points() {
  std::vector<Point> probes;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) probes.push_back({0.1 + 0.35 * i, -2.45 + 0.7 * j});
  return probes;
}

void velocity_bound(const VerifyOptions& o, VerifyReport& out) {
  const auto fields = corpus::make_corpus(o.seed, o.corpus_size);
  const auto grid = corpus::corpus_grid(o.corpus_resolution);
  const auto probes = probe_points();
  double worst = 0.0;
  for (const auto& field : fields) {
    const auto omega = field.sample_vorticity(grid);
    for (const auto& p : probes) {
      const double rhs = biot_savart::velocity_bound_rhs(omega, p);
      const double lhs = std::abs(field.velocity(p.r, p.z).ur);
      if (lhs == 0.0) continue;
      worst = std::max(worst, rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity());
    }
  }
  out.checks.push_back(inequality("velocity-bound", worst, 1.0, 0.05,
                                  "max |u_r| / rhs over " + std::to_string(fields.size()) + " fields x " +
                                      std::to_string(probes.size()) + " probes"));
}

biot_savart::StretchingRatio field_ratio(const corpus::StreamFunctionField& f, const CylGrid& grid, double lambda) {
  return biot_savart::stretching_ratio(f.sample_velocity(grid, lambda), f.sample_vorticity(grid, lambda));
}

void stretching(const VerifyOptions& o, VerifyReport& out) {
  const auto fields = corpus::make_corpus(o.seed, o.corpus_size);
  const auto grid = corpus::corpus_grid(o.corpus_resolution);

  double worst = 0.0;
  std::size_t non_finite = 0;
  double invariance = 0.0;
  for (const auto& f : fields) {
    const auto base = field_ratio(f, grid, 1.0);
    if (!std::isfinite(base.ratio) || base.zero_field) ++non_finite;
    worst = std::max(worst, base.ratio);
    for (double lambda : {0.5, 2.0}) {
      const auto scaled = field_ratio(f, grid.scaled(1.0 / lambda), lambda);
      invariance = std::max(invariance, std::abs(scaled.ratio - base.ratio) / base.ratio);
    }
  }
  const auto gauss_grid = make_uniform_grid(4.0, -4.0, 4.0, o.corpus_resolution, o.corpus_resolution);
  const auto gauss = biot_savart::stretching_ratio(gaussian_test_field(gauss_grid), gaussian_test_vorticity(gauss_grid));
  out.stretching_ratio_max = worst;

  std::string detail = "corpus max over " + std::to_string(fields.size()) + " fields; Gaussian example " +
                       fmt("%.6g", gauss.ratio) + "; analytic product (8/pi) C_H sqrt(8 pi) = " +
                       fmt("%.6g", 8.0 / std::numbers::pi * kSqrt8Pi);
  CheckResult c;
  if (o.baseline) {
    c = inequality("stretching-corpus", worst, 2.0 * o.baseline->stretching_ratio_max, 0.0,
                   detail + "; bound is twice the baseline");
  } else {
    c = inequality("stretching-corpus", worst, std::numeric_limits<double>::infinity(), 0.0, detail + "; no baseline");
  }
  if (non_finite > 0) {
    c.passed = false;
    c.detail += "; " + std::to_string(non_finite) + " fields without a finite ratio";
  }
  out.checks.push_back(std::move(c));
  out.checks.push_back(inequality("stretching-scale-invariance", invariance, 1e-3, 0.0,
                                  "max relative change of the ratio under lambda in {1/2, 2}"));
}

struct Group {
  std::vector<std::string> names;
  std::function<void(const VerifyOptions&, VerifyReport&)> run;
};

const std::vector<Group>& groups() {
  static const std::vector<Group> g = {
      {{"kernel-identity"}, kernel_identity},
      {{"h-bounds"}, h_bounds},
      {{"g-weak-norm", "g-weak-norm-stability", "g-weak-norm-invariance", "g-weak-norm-far-field"}, g_weak_norm},
      {{"holder"}, holder},
      {{"velocity-bound"}, velocity_bound},
      {{"stretching-corpus", "stretching-scale-invariance"}, stretching},
  };
  return g;
}

bool selects(const std::string& lemma, const std::string& name) {
  return lemma.empty() || name == lemma || name.rfind(lemma + "-", 0) == 0;
}

std::string kind_name(CheckKind k) { return k == CheckKind::Inequality ? "inequality" : "equality"; }

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

Baseline VerifyReport::to_baseline() const {
  if (!stretching_ratio_max || !holder_ratio_max)
    throw std::logic_error("baseline needs the holder and stretching checks");
  Baseline b;
  b.stretching_ratio_max = *stretching_ratio_max;
  b.holder_ratio_max = *holder_ratio_max;
  b.envelope_constant = 2.0 * *stretching_ratio_max;
  b.seed = options.seed;
  b.corpus_size = options.corpus_size;
  b.resolution = options.corpus_resolution;
  return b;
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& g : groups()) out.insert(out.end(), g.names.begin(), g.names.end());
    return out;
  }();
  return names;
}

bool lemma_known(const std::string& lemma) {
  const auto& names = check_names();
  return std::any_of(names.begin(), names.end(), [&](const std::string& n) { return selects(lemma, n); });
}

VerifyReport run_verification(const VerifyOptions& options) {
  if (!lemma_known(options.lemma)) throw std::invalid_argument("unknown check '" + options.lemma + "'");
  if (options.resolution < 64) throw std::invalid_argument("resolution must be >= 64");
  if (options.corpus_size < 1) throw std::invalid_argument("corpus size must be >= 1");
  if (options.corpus_resolution < 16) throw std::invalid_argument("corpus resolution must be >= 16");
  VerifyReport report;
  report.options = options;
  for (const auto& g : groups()) {
    const bool any = std::any_of(g.names.begin(), g.names.end(), [&](const std::string& n) { return selects(options.lemma, n); });
    if (!any) continue;
    VerifyReport part;
    part.options = options;
    g.run(options, part);
    for (auto& c : part.checks)
      if (selects(options.lemma, c.name)) report.checks.push_back(std::move(c));
    if (part.stretching_ratio_max) report.stretching_ratio_max = part.stretching_ratio_max;
    if (part.holder_ratio_max) report.holder_ratio_max = part.holder_ratio_max;
  }
  return report;
}

std::string report_to_json(const VerifyReport& report) {
  json j;
  j["seed"] = report.options.seed;
  j["resolution"] = report.options.resolution;
  j["corpus_size"] = report.options.corpus_size;
  j["corpus_resolution"] = report.options.corpus_resolution;
  j["lemma"] = report.options.lemma.empty() ? json(nullptr) : json(report.options.lemma);
  j["passed"] = report.passed();
  json checks = json::array();
  for (const auto& c : report.checks) {
    json e;
    e["name"] = c.name;
    e["status"] = c.passed ? "pass" : "fail";
    e["kind"] = kind_name(c.kind);
    e["measured"] = number(c.measured);
    e["bound"] = number(c.bound);
    e["tolerance"] = c.tolerance;
    e["detail"] = c.detail;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  return j.dump(2) + "\n";
}

std::string report_to_text(const VerifyReport& report) {
  std::ostringstream os;
  for (const auto& c : report.checks) {
    char line[256];
    std::snprintf(line, sizeof line, "%-4s %-28s measured %-14.8g bound %-14.8g tol %-8.3g ", c.passed ? "PASS" : "FAIL",
                  c.name.c_str(), c.measured, c.bound, c.tolerance);
    os << line << c.detail << '\n';
  }
  os << (report.passed() ? "all checks passed" : "verification FAILED") << " (seed " << report.options.seed
     << ", resolution " << report.options.resolution << ", corpus " << report.options.corpus_size << " @ "
     << report.options.corpus_resolution << ")\n";
  return os.str();
}

std::string baseline_to_json(const Baseline& b) {
  json j;
  j["stretching_ratio_max"] = b.stretching_ratio_max;
  j["holder_ratio_max"] = b.holder_ratio_max;
  j["envelope_constant"] = b.envelope_constant;
  j["seed"] = b.seed;
  j["corpus_size"] = b.corpus_size;
  j["resolution"] = b.resolution;
  return j.dump(2) + "\n";
}

Baseline baseline_from_json(const std::string& text) {
  try {
    const auto j = json::parse(text);
    Baseline b;
    b.stretching_ratio_max = j.at("stretching_ratio_max").get<double>();
    b.holder_ratio_max = j.at("holder_ratio_max").get<double>();
    b.envelope_constant = j.at("envelope_constant").get<double>();
    b.seed = j.at("seed").get<std::uint64_t>();
    b.corpus_size = j.at("corpus_size").get<std::size_t>();
    b.resolution = j.at("resolution").get<std::size_t>();
    if (!(b.stretching_ratio_max > 0.0) || !(b.envelope_constant >= 0.0))
      throw std::runtime_error("baseline constants must be positive");
    return b;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed baseline: ") + e.what());
  }
}

Baseline read_baseline(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open baseline '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return baseline_from_json(ss.str());
}

}  // namespace axeuler::verify
