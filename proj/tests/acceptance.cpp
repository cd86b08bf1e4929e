// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "quasitrans/capacity.hpp"
#include "quasitrans/harmonic_series.hpp"
#include "quasitrans/nystrom.hpp"
#include "quasitrans/transmission.hpp"
#include "quasitrans/validation.hpp"

using namespace quasitrans;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) passed = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [miss]");
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome circle_identity() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto [a, b] = transmission_norms(family("circle", 0.0), 16, 256);
  const double dt = seconds_since(t0);
  o.require(std::abs(a.norm_estimate - 1.0) <= 1e-8, "int->ext " + fmt("%.17g", a.norm_estimate));
  o.require(std::abs(b.norm_estimate - 1.0) <= 1e-8, "ext->int " + fmt("%.17g", b.norm_estimate));
  o.require(dt < 10.0, "runtime " + fmt("%.2f s", dt));
  return o;
}

Outcome energy_oracles() {
  Outcome o;
  const auto circle = NystromSystem::build(family("circle", 0.0), 256);
  double worst_k = 0.0;
  double worst_series = 0.0;
  for (int k = 1; k <= 8; ++k) {
    const auto h = sample_at_nodes(*circle, [k](double t) { return std::cos(k * t); });
    const double e = dirichlet_energy(*circle, h, Side::interior);
    worst_k = std::max(worst_k, std::abs(e - k * M_PI));
    HarmonicSeries s(SeriesDomain::disk());
    s.add_analytic(k, 0.5).add_antianalytic(k, 0.5);
    worst_series = std::max(worst_series, std::abs(dirichlet_energy(s) - e));
  }
  // A mixed series with several modes, through both paths.
  HarmonicSeries mixed(SeriesDomain::disk());
  mixed.add_analytic(1, {0.3, -0.2}).add_analytic(4, {0.1, 0.4}).add_antianalytic(2, {-0.5, 0.1});
  const auto hm = sample_at_nodes(*circle, [&](double t) {
    Complex v(0.0, 0.0);
    for (const auto& [n, a] : mixed.analytic()) v += a * std::polar(1.0, n * t);
    for (const auto& [n, b] : mixed.antianalytic()) v += b * std::polar(1.0, -n * t);
    return v.real();
  });
  HarmonicSeries real_part(SeriesDomain::disk());
  for (const auto& [n, a] : mixed.analytic()) {
    real_part.add_analytic(n, 0.5 * a).add_antianalytic(n, 0.5 * std::conj(a));
  }
  for (const auto& [n, b] : mixed.antianalytic()) {
    real_part.add_antianalytic(n, 0.5 * b).add_analytic(n, 0.5 * std::conj(b));
  }
  worst_series = std::max(worst_series, std::abs(dirichlet_energy(real_part) - dirichlet_energy(*circle, hm, Side::interior)));

  const auto ellipse = family("ellipse", 0.5);
  const auto esys = NystromSystem::build(ellipse, 256);
  const auto x = sample_at_nodes(*esys, [&](double t) { return ellipse.eval(t).real(); });
  const double ee = dirichlet_energy(*esys, x, Side::interior);
  o.require(worst_k <= 1e-9, "max |E(Re z^k) - k pi| " + fmt("%.3g", worst_k));
  o.require(std::abs(ee - M_PI / 2) <= 1e-8, "ellipse " + fmt("%.3g", std::abs(ee - M_PI / 2)));
  o.require(worst_series <= 1e-9, "series vs BIE " + fmt("%.3g", worst_series));
  return o;
}

Outcome decomposition() {
  Outcome o;
  // Pointwise recomposition on 32 random annulus points per series.
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> deg(1, 6);
  std::uniform_real_distribution<double> radius(0.5, 1.0);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    const auto h = random_annulus_series(rng, 0.5, deg(rng));
    const auto d = annulus_decompose(h);
    for (int j = 0; j < 32; ++j) {
      const Complex z = std::polar(radius(rng), angle(rng));
      const Complex direct = evaluate(h, z);
      const Complex sum = evaluate(d.inner_part, z) + evaluate(d.outer_part, z) - d.c * std::log(std::abs(z));
      worst = std::max({worst, std::abs(direct - sum), std::abs(direct - d.recompose(z))});
    }
  }
  HarmonicSeries log_only(SeriesDomain::annulus(0.5, 1.0));
  log_only.add_log(1.0);
  const auto d = annulus_decompose(log_only);
  bool parts_zero = true;
  for (const auto* part : {&d.inner_part, &d.outer_part}) {
    for (const auto& [n, a] : part->analytic()) parts_zero = parts_zero && a == Complex(0.0, 0.0);
    for (const auto& [n, b] : part->antianalytic()) parts_zero = parts_zero && b == Complex(0.0, 0.0);
  }
  o.require(worst < 1e-13, "max recomposition error " + fmt("%.3g", worst));
  o.require(d.c == Complex(-1.0, 0.0), "c(log|z|) = " + fmt("%.17g", d.c.real()));
  o.require(parts_zero, "h1 = h2 = 0");
  return o;
}

Outcome coperiod() {
  Outcome o;
  for (const auto& [label, p] : {std::pair<const char*, Complex>{"0", {0.0, 0.0}},
                                 {"0.3", {0.3, 0.0}},
                                 {"0.5i", {0.0, 0.5}}}) {
    const double m = greens_coperiod(p, 0.9);
    o.require(std::abs(m + kTwoPi) <= 1e-10, std::string("p=") + label + " err " + fmt("%.3g", std::abs(m + kTwoPi)));
  }
  return o;
}

Outcome capacity() {
  Outcome o;
  const double d200 = fekete_capacity(BoundarySet::from_intervals({{0.0, M_PI}}), 200);
  const double target = std::sin(M_PI / 4);
  o.require(std::abs(d200 - target) <= 1e-3, "arc pi d_200 " + fmt("%.8f", d200) + " vs " + fmt("%.8f", target));

  std::mt19937_64 rng(20240611);
  bool monotone = true;
  bool positive = true;
  const std::vector<CircleMap> maps{CircleMap::rotation(2.0), CircleMap::disk_automorphism({0.5, -0.3}),
                                    CircleMap::piecewise_linear(0.3), CircleMap::piecewise_linear(1.8),
                                    CircleMap::sample([](double t) { return t + 0.4 * std::sin(t); })};
  for (int s = 0; s < 20; ++s) {
    const auto set = random_arc_union(rng);
    double prev = std::numeric_limits<double>::infinity();
    for (int n : {8, 16, 32, 64}) {
      const double d = fekete_capacity(set, n);
      monotone = monotone && d <= prev;
      prev = d;
    }
    for (const auto& phi : maps) positive = positive && fekete_capacity(pushforward(set, phi), 32) > 0.0;
  }
  o.require(monotone, "d_n monotone on 20 unions");
  o.require(positive, "pushforward positive");
  return o;
}

Outcome degradation() {
  Outcome o;
  const auto t0 = Clock::now();
  double prev = 0.0;
  bool nondecreasing = true;
  bool converged = true;
  double at_zero = 0.0;
  std::string values;
  for (double p : {0.0, 0.2, 0.4, 0.6, 0.8, 0.9, 0.95}) {
    const auto r = transmission_norm(family("cusp", p), 16, 512, Direction::interior_to_exterior);
    if (p == 0.0) at_zero = r.norm_estimate;
    nondecreasing = nondecreasing && r.norm_estimate >= prev;
    if (p <= 0.9) converged = converged && r.converged;
    prev = r.norm_estimate;
    values += (values.empty() ? "" : " ") + fmt("%.6g", r.norm_estimate);
  }
  const double dt = seconds_since(t0);
  o.require(nondecreasing, "non-decreasing [" + values + "]");
  o.require(std::abs(at_zero - 1.0) <= 1e-6, "p=0 " + fmt("%.17g", at_zero));
  o.require(prev > 10.0, "p=0.95 " + fmt("%.6g", prev) + " > 10");
  o.require(converged, "converged through 0.9");
  o.require(dt < 300.0, "runtime " + fmt("%.1f s", dt));
  return o;
}

Outcome mobius() {
  Outcome o;
  const auto r = mobius_conjugate_norm(family("ellipse", 0.5), Mobius::disk_automorphism({0.2, 0.0}), 16, 512,
                                       Direction::interior_to_exterior);
  const double diff = std::abs(r.image.norm_estimate - r.original.norm_estimate);
  o.require(diff <= 1e-5, fmt("original %.12g", r.original.norm_estimate) + fmt(" image %.12g", r.image.norm_estimate));
  return o;
}

Outcome agreement() {
  Outcome o;
  const auto ellipse = family("ellipse", 0.5);
  const auto sys = NystromSystem::build(ellipse, 256);
  const auto h = sample_at_nodes(*sys, [&](double t) { return ellipse.eval(t).real(); });
  const auto r = boundary_agreement(ellipse, h, 256, 64);
  o.require(r.max_discrepancy < 1e-6, "max discrepancy " + fmt("%.3g", r.max_discrepancy));
  o.require(r.fraction_converged >= 0.99, "converged " + fmt("%.4f", r.fraction_converged));
  o.require(r.roundtrip_error < 1e-7, "roundtrip " + fmt("%.3g", r.roundtrip_error));
  return o;
}

Outcome collar() {
  Outcome o;
  const auto a = collar_ratio_sample(20240611, 1000);
  const auto b = collar_ratio_sample(987654321, 1000);
  const double spread = std::abs(a.sup_ratio - b.sup_ratio) / std::max(a.sup_ratio, b.sup_ratio);
  o.require(a.all_finite && b.all_finite, "all finite");
  o.require(spread <= 0.05, fmt("sup %.6g", a.sup_ratio) + fmt(" / %.6g", b.sup_ratio) + fmt(" spread %.4f", spread));
  return o;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + QTRANS_EXE + "\" " + args + " 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

Outcome determinism() {
  Outcome o;
  const std::string data = TEST_DATA_DIR;
  const std::string work = TEST_WORK_DIR;
  struct Job {
    const char* command;
    const char* config;
    const char* workers;
  };
  const Job jobs[] = {{"validate", "validate.json", "1"},
                      {"transmission-sweep", "sweep_families.json", "4"},
                      {"transmission-sweep", "sweep_cusp.json", "4"},
                      {"capacity", "capacity_full.json", "2"},
                      {"decompose", "decompose.json", "1"},
                      {"probe", "probe_ellipse.json", "1"}};
  for (const auto& job : jobs) {
    std::string outputs[2];
    bool ran = true;
    for (int rep = 0; rep < 2; ++rep) {
      const std::string path = work + "/acceptance_" + job.config + "." + std::to_string(rep) + ".out";
      std::remove(path.c_str());
      ran = ran && run_cli(std::string(job.command) + " --config " + data + "/" + job.config + " --workers " +
                           job.workers + " --out " + path) == 0;
      outputs[rep] = slurp(path);
    }
    o.require(ran && !outputs[0].empty() && outputs[0] == outputs[1], std::string(job.command) + " " + job.config);
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "circle identity", circle_identity},
      {2, "energy oracles", energy_oracles},
      {3, "annulus decomposition", decomposition},
      {4, "Green's co-period", coperiod},
      {5, "capacity", capacity},
      {6, "boundedness vs degradation", degradation},
      {7, "Moebius invariance", mobius},
      {8, "boundary agreement", agreement},
      {9, "collar extension", collar},
      {10, "determinism", determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.passed) ++failures;
    std::printf("[%s] criterion %d: %s: %s\n", o.passed ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
