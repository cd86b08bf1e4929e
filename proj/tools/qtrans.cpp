// qtrans: experiment driver over the quasitrans C API.
//
//   qtrans <command> --config <path> [--workers k] [--out <path>]
//
// Exit status: 0 success, 1 usage or config error, 2 numerical failure.
// Data goes to --out (or stdout); diagnostics go to stderr.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "quasitrans/quasitrans.h"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void log(const std::string& msg) { std::cerr << "qtrans: " << msg << '\n'; }

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Status from the C API: argument and domain problems come from the config,
// the rest are numerical.
void check(qt_status s, const std::string& context) {
  if (s == QT_OK) return;
  const std::string msg = context + ": " + qt_status_string(s) + ": " + qt_last_error();
  if (s == QT_INVALID_ARGUMENT || s == QT_DOMAIN_ERROR) throw ConfigError(msg);
  throw NumericalFailure(msg);
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using CurvePtr = std::unique_ptr<qt_curve, Deleter<qt_curve, qt_curve_free>>;
using SetPtr = std::unique_ptr<qt_boundary_set, Deleter<qt_boundary_set, qt_boundary_set_free>>;
using SeriesPtr = std::unique_ptr<qt_series, Deleter<qt_series, qt_series_free>>;
using DecompPtr = std::unique_ptr<qt_decomposition, Deleter<qt_decomposition, qt_decomposition_free>>;

template <class T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

const json& section(const json& cfg, const char* key) {
  if (!cfg.contains(key) || !cfg.at(key).is_object()) {
    throw ConfigError(std::string("missing section '") + key + "'");
  }
  return cfg.at(key);
}

struct CurveEntry {
  std::string family;
  double param = 0.0;
  json coefficients;  // null for named families
};

CurvePtr make_curve(const CurveEntry& e) {
  qt_curve* raw = nullptr;
  if (e.coefficients.is_null()) {
    check(qt_curve_family(e.family.c_str(), e.param, &raw), "curve " + e.family + " " + num(e.param));
  } else {
    std::vector<int> k;
    std::vector<double> re;
    std::vector<double> im;
    for (const auto& t : e.coefficients) {
      if (!t.is_array() || t.size() != 3) throw ConfigError("coefficients are [k, re, im] triples");
      k.push_back(t[0].get<int>());
      re.push_back(t[1].get<double>());
      im.push_back(t[2].get<double>());
    }
    check(qt_curve_from_coefficients(k.data(), re.data(), im.data(), k.size(), e.family.c_str(),
                                     e.param, &raw),
          "curve " + e.family);
  }
  return CurvePtr(raw);
}

// "curves": [{"family": f, "params": [...]} | {"family": f, "param": p} |
//            {"family": tag, "param": p, "coefficients": [[k, re, im], ...]}]
std::vector<CurveEntry> curve_entries(const json& cfg) {
  if (!cfg.contains("curves") || !cfg.at("curves").is_array()) {
    throw ConfigError("missing array 'curves'");
  }
  std::vector<CurveEntry> out;
  for (const auto& c : cfg.at("curves")) {
    const auto fam = get<std::string>(c, "family", "");
    if (fam.empty()) throw ConfigError("curve entry without 'family'");
    const json coeffs = c.contains("coefficients") ? c.at("coefficients") : json();
    if (c.contains("params")) {
      for (const auto& p : c.at("params")) out.push_back({fam, p.get<double>(), coeffs});
    } else {
      out.push_back({fam, get<double>(c, "param", 0.0), coeffs});
    }
  }
  return out;
}

CurveEntry single_curve(const json& j) {
  if (!j.contains("curve")) throw ConfigError("missing 'curve'");
  const auto& c = j.at("curve");
  return {get<std::string>(c, "family", "circle"), get<double>(c, "param", 0.0),
          c.contains("coefficients") ? c.at("coefficients") : json()};
}

template <class Task>
void run_parallel(std::size_t count, int workers, Task task) {
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto loop = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int k = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  for (int w = 1; w < k; ++w) pool.emplace_back(loop);
  loop();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

qt_direction parse_direction(const std::string& s) {
  if (s == "interior-to-exterior") return QT_INTERIOR_TO_EXTERIOR;
  if (s == "exterior-to-interior") return QT_EXTERIOR_TO_INTERIOR;
  throw ConfigError("direction must be interior-to-exterior or exterior-to-interior");
}

int transmission_sweep(const json& cfg, int workers, const std::string& out) {
  const auto& res = section(cfg, "resolution");
  const int N = get<int>(res, "N", 16);
  const int n = get<int>(res, "n", 512);
  if (N < 1 || n < 8 * N) throw ConfigError("resolution must satisfy N >= 1 and n >= 8N");
  const auto dir = parse_direction(get<std::string>(cfg, "direction", "interior-to-exterior"));
  qt_norm_options opt;
  qt_default_norm_options(&opt);
  if (cfg.contains("tolerances")) opt.convergence_tol = get<double>(cfg.at("tolerances"), "convergence", opt.convergence_tol);

  auto entries = curve_entries(cfg);
  std::vector<CurvePtr> curves;
  for (const auto& e : entries) curves.push_back(make_curve(e));
  log("sweep over " + std::to_string(curves.size()) + " curves, N=" + std::to_string(N) +
      " n=" + std::to_string(n));

  std::vector<qt_transmission_report> reports(curves.size());
  run_parallel(curves.size(), workers, [&](std::size_t i) {
    check(qt_transmission_norm(curves[i].get(), N, n, dir, &opt, &reports[i]),
          std::string("transmission_norm ") + entries[i].family + " " + num(entries[i].param));
  });

  std::vector<std::size_t> order(reports.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const std::string fa = reports[a].family_tag;
    const std::string fb = reports[b].family_tag;
    if (fa != fb) return fa < fb;
    return reports[a].distortion_param < reports[b].distortion_param;
  });

  Output o(out);
  auto& os = o.stream();
  os << "family,param,N,n,norm,converged,three_point\n";
  for (auto i : order) {
    const auto& r = reports[i];
    os << r.family_tag << ',' << num(r.distortion_param) << ',' << r.modes << ',' << r.nodes << ','
       << num(r.norm_estimate) << ',' << (r.converged ? 1 : 0) << ',' << num(r.three_point) << '\n';
  }
  return kExitOk;
}

struct MapSpec {
  std::string kind;
  double param = 0.0;
  double param2 = 0.0;
};

double lift_fn(void* user, double theta) {
  const auto& m = *static_cast<const MapSpec*>(user);
  if (m.kind == "rotation") return theta + m.param;
  if (m.kind == "piecewise_linear") {
    const double pi = std::numbers::pi;
    const double k = std::floor(theta / (2 * pi));
    const double s = theta - 2 * pi * k;
    const double v = s < pi ? m.param * s : m.param * pi + (2.0 - m.param) * (s - pi);
    return v + 2 * pi * k;
  }
  if (m.kind == "disk_automorphism") {
    // Both factors have positive real part for |p| < 1, so the sum of
    // principal arguments is a continuous lift.
    const std::complex<double> p(m.param, m.param2);
    return theta + std::arg(1.0 - p * std::polar(1.0, -theta)) -
           std::arg(1.0 - std::conj(p) * std::polar(1.0, theta));
  }
  return theta;
}

// "capacity": {"n": [..], "sets": [{"name": s, "arcs": [[a, b], ...] |
//              "full_circle": true, "map": {"kind": k, "param": x}}]}
int capacity(const json& cfg, int workers, const std::string& out) {
  const auto& cap = section(cfg, "capacity");
  const auto ns = get<std::vector<int>>(cap, "n", {8, 16, 32, 64});
  if (!cap.contains("sets") || !cap.at("sets").is_array() || cap.at("sets").empty()) {
    throw ConfigError("capacity needs a non-empty 'sets' array");
  }
  struct Job {
    std::string name;
    SetPtr set;
    std::vector<double> d;
  };
  std::vector<Job> jobs;
  for (const auto& s : cap.at("sets")) {
    Job job{get<std::string>(s, "name", "set" + std::to_string(jobs.size())), nullptr, {}};
    qt_boundary_set* raw = nullptr;
    if (get<bool>(s, "full_circle", false)) {
      check(qt_boundary_set_full_circle(&raw), "full circle");
    } else {
      std::vector<double> a;
      std::vector<double> b;
      for (const auto& arc : s.at("arcs")) {
        a.push_back(arc.at(0).get<double>());
        b.push_back(arc.at(1).get<double>());
      }
      check(qt_boundary_set_create(a.data(), b.data(), a.size(), &raw), "set " + job.name);
    }
    job.set.reset(raw);
    if (s.contains("map")) {
      MapSpec m{get<std::string>(s.at("map"), "kind", "identity"),
                get<double>(s.at("map"), "param", 0.0), get<double>(s.at("map"), "param2", 0.0)};
      qt_boundary_set* img = nullptr;
      check(qt_boundary_set_pushforward(job.set.get(), lift_fn, &m, 1024, &img),
            "pushforward of " + job.name);
      job.set.reset(img);
    }
    job.d.resize(ns.size());
    jobs.push_back(std::move(job));
  }

  const std::size_t tasks = jobs.size() * ns.size();
  run_parallel(tasks, workers, [&](std::size_t t) {
    auto& job = jobs[t / ns.size()];
    const std::size_t k = t % ns.size();
    check(qt_fekete_capacity(job.set.get(), ns[k], &job.d[k]), "capacity of " + job.name);
  });

  auto write = [&](std::ostream& os, const Job& job) {
    os << "n,d_n\n";
    for (std::size_t k = 0; k < ns.size(); ++k) os << ns[k] << ',' << num(job.d[k]) << '\n';
  };
  if (jobs.size() == 1) {
    Output o(out);
    write(o.stream(), jobs.front());
  } else if (out.empty()) {
    for (const auto& job : jobs) {
      std::cout << "# " << job.name << '\n';
      write(std::cout, job);
    }
  } else {
    const auto dot = out.rfind('.');
    const auto slash = out.rfind('/');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    const std::string stem = has_ext ? out.substr(0, dot) : out;
    for (const auto& job : jobs) {
      const std::string path = stem + "." + job.name + ".csv";
      Output o(path);
      write(o.stream(), job);
      log("wrote " + path);
    }
  }
  return kExitOk;
}

SeriesPtr make_series(const json& s) {
  const auto& dom = s.contains("domain") ? s.at("domain") : json::object();
  const auto kind = get<std::string>(dom, "kind", "annulus");
  const double r_in = get<double>(dom, "r_inner", 0.5);
  const double r_out = get<double>(dom, "r_outer", 1.0);
  qt_domain_kind k = QT_ANNULUS;
  if (kind == "disk") k = QT_DISK;
  else if (kind == "exterior") k = QT_EXTERIOR_DISK;
  else if (kind != "annulus") throw ConfigError("unknown series domain " + kind);
  qt_series* raw = nullptr;
  check(qt_series_create(k, r_in, r_out, &raw), "series domain");
  SeriesPtr h(raw);
  for (const char* part : {"analytic", "antianalytic"}) {
    if (!s.contains(part)) continue;
    for (const auto& t : s.at(part)) {
      const int n = t.at(0).get<int>();
      const double re = t.at(1).get<double>();
      const double im = t.at(2).get<double>();
      check(std::string(part) == "analytic" ? qt_series_add_analytic(h.get(), n, re, im)
                                            : qt_series_add_antianalytic(h.get(), n, re, im),
            "series term");
    }
  }
  if (s.contains("log")) {
    check(qt_series_add_log(h.get(), s.at("log").at(0).get<double>(), s.at("log").at(1).get<double>()),
          "series log term");
  }
  return h;
}

// "decompose": {"random_series": 100, "tolerance": 1e-13, "points": 64,
//               "series": [{"name": s, "domain": {...}, "analytic": [[n, re, im]],
//                           "antianalytic": [...], "log": [re, im]}]}
int decompose(const json& cfg, const std::string& out) {
  const auto& dec = section(cfg, "decompose");
  const auto seed = get<std::uint64_t>(cfg, "seed", 20240611);
  const int random_count = get<int>(dec, "random_series", 100);
  const double tol = get<double>(dec, "tolerance", 1e-13);
  const int points = get<int>(dec, "points", 64);

  Output o(out);
  auto& os = o.stream();
  os << "series,max_error,c_re,c_im\n";
  bool ok = true;
  if (dec.contains("series")) {
    int idx = 0;
    for (const auto& s : dec.at("series")) {
      const auto name = get<std::string>(s, "name", "series" + std::to_string(idx++));
      const auto h = make_series(s);
      qt_decomposition* raw = nullptr;
      check(qt_series_decompose(h.get(), 0.0, 0.0, 0, &raw), "decompose " + name);
      DecompPtr d(raw);
      // Points on the circle of mean radius and on two inner circles.
      const auto& dom = s.contains("domain") ? s.at("domain") : json::object();
      const double r_in = get<double>(dom, "r_inner", 0.5);
      const double r_out = get<double>(dom, "r_outer", 1.0);
      double err = 0.0;
      for (int j = 0; j < points; ++j) {
        const double r = r_in + (r_out - r_in) * (0.25 + 0.5 * (j % 3) / 2.0);
        const double th = 2 * std::numbers::pi * j / points;
        double hr = 0, hi = 0, dr = 0, di = 0;
        check(qt_series_evaluate(h.get(), r * std::cos(th), r * std::sin(th), &hr, &hi), "evaluate");
        check(qt_decomposition_recompose(d.get(), r * std::cos(th), r * std::sin(th), &dr, &di), "recompose");
        err = std::max(err, std::hypot(hr - dr, hi - di));
      }
      double cre = 0, cim = 0;
      check(qt_decomposition_log_coefficient(d.get(), &cre, &cim), "log coefficient");
      os << name << ',' << num(err) << ',' << num(cre) << ',' << num(cim) << '\n';
      ok = ok && err <= tol;
    }
  }
  if (random_count > 0) {
    double err = 0.0;
    check(qt_decomposition_roundtrip(seed, random_count, &err), "random round trip");
    os << "random" << random_count << ',' << num(err) << ",nan,nan\n";
    ok = ok && err <= tol;
  }
  if (!ok) {
    log("round-trip error above tolerance " + num(tol));
    return kExitNumerical;
  }
  return kExitOk;
}

void report_check(void* user, const qt_check* c) {
  auto& os = *static_cast<std::ostream*>(user);
  const char* rel = c->relation == QT_EQUAL ? "~=" : c->relation == QT_AT_MOST ? "<=" : ">=";
  char line[512];
  std::snprintf(line, sizeof line, "%s %-48s %.17g %s %.17g tol=%.3g\n", c->passed ? "PASS" : "FAIL",
                c->name, c->value, rel, c->reference, c->tolerance);
  os << line;
}

int validate(const json& cfg, const std::string& out) {
  const auto seed = get<std::uint64_t>(cfg, "seed", 20240611);
  Output o(out);
  int failures = 0;
  check(qt_validate(seed, report_check, &o.stream(), &failures), "validate");
  o.stream().flush();
  if (failures > 0) {
    log(std::to_string(failures) + " check(s) failed");
    return kExitNumerical;
  }
  log("all checks passed");
  return kExitOk;
}

// "probe": {"curve": {...}, "n": 256, "probes": 64, "data": "re" | "im" | "one" | {"cos": k},
//           "alpha": a, "steps": s}
int probe(const json& cfg, const std::string& out) {
  const auto& pr = section(cfg, "probe");
  const auto curve = make_curve(single_curve(pr));
  const int n = get<int>(pr, "n", 256);
  const int probes = get<int>(pr, "probes", 64);
  if (n < 32 || probes < 1) throw ConfigError("probe needs n >= 32 and probes >= 1");
  const json data = pr.contains("data") ? pr.at("data") : json("re");

  std::vector<double> h(n);
  for (int j = 0; j < n; ++j) {
    const double t = 2 * std::numbers::pi * j / n;
    double x = 0, y = 0;
    check(qt_curve_eval(curve.get(), t, &x, &y), "curve eval");
    if (data.is_object() && data.contains("cos")) h[j] = std::cos(data.at("cos").get<int>() * t);
    else if (data == "re") h[j] = x;
    else if (data == "im") h[j] = y;
    else if (data == "one") h[j] = 1.0;
    else throw ConfigError("probe data must be re, im, one or {\"cos\": k}");
  }
  qt_agreement_options opt;
  qt_default_agreement_options(&opt);
  opt.alpha = get<double>(pr, "alpha", opt.alpha);
  opt.steps = get<int>(pr, "steps", opt.steps);
  qt_agreement_report rep;
  std::vector<qt_probe_record> records(probes);
  const auto s = qt_boundary_agreement(curve.get(), h.data(), h.size(), probes, &opt, &rep, records.data());
  if (s == QT_NUMERICAL_ERROR) throw NumericalFailure(qt_last_error());
  check(s, "boundary agreement");

  Output o(out);
  auto& os = o.stream();
  os << "t,x,y,source_limit,target_limit,converged\n";
  for (const auto& r : records) {
    os << num(r.t) << ',' << num(r.point[0]) << ',' << num(r.point[1]) << ',' << num(r.source_limit)
       << ',' << num(r.target_limit) << ',' << r.converged << '\n';
  }
  log("max discrepancy " + num(rep.max_discrepancy) + ", converged fraction " +
      num(rep.fraction_converged) + ", round-trip error " + num(rep.roundtrip_error));
  return kExitOk;
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transmission-operator experiments"};
  std::string command;
  std::string config_path;
  std::string out;
  int workers = 1;
  app.add_option("command", command, "transmission-sweep | capacity | decompose | validate | probe")
      ->required()
      ->check(CLI::IsMember({"transmission-sweep", "capacity", "decompose", "validate", "probe"}));
  app.add_option("--config", config_path, "JSON experiment config")->required();
  app.add_option("--workers", workers, "worker threads for sweeps")->check(CLI::Range(1, 256));
  app.add_option("--out", out, "output path (default stdout)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const json cfg = load_config(config_path);
    if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
    if (cfg.contains("command") && cfg.at("command").get<std::string>() != command) {
      throw ConfigError("config is for command '" + cfg.at("command").get<std::string>() + "'");
    }
    if (command == "transmission-sweep") return transmission_sweep(cfg, workers, out);
    if (command == "capacity") return capacity(cfg, workers, out);
    if (command == "decompose") return decompose(cfg, out);
    if (command == "validate") return validate(cfg, out);
    return probe(cfg, out);
  } catch (const ConfigError& e) {
    log(e.what());
    return kExitConfig;
  } catch (const NumericalFailure& e) {
    log(e.what());
    return kExitNumerical;
  } catch (const nlohmann::json::exception& e) {
    log(std::string("config error: ") + e.what());
    return kExitConfig;
  }
}
