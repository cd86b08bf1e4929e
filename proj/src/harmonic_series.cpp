#include "quasitrans/harmonic_series.hpp"

#include <cmath>
#include <limits>

#include "quasitrans/error.hpp"

namespace quasitrans {

SeriesDomain SeriesDomain::disk(double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("disk radius must be positive");
  return {Kind::disk, 0.0, radius};
}

SeriesDomain SeriesDomain::exterior(double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("exterior radius must be positive");
  return {Kind::exterior, radius, std::numeric_limits<double>::infinity()};
}

SeriesDomain SeriesDomain::annulus(double r_inner, double r_outer) {
  if (!(r_inner > 0.0 && r_inner < r_outer)) {
    throw InvalidArgument("annulus needs 0 < r_inner < r_outer");
  }
  return {Kind::annulus, r_inner, r_outer};
}

bool SeriesDomain::contains(Complex z) const {
  const double r = std::abs(z);
  switch (kind) {
    case Kind::disk: return r < r_outer;
    case Kind::exterior: return r > r_inner;
    case Kind::annulus: return r > r_inner && r < r_outer;
  }
  return false;
}

bool SeriesDomain::allows_index(int n) const {
  switch (kind) {
    case Kind::disk: return n >= 0;
    case Kind::exterior: return n <= 0;
    case Kind::annulus: return true;
  }
  return false;
}

HarmonicSeries::HarmonicSeries(SeriesDomain domain) : domain_(domain) {}

HarmonicSeries& HarmonicSeries::add_analytic(int n, Complex v) {
  if (!domain_.allows_index(n)) {
    throw InvalidArgument("index " + std::to_string(n) + " not allowed on domain");
  }
  if (v != Complex(0.0, 0.0)) a_[n] += v;
  return *this;
}

HarmonicSeries& HarmonicSeries::add_antianalytic(int n, Complex v) {
  if (n == 0) return add_analytic(0, v);
  if (!domain_.allows_index(n)) {
    throw InvalidArgument("index " + std::to_string(n) + " not allowed on domain");
  }
  if (v != Complex(0.0, 0.0)) b_[n] += v;
  return *this;
}

HarmonicSeries& HarmonicSeries::add_log(Complex v) {
  if (v == Complex(0.0, 0.0)) return *this;
  if (!domain_.allows_log()) {
    throw InvalidArgument("log term not allowed on a disk");
  }
  c_ += v;
  return *this;
}

Complex HarmonicSeries::analytic_coefficient(int n) const {
  const auto it = a_.find(n);
  return it == a_.end() ? Complex(0.0, 0.0) : it->second;
}

Complex HarmonicSeries::antianalytic_coefficient(int n) const {
  const auto it = b_.find(n);
  return it == b_.end() ? Complex(0.0, 0.0) : it->second;
}

HarmonicSeries HarmonicSeries::restricted_to(SeriesDomain domain) const {
  HarmonicSeries out(domain);
  for (const auto& [n, v] : a_) out.add_analytic(n, v);
  for (const auto& [n, v] : b_) out.add_antianalytic(n, v);
  out.add_log(c_);
  return out;
}

int HarmonicSeries::max_abs_index() const {
  int m = 0;
  for (const auto& [n, v] : a_) m = std::max(m, std::abs(n));
  for (const auto& [n, v] : b_) m = std::max(m, std::abs(n));
  return m;
}

Complex evaluate(const HarmonicSeries& h, Complex z) {
  if (!h.domain().contains(z)) throw DomainError("point outside series domain");
  Complex acc(0.0, 0.0);
  for (const auto& [n, v] : h.analytic()) acc += v * std::pow(z, n);
  const Complex zbar = std::conj(z);
  for (const auto& [n, v] : h.antianalytic()) acc += v * std::pow(zbar, n);
  if (h.log_coefficient() != Complex(0.0, 0.0)) {
    acc += h.log_coefficient() * std::log(std::abs(z));
  }
  return acc;
}

namespace {

// ∬ |z|^{2m} dA over the domain.
double moment(const SeriesDomain& d, int m) {
  const double inf = std::numeric_limits<double>::infinity();
  const double e = 2.0 * m + 2.0;
  switch (d.kind) {
    case SeriesDomain::Kind::disk:
      return m >= 0 ? kTwoPi * std::pow(d.r_outer, e) / e : inf;
    case SeriesDomain::Kind::exterior:
      return m <= -2 ? kTwoPi * std::pow(d.r_inner, e) / (-e) : inf;
    case SeriesDomain::Kind::annulus:
      if (m == -1) return kTwoPi * std::log(d.r_outer / d.r_inner);
      return kTwoPi * (std::pow(d.r_outer, e) - std::pow(d.r_inner, e)) / e;
  }
  return inf;
}

// Coefficients of ∂h/∂z in powers z^m (resp. ∂h/∂z̄ in z̄^m).
std::map<int, Complex> dz_coefficients(const std::map<int, Complex>& coeffs,
                                       Complex log_coeff) {
  std::map<int, Complex> out;
  for (const auto& [n, v] : coeffs) {
    if (n != 0) out[n - 1] += double(n) * v;
  }
  if (log_coeff != Complex(0.0, 0.0)) out[-1] += 0.5 * log_coeff;
  return out;
}

Complex paired_sum(const std::map<int, Complex>& f, const std::map<int, Complex>& g,
                   const SeriesDomain& d) {
  Complex acc(0.0, 0.0);
  for (const auto& [m, v] : f) {
    const auto it = g.find(m);
    if (it == g.end()) continue;
    const Complex prod = v * std::conj(it->second);
    if (prod == Complex(0.0, 0.0)) continue;
    acc += prod * moment(d, m);
  }
  return acc;
}

}  // namespace

Complex dirichlet_inner(const HarmonicSeries& f, const HarmonicSeries& g) {
  if (!(f.domain() == g.domain())) {
    throw InvalidArgument("dirichlet_inner: series live on different domains");
  }
  const auto fa = dz_coefficients(f.analytic(), f.log_coefficient());
  const auto ga = dz_coefficients(g.analytic(), g.log_coefficient());
  const auto fb = dz_coefficients(f.antianalytic(), f.log_coefficient());
  const auto gb = dz_coefficients(g.antianalytic(), g.log_coefficient());
  return paired_sum(fa, ga, f.domain()) + paired_sum(fb, gb, f.domain());
}

double dirichlet_energy(const HarmonicSeries& h) {
  return 2.0 * dirichlet_inner(h, h).real();
}

Complex AnnulusDecomposition::recompose(Complex z) const {
  Complex value = evaluate(inner_part, z) + evaluate(outer_part, z);
  if (c != Complex(0.0, 0.0)) value += c * greens_disk(pole, z);
  return value;
}

AnnulusDecomposition annulus_decompose(const HarmonicSeries& h, Complex p1,
                                       bool allow_nonzero_pole) {
  const auto& dom = h.domain();
  if (dom.kind != SeriesDomain::Kind::annulus || dom.r_outer != 1.0) {
    throw InvalidArgument("annulus_decompose expects a series on annulus(r, 1)");
  }
  if (p1 != Complex(0.0, 0.0) && !allow_nonzero_pole) {
    throw InvalidArgument("annulus_decompose: p1 != 0 requires the conjugation flag");
  }
  if (std::abs(p1) >= dom.r_inner) {
    throw DomainError("annulus_decompose: pole must lie inside the inner circle");
  }

  AnnulusDecomposition out{HarmonicSeries(SeriesDomain::disk(1.0)),
                           HarmonicSeries(SeriesDomain::exterior(dom.r_inner)),
                           -h.log_coefficient(), p1};
  for (const auto& [n, v] : h.analytic()) {
    (n >= 0 ? out.inner_part : out.outer_part).add_analytic(n, v);
  }
  for (const auto& [n, v] : h.antianalytic()) {
    (n >= 0 ? out.inner_part : out.outer_part).add_antianalytic(n, v);
  }

  if (p1 != Complex(0.0, 0.0) && out.c != Complex(0.0, 0.0)) {
    // g_{p1} + log|z| = Σ_k ½[(p1^k/k) z^{-k} + conj(p1^k/k) z̄^{-k}]
    //                 − Σ_k ½[(p̄1^k/k) z^k + conj(p̄1^k/k) z̄^k]
    const double q_in = std::abs(p1);
    const double q_out = std::abs(p1) / dom.r_inner;
    Complex pk(1.0, 0.0);
    for (int k = 1;; ++k) {
      pk *= p1;
      const double in_size = std::pow(q_in, k) / k;
      const double out_size = std::pow(q_out, k) / k;
      if (in_size < 1e-17 && out_size < 1e-17) break;
      const Complex w = pk / double(k);
      out.inner_part.add_analytic(k, 0.5 * out.c * std::conj(w));
      out.inner_part.add_antianalytic(k, 0.5 * out.c * w);
      out.outer_part.add_analytic(-k, -0.5 * out.c * w);
      out.outer_part.add_antianalytic(-k, -0.5 * out.c * std::conj(w));
    }
  }
  return out;
}

double greens_disk(Complex p, Complex z) {
  if (std::abs(p) >= 1.0 || std::abs(z) >= 1.0) {
    throw DomainError("greens_disk: points must lie in the open unit disk");
  }
  if (z == p) throw DomainError("greens_disk: z coincides with the pole");
  return -std::log(std::abs((z - p) / (1.0 - std::conj(p) * z)));
}

Complex greens_disk_gradient(Complex p, Complex z) {
  if (z == p) throw DomainError("greens_disk_gradient: z coincides with the pole");
  return -std::conj(1.0 / (z - p) + std::conj(p) / (1.0 - std::conj(p) * z));
}

Complex CollarChart::operator()(Complex z) const {
  return (z - pole) / (1.0 - std::conj(pole) * z);
}

Complex CollarChart::inverse(Complex w) const {
  return (w + pole) / (1.0 + std::conj(pole) * w);
}

bool CollarChart::in_collar(Complex z) const {
  if (std::abs(z) >= 1.0) return false;
  return std::abs((*this)(z)) > rho;
}

CollarChart canonical_collar_chart(Complex p, double rho) {
  if (std::abs(p) >= 1.0) throw DomainError("collar chart pole must satisfy |p| < 1");
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("collar radius must lie in (0, 1)");
  CollarChart chart{p, rho, 0.0};
  chart.coperiod = greens_coperiod(p, 0.5 * (1.0 + std::abs(p)));
  return chart;
}

double greens_coperiod(Complex p, double radius, int nodes) {
  if (!(std::abs(p) < radius && radius < 1.0)) {
    throw DomainError("greens_coperiod: need |p| < radius < 1");
  }
  double acc = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const Complex e = std::polar(1.0, kTwoPi * j / nodes);
    const Complex grad = greens_disk_gradient(p, radius * e);
    acc += (grad * std::conj(e)).real() * radius;  // ∂_r g · ds/dθ
  }
  return acc * kTwoPi / nodes;
}

double collar_energy_greens(Complex p, double rho, int nodes) {
  if (!(rho < 1.0)) throw DomainError("collar_energy_greens: rho must be < 1");
  if (std::abs(p) >= rho) throw DomainError("collar_energy_greens: pole lies in the collar");
  double acc = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const Complex e = std::polar(1.0, kTwoPi * j / nodes);
    const Complex z = rho * e;
    const double dr = (greens_disk_gradient(p, z) * std::conj(e)).real();
    acc -= greens_disk(p, z) * dr * rho;
  }
  return acc * kTwoPi / nodes;
}

std::map<int, Complex> trace_on_circle(const HarmonicSeries& h) {
  std::map<int, Complex> modes;
  for (const auto& [n, v] : h.analytic()) modes[n] += v;
  for (const auto& [n, v] : h.antianalytic()) modes[-n] += v;
  std::erase_if(modes, [](const auto& kv) { return kv.second == Complex(0.0, 0.0); });
  return modes;
}

CollarExtension collar_extension(const HarmonicSeries& h) {
  const auto& dom = h.domain();
  if (dom.kind != SeriesDomain::Kind::annulus || dom.r_outer != 1.0) {
    throw InvalidArgument("collar_extension expects a series on annulus(r, 1)");
  }
  CollarExtension out{HarmonicSeries(SeriesDomain::disk(1.0))};
  for (const auto& [k, v] : trace_on_circle(h)) {
    if (k >= 0) {
      out.extension.add_analytic(k, v);
    } else {
      out.extension.add_antianalytic(-k, v);
    }
  }
  out.source_energy = dirichlet_inner(h, h).real();
  out.extension_energy = dirichlet_inner(out.extension, out.extension).real();
  out.ratio = out.source_energy > 0.0 ? out.extension_energy / out.source_energy : 0.0;
  return out;
}

}  // namespace quasitrans
