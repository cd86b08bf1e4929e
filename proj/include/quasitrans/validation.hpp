#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "quasitrans/capacity.hpp"
#include "quasitrans/harmonic_series.hpp"

namespace quasitrans {

enum class Relation { equal, at_most, at_least };

struct Check {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  Relation relation = Relation::equal;
  bool passed = false;
};

Check check_equal(std::string name, double value, double reference, double tolerance);
Check check_at_most(std::string name, double value, double bound);
Check check_at_least(std::string name, double value, double bound);
Check check_true(std::string name, bool condition);

/// Finitely supported series on annulus(r_inner, 1): analytic and
/// anti-analytic indices in [−degree, degree] (anti-analytic 0 excluded) and
/// a log term. Each term is kept with probability `keep`; kept coefficients
/// have components uniform in [−1, 1].
HarmonicSeries random_annulus_series(std::mt19937_64& rng, double r_inner, int degree,
                                     double keep = 1.0);

/// Union of 1..max_arcs random arcs, each of length in (0.05, 1.5).
BoundarySet random_arc_union(std::mt19937_64& rng, int max_arcs = 4);

/// Largest pointwise |h(z) − recompose(z)| over `count` random series,
/// 32 random points each.
double decomposition_roundtrip_error(std::uint64_t seed, int count);

struct CollarSample {
  double sup_ratio = 0.0;  ///< max E(𝔊h)/E(h)
  bool all_finite = true;
};

/// Random series on annulus(r_inner, 1) with support as in
/// random_annulus_series and complex Gaussian coefficients scaled by the
/// inverse square root of each basis term's energy (isotropic in the energy
/// norm), then normalized to unit energy.
HarmonicSeries random_unit_energy_series(std::mt19937_64& rng, double r_inner, int degree,
                                         double keep);

/// Sup ratio over `count` unit-energy series of degree 1, each term kept
/// with probability ½. Mode k contributes at most (1 + r^{2k})/(1 − r^{2k}),
/// decreasing in k, so degree 1 carries the sup.
CollarSample collar_ratio_sample(std::uint64_t seed, int count, double r_inner = 0.5);

/// Sup of E(𝔊h)/E(h) over harmonic series on annulus(r, 1): (1 + r²)/(1 − r²).
double collar_ratio_bound(double r_inner);

struct ValidationOptions {
  std::uint64_t seed = 20240611;
  int decomposition_series = 100;
  int collar_series = 1000;
  int capacity_sets = 20;
};

/// Oracle and invariant suite over all modules. Deterministic for a fixed
/// seed.
std::vector<Check> run_validation(const ValidationOptions& options = {});

/// One line per check: status, name, value, relation, reference, tolerance
/// (17 significant digits).
std::string format_checks(const std::vector<Check>& checks);

}  // namespace quasitrans
