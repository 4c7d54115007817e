#pragma once

// Bad-locus census: classify every codimension-k subspace H by the shape
// of X ∩ H, count the very bad ones, compare the deviation count with the
// Chebyshev bound, and fit growth exponents of bad counts across q.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "rational.hpp"
#include "stats.hpp"
#include "variety.hpp"

namespace slicelab {

enum class Classifier { QuadricExact, ComponentEstimate };

inline std::string to_string(Classifier c) { return c == Classifier::QuadricExact ? "quadric-exact" : "component-estimate"; }

inline Classifier parse_classifier(const std::string& s) {
  if (s == "quadric-exact") return Classifier::QuadricExact;
  if (s == "component-estimate") return Classifier::ComponentEstimate;
  throw ParseError("unknown classifier '" + s + "' (expected quadric-exact or component-estimate)");
}

struct CensusOptions {
  Classifier classifier = Classifier::QuadricExact;
  std::vector<unsigned> ext_degrees{1, 2};
  Rational tau{1, 4};
};

/// Outcome of classifying one slice X ∩ H.
struct SliceVerdict {
  std::uint64_t z = 0;
  /// Not geometrically irreducible.
  bool bad = false;
  /// The number of F_q-components that are geometrically irreducible is not 1.
  bool very_bad = false;
  /// Set by the exact quadric classifier.
  std::optional<SliceClass> cls;
  /// Component estimate found no ratio near an integer.
  bool inconclusive = false;
};

/// Throws PreconditionError when the classifier cannot be applied to X.
inline void check_classifier(const ProjectiveVariety& X, const CensusOptions& c) {
  if (c.classifier == Classifier::QuadricExact) {
    if (X.field.characteristic() == 2) throw PreconditionError("quadric-exact classifier needs odd q, got " + X.field.name());
    if (X.generators.size() > 1) throw PreconditionError("quadric-exact classifier needs at most one generator");
    for (const auto& g : X.generators)
      if (g.degree() > 2) throw PreconditionError("quadric-exact classifier needs generators of degree <= 2");
  } else {
    if (!X.field.is_prime_field()) throw PreconditionError("component-estimate classifier needs a prime field, got " + X.field.name());
    if (c.ext_degrees.empty() || c.ext_degrees.front() != 1) throw PreconditionError("extension degrees must start with 1");
  }
}

inline SliceVerdict classify_slice(const ProjectiveVariety& X, const LinearSubspace& H, const CensusOptions& c, std::uint64_t budget) {
  SliceVerdict v;
  v.z = count_points_on_subspace(X, H);
  const ProjectiveVariety S = slice(X, H);
  if (c.classifier == Classifier::QuadricExact) {
    v.cls = classify_hypersurface_slice(X.field, S.generators);
    v.bad = v.very_bad = is_bad(*v.cls);
    return v;
  }
  bool whole = true;
  for (const auto& g : S.generators) whole = whole && g.is_zero();
  if (whole) return v;  // H lies inside X: a linear space, irreducible
  const auto est = estimate_components(S, c.ext_degrees, c.tau, budget);
  v.very_bad = est.a_est != 1;
  v.bad = est.g_est != 1;
  v.inconclusive = est.inconclusive;
  return v;
}

struct ClassTally {
  std::uint64_t irreducible = 0;
  std::uint64_t split = 0;
  std::uint64_t conjugate = 0;
  std::uint64_t double_hyperplane = 0;
  std::uint64_t whole = 0;

  void add(SliceClass c) {
    switch (c) {
      case SliceClass::Irreducible: ++irreducible; break;
      case SliceClass::SplitPair: ++split; break;
      case SliceClass::ConjugatePair: ++conjugate; break;
      case SliceClass::DoubleHyperplane: ++double_hyperplane; break;
      case SliceClass::WholeSpace: ++whole; break;
    }
  }
};

struct BadLocusCensus {
  int n = 0;
  int k = 0;
  int r = 0;
  std::string field;
  std::uint64_t q = 0;
  Classifier classifier = Classifier::QuadricExact;
  std::uint64_t total = 0;
  std::uint64_t very_bad_count = 0;
  std::uint64_t bad_count = 0;
  std::uint64_t inconclusive_count = 0;
  std::uint64_t x_count = 0;
  SliceDistribution distribution;
  SliceStatistics stats;
  /// 1/2 q^{r-k}.
  Rational threshold;
  /// #{H : |Z - mu| >= threshold}.
  std::uint64_t deviation_count = 0;
  /// t is defined by threshold = t sigma and is irrational in general, so
  /// its square is kept: t^2 = threshold^2 / sigma^2. Empty when sigma = 0.
  std::optional<Rational> t_squared;
  /// total / t^2 (0 when sigma = 0).
  Rational chebyshev_bound;
  ClassTally classes;
  /// Per-subspace verdicts in enumeration order.
  std::vector<SliceVerdict> verdicts;
};

/// 1/2 q^{r-k}.
inline Rational deviation_threshold(int r, int k, std::uint64_t q) {
  if (r < k) throw PreconditionError("deviation threshold needs r >= k");
  return Rational(ipow(BigInt(q), static_cast<unsigned>(r - k)), BigInt(2));
}

inline BadLocusCensus census_from_verdicts(const ProjectiveVariety& X, int k, const CensusOptions& c, std::vector<SliceVerdict> verdicts, std::uint64_t x_count) {
  BadLocusCensus out;
  out.n = X.n;
  out.k = k;
  out.r = X.declared_dim;
  out.field = X.field.name();
  out.q = X.field.order();
  out.classifier = c.classifier;
  out.total = verdicts.size();
  out.x_count = x_count;
  std::vector<std::uint64_t> z;
  z.reserve(verdicts.size());
  for (const auto& v : verdicts) {
    z.push_back(v.z);
    if (v.very_bad) ++out.very_bad_count;
    if (v.bad) ++out.bad_count;
    if (v.inconclusive) ++out.inconclusive_count;
    if (v.cls) out.classes.add(*v.cls);
  }
  out.distribution = histogram_of(X.n, k, X.field, z);
  out.stats = exact_statistics(out.distribution, x_count);
  out.threshold = deviation_threshold(out.r, k, out.q);
  for (const auto& [value, count] : out.distribution.histogram)
    if (abs_rational(Rational(BigInt(value)) - out.stats.mu) >= out.threshold) out.deviation_count += count;
  if (out.stats.sigma2 > 0) {
    out.t_squared = out.threshold * out.threshold / out.stats.sigma2;
    out.chebyshev_bound = Rational(BigInt(out.total)) / *out.t_squared;
  } else {
    out.chebyshev_bound = 0;
  }
  out.verdicts = std::move(verdicts);
  return out;
}

/// Classifies every H in G(n-k, n)(F_q).
inline BadLocusCensus full_census(const ProjectiveVariety& X, int k, const CensusOptions& c = {}, const ExecOptions& opts = {}) {
  check_classifier(X, c);
  if (X.declared_dim < k) throw PreconditionError("census needs r >= k");
  const GrassmannianSpec g(X.n, k, X.field);
  check_slice_budget(X.n, k, X.field.order(), opts.budget);
  const auto subspaces = enumerate_subspaces(g);
  auto verdicts = parallel_map(subspaces.size(), opts.workers, [&](std::size_t i) { return classify_slice(X, subspaces[i], c, opts.budget); });
  return census_from_verdicts(X, k, c, std::move(verdicts), count_points(X, opts.budget));
}

struct ChebyshevReport {
  Rational observed;  // deviation_count / total
  Rational bound;     // 1 / t^2
  /// deviation_count / total * q^{r-k}, printed for inspection only.
  Rational scaled;
  bool vacuous = false;
  bool passed = false;
};

inline ChebyshevReport chebyshev_check(const BadLocusCensus& c) {
  ChebyshevReport rep;
  rep.observed = Rational(BigInt(c.deviation_count), BigInt(c.total));
  rep.scaled = rep.observed * Rational(ipow(BigInt(c.q), static_cast<unsigned>(c.r - c.k)));
  if (!c.t_squared) {
    rep.vacuous = true;
    rep.bound = 0;
    rep.passed = c.deviation_count == 0;
    return rep;
  }
  rep.bound = 1 / *c.t_squared;
  rep.passed = rep.observed <= rep.bound;
  return rep;
}

// ---------------------------------------------------------------------------
// Scaling

/// dim V - r + k with dim V = (n-k+1) k.
inline int predicted_exponent(int n, int k, int r) { return grassmannian_dimension(n, k) - r + k; }

struct ScalingFit {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> samples;  // (q, count)
  std::vector<std::uint64_t> excluded_q;                          // zero counts
  double exponent = 0;
  int predicted = 0;
  double residual = 0;
};

/// Least-squares slope of log(count) against log(q); zero counts are left out.
inline ScalingFit scaling_fit(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& samples, int predicted) {
  ScalingFit fit;
  fit.samples = samples;
  fit.predicted = predicted;
  std::vector<std::pair<double, double>> pts;
  for (const auto& [q, count] : samples) {
    if (count == 0) {
      fit.excluded_q.push_back(q);
      continue;
    }
    pts.emplace_back(std::log(static_cast<double>(q)), std::log(static_cast<double>(count)));
  }
  if (pts.empty()) throw PreconditionError("scaling fit: every count is zero");
  std::vector<double> xs;
  for (const auto& p : pts)
    if (std::find(xs.begin(), xs.end(), p.first) == xs.end()) xs.push_back(p.first);
  if (xs.size() < 2) throw PreconditionError("scaling fit needs at least two distinct q with nonzero counts");
  double mx = 0, my = 0;
  for (const auto& [x, y] : pts) mx += x, my += y;
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0, sxx = 0;
  for (const auto& [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  fit.exponent = sxy / sxx;
  fit.residual = std::abs(fit.exponent - predicted);
  return fit;
}

// ---------------------------------------------------------------------------
// Monte Carlo

struct MonteCarloEstimate {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t very_bad = 0;
  std::uint64_t bad = 0;
  double fraction = 0;  // very_bad / samples
  double wilson_low = 0;
  double wilson_high = 0;
};

/// Wilson score interval at 95% confidence.
inline std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1 + z * z / n;
  const double center = (p + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  return {center - half, center + half};
}

/// Classifies N uniform random subspaces. Sample i draws from
/// stream_rng(seed, i), so results do not depend on the worker count.
inline MonteCarloEstimate monte_carlo_census(const ProjectiveVariety& X, int k, const CensusOptions& c, std::uint64_t N, std::uint64_t seed,
                                             const ExecOptions& opts = {}) {
  if (N < 100) throw PreconditionError("Monte Carlo census needs N >= 100");
  check_classifier(X, c);
  const GrassmannianSpec g(X.n, k, X.field);
  const auto verdicts = parallel_map(static_cast<std::size_t>(N), opts.workers, [&](std::size_t i) {
    Rng rng = stream_rng(seed, i);
    return classify_slice(X, random_subspace(g, rng), c, opts.budget);
  });
  MonteCarloEstimate est;
  est.samples = N;
  est.seed = seed;
  for (const auto& v : verdicts) {
    if (v.very_bad) ++est.very_bad;
    if (v.bad) ++est.bad;
  }
  est.fraction = static_cast<double>(est.very_bad) / static_cast<double>(N);
  std::tie(est.wilson_low, est.wilson_high) = wilson_interval(est.very_bad, N);
  return est;
}

/// Sample mean of Z over N uniform random subspaces with its standard error.
struct SampledMean {
  double mean = 0;
  double std_error = 0;
};

inline SampledMean sample_slice_mean(const ProjectiveVariety& X, int k, std::uint64_t N, std::uint64_t seed, const ExecOptions& opts = {}) {
  const GrassmannianSpec g(X.n, k, X.field);
  const auto z = parallel_map(static_cast<std::size_t>(N), opts.workers, [&](std::size_t i) {
    Rng rng = stream_rng(seed, i);
    return count_points_on_subspace(X, random_subspace(g, rng));
  });
  double sum = 0, sq = 0;
  for (auto v : z) sum += static_cast<double>(v), sq += static_cast<double>(v) * static_cast<double>(v);
  const double n = static_cast<double>(N);
  SampledMean out;
  out.mean = sum / n;
  const double var = (sq - n * out.mean * out.mean) / (n - 1);
  out.std_error = std::sqrt(std::max(var, 0.0) / n);
  return out;
}

// ---------------------------------------------------------------------------
// Output

inline std::string census_csv_header() {
  return "q,n,k,r,total,very_bad,deviation,chebyshev_bound_num,chebyshev_bound_den,class_irreducible,class_split,class_conjugate,class_double,class_whole";
}

inline std::string census_csv_row(const BadLocusCensus& c) {
  std::string row;
  auto put = [&](const std::string& s) {
    if (!row.empty()) row += ",";
    row += s;
  };
  put(std::to_string(c.q));
  put(std::to_string(c.n));
  put(std::to_string(c.k));
  put(std::to_string(c.r));
  put(std::to_string(c.total));
  put(std::to_string(c.very_bad_count));
  put(std::to_string(c.deviation_count));
  put(boost::multiprecision::numerator(c.chebyshev_bound).str());
  put(boost::multiprecision::denominator(c.chebyshev_bound).str());
  put(std::to_string(c.classes.irreducible));
  put(std::to_string(c.classes.split));
  put(std::to_string(c.classes.conjugate));
  put(std::to_string(c.classes.double_hyperplane));
  put(std::to_string(c.classes.whole));
  return row;
}

inline nlohmann::json to_json(const ChebyshevReport& r) {
  return {{"observed", rational_json(r.observed)}, {"bound", rational_json(r.bound)}, {"scaled_by_q_pow_r_minus_k", rational_json(r.scaled)},
          {"vacuous", r.vacuous},                  {"passed", r.passed}};
}

inline nlohmann::json to_json(const BadLocusCensus& c) {
  nlohmann::json j = {{"n", c.n},
                      {"k", c.k},
                      {"r", c.r},
                      {"field", c.field},
                      {"q", c.q},
                      {"classifier", to_string(c.classifier)},
                      {"total", c.total},
                      {"very_bad", c.very_bad_count},
                      {"bad", c.bad_count},
                      {"inconclusive", c.inconclusive_count},
                      {"x_count", c.x_count},
                      {"statistics", to_json(c.stats)},
                      {"histogram", to_json(c.distribution)["histogram"]},
                      {"threshold", rational_json(c.threshold)},
                      {"deviation", c.deviation_count},
                      {"t_squared", c.t_squared ? rational_json(*c.t_squared) : nlohmann::json(nullptr)},
                      {"chebyshev_bound", rational_json(c.chebyshev_bound)},
                      {"classes",
                       {{"irreducible", c.classes.irreducible},
                        {"split", c.classes.split},
                        {"conjugate", c.classes.conjugate},
                        {"double", c.classes.double_hyperplane},
                        {"whole", c.classes.whole}}}};
  return j;
}

inline nlohmann::json to_json(const ScalingFit& f) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& [q, count] : f.samples) samples.push_back({{"q", q}, {"count", count}});
  return {{"samples", samples}, {"excluded_q", f.excluded_q}, {"exponent", f.exponent}, {"predicted", f.predicted}, {"residual", f.residual}};
}

inline nlohmann::json to_json(const MonteCarloEstimate& e) {
  return {{"samples", e.samples},       {"seed", e.seed},           {"very_bad", e.very_bad}, {"bad", e.bad},
          {"fraction", e.fraction},     {"wilson_low", e.wilson_low}, {"wilson_high", e.wilson_high}};
}

}  // namespace slicelab
