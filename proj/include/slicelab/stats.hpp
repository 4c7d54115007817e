#pragma once

// Exact statistics of Z = #(X ∩ H)(F_q) for H uniform over the codimension-k
// Grassmannian: the full histogram, mean, pair term B and variance as exact
// rationals, and the closed forms obtained by averaging over dummy points.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "rational.hpp"
#include "variety.hpp"

namespace slicelab {

struct SliceDistribution {
  int n = 0;
  int k = 0;
  std::string field;
  std::uint64_t q = 0;
  /// Z value -> number of subspaces attaining it.
  std::map<std::uint64_t, std::uint64_t> histogram;
  std::uint64_t total = 0;
};

struct SliceStatistics {
  Rational mu;
  Rational second_moment;
  Rational sigma2;
  Rational B;
  std::uint64_t x_count = 0;
  std::uint64_t v_count = 0;
};

/// Number of membership tests a full slice scan performs.
inline BigInt slice_scan_cost(int n, int k, std::uint64_t q) { return gaussian_binomial(n + 1, k, q) * projective_count(n - k, q); }

/// Z for every subspace of G(n-k, n), in enumeration order.
inline std::vector<std::uint64_t> slice_counts(const ProjectiveVariety& X, const std::vector<LinearSubspace>& subspaces, const ExecOptions& opts = {}) {
  return parallel_map(subspaces.size(), opts.workers, [&](std::size_t i) { return count_points_on_subspace(X, subspaces[i]); });
}

inline void check_slice_budget(int n, int k, std::uint64_t q, std::uint64_t budget) {
  const BigInt cost = slice_scan_cost(n, k, q);
  if (cost > budget)
    throw BudgetExceeded("exhaustive slice scan needs " + cost.str() + " membership tests (budget " + std::to_string(budget) +
                         "); use Monte Carlo sampling instead");
}

inline SliceDistribution histogram_of(int n, int k, const Field& F, const std::vector<std::uint64_t>& z) {
  SliceDistribution d;
  d.n = n;
  d.k = k;
  d.field = F.name();
  d.q = F.order();
  for (auto v : z) ++d.histogram[v];
  d.total = z.size();
  return d;
}

inline SliceDistribution slice_distribution(const ProjectiveVariety& X, int k, const ExecOptions& opts = {}) {
  const GrassmannianSpec g(X.n, k, X.field);
  check_slice_budget(X.n, k, X.field.order(), opts.budget);
  const auto subspaces = enumerate_subspaces(g);
  return histogram_of(X.n, k, X.field, slice_counts(X, subspaces, opts));
}

inline SliceStatistics exact_statistics(const SliceDistribution& dist, std::uint64_t x_count) {
  if (dist.total == 0) throw PreconditionError("empty slice distribution");
  SliceStatistics s;
  BigInt first = 0, second = 0;
  for (const auto& [z, count] : dist.histogram) {
    first += BigInt(z) * count;
    second += BigInt(z) * z * count;
  }
  s.mu = Rational(first, BigInt(dist.total));
  s.second_moment = Rational(second, BigInt(dist.total));
  s.sigma2 = s.second_moment - s.mu * s.mu;
  // E[Z^2] splits into the diagonal x = y, which is mu, plus B.
  s.B = s.second_moment - s.mu;
  s.x_count = x_count;
  s.v_count = dist.total;
  return s;
}

/// #X(F_q) #P^{n-k}(F_q) / #P^n(F_q).
inline Rational closed_form_mean(std::uint64_t x_count, int n, int k, std::uint64_t q) {
  return Rational(BigInt(x_count) * projective_count(n - k, q), projective_count(n, q));
}

/// #X(#X - 1) #P^{n-k}(#P^{n-k} - 1) / (#P^n (#P^n - 1)).
inline Rational closed_form_B(std::uint64_t x_count, int n, int k, std::uint64_t q) {
  const BigInt x = x_count;
  const BigInt h = projective_count(n - k, q);
  const BigInt p = projective_count(n, q);
  if (p == 1) return Rational(0);
  return Rational(x * (x - 1) * h * (h - 1), p * (p - 1));
}

struct IdentityCheck {
  std::string name;
  std::string relation;  // "==" or "<="
  Rational lhs;
  Rational rhs;
  bool passed = false;
};

struct LemmaReport {
  std::string variety;
  SliceDistribution distribution;
  SliceStatistics stats;
  std::vector<IdentityCheck> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  /// Name of the first failing check, empty when all pass.
  std::string first_failure() const {
    for (const auto& c : checks)
      if (!c.passed) return c.name;
    return {};
  }
};

inline IdentityCheck check_equal(std::string name, Rational lhs, Rational rhs) {
  IdentityCheck c{std::move(name), "==", std::move(lhs), std::move(rhs), false};
  c.passed = c.lhs == c.rhs;
  return c;
}

inline IdentityCheck check_le(std::string name, Rational lhs, Rational rhs) {
  IdentityCheck c{std::move(name), "<=", std::move(lhs), std::move(rhs), false};
  c.passed = c.lhs <= c.rhs;
  return c;
}

/// Runs the five exact checks: exhaustive mean and B against their closed
/// forms, B <= mu^2, sigma^2 <= mu and sigma^2 = B - mu^2 + mu.
inline LemmaReport verify_lemma(const ProjectiveVariety& X, int k, const ExecOptions& opts = {}, std::string name = {}) {
  LemmaReport rep;
  rep.variety = std::move(name);
  rep.distribution = slice_distribution(X, k, opts);
  const std::uint64_t x_count = count_points(X, opts.budget);
  rep.stats = exact_statistics(rep.distribution, x_count);
  const auto& s = rep.stats;
  const std::uint64_t q = X.field.order();
  rep.checks.push_back(check_equal("mean_closed_form", s.mu, closed_form_mean(x_count, X.n, k, q)));
  rep.checks.push_back(check_equal("B_closed_form", s.B, closed_form_B(x_count, X.n, k, q)));
  rep.checks.push_back(check_le("B_le_mu_squared", s.B, s.mu * s.mu));
  rep.checks.push_back(check_le("variance_le_mean", s.sigma2, s.mu));
  rep.checks.push_back(check_equal("variance_decomposition", s.sigma2, s.B - s.mu * s.mu + s.mu));
  return rep;
}

struct TailProbability {
  Rational probability;  // Prob(|Z - mu| >= t sigma)
  Rational bound;        // 1 / t^2
};

/// Exact Prob(|Z - mu| >= t sigma) from the histogram. The comparison is
/// done on squares, (Z - mu)^2 >= t^2 sigma^2, so sigma itself is never
/// needed. With sigma^2 = 0 the tail is 0.
inline TailProbability chebyshev_tail(const SliceDistribution& dist, const SliceStatistics& s, const Rational& t) {
  if (t <= 0) throw PreconditionError("chebyshev_tail needs t > 0");
  TailProbability out;
  out.bound = 1 / (t * t);
  if (s.sigma2 == 0) {
    out.probability = 0;
    return out;
  }
  const Rational threshold = t * t * s.sigma2;
  BigInt hits = 0;
  for (const auto& [z, count] : dist.histogram) {
    const Rational dev = Rational(BigInt(z)) - s.mu;
    if (dev * dev >= threshold) hits += count;
  }
  out.probability = Rational(hits, BigInt(dist.total));
  if (out.probability > out.bound) throw InvariantViolation("Chebyshev inequality violated");
  return out;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json rational_json(const Rational& r) {
  return {{"num", boost::multiprecision::numerator(r).str()}, {"den", boost::multiprecision::denominator(r).str()}, {"value", to_double(r)}};
}

inline nlohmann::json to_json(const SliceDistribution& d) {
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& [z, c] : d.histogram) hist.push_back({{"z", z}, {"count", c}});
  return {{"n", d.n}, {"k", d.k}, {"field", d.field}, {"q", d.q}, {"total", d.total}, {"histogram", hist}};
}

inline nlohmann::json to_json(const SliceStatistics& s) {
  return {{"mu", rational_json(s.mu)},         {"second_moment", rational_json(s.second_moment)},
          {"sigma2", rational_json(s.sigma2)}, {"B", rational_json(s.B)},
          {"x_count", s.x_count},              {"v_count", s.v_count}};
}

inline nlohmann::json to_json(const IdentityCheck& c) {
  return {{"name", c.name},
          {"relation", c.relation},
          {"lhs", rational_json(c.lhs)},
          {"rhs", rational_json(c.rhs)},
          {"passed", c.passed}};
}

inline nlohmann::json to_json(const LemmaReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  const Rational normalized = r.stats.x_count == 0 ? Rational(0) : r.stats.mu * Rational(ipow(BigInt(r.distribution.q), static_cast<unsigned>(r.distribution.k))) / Rational(BigInt(r.stats.x_count));
  return {{"variety", r.variety},
          {"inputs", {{"n", r.distribution.n}, {"k", r.distribution.k}, {"field", r.distribution.field}}},
          {"distribution", to_json(r.distribution)},
          {"statistics", to_json(r.stats)},
          {"mu_qk_over_x", rational_json(normalized)},
          {"checks", checks},
          {"passed", r.passed()}};
}

}  // namespace slicelab
