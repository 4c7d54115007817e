#include <gtest/gtest.h>

#include <sstream>

#include "slicelab/census.hpp"
#include "slicelab/constructions.hpp"

using namespace slicelab;

namespace {

const CensusOptions kQuadric{Classifier::QuadricExact, {1, 2}, Rational(1, 4)};
const CensusOptions kComponent{Classifier::ComponentEstimate, {1, 2}, Rational(1, 4)};

// Oracle for the cone V(x0*x2 - x1^2) in P^3: a hyperplane a.x = 0 is very
// bad iff it passes through the vertex (a3 = 0) and its trace line on the
// base conic meets the conic in 0 or 2 rational points.
std::uint64_t oracle_cone_very_bad(std::uint64_t q) {
  std::vector<std::array<std::uint64_t, 3>> conic;
  for (std::uint64_t t = 0; t < q; ++t) conic.push_back({1, t, t * t % q});
  conic.push_back({0, 0, 1});
  std::uint64_t count = 0;
  // lines a0 x0 + a1 x1 + a2 x2 = 0, normalized with first nonzero = 1
  for (std::uint64_t a0 = 0; a0 < q; ++a0)
    for (std::uint64_t a1 = 0; a1 < q; ++a1)
      for (std::uint64_t a2 = 0; a2 < q; ++a2) {
        const std::uint64_t lead = a0 ? a0 : (a1 ? a1 : a2);
        if (lead != 1) continue;
        std::uint64_t hits = 0;
        for (const auto& x : conic) hits += (a0 * x[0] + a1 * x[1] + a2 * x[2]) % q == 0;
        if (hits != 1) ++count;
      }
  return count;
}

}  // namespace

TEST(Census, QuadricConeVeryBadCountsMatchOracle) {
  for (std::uint64_t q : {3, 5, 7}) {
    const auto X = find_catalog_entry("quadric-cone-p3").instantiate(Field::make(q, 1));
    const auto c = full_census(X, 1, kQuadric);
    EXPECT_EQ(c.very_bad_count, q * q);
    EXPECT_EQ(c.very_bad_count, oracle_cone_very_bad(q));
    EXPECT_EQ(c.bad_count, c.very_bad_count);
    EXPECT_EQ(c.total, projective_count_u64(3, q));
    EXPECT_EQ(c.classes.split, q * (q + 1) / 2);
    EXPECT_EQ(c.classes.conjugate, q * (q - 1) / 2);
    EXPECT_EQ(c.classes.double_hyperplane, q + 1);
    EXPECT_EQ(c.classes.irreducible, q * q * q);
  }
}

TEST(Census, EveryVeryBadHyperplaneContainsTheVertex) {
  const Field F = Field::make(5, 1);
  const auto X = find_catalog_entry("quadric-cone-p3").instantiate(F);
  const auto c = full_census(X, 1, kQuadric);
  const auto hyperplanes = enumerate_subspaces(GrassmannianSpec(3, 1, F));
  ASSERT_EQ(hyperplanes.size(), c.verdicts.size());
  const auto vertex = ProjectivePoint::from_coords(F, {F.zero(), F.zero(), F.zero(), F.one()});
  for (std::size_t i = 0; i < hyperplanes.size(); ++i) {
    if (c.verdicts[i].very_bad) {
      EXPECT_TRUE(contains(F, hyperplanes[i], vertex));
    }
  }
}

TEST(Census, ProjectiveSpaceHasNoBadSlices) {
  const auto X = find_catalog_entry("projective-space-p3").instantiate(Field::make(3, 1));
  const auto c = full_census(X, 1, kQuadric);
  EXPECT_EQ(c.very_bad_count, 0u);
  EXPECT_EQ(c.classes.whole, c.total);
  const auto cheb = chebyshev_check(c);
  EXPECT_TRUE(cheb.vacuous);
  EXPECT_TRUE(cheb.passed);
  EXPECT_EQ(c.deviation_count, 0u);
  EXPECT_EQ(full_census(X, 1, kComponent).very_bad_count, 0u);
}

TEST(Census, DeviationThreshold) {
  EXPECT_EQ(deviation_threshold(2, 1, 3), Rational(3, 2));
  EXPECT_EQ(deviation_threshold(3, 2, 5), Rational(5, 2));
  EXPECT_EQ(deviation_threshold(2, 2, 7), Rational(1, 2));
  EXPECT_THROW(deviation_threshold(1, 2, 3), PreconditionError);
}

TEST(Census, ChebyshevHoldsOnEveryCensus) {
  for (std::uint64_t q : {3, 5})
    for (const auto& entry : standard_catalog()) {
      const auto X = entry.instantiate(Field::make(q, 1));
      for (int k = 1; k <= std::min(X.declared_dim, X.n - 1); ++k) {
        const bool quadric = X.generators.size() <= 1 && (X.generators.empty() || X.generators[0].degree() <= 2);
        const auto c = full_census(X, k, quadric ? kQuadric : kComponent);
        const auto rep = chebyshev_check(c);
        EXPECT_TRUE(rep.passed) << entry.name << " q=" << q << " k=" << k;
        EXPECT_LE(c.very_bad_count, c.total);
        // Oracle: recount deviations from the verdict list.
        std::uint64_t dev = 0;
        for (const auto& v : c.verdicts) {
          const Rational d = Rational(BigInt(v.z)) - c.stats.mu;
          if (abs_rational(d) >= c.threshold) ++dev;
        }
        EXPECT_EQ(dev, c.deviation_count);
        if (c.t_squared) {
          EXPECT_EQ(*c.t_squared, c.threshold * c.threshold / c.stats.sigma2);
          EXPECT_EQ(c.chebyshev_bound, Rational(BigInt(c.total)) / *c.t_squared);
          EXPECT_LE(Rational(BigInt(c.deviation_count)), c.chebyshev_bound);
        }
      }
    }
}

TEST(Census, ClassifiersAgreeOnCatalogQuadrics) {
  for (std::uint64_t q : {3, 5})
    for (const char* name : {"conic-p2", "split-pair-p2", "conjugate-pair-p2", "quadric-cone-p3", "quadric-cone-p4"}) {
      const auto X = find_catalog_entry(name).instantiate(Field::make(q, 1));
      for (int k = 1; k <= X.declared_dim; ++k) {
        if (k > 2 && q > 3) continue;
        const auto exact = full_census(X, k, kQuadric);
        const auto est = full_census(X, k, kComponent);
        ASSERT_EQ(exact.verdicts.size(), est.verdicts.size());
        for (std::size_t i = 0; i < exact.verdicts.size(); ++i) {
          // a slice that is a single point has a_est = 1 either way
          ASSERT_EQ(exact.verdicts[i].very_bad, est.verdicts[i].very_bad) << name << " q=" << q << " k=" << k << " i=" << i;
          ASSERT_EQ(exact.verdicts[i].bad, est.verdicts[i].bad) << name << " q=" << q << " k=" << k << " i=" << i;
        }
      }
    }
}

TEST(Census, ClassifierPreconditions) {
  const auto cone2 = find_catalog_entry("quadric-cone-p3").instantiate(Field::make(2, 1));
  EXPECT_THROW(full_census(cone2, 1, kQuadric), PreconditionError);
  const auto cubic = find_catalog_entry("plane-cubic-p2").instantiate(Field::make(3, 1));
  EXPECT_THROW(full_census(cubic, 1, kQuadric), PreconditionError);
  const auto two = find_catalog_entry("two-points-p2").instantiate(Field::make(3, 1));
  EXPECT_THROW(full_census(two, 1, kQuadric), PreconditionError);
  const auto ext = find_catalog_entry("conic-p2").instantiate(Field::make(3, 2));
  EXPECT_THROW(full_census(ext, 1, kComponent), PreconditionError);
  EXPECT_NO_THROW(full_census(ext, 1, kQuadric));
  EXPECT_THROW(full_census(cubic, 1, CensusOptions{Classifier::ComponentEstimate, {2}, Rational(1, 4)}), PreconditionError);
  EXPECT_EQ(parse_classifier("quadric-exact"), Classifier::QuadricExact);
  EXPECT_EQ(parse_classifier("component-estimate"), Classifier::ComponentEstimate);
  EXPECT_THROW(parse_classifier("exact"), ParseError);
}

TEST(Census, PlaneCubicPointSlices) {
  // k = 1 slices of a plane curve are finite sets; very bad iff the line
  // does not meet the curve in exactly one rational point.
  const Field F = Field::make(5, 1);
  const auto X = find_catalog_entry("plane-cubic-p2").instantiate(F);
  const auto c = full_census(X, 1, kComponent);
  std::uint64_t oracle = 0;
  for (const auto& v : c.verdicts) oracle += v.z != 1;
  EXPECT_EQ(c.very_bad_count, oracle);
}

TEST(Census, PredictedExponent) {
  EXPECT_EQ(predicted_exponent(3, 1, 2), 2);
  EXPECT_EQ(predicted_exponent(4, 2, 3), 5);
  EXPECT_EQ(predicted_exponent(2, 1, 1), 2);
}

TEST(Census, ScalingFitExamples) {
  auto fit = scaling_fit({{3, 9}, {5, 25}, {7, 49}}, 2);
  EXPECT_NEAR(fit.exponent, 2.0, 1e-12);
  EXPECT_NEAR(fit.residual, 0.0, 1e-12);
  EXPECT_EQ(fit.predicted, 2);
  fit = scaling_fit({{3, 4}, {5, 4}, {7, 4}}, 0);
  EXPECT_NEAR(fit.exponent, 0.0, 1e-12);
  fit = scaling_fit({{3, 0}, {5, 125}, {7, 343}}, 3);
  EXPECT_EQ(fit.excluded_q, (std::vector<std::uint64_t>{3}));
  EXPECT_NEAR(fit.exponent, 3.0, 1e-12);
  EXPECT_THROW(scaling_fit({{3, 0}, {5, 0}}, 1), PreconditionError);
  EXPECT_THROW(scaling_fit({{3, 9}}, 2), PreconditionError);
  EXPECT_THROW(scaling_fit({{3, 9}, {3, 10}}, 2), PreconditionError);
}

TEST(Census, WilsonInterval) {
  const auto [lo, hi] = wilson_interval(0, 10);
  EXPECT_NEAR(lo, 0.0, 1e-12);
  const double z2 = 1.959963984540054 * 1.959963984540054;
  EXPECT_NEAR(hi, z2 / (10 + z2), 1e-12);
  const auto [lo2, hi2] = wilson_interval(50, 100);
  EXPECT_NEAR(lo2 + hi2, 1.0, 1e-12);
  EXPECT_LT(lo2, 0.5);
}

TEST(Census, MonteCarloAgainstFullCensus) {
  const Field F = Field::make(7, 1);
  const auto X = find_catalog_entry("quadric-cone-p3").instantiate(F);
  const auto est = monte_carlo_census(X, 1, kQuadric, 2000, 20261018);
  const double truth = 49.0 / 400.0;
  EXPECT_LE(est.wilson_low, truth);
  EXPECT_GE(est.wilson_high, truth);
  EXPECT_LE(std::abs(est.fraction - truth), 3 * (est.wilson_high - est.wilson_low) / 2);
  const auto again = monte_carlo_census(X, 1, kQuadric, 2000, 20261018, ExecOptions{3, ExecOptions{}.budget});
  EXPECT_EQ(est.very_bad, again.very_bad);
  EXPECT_EQ(est.wilson_low, again.wilson_low);
  EXPECT_EQ(to_json(est).dump(), to_json(again).dump());
  EXPECT_THROW(monte_carlo_census(X, 1, kQuadric, 99, 1), PreconditionError);

  const auto P3 = find_catalog_entry("projective-space-p3").instantiate(F);
  EXPECT_EQ(monte_carlo_census(P3, 1, kQuadric, 200, 5).fraction, 0.0);
}

TEST(Census, CsvRow) {
  const auto X = find_catalog_entry("quadric-cone-p3").instantiate(Field::make(3, 1));
  const auto c = full_census(X, 1, kQuadric);
  const std::string row = census_csv_row(c);
  std::vector<std::string> cells;
  std::stringstream ss(row);
  for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
  std::size_t header_cols = 1;
  for (char ch : census_csv_header()) header_cols += ch == ',';
  ASSERT_EQ(cells.size(), header_cols);
  EXPECT_EQ(cells[0], "3");
  EXPECT_EQ(cells[4], "40");
  EXPECT_EQ(cells[5], "9");
  const Rational bound{BigInt(cells[7]), BigInt(cells[8])};
  EXPECT_EQ(bound, c.chebyshev_bound);
}

TEST(Census, JsonReport) {
  const auto X = find_catalog_entry("quadric-cone-p3").instantiate(Field::make(3, 1));
  const auto j = to_json(full_census(X, 1, kQuadric));
  EXPECT_EQ(j["very_bad"], 9);
  // Z is 4 (smooth conic or tangent double line), 7 (split) or 1 (conjugate)
  EXPECT_EQ(j["histogram"].size(), 3u);
  EXPECT_EQ(j["total"], 40);
  EXPECT_TRUE(j.contains("chebyshev_bound"));
  EXPECT_TRUE(j["chebyshev_bound"].contains("num"));
}
