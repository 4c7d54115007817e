#include <gtest/gtest.h>

#include <map>
#include <set>

#include "slicelab/geometry.hpp"

using namespace slicelab;

namespace {

std::vector<Elem> ints(const Field& F, std::initializer_list<std::int64_t> xs) {
  std::vector<Elem> out;
  for (auto x : xs) out.push_back(F.from_int(x));
  return out;
}

Matrix matrix(const Field& F, std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  Matrix m;
  for (const auto& r : rows) m.append_row(ints(F, r));
  return m;
}

ProjectivePoint point(const Field& F, std::initializer_list<std::int64_t> xs) { return ProjectivePoint::from_coords(F, ints(F, xs)); }

// Oracle: all nonzero vectors of F^{n+1}, normalized and deduplicated.
std::set<ProjectivePoint> oracle_points(const Field& F, int n) {
  std::set<ProjectivePoint> out;
  const std::size_t len = static_cast<std::size_t>(n) + 1;
  std::vector<Elem> v(len, F.zero());
  for (;;) {
    bool nonzero = false;
    for (auto e : v) nonzero = nonzero || e != F.zero();
    if (nonzero) out.insert(ProjectivePoint::from_coords(F, v));
    std::size_t i = 0;
    while (i < len && ++v[i].v == F.order()) v[i++].v = 0;
    if (i == len) break;
  }
  return out;
}

// Oracle: a subspace as the set of its points (membership by direct dot
// products with the equations).
std::set<ProjectivePoint> point_set(const Field& F, const LinearSubspace& H) {
  std::set<ProjectivePoint> out;
  for (const auto& x : oracle_points(F, H.ambient())) {
    bool in = true;
    const Matrix& e = H.equations();
    for (std::size_t i = 0; i < e.rows; ++i) {
      Elem s = F.zero();
      for (std::size_t j = 0; j < e.cols; ++j) s = F.add(s, F.mul(e(i, j), x.coords[j]));
      in = in && s == F.zero();
    }
    if (in) out.insert(x);
  }
  return out;
}

}  // namespace

TEST(Geometry, ProjectivePointCounts) {
  EXPECT_EQ(enumerate_projective_points(Field::make(2, 1), 2).size(), 7u);
  EXPECT_EQ(enumerate_projective_points(Field::make(5, 1), 0).size(), 1u);
  EXPECT_EQ(enumerate_projective_points(Field::make(3, 1), 3).size(), 40u);
  EXPECT_EQ(projective_count(3, BigInt(3)), 40);
}

TEST(Geometry, ProjectiveEnumerationMatchesOracle) {
  for (auto [p, m] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}})
    for (int n = 0; n <= 3; ++n) {
      const Field F = Field::make(p, m);
      const auto pts = enumerate_projective_points(F, n);
      const auto oracle = oracle_points(F, n);
      EXPECT_EQ(std::set<ProjectivePoint>(pts.begin(), pts.end()), oracle);
      EXPECT_EQ(pts.size(), oracle.size());
      for (const auto& x : pts) EXPECT_EQ(ProjectivePoint::from_coords(F, x.coords), x);
    }
}

TEST(Geometry, ProjectiveEnumerationOrder) {
  const Field F = Field::make(2, 1);
  const auto pts = enumerate_projective_points(F, 2);
  std::vector<std::vector<std::uint64_t>> got;
  for (const auto& x : pts) got.push_back({x.coords[0].v, x.coords[1].v, x.coords[2].v});
  EXPECT_EQ(got, (std::vector<std::vector<std::uint64_t>>{{1, 0, 0}, {1, 0, 1}, {1, 1, 0}, {1, 1, 1}, {0, 1, 0}, {0, 1, 1}, {0, 0, 1}}));
}

TEST(Geometry, GaussianBinomial) {
  EXPECT_EQ(gaussian_binomial(4, 2, 2), 35);
  EXPECT_EQ(gaussian_binomial(7, 0, 3), 1);
  EXPECT_EQ(gaussian_binomial(5, 2, 3), 1210);
  EXPECT_EQ(gaussian_binomial(5, 2, 5), 20306);
  EXPECT_THROW(gaussian_binomial(2, 3, 2), PreconditionError);
}

TEST(Geometry, GrassmannianDimension) {
  EXPECT_EQ(grassmannian_dimension(5, 1), 5);
  EXPECT_EQ(grassmannian_dimension(4, 2), 6);
  EXPECT_EQ(grassmannian_dimension(3, 3), 3);
  EXPECT_THROW(grassmannian_dimension(3, 0), PreconditionError);
}

TEST(Geometry, SubspaceEnumerationExamples) {
  EXPECT_EQ(enumerate_subspaces(GrassmannianSpec(2, 1, Field::make(2, 1))).size(), 7u);
  EXPECT_EQ(enumerate_subspaces(GrassmannianSpec(3, 2, Field::make(2, 1))).size(), 35u);
  EXPECT_EQ(enumerate_subspaces(GrassmannianSpec(4, 2, Field::make(3, 1))).size(), 1210u);
  EXPECT_THROW(GrassmannianSpec(3, 0, Field::make(2, 1)), PreconditionError);
  EXPECT_THROW(GrassmannianSpec(3, 4, Field::make(2, 1)), PreconditionError);
}

TEST(Geometry, SubspaceCountsMatchGaussianBinomialAndAreDistinct) {
  for (std::uint64_t q : {2, 3, 5})
    for (int n = 1; n <= 4; ++n)
      for (int k = 1; k <= n; ++k) {
        const Field F = Field::make(q, 1);
        const auto subs = enumerate_subspaces(GrassmannianSpec(n, k, F));
        ASSERT_EQ(BigInt(subs.size()), gaussian_binomial(n + 1, k, q)) << "n=" << n << " k=" << k << " q=" << q;
        if (q <= 3 && n <= 3) {
          std::set<std::set<ProjectivePoint>> sets;
          for (const auto& H : subs) {
            const auto s = point_set(F, H);
            ASSERT_EQ(BigInt(s.size()), projective_count(n - k, q));
            sets.insert(s);
          }
          ASSERT_EQ(sets.size(), subs.size());
        }
      }
}

TEST(Geometry, SubspaceEnumerationIsRref) {
  const Field F = Field::make(3, 1);
  for (const auto& H : enumerate_subspaces(GrassmannianSpec(3, 2, F))) {
    Matrix copy = H.equations();
    rref_in_place(F, copy);
    ASSERT_EQ(copy, H.equations());
    ASSERT_EQ(matrix_rank(F, H.equations()), 2u);
  }
}

TEST(Geometry, RrefCanonicalUnderRowScrambling) {
  const Field F = Field::make(5, 1);
  Rng rng(7);
  for (const auto& H : enumerate_subspaces(GrassmannianSpec(3, 2, F))) {
    for (int trial = 0; trial < 3; ++trial) {
      // random invertible 2x2 mixing of the rows
      Matrix mix(2, 2);
      do {
        for (auto& e : mix.data) e = Elem{uniform_below(rng, 5)};
      } while (matrix_rank(F, mix) != 2);
      const Matrix& e = H.equations();
      Matrix scrambled(2, e.cols);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < e.cols; ++j)
          scrambled(i, j) = F.add(F.mul(mix(i, 0), e(0, j)), F.mul(mix(i, 1), e(1, j)));
      ASSERT_EQ(LinearSubspace::from_equations(F, 3, scrambled), H);
    }
  }
}

TEST(Geometry, ContainsExamples) {
  const Field F = Field::make(3, 1);
  const auto H = LinearSubspace::from_equations(F, 2, matrix(F, {{1, 0, 0}}));
  EXPECT_TRUE(contains(F, H, point(F, {0, 1, 0})));
  EXPECT_FALSE(contains(F, H, point(F, {1, 0, 0})));
}

TEST(Geometry, CountThroughPointsExamples) {
  const Field F2 = Field::make(2, 1);
  const Field F3 = Field::make(3, 1);
  const std::vector<ProjectivePoint> one{point(F2, {1, 0, 0})};
  EXPECT_EQ(count_through_points(GrassmannianSpec(2, 1, F2), one), 3u);
  const std::vector<ProjectivePoint> one3{point(F3, {0, 1, 2, 1})};
  EXPECT_EQ(count_through_points(GrassmannianSpec(3, 1, F3), one3), 13u);
  EXPECT_EQ(BigInt(13), gaussian_binomial(3, 1, 3));
  const std::vector<ProjectivePoint> two{point(F2, {1, 0, 0, 0}), point(F2, {0, 1, 1, 0})};
  EXPECT_EQ(count_through_points(GrassmannianSpec(3, 2, F2), two), 1u);
  const std::vector<ProjectivePoint> same{point(F2, {1, 0, 0}), point(F2, {1, 0, 0})};
  EXPECT_THROW(count_through_points(GrassmannianSpec(2, 1, F2), same), PreconditionError);
}

TEST(Geometry, IncidenceConstancyAndDoubleCounting) {
  for (std::uint64_t q : {2, 3})
    for (int n = 1; n <= 3; ++n)
      for (int k = 1; k <= n; ++k) {
        const Field F = Field::make(q, 1);
        const GrassmannianSpec g(n, k, F);
        const auto pts = enumerate_projective_points(F, n);
        const auto subs = enumerate_subspaces(g);
        // membership table, computed once
        std::vector<std::vector<bool>> in(subs.size(), std::vector<bool>(pts.size()));
        BigInt total_incidences = 0;
        for (std::size_t h = 0; h < subs.size(); ++h)
          for (std::size_t i = 0; i < pts.size(); ++i) {
            in[h][i] = contains(F, subs[h], pts[i]);
            if (in[h][i]) total_incidences += 1;
          }
        std::set<std::uint64_t> singles, pairs;
        for (std::size_t i = 0; i < pts.size(); ++i) {
          std::uint64_t c = 0;
          for (std::size_t h = 0; h < subs.size(); ++h) c += in[h][i];
          singles.insert(c);
          for (std::size_t j = i + 1; j < pts.size(); ++j) {
            std::uint64_t c2 = 0;
            for (std::size_t h = 0; h < subs.size(); ++h) c2 += in[h][i] && in[h][j];
            pairs.insert(c2);
          }
        }
        ASSERT_EQ(singles.size(), 1u);
        if (pts.size() > 1) {
          ASSERT_EQ(pairs.size(), 1u);
        }
        const std::vector<ProjectivePoint> first{pts.front()};
        const std::uint64_t through = count_through_points(g, first);
        ASSERT_EQ(through, *singles.begin());
        ASSERT_EQ(total_incidences, projective_count(n, q) * through);
        if (pts.size() > 1) {
          const std::vector<ProjectivePoint> pair{pts.front(), pts.back()};
          ASSERT_EQ(count_through_points(g, pair), *pairs.begin());
        }
      }
}

TEST(Geometry, ParametrizeExamples) {
  const Field F = Field::make(3, 1);
  const auto H = LinearSubspace::from_equations(F, 3, matrix(F, {{0, 0, 0, 1}}));
  EXPECT_EQ(parametrize(F, H), matrix(F, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}}));
  const auto H2 = LinearSubspace::from_equations(F, 3, matrix(F, {{1, -1, 0, 0}, {0, 0, 1, 0}}));
  EXPECT_EQ(parametrize(F, H2), matrix(F, {{1, 1, 0, 0}, {0, 0, 0, 1}}));
}

TEST(Geometry, ParametrizeSpansExactlyThePoints) {
  const Field F = Field::make(3, 1);
  for (int k = 1; k <= 3; ++k)
    for (const auto& H : enumerate_subspaces(GrassmannianSpec(3, k, F))) {
      const Matrix basis = parametrize(F, H);
      ASSERT_EQ(basis.rows, static_cast<std::size_t>(4 - k));
      ASSERT_EQ(matrix_rank(F, basis), basis.rows);
      const auto pts = points_of(F, H);
      ASSERT_EQ(std::set<ProjectivePoint>(pts.begin(), pts.end()), point_set(F, H));
      ASSERT_EQ(LinearSubspace::from_spanning_rows(F, 3, basis), H);
    }
}

TEST(Geometry, JoinExamples) {
  const Field F = Field::make(3, 1);
  const auto a = point(F, {1, 0, 0, 0});
  const auto b = point(F, {0, 1, 1, 0});
  const auto line = join(F, LinearSubspace::from_point(F, a), b);
  EXPECT_EQ(line.dim(), 1);
  EXPECT_TRUE(contains(F, line, a));
  EXPECT_TRUE(contains(F, line, b));
  // the unique line through a and b
  const std::vector<ProjectivePoint> ab{a, b};
  std::uint64_t lines = 0;
  for (const auto& L : enumerate_subspaces(GrassmannianSpec(3, 2, F)))
    if (contains(F, L, a) && contains(F, L, b)) {
      ++lines;
      EXPECT_EQ(L, line);
    }
  EXPECT_EQ(lines, 1u);

  const auto vertex = LinearSubspace::from_equations(F, 3, matrix(F, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}}));
  EXPECT_EQ(join(F, vertex, a), LinearSubspace::from_equations(F, 3, matrix(F, {{0, 1, 0, 0}, {0, 0, 1, 0}})));

  const auto H = LinearSubspace::from_equations(F, 3, matrix(F, {{1, 1, 0, 2}}));
  for (const auto& x : points_of(F, H)) EXPECT_EQ(join(F, H, x), H);
}

TEST(Geometry, IntersectionDimensionMatchesPointCounts) {
  const Field F = Field::make(2, 1);
  const auto planes = enumerate_subspaces(GrassmannianSpec(3, 1, F));
  const auto lines = enumerate_subspaces(GrassmannianSpec(3, 2, F));
  for (const auto& A : lines)
    for (const auto& B : planes) {
      const auto sa = point_set(F, A), sb = point_set(F, B);
      std::size_t common = 0;
      for (const auto& x : sa) common += sb.count(x);
      const int d = intersection_dimension(F, A, B);
      const std::size_t expected = d < 0 ? 0 : projective_count_u64(d, 2);
      ASSERT_EQ(common, expected);
      ASSERT_EQ(contains_subspace(F, B, A), common == sa.size());
    }
}

TEST(Geometry, RandomSubspaceUniformOnLinesOfFanoPlane) {
  const Field F = Field::make(2, 1);
  const GrassmannianSpec g(2, 1, F);
  Rng rng(2024);
  std::map<LinearSubspace, int> hist;
  for (int i = 0; i < 7000; ++i) ++hist[random_subspace(g, rng)];
  ASSERT_EQ(hist.size(), 7u);
  for (const auto& [H, c] : hist) {
    EXPECT_GE(c, 880);
    EXPECT_LE(c, 1120);
  }
}

TEST(Geometry, RandomSubspaceOfPointsIsUniformPoint) {
  const Field F = Field::make(3, 1);
  const GrassmannianSpec g(2, 2, F);
  Rng rng(5);
  std::map<LinearSubspace, int> hist;
  for (int i = 0; i < 13000; ++i) {
    const auto H = random_subspace(g, rng);
    ASSERT_EQ(H.dim(), 0);
    ++hist[H];
  }
  ASSERT_EQ(hist.size(), 13u);
  for (const auto& [H, c] : hist) {
    EXPECT_GE(c, 1000 - 4 * 31);
    EXPECT_LE(c, 1000 + 4 * 31);
  }
}

TEST(Geometry, RandomSubspaceDeterministic) {
  const Field F = Field::make(5, 1);
  const GrassmannianSpec g(4, 2, F);
  Rng a(99), b(99);
  for (int i = 0; i < 50; ++i) ASSERT_EQ(random_subspace(g, a), random_subspace(g, b));
  EXPECT_EQ(random_subspace(g, 17), random_subspace(g, 17));
}

TEST(Geometry, ExtensionFieldSubspaces) {
  const Field F = Field::make(2, 2);
  const auto subs = enumerate_subspaces(GrassmannianSpec(2, 1, F));
  EXPECT_EQ(subs.size(), 21u);
  for (const auto& H : subs) EXPECT_EQ(points_of(F, H).size(), 5u);
}
