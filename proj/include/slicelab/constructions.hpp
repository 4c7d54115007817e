#pragma once

// Test varieties: the cone over a plane curve with a coordinate vertex, the
// hyperplane locus U and the subspace families M_H used to exhibit large bad
// loci, and the named catalog used by the CLI and the test suites.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "census.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "poly.hpp"
#include "variety.hpp"

namespace slicelab {

/// Cone in P^n over a curve C in P^m (m = n - r + 1, variables x0..xm) with
/// vertex L = {x0 = ... = xm = 0} of dimension r - 2.
struct ConeSpec {
  std::vector<std::string> base_eqs;
  int n = 0;
  int r = 0;

  int base_dim() const { return n - r + 1; }
};

inline void validate(const ConeSpec& spec) {
  if (spec.r < 2) throw PreconditionError("cone construction needs r >= 2");
  if (spec.base_dim() < 2) throw PreconditionError("cone base must be a curve in P^m with m >= 2");
  if (spec.r > spec.n - 1) throw PreconditionError("cone construction needs r <= n - 1");
  if (spec.base_eqs.empty()) throw PreconditionError("cone base needs equations");
}

/// C as a curve in P^m.
inline ProjectiveVariety base_curve(const ConeSpec& spec, const Field& F) {
  validate(spec);
  const int m = spec.base_dim();
  std::vector<Polynomial> gens;
  for (const auto& eq : spec.base_eqs) {
    auto g = parse_polynomial(eq, F, static_cast<std::size_t>(m) + 1);
    if (g.degree() < 2) throw PreconditionError("cone base must have degree >= 2");
    gens.push_back(std::move(g));
  }
  return ProjectiveVariety(F, m, std::move(gens), 1);
}

/// The base equations read in n+1 variables.
inline ProjectiveVariety build_cone(const ConeSpec& spec, const Field& F) {
  const ProjectiveVariety C = base_curve(spec, F);
  std::vector<Polynomial> gens;
  for (const auto& g : C.generators) {
    Polynomial lifted(static_cast<std::size_t>(spec.n) + 1, g.degree());
    for (const auto& [mono, c] : g.terms()) {
      Monomial wide(static_cast<std::size_t>(spec.n) + 1, 0);
      std::copy(mono.begin(), mono.end(), wide.begin());
      lifted.add_term(F, wide, c);
    }
    gens.push_back(std::move(lifted));
  }
  return ProjectiveVariety(F, spec.n, std::move(gens), spec.r);
}

inline LinearSubspace cone_vertex(const ConeSpec& spec, const Field& F) {
  validate(spec);
  const int m = spec.base_dim();
  Matrix eqs(static_cast<std::size_t>(m) + 1, static_cast<std::size_t>(spec.n) + 1);
  for (int i = 0; i <= m; ++i) eqs(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = F.one();
  return LinearSubspace::from_equations(F, spec.n, std::move(eqs));
}

inline bool is_quadric_cone(const ConeSpec& spec, const Field& F) {
  if (F.characteristic() == 2 || spec.base_eqs.size() != 1) return false;
  return base_curve(spec, F).generators[0].degree() == 2;
}

/// Outcome of testing a hyperplane for membership in U.
struct UMembership {
  bool contains_vertex = false;
  /// A rational point P of H ∩ C, off the vertex (the smallest in
  /// enumeration order).
  std::optional<ProjectivePoint> witness;
  /// N = join(L, P).
  std::optional<LinearSubspace> span;
  std::optional<SliceClass> slice_class;
  bool top_dimension = false;  // dim(X ∩ H) = r - 1
  bool degree_two = false;     // deg(X ∩ H) >= 2
  /// Decided from extension point counts rather than exactly.
  bool approximate = false;

  bool in_U() const { return contains_vertex && witness && top_dimension && degree_two; }
};

inline UMembership locus_U_filter(const ConeSpec& spec, const Field& F, const LinearSubspace& H, const std::vector<unsigned>& ext_degrees = {1, 2}) {
  if (H.ambient() != spec.n || H.codim() != 1) throw PreconditionError("locus_U_filter takes a hyperplane of P^n");
  UMembership out;
  const LinearSubspace L = cone_vertex(spec, F);
  out.contains_vertex = contains_subspace(F, H, L);
  if (!out.contains_vertex) return out;

  const ProjectiveVariety C = base_curve(spec, F);
  for_each_projective_point(F, C.n, [&](std::span<const Elem> c) {
    if (!vanishes_at(F, C.generators, c)) return true;
    std::vector<Elem> x(static_cast<std::size_t>(spec.n) + 1, F.zero());
    std::copy(c.begin(), c.end(), x.begin());
    if (!contains(F, H, std::span<const Elem>(x))) return true;
    out.witness = ProjectivePoint{std::move(x)};
    return false;
  });
  if (out.witness) out.span = join(F, L, *out.witness);

  const ProjectiveVariety X = build_cone(spec, F);
  const ProjectiveVariety S = slice(X, H);
  if (is_quadric_cone(spec, F)) {
    out.slice_class = classify_hypersurface_slice(F, S.generators);
    out.top_dimension = *out.slice_class != SliceClass::WholeSpace;
    out.degree_two = *out.slice_class == SliceClass::Irreducible || is_bad(*out.slice_class);
    return out;
  }
  out.approximate = true;
  bool whole = true;
  for (const auto& g : S.generators) whole = whole && g.is_zero();
  if (whole) return out;
  const auto est = estimate_components(S, ext_degrees);
  out.top_dimension = !est.dimension_warning;
  out.degree_two = est.g_est >= 2;
  return out;
}

/// Codimension-k subspaces of P^n contained in the hyperplane H, obtained
/// from the codimension-(k-1) subspaces of H ≅ P^{n-1}. There are
/// gaussian_binomial(n, k-1, q) of them.
inline std::vector<LinearSubspace> enumerate_M_H(const Field& F, const LinearSubspace& H, int k) {
  if (H.codim() != 1) throw PreconditionError("enumerate_M_H takes a hyperplane");
  const int n = H.ambient();
  if (k < 1 || k > n) throw PreconditionError("enumerate_M_H needs 1 <= k <= n");
  if (k == 1) return {H};
  const Matrix basis = parametrize(F, H);  // n rows
  std::vector<LinearSubspace> out;
  for_each_subspace(GrassmannianSpec(n - 1, k - 1, F), [&](const LinearSubspace& inner) {
    const Matrix t = parametrize(F, inner);
    Matrix rows(0, static_cast<std::size_t>(n) + 1);
    for (std::size_t i = 0; i < t.rows; ++i) rows.append_row(combine_rows(F, basis, t.row(i)));
    out.push_back(LinearSubspace::from_spanning_rows(F, n, rows));
  });
  return out;
}

struct MProperties {
  bool dimensions = false;  // dim(X ∩ M) = r - k = dim(N ∩ M)
  bool degree = false;      // deg(X ∩ M) >= 2
  bool spans_H = false;     // join(M, L) = H
  bool approximate = false;
  std::optional<SliceClass> slice_class;

  bool all() const { return dimensions && degree && spans_H; }
};

/// Evaluates the three genericity properties of M ⊆ H for H in U.
inline MProperties generic_M_properties(const ConeSpec& spec, const Field& F, const LinearSubspace& H, const UMembership& u, const LinearSubspace& M,
                                        const std::vector<unsigned>& ext_degrees = {1, 2}) {
  if (!u.in_U() || !u.span) throw PreconditionError("generic_M_properties needs H in U");
  if (!contains_subspace(F, H, M)) throw PreconditionError("M must lie in H");
  MProperties out;
  const int k = M.codim();
  const int target = spec.r - k;
  const LinearSubspace L = cone_vertex(spec, F);
  const ProjectiveVariety X = build_cone(spec, F);
  const ProjectiveVariety S = slice(X, M);
  const int n_cap_m = intersection_dimension(F, *u.span, M);

  bool whole = true;
  for (const auto& g : S.generators) whole = whole && g.is_zero();
  if (is_quadric_cone(spec, F)) {
    out.slice_class = classify_hypersurface_slice(F, S.generators);
    // X is a hypersurface, so a proper slice has dimension dim M - 1
    const int x_cap_m = whole ? M.dim() : M.dim() - 1;
    out.dimensions = x_cap_m == target && n_cap_m == target;
    out.degree = *out.slice_class == SliceClass::Irreducible || is_bad(*out.slice_class);
  } else {
    out.approximate = true;
    if (!whole) {
      const auto est = estimate_components(S, ext_degrees);
      out.dimensions = !est.dimension_warning && n_cap_m == target;
      out.degree = est.g_est >= 2;
    }
  }
  out.spans_H = join(F, M, L) == H;
  return out;
}

// ---------------------------------------------------------------------------
// Sharpness experiment

struct SharpnessResult {
  std::string field;
  std::uint64_t q = 0;
  int k = 0;
  /// Hyperplanes containing the vertex.
  std::uint64_t through_vertex = 0;
  std::uint64_t u_count = 0;
  /// Pairs (H, M) with H in U and M in M_H satisfying all three properties.
  std::uint64_t witness_pairs = 0;
  std::uint64_t distinct_witnesses = 0;
  std::uint64_t candidates = 0;  // sum of #M_H over H in U
  /// Every witness lies in exactly one member of U.
  bool unique_parent = true;
  /// Every witness is classified very bad by the census classifier.
  bool witnesses_bad = true;
  bool approximate = false;
};

inline SharpnessResult run_sharpness(const ConeSpec& spec, int k, const Field& F, const CensusOptions& c = {}) {
  validate(spec);
  if (k < 1 || k > spec.r) throw PreconditionError("sharpness experiment needs 1 <= k <= r");
  const ProjectiveVariety X = build_cone(spec, F);
  check_classifier(X, c);
  SharpnessResult res;
  res.field = F.name();
  res.q = F.order();
  res.k = k;
  std::vector<std::pair<LinearSubspace, UMembership>> U;
  for_each_subspace(GrassmannianSpec(spec.n, 1, F), [&](const LinearSubspace& H) {
    auto u = locus_U_filter(spec, F, H, c.ext_degrees);
    if (u.contains_vertex) ++res.through_vertex;
    res.approximate = res.approximate || u.approximate;
    if (u.in_U()) U.emplace_back(H, std::move(u));
  });
  res.u_count = U.size();
  std::map<LinearSubspace, std::uint64_t> seen;
  for (const auto& [H, u] : U) {
    for (const auto& M : enumerate_M_H(F, H, k)) {
      ++res.candidates;
      const auto props = generic_M_properties(spec, F, H, u, M, c.ext_degrees);
      res.approximate = res.approximate || props.approximate;
      if (!props.all()) continue;
      ++res.witness_pairs;
      ++seen[M];
      std::uint64_t parents = 0;
      for (const auto& [H2, u2] : U)
        if (contains_subspace(F, H2, M)) ++parents;
      if (parents != 1) res.unique_parent = false;
      if (!classify_slice(X, M, c, ExecOptions{}.budget).very_bad) res.witnesses_bad = false;
    }
  }
  res.distinct_witnesses = seen.size();
  for (const auto& [M, times] : seen)
    if (times != 1) res.unique_parent = false;
  return res;
}

inline nlohmann::json to_json(const SharpnessResult& r) {
  return {{"field", r.field},
          {"q", r.q},
          {"k", r.k},
          {"through_vertex", r.through_vertex},
          {"u_count", r.u_count},
          {"candidates", r.candidates},
          {"witness_pairs", r.witness_pairs},
          {"distinct_witnesses", r.distinct_witnesses},
          {"unique_parent", r.unique_parent},
          {"witnesses_bad", r.witnesses_bad},
          {"approximate", r.approximate}};
}

// ---------------------------------------------------------------------------
// Catalog

struct CatalogEntry {
  std::string name;
  std::string description;
  int n = 0;
  int r = 0;
  std::vector<std::string> equations;
  std::optional<ConeSpec> cone;

  ProjectiveVariety instantiate(const Field& F) const {
    if (cone) return build_cone(*cone, F);
    std::vector<Polynomial> gens;
    for (const auto& eq : equations) gens.push_back(parse_polynomial(eq, F, static_cast<std::size_t>(n) + 1));
    return ProjectiveVariety(F, n, std::move(gens), r);
  }
};

inline const std::vector<CatalogEntry>& standard_catalog() {
  static const std::vector<CatalogEntry> catalog = [] {
    const ConeSpec cone3{{"x0*x2 - x1^2"}, 3, 2};
    const ConeSpec cone4{{"x0*x2 - x1^2"}, 4, 3};
    return std::vector<CatalogEntry>{
        {"conic-p2", "irreducible conic x0*x2 = x1^2 in P^2", 2, 1, {"x0*x2 - x1^2"}, std::nullopt},
        {"split-pair-p2", "two rational lines x0*x1 = 0 in P^2", 2, 1, {"x0*x1"}, std::nullopt},
        {"conjugate-pair-p2", "x0^2 + x1^2 = 0 in P^2, a conjugate line pair when -1 is a nonsquare", 2, 1, {"x0^2 + x1^2"}, std::nullopt},
        {"quadric-cone-p3", "cone over the conic with vertex (0:0:0:1)", 3, 2, cone3.base_eqs, cone3},
        {"quadric-cone-p4", "cone over the conic with vertex line x0 = x1 = x2 = 0", 4, 3, cone4.base_eqs, cone4},
        {"plane-cubic-p2", "irreducible plane cubic x0^3 + x1^3 = x0*x2^2", 2, 1, {"x0^3 + x1^3 - x0*x2^2"}, std::nullopt},
        {"two-points-p2", "the points (1:0:0) and (0:1:0)", 2, 0, {"x2", "x0*x1"}, std::nullopt},
        {"projective-space-p3", "all of P^3", 3, 3, {}, std::nullopt},
    };
  }();
  return catalog;
}

inline const CatalogEntry& find_catalog_entry(const std::string& name) {
  for (const auto& e : standard_catalog())
    if (e.name == name) return e;
  std::string names;
  for (const auto& e : standard_catalog()) names += (names.empty() ? "" : ", ") + e.name;
  throw UnknownCatalogEntry("unknown catalog entry '" + name + "' (known: " + names + ")");
}

/// Applies the projective change of coordinates x = A y to every generator.
inline ProjectiveVariety apply_coordinate_change(const ProjectiveVariety& X, const Matrix& A) {
  if (matrix_rank(X.field, A) != static_cast<std::size_t>(X.n) + 1) throw PreconditionError("coordinate change must be invertible");
  std::vector<Polynomial> gens;
  for (const auto& g : X.generators) gens.push_back(change_variables(X.field, g, A));
  return ProjectiveVariety(X.field, X.n, std::move(gens), X.declared_dim);
}

}  // namespace slicelab
