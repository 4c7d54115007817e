#pragma once

// Projective varieties given by equations: point counts over the base field
// and its extensions, intrinsic slices by linear subspaces, and
// component-count estimates from extension point counts.

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "ff.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "poly.hpp"
#include "rational.hpp"

namespace slicelab {

/// Common zero locus of homogeneous generators in P^n over `field`, with an
/// asserted dimension. An empty generator list is all of P^n.
struct ProjectiveVariety {
  Field field;
  int n = 0;
  std::vector<Polynomial> generators;
  int declared_dim = 0;

  ProjectiveVariety(Field f, int n_, std::vector<Polynomial> gens, int dim) : field(std::move(f)), n(n_), generators(std::move(gens)), declared_dim(dim) {
    if (n < 0) throw PreconditionError("ambient dimension must be >= 0");
    if (declared_dim < 0 || declared_dim > n) throw PreconditionError("declared dimension must lie in [0, n]");
    for (const auto& g : generators)
      if (g.nvars() != static_cast<std::size_t>(n) + 1) throw PreconditionError("generator has wrong number of variables");
  }

  bool has_prime_field_coefficients() const {
    for (const auto& g : generators)
      for (const auto& [mono, c] : g.terms())
        if (!field.in_prime_subfield(c)) return false;
    return true;
  }
};

/// All generators vanish at x (coordinates in the variety's field).
inline bool vanishes_at(const Field& F, const std::vector<Polynomial>& gens, std::span<const Elem> x) {
  for (const auto& g : gens)
    if (evaluate(F, g, x) != F.zero()) return false;
  return true;
}

inline void check_point_budget(int n, const BigInt& q, std::uint64_t budget) {
  const BigInt points = projective_count(n, q);
  if (points > budget)
    throw BudgetExceeded("enumerating P^" + std::to_string(n) + "(F_" + q.str() + ") visits " + points.str() +
                         " points, over the budget of " + std::to_string(budget));
}

/// #X(F) for a field F containing the coefficients of X: either X's own
/// field, or any field of the same characteristic when X has prime-field
/// coefficients (element indices of the prime subfield agree).
inline std::uint64_t count_points_over(const ProjectiveVariety& X, const Field& F, std::uint64_t budget = ExecOptions{}.budget) {
  if (!(F == X.field)) {
    if (F.characteristic() != X.field.characteristic()) throw PreconditionError("counting field has the wrong characteristic");
    if (!X.has_prime_field_coefficients()) throw PreconditionError("extension counting needs prime-field coefficients");
  }
  check_point_budget(X.n, F.order(), budget);
  std::uint64_t count = 0;
  for_each_projective_point(F, X.n, [&](std::span<const Elem> x) {
    if (vanishes_at(F, X.generators, x)) ++count;
  });
  return count;
}

inline std::uint64_t count_points(const ProjectiveVariety& X, std::uint64_t budget = ExecOptions{}.budget) {
  return count_points_over(X, X.field, budget);
}

/// #X(F_{q^m}) where F_q is X's field; the extension is built directly over
/// the prime field as GF(p^{e m}).
inline std::uint64_t count_points_extension(const ProjectiveVariety& X, unsigned m, std::uint64_t budget = ExecOptions{}.budget) {
  if (m == 0) throw PreconditionError("extension degree must be >= 1");
  if (m == 1) return count_points(X, budget);
  const unsigned total_degree = X.field.degree() * m;
  // refuse before building a field whose point count is already over budget
  check_point_budget(X.n, ipow(BigInt(X.field.characteristic()), total_degree), budget);
  const Field ext = make_field(X.field.characteristic(), total_degree);
  return count_points_over(X, ext, budget);
}

/// X ∩ H as a variety in P^{n-k}, written in the coordinates of
/// parametrize(H). Declared dimension max(r - k, 0).
inline ProjectiveVariety slice(const ProjectiveVariety& X, const LinearSubspace& H) {
  if (H.ambient() != X.n) throw PreconditionError("slice by a subspace of a different space");
  const Matrix basis = parametrize(X.field, H);
  std::vector<Polynomial> gens;
  gens.reserve(X.generators.size());
  for (const auto& g : X.generators) gens.push_back(substitute_linear(X.field, g, basis));
  return ProjectiveVariety(X.field, H.dim(), std::move(gens), std::max(X.declared_dim - H.codim(), 0));
}

/// #(X ∩ H)(F_q) by testing the points of H against the generators.
inline std::uint64_t count_points_on_subspace(const ProjectiveVariety& X, const LinearSubspace& H) {
  const Matrix basis = parametrize(X.field, H);
  std::uint64_t count = 0;
  for_each_projective_point(X.field, static_cast<int>(basis.rows) - 1, [&](std::span<const Elem> t) {
    const auto x = combine_rows(X.field, basis, t);
    if (vanishes_at(X.field, X.generators, x)) ++count;
  });
  return count;
}

// ---------------------------------------------------------------------------
// Component estimates

struct ExtensionCount {
  unsigned degree = 1;
  std::uint64_t points = 0;
  Rational ratio;       // N_m / q^{r m}
  Rational residual;    // |ratio - nearest integer|
  BigInt nearest;
};

struct ComponentEstimate {
  std::vector<ExtensionCount> counts;
  /// Nearest integer to N_1 / q^r: geometrically irreducible top-dimensional
  /// components defined over F_q.
  BigInt a_est = 0;
  /// Nearest integer to N_M / q^{rM} for the largest M with residual <= tau:
  /// all top-dimensional geometric components.
  BigInt g_est = 0;
  /// No ratio came within tau of an integer; g_est then falls back to a_est.
  bool inconclusive = false;
  /// N_1 outside [q^r / 4, 4 deg q^r]: the declared dimension looks wrong.
  bool dimension_warning = false;
};

inline unsigned max_generator_degree(const ProjectiveVariety& X) {
  unsigned d = 1;
  for (const auto& g : X.generators)
    if (!g.is_zero()) d = std::max(d, g.degree());
  return d;
}

inline ComponentEstimate estimate_components(const ProjectiveVariety& X, const std::vector<unsigned>& degrees, const Rational& tau = Rational(1, 4),
                                             std::uint64_t budget = ExecOptions{}.budget) {
  if (degrees.empty() || degrees.front() != 1) throw PreconditionError("extension degrees must start with 1");
  for (std::size_t i = 1; i < degrees.size(); ++i)
    if (degrees[i] <= degrees[i - 1]) throw PreconditionError("extension degrees must be strictly ascending");
  ComponentEstimate est;
  const BigInt q = X.field.order();
  const auto r = static_cast<unsigned>(X.declared_dim);
  for (unsigned m : degrees) {
    ExtensionCount c;
    c.degree = m;
    c.points = count_points_extension(X, m, budget);
    c.ratio = Rational(BigInt(c.points), ipow(q, r * m));
    c.nearest = round_rational(c.ratio);
    c.residual = abs_rational(c.ratio - Rational(c.nearest));
    est.counts.push_back(std::move(c));
  }
  est.a_est = est.counts.front().nearest;
  est.inconclusive = true;
  for (auto it = est.counts.rbegin(); it != est.counts.rend(); ++it) {
    if (it->residual <= tau) {
      est.g_est = it->nearest;
      est.inconclusive = false;
      break;
    }
  }
  if (est.inconclusive) est.g_est = est.a_est;
  const Rational qr(ipow(q, r));
  const Rational n1(BigInt(est.counts.front().points));
  est.dimension_warning = n1 < qr / 4 || n1 > qr * 4 * max_generator_degree(X);
  return est;
}

// ---------------------------------------------------------------------------
// Exact quadric classification

enum class SliceClass { Irreducible, SplitPair, ConjugatePair, DoubleHyperplane, WholeSpace };

inline std::string to_string(SliceClass c) {
  switch (c) {
    case SliceClass::Irreducible: return "irreducible";
    case SliceClass::SplitPair: return "split";
    case SliceClass::ConjugatePair: return "conjugate";
    case SliceClass::DoubleHyperplane: return "double";
    case SliceClass::WholeSpace: return "whole";
  }
  return "?";
}

/// Split and conjugate pairs are not geometrically irreducible.
inline bool is_bad(SliceClass c) { return c == SliceClass::SplitPair || c == SliceClass::ConjugatePair; }

/// Classifies V(g) for a quadratic form g (zero allowed) in odd
/// characteristic by rank and discriminant.
inline SliceClass classify_quadric_slice(const Field& F, const Polynomial& g) {
  if (F.characteristic() == 2) throw PreconditionError("quadric classification needs odd characteristic");
  if (g.is_zero()) return SliceClass::WholeSpace;
  const auto info = quadratic_form_info(F, g);
  if (info.rank >= 3) return SliceClass::Irreducible;
  if (info.rank == 1) return SliceClass::DoubleHyperplane;
  const Elem minus_det = F.neg(F.mul(info.diagonal[0], info.diagonal[1]));
  return F.is_square(minus_det) ? SliceClass::SplitPair : SliceClass::ConjugatePair;
}

/// Exact class of a slice given by at most one generator of degree <= 2.
/// No generators or a vanishing one: the whole space; a nonzero linear
/// form: a hyperplane.
inline SliceClass classify_hypersurface_slice(const Field& F, const std::vector<Polynomial>& gens) {
  if (gens.size() > 1) throw PreconditionError("exact quadric classifier handles a single generator");
  if (gens.empty() || gens[0].is_zero()) return SliceClass::WholeSpace;
  if (gens[0].degree() == 1) return SliceClass::Irreducible;
  if (gens[0].degree() != 2) throw PreconditionError("exact quadric classifier needs degree <= 2");
  return classify_quadric_slice(F, gens[0]);
}

// ---------------------------------------------------------------------------
// Variety files: a header line "n=<n> r=<r> p=<p>" followed by one
// polynomial per line. Blank lines and lines starting with '#' are skipped.

struct VarietyFile {
  int n = 0;
  int r = 0;
  std::uint64_t p = 0;
  std::vector<std::string> equations;
};

namespace detail {
inline std::uint64_t small_header_value(const std::string& val, const std::string& key) {
  const std::uint64_t v = parse_u64(val, key);
  if (v > 64) throw ParseError("variety header value " + key + "=" + val + " out of range");
  return v;
}
}  // namespace detail

inline VarietyFile parse_variety_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  VarietyFile out;
  bool header = false;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    line = line.substr(first);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!header) {
      std::istringstream hs(line);
      std::string tok;
      bool seen_n = false, seen_r = false, seen_p = false;
      while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError("bad variety header token '" + tok + "'");
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (val.empty() || val.find_first_not_of("0123456789") != std::string::npos) throw ParseError("bad value in variety header: " + tok);
        if (key == "n") out.n = static_cast<int>(detail::small_header_value(val, "n")), seen_n = true;
        else if (key == "r") out.r = static_cast<int>(detail::small_header_value(val, "r")), seen_r = true;
        else if (key == "p") out.p = parse_u64(val, "p"), seen_p = true;
        else throw ParseError("unknown variety header key '" + key + "'");
      }
      if (!(seen_n && seen_r && seen_p)) throw ParseError("variety header needs n=, r= and p=");
      header = true;
      continue;
    }
    out.equations.push_back(line);
  }
  if (!header) throw ParseError("variety file has no header");
  return out;
}

/// Instantiates a parsed variety file over F. Integer coefficients are
/// reduced modulo the characteristic of F, which may differ from the file's
/// p (the file's p names its default field).
inline ProjectiveVariety instantiate(const VarietyFile& file, const Field& F) {
  std::vector<Polynomial> gens;
  for (const auto& eq : file.equations) gens.push_back(parse_polynomial(eq, F, static_cast<std::size_t>(file.n) + 1));
  return ProjectiveVariety(F, file.n, std::move(gens), file.r);
}

inline std::string to_variety_text(const ProjectiveVariety& X) {
  std::string out = "n=" + std::to_string(X.n) + " r=" + std::to_string(X.declared_dim) + " p=" + std::to_string(X.field.characteristic()) + "\n";
  for (const auto& g : X.generators) out += to_string(X.field, g) + "\n";
  return out;
}

inline VarietyFile load_variety_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open variety file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_variety_text(ss.str());
}

}  // namespace slicelab
