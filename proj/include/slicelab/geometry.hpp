#pragma once

// Projective space P^n(F_q) and the Grassmannian of codimension-k linear
// subspaces. Subspaces are stored by their annihilator: a k x (n+1) matrix
// in reduced row echelon form, one row per linear equation.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "errors.hpp"
#include "ff.hpp"
#include "random.hpp"
#include "rational.hpp"

namespace slicelab {

/// Dense row-major matrix over a finite field.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Elem> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  Elem& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  Elem operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  std::span<const Elem> row(std::size_t i) const { return {data.data() + i * cols, cols}; }

  void append_row(std::span<const Elem> r) {
    if (rows == 0 && cols == 0) cols = r.size();
    if (r.size() != cols) throw PreconditionError("row length mismatch");
    data.insert(data.end(), r.begin(), r.end());
    ++rows;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

struct RrefResult {
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

/// Reduces m in place to reduced row echelon form, leftmost nonzero pivots.
/// Zero rows end up at the bottom.
inline RrefResult rref_in_place(const Field& F, Matrix& m) {
  RrefResult res;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t piv = r;
    while (piv < m.rows && m(piv, c) == F.zero()) ++piv;
    if (piv == m.rows) continue;
    if (piv != r)
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(r, j));
    const Elem inv = F.inv(m(r, c));
    for (std::size_t j = 0; j < m.cols; ++j) m(r, j) = F.mul(m(r, j), inv);
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r || m(i, c) == F.zero()) continue;
      const Elem factor = m(i, c);
      for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = F.sub(m(i, j), F.mul(factor, m(r, j)));
    }
    res.pivots.push_back(c);
    ++r;
  }
  res.rank = r;
  return res;
}

inline std::size_t matrix_rank(const Field& F, Matrix m) { return rref_in_place(F, m).rank; }

/// Basis of the right kernel {x : m x = 0}. One row per free column of the
/// RREF (ascending), with a 1 in that column.
inline Matrix null_space(const Field& F, Matrix m) {
  const auto res = rref_in_place(F, m);
  std::vector<bool> is_pivot(m.cols, false);
  for (auto c : res.pivots) is_pivot[c] = true;
  Matrix out(0, m.cols);
  for (std::size_t f = 0; f < m.cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Elem> v(m.cols, F.zero());
    v[f] = F.one();
    for (std::size_t i = 0; i < res.rank; ++i) v[res.pivots[i]] = F.neg(m(i, f));
    out.append_row(v);
  }
  return out;
}

inline Elem dot(const Field& F, std::span<const Elem> a, std::span<const Elem> b) {
  Elem acc = F.zero();
  for (std::size_t i = 0; i < a.size(); ++i) acc = F.add(acc, F.mul(a[i], b[i]));
  return acc;
}

// ---------------------------------------------------------------------------
// Points

/// A point of P^n, normalized so that its first nonzero coordinate is 1.
struct ProjectivePoint {
  std::vector<Elem> coords;

  std::size_t ambient() const { return coords.size() - 1; }

  /// Normalizes a nonzero coordinate vector.
  static ProjectivePoint from_coords(const Field& F, std::vector<Elem> coords) {
    std::size_t lead = 0;
    while (lead < coords.size() && coords[lead] == F.zero()) ++lead;
    if (lead == coords.size()) throw PreconditionError("the zero vector is not a projective point");
    if (coords[lead] != F.one()) {
      const Elem inv = F.inv(coords[lead]);
      for (auto& c : coords) c = F.mul(c, inv);
    }
    return ProjectivePoint{std::move(coords)};
  }

  friend auto operator<=>(const ProjectivePoint&, const ProjectivePoint&) = default;
};

/// #P^n(F_q) = (q^{n+1} - 1)/(q - 1).
inline BigInt projective_count(int n, const BigInt& q) {
  if (n < 0) return 0;
  BigInt total = 0, term = 1;
  for (int i = 0; i <= n; ++i) {
    total += term;
    term *= q;
  }
  return total;
}

inline std::uint64_t projective_count_u64(int n, std::uint64_t q) { return projective_count(n, q).convert_to<std::uint64_t>(); }

/// Visits every point of P^n(F) once: grouped by the position of the leading
/// 1 (ascending), then the remaining coordinates in lexicographic order of
/// their element indices (last coordinate fastest). The callback receives
/// the normalized coordinates; returning false stops the walk.
template <typename Fn>
void for_each_projective_point(const Field& F, int n, Fn&& fn) {
  if (n < 0) return;
  const std::uint64_t q = F.order();
  std::vector<Elem> x(static_cast<std::size_t>(n) + 1);
  for (int lead = 0; lead <= n; ++lead) {
    std::fill(x.begin(), x.end(), F.zero());
    x[lead] = F.one();
    for (;;) {
      if constexpr (std::is_same_v<decltype(fn(std::span<const Elem>(x))), bool>) {
        if (!fn(std::span<const Elem>(x))) return;
      } else {
        fn(std::span<const Elem>(x));
      }
      int j = n;
      while (j > lead) {
        if (++x[j].v < q) break;
        x[j].v = 0;
        --j;
      }
      if (j == lead) break;
    }
  }
}

inline std::vector<ProjectivePoint> enumerate_projective_points(const Field& F, int n) {
  std::vector<ProjectivePoint> out;
  for_each_projective_point(F, n, [&](std::span<const Elem> x) { out.push_back(ProjectivePoint{{x.begin(), x.end()}}); });
  return out;
}

// ---------------------------------------------------------------------------
// Subspaces

/// A projective linear subspace of P^n of codimension k (0 <= k <= n), held
/// as its canonical RREF equation matrix.
class LinearSubspace {
 public:
  LinearSubspace() = default;

  /// Canonicalizes an arbitrary system of equations (rows) in n+1 variables.
  static LinearSubspace from_equations(const Field& F, int n, Matrix eqs) {
    if (eqs.cols != static_cast<std::size_t>(n) + 1) throw PreconditionError("equation matrix has wrong width");
    const auto res = rref_in_place(F, eqs);
    if (res.rank > static_cast<std::size_t>(n)) throw PreconditionError("equations cut out the empty set");
    eqs.data.resize(res.rank * eqs.cols);
    eqs.rows = res.rank;
    LinearSubspace out;
    out.n_ = n;
    out.k_ = static_cast<int>(res.rank);
    out.eqs_ = std::move(eqs);
    return out;
  }

  /// The subspace spanned by the given (nonzero) vectors.
  static LinearSubspace from_spanning_rows(const Field& F, int n, const Matrix& rows) {
    if (rows.cols != static_cast<std::size_t>(n) + 1) throw PreconditionError("basis matrix has wrong width");
    if (matrix_rank(F, rows) == 0) throw PreconditionError("empty span");
    Matrix eqs = null_space(F, rows);
    if (eqs.rows == 0) eqs.cols = static_cast<std::size_t>(n) + 1;
    return from_equations(F, n, std::move(eqs));
  }

  static LinearSubspace from_point(const Field& F, const ProjectivePoint& x) {
    Matrix m(0, x.coords.size());
    m.append_row(x.coords);
    return from_spanning_rows(F, static_cast<int>(x.ambient()), m);
  }

  int ambient() const { return n_; }
  int codim() const { return k_; }
  int dim() const { return n_ - k_; }
  const Matrix& equations() const { return eqs_; }

  friend bool operator==(const LinearSubspace&, const LinearSubspace&) = default;
  friend bool operator<(const LinearSubspace& a, const LinearSubspace& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    if (a.k_ != b.k_) return a.k_ < b.k_;
    return a.eqs_.data < b.eqs_.data;
  }

 private:
  int n_ = 0;
  int k_ = 0;
  Matrix eqs_;
};

/// x in H iff every equation of H vanishes at x.
inline bool contains(const Field& F, const LinearSubspace& H, std::span<const Elem> x) {
  const Matrix& e = H.equations();
  for (std::size_t i = 0; i < e.rows; ++i)
    if (dot(F, e.row(i), x) != F.zero()) return false;
  return true;
}

inline bool contains(const Field& F, const LinearSubspace& H, const ProjectivePoint& x) {
  if (x.ambient() != static_cast<std::size_t>(H.ambient())) throw PreconditionError("point and subspace live in different spaces");
  return contains(F, H, std::span<const Elem>(x.coords));
}

/// Deterministic basis of the vector space underlying H: one row per
/// non-pivot column of the equations, (n-k+1) rows of length n+1.
inline Matrix parametrize(const Field& F, const LinearSubspace& H) {
  Matrix eqs = H.equations();
  if (eqs.rows == 0) {
    Matrix id(static_cast<std::size_t>(H.ambient()) + 1, static_cast<std::size_t>(H.ambient()) + 1);
    for (std::size_t i = 0; i < id.rows; ++i) id(i, i) = F.one();
    return id;
  }
  return null_space(F, std::move(eqs));
}

/// inner is contained in outer.
inline bool contains_subspace(const Field& F, const LinearSubspace& outer, const LinearSubspace& inner) {
  if (outer.ambient() != inner.ambient()) throw PreconditionError("subspaces live in different spaces");
  const Matrix basis = parametrize(F, inner);
  for (std::size_t i = 0; i < basis.rows; ++i)
    if (!contains(F, outer, basis.row(i))) return false;
  return true;
}

/// Image of a vector t under the parametrization: sum_i t_i * basis_i.
inline std::vector<Elem> combine_rows(const Field& F, const Matrix& basis, std::span<const Elem> t) {
  std::vector<Elem> x(basis.cols, F.zero());
  for (std::size_t i = 0; i < basis.rows; ++i) {
    if (t[i] == F.zero()) continue;
    for (std::size_t j = 0; j < basis.cols; ++j) x[j] = F.add(x[j], F.mul(t[i], basis(i, j)));
  }
  return x;
}

/// All points of H, in the order induced by enumerating P^{n-k} in the
/// intrinsic coordinates of parametrize(H).
inline std::vector<ProjectivePoint> points_of(const Field& F, const LinearSubspace& H) {
  const Matrix basis = parametrize(F, H);
  std::vector<ProjectivePoint> out;
  for_each_projective_point(F, static_cast<int>(basis.rows) - 1, [&](std::span<const Elem> t) {
    out.push_back(ProjectivePoint::from_coords(F, combine_rows(F, basis, t)));
  });
  return out;
}

/// Projective span of A and B.
inline LinearSubspace join(const Field& F, const LinearSubspace& A, const LinearSubspace& B) {
  if (A.ambient() != B.ambient()) throw PreconditionError("join of subspaces in different spaces");
  Matrix rows = parametrize(F, A);
  const Matrix b = parametrize(F, B);
  for (std::size_t i = 0; i < b.rows; ++i) rows.append_row(b.row(i));
  return LinearSubspace::from_spanning_rows(F, A.ambient(), rows);
}

inline LinearSubspace join(const Field& F, const LinearSubspace& A, const ProjectivePoint& x) {
  if (x.ambient() != static_cast<std::size_t>(A.ambient())) throw PreconditionError("join of point and subspace in different spaces");
  Matrix rows = parametrize(F, A);
  rows.append_row(x.coords);
  return LinearSubspace::from_spanning_rows(F, A.ambient(), rows);
}

/// Projective dimension of A ∩ B, -1 when the intersection is empty.
inline int intersection_dimension(const Field& F, const LinearSubspace& A, const LinearSubspace& B) {
  Matrix eqs = A.equations();
  eqs.cols = static_cast<std::size_t>(A.ambient()) + 1;
  const Matrix& b = B.equations();
  for (std::size_t i = 0; i < b.rows; ++i) eqs.append_row(b.row(i));
  return A.ambient() - static_cast<int>(matrix_rank(F, eqs));
}

// ---------------------------------------------------------------------------
// Grassmannian

/// V = G(n-k, n): codimension-k subspaces of P^n over a field.
struct GrassmannianSpec {
  int n = 0;
  int k = 0;
  Field field;

  GrassmannianSpec(int n_, int k_, Field f) : n(n_), k(k_), field(std::move(f)) {
    if (k < 1 || k > n) throw PreconditionError("Grassmannian needs 1 <= k <= n");
  }
};

/// q-binomial coefficient [a choose b]_q.
inline BigInt gaussian_binomial(int a, int b, std::uint64_t q) {
  if (b < 0 || b > a) throw PreconditionError("gaussian_binomial needs 0 <= b <= a");
  BigInt num = 1, den = 1;
  const BigInt Q = q;
  for (int i = 0; i < b; ++i) {
    num *= ipow(Q, static_cast<unsigned>(a - i)) - 1;
    den *= ipow(Q, static_cast<unsigned>(i + 1)) - 1;
  }
  return num / den;
}

/// dim G(n-k, n) = (n-k+1) k.
inline int grassmannian_dimension(int n, int k) {
  if (k < 1 || k > n) throw PreconditionError("grassmannian_dimension needs 1 <= k <= n");
  return (n - k + 1) * k;
}

/// Visits every codimension-k subspace exactly once as its RREF matrix.
/// Order: pivot column sets in lexicographic order, then the free entries
/// (row-major, entries right of each pivot in non-pivot columns) as an
/// odometer with the last entry fastest.
template <typename Fn>
void for_each_subspace(const GrassmannianSpec& g, Fn&& fn) {
  const Field& F = g.field;
  const std::size_t cols = static_cast<std::size_t>(g.n) + 1;
  const std::size_t k = static_cast<std::size_t>(g.k);
  std::vector<std::size_t> piv(k);
  for (std::size_t i = 0; i < k; ++i) piv[i] = i;
  for (;;) {
    std::vector<bool> is_piv(cols, false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<std::pair<std::size_t, std::size_t>> free;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = piv[i] + 1; j < cols; ++j)
        if (!is_piv[j]) free.emplace_back(i, j);
    Matrix m(k, cols);
    for (std::size_t i = 0; i < k; ++i) m(i, piv[i]) = F.one();
    for (;;) {
      fn(LinearSubspace::from_equations(F, g.n, m));
      std::size_t pos = free.size();
      bool carried_out = true;
      while (pos-- > 0) {
        auto& e = m(free[pos].first, free[pos].second);
        if (++e.v < F.order()) {
          carried_out = false;
          break;
        }
        e.v = 0;
      }
      if (carried_out) break;
    }
    // next k-combination of {0..n}
    std::size_t i = k;
    while (i-- > 0) {
      if (piv[i] < cols - k + i) break;
      if (i == 0) return;
    }
    if (piv[i] >= cols - k + i) return;
    ++piv[i];
    for (std::size_t j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
  }
}

inline std::vector<LinearSubspace> enumerate_subspaces(const GrassmannianSpec& g) {
  std::vector<LinearSubspace> out;
  for_each_subspace(g, [&](LinearSubspace H) { out.push_back(std::move(H)); });
  return out;
}

/// Number of subspaces in V containing every given point (one point or two
/// distinct points), by enumeration.
inline std::uint64_t count_through_points(const GrassmannianSpec& g, std::span<const ProjectivePoint> points) {
  if (points.empty() || points.size() > 2) throw PreconditionError("count_through_points takes one or two points");
  for (const auto& x : points)
    if (x.ambient() != static_cast<std::size_t>(g.n)) throw PreconditionError("point outside P^n");
  if (points.size() == 2 && points[0] == points[1]) throw PreconditionError("count_through_points needs distinct points");
  std::uint64_t count = 0;
  for_each_subspace(g, [&](const LinearSubspace& H) {
    bool all = true;
    for (const auto& x : points) all = all && contains(g.field, H, x);
    if (all) ++count;
  });
  return count;
}

/// Uniform codimension-k subspace: uniform k x (n+1) matrices, redrawn until
/// the rank is k, then canonicalized.
inline LinearSubspace random_subspace(const GrassmannianSpec& g, Rng& rng) {
  const Field& F = g.field;
  const std::size_t cols = static_cast<std::size_t>(g.n) + 1;
  for (;;) {
    Matrix m(static_cast<std::size_t>(g.k), cols);
    for (auto& e : m.data) e = Elem{uniform_below(rng, F.order())};
    if (matrix_rank(F, m) == static_cast<std::size_t>(g.k)) return LinearSubspace::from_equations(F, g.n, std::move(m));
  }
}

inline LinearSubspace random_subspace(const GrassmannianSpec& g, std::uint64_t seed) {
  Rng rng(seed);
  return random_subspace(g, rng);
}

}  // namespace slicelab
