#pragma once

// Sparse homogeneous polynomials over a finite field.

#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "ff.hpp"
#include "geometry.hpp"

namespace slicelab {

using Monomial = std::vector<unsigned>;

/// Graded lexicographic order, largest first: x0^2 > x0*x1 > x1^2 > ...
struct GradedLexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const unsigned da = std::accumulate(a.begin(), a.end(), 0u);
    const unsigned db = std::accumulate(b.begin(), b.end(), 0u);
    if (da != db) return da > db;
    return a > b;
  }
};

/// Homogeneous polynomial of a fixed degree. Only nonzero coefficients are
/// stored; the zero polynomial keeps its nominal degree so that a vanishing
/// restriction is recognizable.
class Polynomial {
 public:
  using Terms = std::map<Monomial, Elem, GradedLexGreater>;

  Polynomial(std::size_t nvars, unsigned degree) : nvars_(nvars), degree_(degree) {
    if (nvars == 0) throw PreconditionError("polynomial needs at least one variable");
  }

  std::size_t nvars() const { return nvars_; }
  unsigned degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  const Terms& terms() const { return terms_; }

  Elem coefficient(const Monomial& mono) const {
    auto it = terms_.find(mono);
    return it == terms_.end() ? Elem{0} : it->second;
  }

  /// Adds c * mono to the polynomial.
  void add_term(const Field& F, const Monomial& mono, Elem c) {
    if (mono.size() != nvars_) throw PreconditionError("monomial has wrong number of variables");
    if (std::accumulate(mono.begin(), mono.end(), 0u) != degree_) throw PreconditionError("monomial degree differs from polynomial degree");
    if (c == F.zero()) return;
    auto [it, inserted] = terms_.try_emplace(mono, c);
    if (!inserted) {
      it->second = F.add(it->second, c);
      if (it->second == F.zero()) terms_.erase(it);
    }
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::size_t nvars_;
  unsigned degree_;
  Terms terms_;
};

inline Monomial unit_monomial(std::size_t nvars, std::size_t var) {
  Monomial m(nvars, 0);
  m[var] = 1;
  return m;
}

inline Elem evaluate(const Field& F, const Polynomial& f, std::span<const Elem> x) {
  if (x.size() != f.nvars()) throw PreconditionError("evaluation point has wrong length");
  Elem acc = F.zero();
  for (const auto& [mono, c] : f.terms()) {
    Elem term = c;
    for (std::size_t j = 0; j < mono.size() && term != F.zero(); ++j)
      for (unsigned e = 0; e < mono[j]; ++e) term = F.mul(term, x[j]);
    acc = F.add(acc, term);
  }
  return acc;
}

inline Elem evaluate(const Field& F, const Polynomial& f, const ProjectivePoint& x) {
  return evaluate(F, f, std::span<const Elem>(x.coords));
}

inline Polynomial add(const Field& F, const Polynomial& f, const Polynomial& g) {
  if (f.nvars() != g.nvars() || f.degree() != g.degree()) throw PreconditionError("adding polynomials of different shape");
  Polynomial out = f;
  for (const auto& [mono, c] : g.terms()) out.add_term(F, mono, c);
  return out;
}

inline Polynomial scale(const Field& F, const Polynomial& f, Elem c) {
  Polynomial out(f.nvars(), f.degree());
  for (const auto& [mono, a] : f.terms()) out.add_term(F, mono, F.mul(a, c));
  return out;
}

inline Polynomial multiply(const Field& F, const Polynomial& f, const Polynomial& g) {
  if (f.nvars() != g.nvars()) throw PreconditionError("multiplying polynomials in different rings");
  Polynomial out(f.nvars(), f.degree() + g.degree());
  Monomial prod(f.nvars());
  for (const auto& [ma, a] : f.terms())
    for (const auto& [mb, b] : g.terms()) {
      for (std::size_t j = 0; j < prod.size(); ++j) prod[j] = ma[j] + mb[j];
      out.add_term(F, prod, F.mul(a, b));
    }
  return out;
}

/// The constant polynomial c (degree 0).
inline Polynomial constant(const Field& F, std::size_t nvars, Elem c) {
  Polynomial out(nvars, 0);
  out.add_term(F, Monomial(nvars, 0), c);
  return out;
}

/// g(t_0..t_s) = f(sum_i t_i * basis_i) for an (s+1) x nvars(f) basis.
inline Polynomial substitute_linear(const Field& F, const Polynomial& f, const Matrix& basis) {
  if (basis.cols != f.nvars()) throw PreconditionError("substitution basis has wrong width");
  const std::size_t s1 = basis.rows;
  std::vector<Polynomial> images;
  images.reserve(f.nvars());
  for (std::size_t j = 0; j < f.nvars(); ++j) {
    Polynomial lin(s1, 1);
    for (std::size_t i = 0; i < s1; ++i) lin.add_term(F, unit_monomial(s1, i), basis(i, j));
    images.push_back(std::move(lin));
  }
  Polynomial out(s1, f.degree());
  for (const auto& [mono, c] : f.terms()) {
    Polynomial term = constant(F, s1, c);
    for (std::size_t j = 0; j < mono.size(); ++j)
      for (unsigned e = 0; e < mono[j]; ++e) term = multiply(F, term, images[j]);
    for (const auto& [m, a] : term.terms()) out.add_term(F, m, a);
  }
  return out;
}

/// Change of variables x = A y for a square matrix A: g(y) = f(A y).
inline Polynomial change_variables(const Field& F, const Polynomial& f, const Matrix& A) {
  if (A.rows != f.nvars() || A.cols != f.nvars()) throw PreconditionError("change of variables needs a square matrix");
  Matrix basis(A.cols, A.rows);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j) basis(j, i) = A(i, j);
  return substitute_linear(F, f, basis);
}

// ---------------------------------------------------------------------------
// Quadratic forms (odd characteristic)

enum class SquareClass { Zero, Square, Nonsquare };

inline std::string to_string(SquareClass c) {
  switch (c) {
    case SquareClass::Zero: return "zero";
    case SquareClass::Square: return "square";
    case SquareClass::Nonsquare: return "nonsquare";
  }
  return "?";
}

struct QuadraticFormInfo {
  Matrix gram;
  std::size_t rank = 0;
  /// Square class of the product of the nonzero diagonal entries after
  /// symmetric diagonalization (the determinant of a maximal nondegenerate
  /// block); Zero only for the zero form.
  SquareClass disc_class = SquareClass::Zero;
  /// The nonzero diagonal entries, in elimination order.
  std::vector<Elem> diagonal;
};

inline Matrix gram_matrix(const Field& F, const Polynomial& f) {
  if (F.characteristic() == 2) throw PreconditionError("quadratic form analysis needs odd characteristic");
  if (f.degree() != 2) throw PreconditionError("quadratic form analysis needs a degree-2 polynomial");
  const std::size_t n = f.nvars();
  Matrix g(n, n);
  const Elem half = F.inv(F.from_int(2));
  for (const auto& [mono, c] : f.terms()) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < n; ++j)
      for (unsigned e = 0; e < mono[j]; ++e) idx.push_back(j);
    if (idx[0] == idx[1]) {
      g(idx[0], idx[0]) = c;
    } else {
      g(idx[0], idx[1]) = g(idx[1], idx[0]) = F.mul(c, half);
    }
  }
  return g;
}

/// Diagonalizes a symmetric matrix by congruence, returning the nonzero
/// diagonal entries. Odd characteristic only.
inline std::vector<Elem> symmetric_diagonal(const Field& F, Matrix a) {
  const std::size_t n = a.rows;
  std::vector<Elem> diag;
  auto add_to = [&](std::size_t dst, std::size_t src, Elem c) {
    // e_dst <- e_dst + c e_src, applied as a congruence
    for (std::size_t j = 0; j < n; ++j) a(dst, j) = F.add(a(dst, j), F.mul(c, a(src, j)));
    for (std::size_t i = 0; i < n; ++i) a(i, dst) = F.add(a(i, dst), F.mul(c, a(i, src)));
  };
  auto swap_idx = [&](std::size_t x, std::size_t y) {
    if (x == y) return;
    for (std::size_t j = 0; j < n; ++j) std::swap(a(x, j), a(y, j));
    for (std::size_t i = 0; i < n; ++i) std::swap(a(i, x), a(i, y));
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t piv = i;
    while (piv < n && a(piv, piv) == F.zero()) ++piv;
    if (piv == n) {
      // No diagonal pivot left: use an off-diagonal entry a(x, y) != 0,
      // e_x + e_y then has value 2 a(x, y) != 0.
      bool found = false;
      for (std::size_t x = i; x < n && !found; ++x)
        for (std::size_t y = x + 1; y < n && !found; ++y)
          if (a(x, y) != F.zero()) {
            add_to(x, y, F.one());
            piv = x;
            found = true;
          }
      if (!found) break;
    }
    swap_idx(i, piv);
    const Elem d = a(i, i);
    const Elem dinv = F.inv(d);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (a(j, i) == F.zero()) continue;
      add_to(j, i, F.neg(F.mul(a(j, i), dinv)));
    }
    diag.push_back(d);
  }
  return diag;
}

inline QuadraticFormInfo quadratic_form_info(const Field& F, const Polynomial& f) {
  QuadraticFormInfo info;
  info.gram = gram_matrix(F, f);
  info.rank = matrix_rank(F, info.gram);
  info.diagonal = symmetric_diagonal(F, info.gram);
  if (info.diagonal.size() != info.rank) throw InvariantViolation("diagonalization disagrees with Gram rank");
  if (info.rank == 0) {
    info.disc_class = SquareClass::Zero;
  } else {
    Elem det = F.one();
    for (auto d : info.diagonal) det = F.mul(det, d);
    info.disc_class = F.is_square(det) ? SquareClass::Square : SquareClass::Nonsquare;
  }
  return info;
}

// ---------------------------------------------------------------------------
// Text format: terms "c*x0^a0*...*xn^an" joined by "+". Coefficients are
// integers (reduced mod p); a missing coefficient means 1, "-" negates.

inline Polynomial parse_polynomial(std::string_view text, const Field& F, std::size_t nvars) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ParseError("empty polynomial");
  auto fail = [&](const std::string& why) -> ParseError { return ParseError("cannot parse polynomial '" + std::string(text) + "': " + why); };

  struct Term {
    std::int64_t coeff;
    Monomial mono;
  };
  std::vector<Term> terms;
  std::size_t pos = 0;
  while (pos < s.size()) {
    bool negative = false;
    while (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      if (s[pos] == '-') negative = !negative;
      ++pos;
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    const std::string term = s.substr(pos, end - pos);
    if (term.empty()) throw fail("empty term");
    pos = end;

    std::int64_t coeff = 1;
    Monomial mono(nvars, 0);
    std::size_t fpos = 0;
    while (fpos <= term.size()) {
      std::size_t fend = term.find('*', fpos);
      if (fend == std::string::npos) fend = term.size();
      const std::string factor = term.substr(fpos, fend - fpos);
      if (factor.empty()) throw fail("empty factor");
      if (factor[0] == 'x') {
        const auto caret = factor.find('^');
        const std::string var = factor.substr(1, caret == std::string::npos ? std::string::npos : caret - 1);
        if (var.empty() || var.find_first_not_of("0123456789") != std::string::npos) throw fail("bad variable '" + factor + "'");
        const std::uint64_t idx = parse_u64(var, "variable index");
        if (idx >= nvars) throw fail("variable x" + var + " out of range");
        unsigned e = 1;
        if (caret != std::string::npos) {
          const std::string es = factor.substr(caret + 1);
          if (es.empty() || es.find_first_not_of("0123456789") != std::string::npos) throw fail("bad exponent in '" + factor + "'");
          const std::uint64_t ev = parse_u64(es, "exponent");
          if (ev > 255) throw fail("exponent too large");
          e = static_cast<unsigned>(ev);
        }
        mono[idx] += e;
      } else {
        if (factor.find_first_not_of("0123456789") != std::string::npos) throw fail("bad coefficient '" + factor + "'");
        coeff = static_cast<std::int64_t>((static_cast<unsigned __int128>(static_cast<std::uint64_t>(coeff)) * parse_u64(factor, "coefficient")) % F.characteristic());
      }
      fpos = fend + 1;
    }
    terms.push_back({negative ? -coeff : coeff, std::move(mono)});
  }

  // "0" alone is the zero polynomial, given nominal degree 1
  const unsigned degree = std::accumulate(terms[0].mono.begin(), terms[0].mono.end(), 0u);
  bool all_constant_zero = true;
  for (const auto& t : terms) all_constant_zero = all_constant_zero && degree == 0 && F.from_int(t.coeff) == F.zero();
  if (all_constant_zero && degree == 0) return Polynomial(nvars, 1);
  if (degree == 0) throw fail("nonzero constant");
  Polynomial out(nvars, degree);
  for (const auto& t : terms) {
    if (std::accumulate(t.mono.begin(), t.mono.end(), 0u) != degree) throw fail("polynomial is not homogeneous");
    out.add_term(F, t.mono, F.from_int(t.coeff));
  }
  return out;
}

/// Canonical text: graded-lex term order, coefficients in [0, p), only
/// variables with nonzero exponent. Prime-field coefficients only.
inline std::string to_string(const Field& F, const Polynomial& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (const auto& [mono, c] : f.terms()) {
    if (!F.in_prime_subfield(c)) throw PreconditionError("text format holds prime-field coefficients only");
    if (!out.empty()) out += "+";
    out += std::to_string(c.v);
    for (std::size_t j = 0; j < mono.size(); ++j)
      if (mono[j] > 0) out += "*x" + std::to_string(j) + "^" + std::to_string(mono[j]);
  }
  return out;
}

}  // namespace slicelab
