#pragma once

// Finite fields GF(p^m) built directly over GF(p).
//
// Elements are plain values holding the base-p integer of their coefficient
// vector (coefficient of t^0 is the least significant digit), so GF(4) reads
// 0, 1, t, t+1 as 0, 1, 2, 3 and the prime subfield is exactly [0, p).
// All arithmetic goes through the owning Field object.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <ranges>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace slicelab {

struct Elem {
  std::uint64_t v = 0;

  friend constexpr auto operator<=>(const Elem&, const Elem&) = default;
};

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) { return powmod(a, p - 2, p); }

// Dense polynomials over GF(p), coefficients low-to-high, no trailing zeros
// (the zero polynomial is empty).
using Dense = std::vector<std::uint64_t>;

inline void trim(Dense& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Dense poly_mod(Dense a, const Dense& f, std::uint64_t p) {
  trim(a);
  const std::size_t df = f.size() - 1;
  const std::uint64_t lead_inv = invmod(f.back(), p);
  while (a.size() > df) {
    const std::uint64_t c = mulmod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - 1 - df;
    for (std::size_t i = 0; i <= df; ++i) a[shift + i] = (a[shift + i] + p - mulmod(c, f[i], p)) % p;
    trim(a);
  }
  return a;
}

inline Dense poly_mulmod(const Dense& a, const Dense& b, const Dense& f, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Dense prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + mulmod(a[i], b[j], p)) % p;
  return poly_mod(std::move(prod), f, p);
}

inline Dense poly_powmod(Dense base, std::uint64_t e, const Dense& f, std::uint64_t p) {
  Dense r{1};
  r = poly_mod(r, f, p);
  base = poly_mod(base, f, p);
  while (e) {
    if (e & 1) r = poly_mulmod(r, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

inline Dense poly_gcd(Dense a, Dense b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Dense r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// f (monic, degree m) is irreducible over GF(p) iff it has no factor of
/// degree d <= m/2, i.e. gcd(f, x^{p^d} - x) = 1 for every such d. Small
/// degrees use the root test alone.
inline bool is_irreducible(const Dense& f, std::uint64_t p) {
  const std::size_t m = f.size() - 1;
  if (m == 1) return true;
  if (m <= 3) {
    for (std::uint64_t x = 0; x < p; ++x) {
      std::uint64_t acc = 0;
      for (std::size_t i = f.size(); i-- > 0;) acc = (mulmod(acc, x, p) + f[i]) % p;
      if (acc == 0) return false;
    }
    return true;
  }
  Dense xpow{0, 1};
  for (std::size_t d = 1; d <= m / 2; ++d) {
    xpow = poly_powmod(xpow, p, f, p);
    Dense h = xpow;
    h.resize(std::max<std::size_t>(h.size(), 2), 0);
    h[1] = (h[1] + p - 1) % p;
    trim(h);
    if (h.empty()) return false;
    if (poly_gcd(f, h, p).size() > 1) return false;
  }
  return true;
}

}  // namespace detail

/// GF(p^m) with a fixed monic irreducible modulus. Cheap to copy; the
/// lookup tables of an extension field are shared between copies.
class Field {
 public:
  /// Largest extension-field order supported by the table arithmetic.
  static constexpr std::uint64_t kMaxExtensionOrder = std::uint64_t{1} << 22;

  /// Builds GF(p)[t]/(modulus); modulus is low-to-high and must be monic and
  /// irreducible of degree >= 1.
  Field(std::uint64_t p, std::vector<std::uint64_t> modulus) : p_(p), modulus_(std::move(modulus)) {
    if (p > (std::uint64_t{1} << 31)) throw PreconditionError("characteristic must be at most 2^31");
    if (!detail::is_prime(p)) throw PreconditionError("characteristic " + std::to_string(p) + " is not prime");
    if (modulus_.size() < 2) throw PreconditionError("modulus must have degree >= 1");
    for (auto c : modulus_)
      if (c >= p) throw PreconditionError("modulus coefficient out of range");
    if (modulus_.back() != 1) throw PreconditionError("modulus must be monic");
    if (!detail::is_irreducible(modulus_, p)) throw PreconditionError("modulus is reducible over GF(p)");
    m_ = static_cast<unsigned>(modulus_.size() - 1);
    q_ = 1;
    for (unsigned i = 0; i < m_; ++i) {
      if (q_ > kMaxExtensionOrder) break;
      q_ *= p_;
    }
    if (m_ > 1) {
      if (q_ > kMaxExtensionOrder)
        throw PreconditionError("extension field " + std::to_string(p) + "^" + std::to_string(m_) + " is too large");
      tables_ = build_tables();
    }
  }

  /// GF(p^m) with the lexicographically smallest monic irreducible modulus,
  /// comparing coefficient lists from the constant term upwards.
  static Field make(std::uint64_t p, unsigned m) {
    if (m == 0) throw PreconditionError("extension degree must be >= 1");
    if (!detail::is_prime(p)) throw PreconditionError("characteristic " + std::to_string(p) + " is not prime");
    std::vector<std::uint64_t> lower(m, 0);  // lower[0] is the most significant digit of the search order
    for (;;) {
      detail::Dense f(lower);
      f.push_back(1);
      if (detail::is_irreducible(f, p)) return Field(p, std::move(f));
      std::size_t i = m;
      while (i-- > 0) {
        if (++lower[i] < p) break;
        lower[i] = 0;
        if (i == 0) throw PreconditionError("no irreducible polynomial found");
      }
    }
  }

  /// Parses "p^m" or a prime power "q".
  static Field parse(std::string_view name) {
    auto to_u64 = [&](std::string_view s) {
      if (s.empty()) throw ParseError("bad field name '" + std::string(name) + "'");
      std::uint64_t v = 0;
      for (char c : s) {
        if (c < '0' || c > '9') throw ParseError("bad field name '" + std::string(name) + "'");
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
        if (v > (std::uint64_t{1} << 40)) throw ParseError("field name out of range: " + std::string(name));
      }
      return v;
    };
    const auto caret = name.find('^');
    if (caret == std::string_view::npos) {
      // a bare prime power q is read as p^m
      const std::uint64_t q = to_u64(name);
      const auto factors = q >= 2 ? detail::prime_factors(q) : std::vector<std::uint64_t>{};
      if (factors.size() != 1) throw PreconditionError("field order " + std::string(name) + " is not a prime power");
      unsigned m = 0;
      for (std::uint64_t r = q; r > 1; r /= factors[0]) ++m;
      return make(factors[0], m);
    }
    return make(to_u64(name.substr(0, caret)), static_cast<unsigned>(to_u64(name.substr(caret + 1))));
  }

  std::uint64_t characteristic() const { return p_; }
  unsigned degree() const { return m_; }
  std::uint64_t order() const { return q_; }
  const std::vector<std::uint64_t>& modulus() const { return modulus_; }
  bool is_prime_field() const { return m_ == 1; }

  /// "p^m", e.g. "3^2".
  std::string name() const { return m_ == 1 ? std::to_string(p_) : std::to_string(p_) + "^" + std::to_string(m_); }

  friend bool operator==(const Field& a, const Field& b) { return a.p_ == b.p_ && a.modulus_ == b.modulus_; }

  Elem zero() const { return Elem{0}; }
  Elem one() const { return Elem{1}; }

  /// Image of an integer in the prime subfield.
  Elem from_int(std::int64_t c) const {
    const auto p = static_cast<std::int64_t>(p_);
    return Elem{static_cast<std::uint64_t>(((c % p) + p) % p)};
  }

  /// Element with the given coefficient vector (low-to-high, length <= m).
  Elem from_coeffs(const std::vector<std::uint64_t>& coeffs) const {
    if (coeffs.size() > m_) throw PreconditionError("coefficient vector longer than extension degree");
    std::uint64_t v = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
      if (coeffs[i] >= p_) throw PreconditionError("coefficient out of range");
      v = v * p_ + coeffs[i];
    }
    return Elem{v};
  }

  std::vector<std::uint64_t> coeffs(Elem a) const {
    std::vector<std::uint64_t> out(m_, 0);
    for (unsigned i = 0; i < m_; ++i) {
      out[i] = a.v % p_;
      a.v /= p_;
    }
    return out;
  }

  bool in_prime_subfield(Elem a) const { return a.v < p_; }

  /// Element number i in the enumeration order (zero first).
  Elem element(std::uint64_t i) const { return Elem{i}; }

  /// All q elements in base-p coefficient order, zero first.
  auto elements() const {
    return std::views::iota(std::uint64_t{0}, q_) | std::views::transform([](std::uint64_t v) { return Elem{v}; });
  }

  Elem add(Elem a, Elem b) const {
    if (m_ == 1) {
      const std::uint64_t s = a.v + b.v;
      return Elem{s >= p_ ? s - p_ : s};
    }
    if (!tables_->add.empty()) return Elem{tables_->add[a.v * q_ + b.v]};
    return digitwise_add(a, b);
  }

  Elem neg(Elem a) const {
    if (m_ == 1) return Elem{a.v == 0 ? 0 : p_ - a.v};
    return Elem{tables_->neg[a.v]};
  }

  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const {
    if (m_ == 1) return Elem{(a.v * b.v) % p_};
    if (a.v == 0 || b.v == 0) return zero();
    return Elem{tables_->exp[tables_->log[a.v] + tables_->log[b.v]]};
  }

  Elem inv(Elem a) const {
    if (a.v == 0) throw ArithmeticError("inverse of zero in GF(" + name() + ")");
    if (m_ == 1) return Elem{detail::invmod(a.v, p_)};
    return Elem{tables_->exp[(q_ - 1 - tables_->log[a.v]) % (q_ - 1)]};
  }

  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  Elem pow(Elem a, std::uint64_t e) const {
    if (e == 0) return one();
    if (a.v == 0) return zero();
    if (m_ == 1) return Elem{detail::powmod(a.v, e, p_)};
    const std::uint64_t l = tables_->log[a.v];
    const auto idx = static_cast<std::uint64_t>((static_cast<unsigned __int128>(l) * (e % (q_ - 1))) % (q_ - 1));
    return Elem{tables_->exp[idx]};
  }

  /// a -> a^p.
  Elem frobenius(Elem a) const { return m_ == 1 ? a : pow(a, p_); }

  /// Zero counts as a square; every element is a square in characteristic 2.
  bool is_square(Elem a) const {
    if (a.v == 0 || p_ == 2) return true;
    return pow(a, (q_ - 1) / 2) == one();
  }

  /// "3", or "2*t^1+1" style for extension elements.
  std::string to_string(Elem a) const {
    if (m_ == 1) return std::to_string(a.v);
    const auto c = coeffs(a);
    std::string out;
    for (std::size_t i = c.size(); i-- > 0;) {
      if (c[i] == 0) continue;
      if (!out.empty()) out += "+";
      if (i == 0) {
        out += std::to_string(c[i]);
      } else {
        if (c[i] != 1) out += std::to_string(c[i]) + "*";
        out += i == 1 ? std::string("t") : "t^" + std::to_string(i);
      }
    }
    return out.empty() ? "0" : out;
  }

 private:
  struct Tables {
    std::vector<std::uint32_t> exp;  // length 2(q-1)
    std::vector<std::uint32_t> log;  // log[0] unused
    std::vector<std::uint32_t> neg;
    std::vector<std::uint32_t> add;  // q*q, only for small q
  };

  static constexpr std::uint64_t kAddTableLimit = 1024;

  Elem digitwise_add(Elem a, Elem b) const {
    std::uint64_t out = 0, scale = 1;
    for (unsigned i = 0; i < m_; ++i) {
      const std::uint64_t d = (a.v % p_ + b.v % p_) % p_;
      out += d * scale;
      scale *= p_;
      a.v /= p_;
      b.v /= p_;
    }
    return Elem{out};
  }

  detail::Dense dense_of(std::uint64_t v) const {
    detail::Dense d;
    for (unsigned i = 0; i < m_; ++i) {
      d.push_back(v % p_);
      v /= p_;
    }
    detail::trim(d);
    return d;
  }

  std::uint64_t index_of(const detail::Dense& d) const {
    std::uint64_t v = 0;
    for (std::size_t i = d.size(); i-- > 0;) v = v * p_ + d[i];
    return v;
  }

  std::shared_ptr<const Tables> build_tables() const {
    auto t = std::make_shared<Tables>();
    const std::uint64_t order = q_ - 1;
    const auto factors = detail::prime_factors(order);
    std::uint64_t gen = 0;
    for (std::uint64_t cand = 2; cand < q_ && gen == 0; ++cand) {
      const detail::Dense g = dense_of(cand);
      bool primitive = true;
      for (auto l : factors) {
        const auto r = detail::poly_powmod(g, order / l, modulus_, p_);
        if (r.size() == 1 && r[0] == 1) {
          primitive = false;
          break;
        }
      }
      if (primitive) gen = cand;
    }
    if (gen == 0) throw InvariantViolation("no primitive element found in GF(" + name() + ")");
    t->exp.resize(2 * order);
    t->log.assign(q_, 0);
    detail::Dense cur{1};
    const detail::Dense g = dense_of(gen);
    for (std::uint64_t i = 0; i < order; ++i) {
      const auto idx = static_cast<std::uint32_t>(index_of(cur));
      t->exp[i] = t->exp[i + order] = idx;
      t->log[idx] = static_cast<std::uint32_t>(i);
      cur = detail::poly_mulmod(cur, g, modulus_, p_);
    }
    t->neg.resize(q_);
    for (std::uint64_t v = 0; v < q_; ++v) {
      std::uint64_t out = 0, scale = 1, x = v;
      for (unsigned i = 0; i < m_; ++i) {
        out += ((p_ - x % p_) % p_) * scale;
        scale *= p_;
        x /= p_;
      }
      t->neg[v] = static_cast<std::uint32_t>(out);
    }
    if (q_ <= kAddTableLimit) {
      t->add.resize(q_ * q_);
      for (std::uint64_t a = 0; a < q_; ++a)
        for (std::uint64_t b = 0; b < q_; ++b) t->add[a * q_ + b] = static_cast<std::uint32_t>(digitwise_add(Elem{a}, Elem{b}).v);
    }
    return t;
  }

  std::uint64_t p_ = 2;
  unsigned m_ = 1;
  std::uint64_t q_ = 2;
  std::vector<std::uint64_t> modulus_;
  std::shared_ptr<const Tables> tables_;
};

inline Field make_field(std::uint64_t p, unsigned m) { return Field::make(p, m); }

}  // namespace slicelab
