#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mcov/error.hpp"

namespace mcov {

inline constexpr int kMaxFieldOrder = 16;

/// GF(p^k). `modulus` lists c_0..c_k of the monic reducing polynomial
/// (c_k == 1) and is empty for prime fields.
struct FieldSpec {
  int p = 2;
  int k = 1;
  int q = 2;
  std::vector<int> modulus;

  bool operator==(const FieldSpec&) const = default;
};

/// An element of GF(q), encoded as sum c_i p^i of its polynomial coefficients.
struct FieldElement {
  int value = 0;
  bool operator==(const FieldElement&) const = default;
};

namespace detail {

inline bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline int ipow(int b, int e) {
  int r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Coefficient vectors over GF(p), lowest degree first.
using Poly = std::vector<int>;

inline Poly poly_from_code(int code, int p, int len) {
  Poly c(len);
  for (int i = 0; i < len; ++i) { c[i] = code % p; code /= p; }
  return c;
}

// Remainder of a modulo monic m over GF(p).
inline Poly poly_mod(Poly a, const Poly& m, int p) {
  const int dm = static_cast<int>(m.size()) - 1;
  for (int i = static_cast<int>(a.size()) - 1; i >= dm; --i) {
    const int coef = a[i] % p;
    if (coef == 0) continue;
    for (int j = 0; j <= dm; ++j)
      a[i - dm + j] = ((a[i - dm + j] - coef * m[j]) % p + p) % p;
  }
  a.resize(dm);
  return a;
}

// Monic polynomial of degree k over GF(p) is irreducible iff no monic
// polynomial of degree 1..k/2 divides it.
inline bool is_irreducible(const Poly& m, int p) {
  const int k = static_cast<int>(m.size()) - 1;
  for (int deg = 1; deg <= k / 2; ++deg) {
    const int count = ipow(p, deg);
    for (int code = 0; code < count; ++code) {
      Poly div = poly_from_code(code, p, deg);
      div.push_back(1);
      Poly r = poly_mod(m, div, p);
      bool zero = true;
      for (int c : r) zero = zero && c == 0;
      if (zero) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Builds the spec for GF(p^k), choosing the least monic irreducible modulus
/// under the order that compares coefficients from the highest degree down
/// (equivalently, the least code sum c_i p^i over the non-leading terms).
inline FieldSpec field_make(int p, int k) {
  if (k < 1) throw Error(Errc::InvalidDegree, "extension degree must be >= 1");
  if (!detail::is_prime(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
  long long q = 1;
  for (int i = 0; i < k; ++i) {
    q *= p;
    if (q > kMaxFieldOrder)
      throw Error(Errc::FieldTooLarge, "field order exceeds " + std::to_string(kMaxFieldOrder));
  }
  FieldSpec spec{p, k, static_cast<int>(q), {}};
  if (k == 1) return spec;
  const int count = detail::ipow(p, k);
  for (int code = 0; code < count; ++code) {
    detail::Poly m = detail::poly_from_code(code, p, k);
    m.push_back(1);
    if (detail::is_irreducible(m, p)) {
      spec.modulus = m;
      return spec;
    }
  }
  throw Error(Errc::InvalidDegree, "no irreducible polynomial found");
}

/// Spec for the field of order q (q a prime power <= 16).
inline FieldSpec field_for_order(int q) {
  for (int p = 2; p <= q; ++p) {
    if (!detail::is_prime(p)) continue;
    int k = 0;
    long long v = 1;
    while (v < q) { v *= p; ++k; }
    if (v == q) return field_make(p, k);
    if (q % p == 0) break;
  }
  throw Error(Errc::NotPrime, std::to_string(q) + " is not a prime power");
}

/// Table-driven arithmetic for one FieldSpec. Immutable once built.
class GaloisField {
 public:
  explicit GaloisField(FieldSpec spec) : spec_(std::move(spec)) {
    const int q = spec_.q;
    add_.resize(q * q);
    mul_.resize(q * q);
    neg_.resize(q);
    inv_.assign(q, 0);
    for (int a = 0; a < q; ++a) {
      const detail::Poly pa = detail::poly_from_code(a, spec_.p, spec_.k);
      for (int b = 0; b < q; ++b) {
        const detail::Poly pb = detail::poly_from_code(b, spec_.p, spec_.k);
        detail::Poly sum(spec_.k);
        for (int i = 0; i < spec_.k; ++i) sum[i] = (pa[i] + pb[i]) % spec_.p;
        add_[a * q + b] = static_cast<std::uint8_t>(encode(sum));
        detail::Poly prod(2 * spec_.k - 1, 0);
        for (int i = 0; i < spec_.k; ++i)
          for (int j = 0; j < spec_.k; ++j)
            prod[i + j] = (prod[i + j] + pa[i] * pb[j]) % spec_.p;
        if (spec_.k > 1) prod = detail::poly_mod(prod, spec_.modulus, spec_.p);
        mul_[a * q + b] = static_cast<std::uint8_t>(encode(prod));
      }
    }
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) {
        if (add_[a * q + b] == 0) neg_[a] = static_cast<std::uint8_t>(b);
        if (mul_[a * q + b] == 1) inv_[a] = static_cast<std::uint8_t>(b);
      }
  }

  static std::shared_ptr<const GaloisField> make(int q) {
    return std::make_shared<const GaloisField>(field_for_order(q));
  }

  const FieldSpec& spec() const { return spec_; }
  int order() const { return spec_.q; }
  int characteristic() const { return spec_.p; }

  int add(int a, int b) const { return add_[a * spec_.q + b]; }
  int sub(int a, int b) const { return add_[a * spec_.q + neg_[b]]; }
  int mul(int a, int b) const { return mul_[a * spec_.q + b]; }
  int neg(int a) const { return neg_[a]; }
  int inv(int a) const {
    if (a == 0) throw Error(Errc::DivisionByZero, "inverse of zero");
    return inv_[a];
  }

  FieldElement add(FieldElement a, FieldElement b) const { return {add(a.value, b.value)}; }
  FieldElement mul(FieldElement a, FieldElement b) const { return {mul(a.value, b.value)}; }
  FieldElement neg(FieldElement a) const { return {neg(a.value)}; }
  FieldElement inv(FieldElement a) const { return {inv(a.value)}; }

 private:
  int encode(const detail::Poly& c) const {
    int v = 0;
    for (int i = spec_.k - 1; i >= 0; --i) v = v * spec_.p + c[i];
    return v;
  }

  FieldSpec spec_;
  std::vector<std::uint8_t> add_, mul_, neg_, inv_;
};

}  // namespace mcov
