#ifndef RANKDEC_GF_HPP
#define RANKDEC_GF_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rng.hpp"

#if defined(__PCLMUL__)
#include <immintrin.h>
#endif

namespace rankdec {

using digit_t = std::uint32_t;
using DigitVec = std::vector<digit_t>;

inline bool is_prime_u32(std::uint32_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Scalar arithmetic mod a prime q (q fits in 32 bits; products use 64 bits).
// ---------------------------------------------------------------------------
struct PrimeField {
  std::uint32_t q;

  explicit PrimeField(std::uint32_t q_) : q(q_) {
    if (!is_prime_u32(q_)) throw std::invalid_argument("base field order must be prime, got " + std::to_string(q_));
  }
  digit_t add(digit_t a, digit_t b) const { digit_t s = a + b; return s >= q ? s - q : s; }
  digit_t sub(digit_t a, digit_t b) const { return a >= b ? a - b : a + q - b; }
  digit_t neg(digit_t a) const { return a ? q - a : 0; }
  digit_t mul(digit_t a, digit_t b) const { return static_cast<digit_t>((std::uint64_t)a * b % q); }
  digit_t inv(digit_t a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    // Fermat: a^(q-2)
    std::uint64_t r = 1, base = a, e = q - 2;
    while (e) {
      if (e & 1) r = r * base % q;
      base = base * base % q;
      e >>= 1;
    }
    return static_cast<digit_t>(r);
  }
};

// ---------------------------------------------------------------------------
// Dense polynomials over F_q, coefficients least-significant first.
// Only what the modulus machinery and the generic tower need.
// ---------------------------------------------------------------------------
namespace fqpoly {

inline int degree(const DigitVec& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    if (p[i]) return i;
  return -1;
}

inline void trim(DigitVec& p) { p.resize(static_cast<std::size_t>(degree(p) + 1)); }

inline DigitVec mul(const PrimeField& F, const DigitVec& a, const DigitVec& b) {
  int da = degree(a), db = degree(b);
  if (da < 0 || db < 0) return {};
  DigitVec out(static_cast<std::size_t>(da + db + 1), 0);
  for (int i = 0; i <= da; ++i) {
    if (!a[i]) continue;
    for (int j = 0; j <= db; ++j)
      if (b[j]) out[i + j] = F.add(out[i + j], F.mul(a[i], b[j]));
  }
  return out;
}

// a mod f, f monic-leading after scaling (handles any nonzero leading coef)
inline DigitVec mod(const PrimeField& F, DigitVec a, const DigitVec& f) {
  int df = degree(f);
  if (df < 0) throw std::domain_error("mod by zero polynomial");
  digit_t lead_inv = F.inv(f[static_cast<std::size_t>(df)]);
  for (int i = degree(a); i >= df; --i) {
    digit_t c = a[static_cast<std::size_t>(i)];
    if (!c) continue;
    digit_t fctr = F.mul(c, lead_inv);
    for (int j = 0; j <= df; ++j)
      a[static_cast<std::size_t>(i - df + j)] =
          F.sub(a[static_cast<std::size_t>(i - df + j)], F.mul(fctr, f[static_cast<std::size_t>(j)]));
  }
  trim(a);
  return a;
}

inline DigitVec mulmod(const PrimeField& F, const DigitVec& a, const DigitVec& b, const DigitVec& f) {
  return mod(F, mul(F, a, b), f);
}

inline DigitVec gcd(const PrimeField& F, DigitVec a, DigitVec b) {
  trim(a);
  trim(b);
  while (degree(b) >= 0) {
    a = mod(F, a, b);
    std::swap(a, b);
  }
  // normalize monic
  int d = degree(a);
  if (d >= 0) {
    digit_t li = F.inv(a[static_cast<std::size_t>(d)]);
    for (auto& c : a) c = F.mul(c, li);
  }
  return a;
}

// x^(q^steps) mod f, starting from start (typically x)
inline DigitVec frobenius_iterate(const PrimeField& F, DigitVec start, const DigitVec& f, unsigned steps) {
  for (unsigned s = 0; s < steps; ++s) {
    // start^q via square-and-multiply on exponent q
    DigitVec r{1};
    DigitVec base = start;
    std::uint32_t e = F.q;
    while (e) {
      if (e & 1) r = mulmod(F, r, base, f);
      base = mulmod(F, base, base, f);
      e >>= 1;
    }
    start = std::move(r);
  }
  return start;
}

// Irreducibility of a monic degree-m polynomial over F_q: no irreducible
// factor of degree <= m/2, tested as gcd(x^(q^i) - x, f) = 1 for i = 1..m/2.
inline bool is_irreducible(const PrimeField& F, const DigitVec& f) {
  int m = degree(f);
  if (m <= 0) return false;
  if (m == 1) return true;
  // quick root screen
  if (static_cast<std::uint64_t>(F.q) <= 4096) {
    for (digit_t x = 0; x < F.q; ++x) {
      digit_t acc = 0;
      for (int i = m; i >= 0; --i) acc = F.add(F.mul(acc, x), f[static_cast<std::size_t>(i)]);
      if (acc == 0) return false;
    }
  }
  DigitVec t{0, 1}; // x
  const DigitVec x = t;
  for (int i = 1; i <= m / 2; ++i) {
    t = frobenius_iterate(F, t, f, 1);
    DigitVec diff = t;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = F.sub(diff[1], 1);
    if (degree(gcd(F, diff, f)) != 0) return false;
  }
  return true;
}

// Smallest monic irreducible of degree m: scan tails c_0 + c_1 q + ... in
// increasing integer value.
inline DigitVec smallest_irreducible(const PrimeField& F, unsigned m) {
  if (m == 0) throw std::invalid_argument("extension degree must be positive");
  DigitVec f(m + 1, 0);
  f[m] = 1;
  for (std::uint64_t tail = 0;; ++tail) {
    std::uint64_t t = tail;
    for (unsigned i = 0; i < m; ++i) {
      f[i] = static_cast<digit_t>(t % F.q);
      t /= F.q;
    }
    if (t) throw std::runtime_error("no irreducible polynomial found"); // unreachable: always exists
    if (is_irreducible(F, f)) return f;
  }
}

} // namespace fqpoly

// ---------------------------------------------------------------------------
// F_{2^m}, m <= 63, elements bit-packed into a word. This is the arithmetic
// the simulation loop lives in.
// ---------------------------------------------------------------------------
class F2mTower {
public:
  using Elem = std::uint64_t;

  F2mTower(unsigned m, std::uint64_t modulus) : m_(m), mod_(modulus) {
    if (m < 1 || m > 63) throw std::invalid_argument("packed binary tower supports 1 <= m <= 63");
    if ((modulus >> m) != 1) throw std::invalid_argument("modulus must be monic of degree m");
    mask_ = (1ULL << m) - 1;
    tail_ = modulus & mask_; // x^m = tail (mod f); folding reduces by >= 1 bit per step
  }

  std::uint32_t q() const { return 2; }
  unsigned m() const { return m_; }
  std::uint64_t modulus_word() const { return mod_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  bool is_zero(Elem a) const { return a == 0; }
  Elem add(Elem a, Elem b) const { return a ^ b; }
  Elem sub(Elem a, Elem b) const { return a ^ b; }
  Elem neg(Elem a) const { return a; }

  static unsigned __int128 clmul(std::uint64_t a, std::uint64_t b) {
#if defined(__PCLMUL__)
    __m128i va = _mm_set_epi64x(0, static_cast<long long>(a));
    __m128i vb = _mm_set_epi64x(0, static_cast<long long>(b));
    __m128i vp = _mm_clmulepi64_si128(va, vb, 0x00);
    return (static_cast<unsigned __int128>(static_cast<std::uint64_t>(_mm_extract_epi64(vp, 1))) << 64) |
           static_cast<std::uint64_t>(_mm_extract_epi64(vp, 0));
#else
    unsigned __int128 p = 0;
    unsigned __int128 aa = a;
    while (b) {
      if (b & 1) p ^= aa;
      aa <<= 1;
      b >>= 1;
    }
    return p;
#endif
  }

  Elem mul(Elem a, Elem b) const { return reduce(clmul(a, b)); }

  Elem sqr(Elem a) const { return mul(a, a); }

  // x^q
  Elem frob(Elem a) const { return sqr(a); }
  Elem frob_pow(Elem a, unsigned i) const {
    for (unsigned s = 0; s < i % m_; ++s) a = sqr(a);
    return a;
  }

  Elem inv(Elem a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    // extended Euclid in GF(2)[x]
    std::uint64_t u = a, v = mod_;
    std::uint64_t g1 = 1, g2 = 0;
    while (u != 1) {
      int j = bitlen(u) - bitlen(v);
      if (j < 0) {
        std::swap(u, v);
        std::swap(g1, g2);
        j = -j;
      }
      u ^= v << j;
      g1 ^= g2 << j;
    }
    return reduce(static_cast<unsigned __int128>(g1));
  }

  Elem pow_u64(Elem a, std::uint64_t e) const {
    Elem r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = sqr(a);
      e >>= 1;
    }
    return r;
  }

  Elem scalar_mul(digit_t c, Elem a) const { return c & 1 ? a : 0; }
  Elem from_base(digit_t c) const { return c & 1; }
  digit_t digit(Elem a, unsigned i) const { return static_cast<digit_t>((a >> i) & 1); }
  Elem from_digits(const DigitVec& d) const {
    Elem a = 0;
    for (unsigned i = 0; i < m_ && i < d.size(); ++i)
      if (d[i] & 1) a |= 1ULL << i;
    return a;
  }
  DigitVec to_digits(Elem a) const {
    DigitVec d(m_);
    for (unsigned i = 0; i < m_; ++i) d[i] = static_cast<digit_t>((a >> i) & 1);
    return d;
  }
  Elem random(SeededRng& rng) const { return rng.next_u64() & mask_; }

private:
  static int bitlen(std::uint64_t v) { return v ? 64 - __builtin_clzll(v) : 0; }

  // fold the excess bits through x^m = tail until the value fits below x^m;
  // each fold drops the degree, so this runs twice for sparse moduli
  Elem reduce(unsigned __int128 p) const {
    std::uint64_t lo = static_cast<std::uint64_t>(p) & mask_;
    std::uint64_t hi = static_cast<std::uint64_t>(p >> m_);
    while (hi) {
      unsigned __int128 folded = clmul(hi, tail_);
      lo ^= static_cast<std::uint64_t>(folded) & mask_;
      hi = static_cast<std::uint64_t>(folded >> m_);
    }
    return lo;
  }

  unsigned m_;
  std::uint64_t mod_;
  std::uint64_t mask_;
  std::uint64_t tail_;
};

// ---------------------------------------------------------------------------
// F_{q^m} for any prime q: elements are coefficient vectors in the polynomial
// basis. Correctness path; used whenever q != 2 or m > 63.
// ---------------------------------------------------------------------------
class FqmTower {
public:
  using Elem = DigitVec; // size m, entries in [0, q)

  FqmTower(std::uint32_t q, unsigned m, DigitVec modulus)
      : F_(q), m_(m), mod_(std::move(modulus)) {
    if (m < 1) throw std::invalid_argument("extension degree must be positive");
    if (fqpoly::degree(mod_) != static_cast<int>(m) || mod_[m] != 1)
      throw std::invalid_argument("modulus must be monic of degree m");
  }

  std::uint32_t q() const { return F_.q; }
  unsigned m() const { return m_; }
  const DigitVec& modulus() const { return mod_; }
  const PrimeField& base() const { return F_; }

  Elem zero() const { return Elem(m_, 0); }
  Elem one() const {
    Elem e(m_, 0);
    e[0] = 1;
    return e;
  }
  bool is_zero(const Elem& a) const {
    for (auto c : a)
      if (c) return false;
    return true;
  }
  Elem add(const Elem& a, const Elem& b) const {
    Elem r(m_);
    for (unsigned i = 0; i < m_; ++i) r[i] = F_.add(a[i], b[i]);
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem r(m_);
    for (unsigned i = 0; i < m_; ++i) r[i] = F_.sub(a[i], b[i]);
    return r;
  }
  Elem neg(const Elem& a) const {
    Elem r(m_);
    for (unsigned i = 0; i < m_; ++i) r[i] = F_.neg(a[i]);
    return r;
  }
  Elem mul(const Elem& a, const Elem& b) const {
    DigitVec p = fqpoly::mod(F_, fqpoly::mul(F_, a, b), mod_);
    p.resize(m_, 0);
    return p;
  }
  Elem sqr(const Elem& a) const { return mul(a, a); }

  Elem pow_u64(Elem a, std::uint64_t e) const {
    Elem r = one();
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  Elem frob(const Elem& a) const { return pow_u64(a, F_.q); }
  Elem frob_pow(Elem a, unsigned i) const {
    for (unsigned s = 0; s < i % m_; ++s) a = frob(a);
    return a;
  }

  Elem inv(const Elem& a) const {
    if (is_zero(a)) throw std::domain_error("inverse of zero");
    // extended Euclid in F_q[x] against the modulus
    DigitVec r0 = mod_, r1 = a;
    fqpoly::trim(r1);
    DigitVec s0{}, s1{1};
    while (fqpoly::degree(r1) > 0) {
      // r0 = qt*r1 + r2
      DigitVec r2 = r0;
      DigitVec qt(static_cast<std::size_t>(std::max(0, fqpoly::degree(r0) - fqpoly::degree(r1) + 1)), 0);
      int d1 = fqpoly::degree(r1);
      digit_t li = F_.inv(r1[static_cast<std::size_t>(d1)]);
      for (int i = fqpoly::degree(r2); i >= d1; --i) {
        digit_t c = r2[static_cast<std::size_t>(i)];
        if (!c) continue;
        digit_t f = F_.mul(c, li);
        qt[static_cast<std::size_t>(i - d1)] = f;
        for (int j = 0; j <= d1; ++j)
          r2[static_cast<std::size_t>(i - d1 + j)] =
              F_.sub(r2[static_cast<std::size_t>(i - d1 + j)], F_.mul(f, r1[static_cast<std::size_t>(j)]));
      }
      fqpoly::trim(r2);
      // s2 = s0 - qt*s1
      DigitVec s2 = s0;
      DigitVec qs = fqpoly::mul(F_, qt, s1);
      if (s2.size() < qs.size()) s2.resize(qs.size(), 0);
      for (std::size_t i = 0; i < qs.size(); ++i) s2[i] = F_.sub(s2[i], qs[i]);
      r0 = std::move(r1);
      r1 = std::move(r2);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
    if (fqpoly::degree(r1) != 0) throw std::domain_error("element not invertible (modulus not irreducible?)");
    digit_t c = F_.inv(r1[0]);
    DigitVec out = s1;
    out.resize(m_, 0);
    for (auto& x : out) x = F_.mul(x, c);
    out = fqpoly::mod(F_, out, mod_);
    out.resize(m_, 0);
    return out;
  }

  Elem scalar_mul(digit_t c, const Elem& a) const {
    Elem r(m_);
    for (unsigned i = 0; i < m_; ++i) r[i] = F_.mul(c % F_.q, a[i]);
    return r;
  }
  Elem from_base(digit_t c) const {
    Elem e(m_, 0);
    e[0] = c % F_.q;
    return e;
  }
  digit_t digit(const Elem& a, unsigned i) const { return a[i]; }
  Elem from_digits(const DigitVec& d) const {
    Elem e(m_, 0);
    for (unsigned i = 0; i < m_ && i < d.size(); ++i) e[i] = d[i] % F_.q;
    return e;
  }
  DigitVec to_digits(const Elem& a) const { return a; }
  Elem random(SeededRng& rng) const {
    Elem e(m_);
    for (unsigned i = 0; i < m_; ++i) e[i] = static_cast<digit_t>(rng.next_below(F_.q));
    return e;
  }

private:
  PrimeField F_;
  unsigned m_;
  DigitVec mod_;
};

} // namespace rankdec

#endif
