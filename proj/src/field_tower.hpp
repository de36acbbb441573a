#ifndef RANKDEC_FIELD_TOWER_HPP
#define RANKDEC_FIELD_TOWER_HPP

#include <variant>

#include "gf.hpp"

namespace rankdec {

// Validated (q, m, modulus) triple plus the arithmetic engine behind it.
// Immutable after construction.
class FieldTower {
public:
  // Default modulus: the lexicographically smallest irreducible monic
  // polynomial of degree m (tails scanned in increasing base-q value).
  FieldTower(std::uint32_t q, unsigned m) : FieldTower(q, m, fqpoly::smallest_irreducible(PrimeField(q), m)) {}

  FieldTower(std::uint32_t q, unsigned m, DigitVec modulus)
      : q_(q), m_(m), modulus_(validated(q, m, std::move(modulus))), impl_(make_impl(q_, m_, modulus_)) {}

  std::uint32_t q() const { return q_; }
  unsigned m() const { return m_; }
  const DigitVec& modulus() const { return modulus_; }
  bool packed() const { return std::holds_alternative<F2mTower>(impl_); }

  const F2mTower& f2m() const { return std::get<F2mTower>(impl_); }
  const FqmTower& fqm() const { return std::get<FqmTower>(impl_); }

  template <class Fn>
  decltype(auto) visit(Fn&& fn) const {
    return std::visit(std::forward<Fn>(fn), impl_);
  }

private:
  static DigitVec validated(std::uint32_t q, unsigned m, DigitVec modulus) {
    PrimeField F(q); // rejects non-prime q
    if (m < 1) throw std::invalid_argument("extension degree must be positive");
    for (auto& c : modulus) c %= q;
    if (fqpoly::degree(modulus) != static_cast<int>(m) || modulus[m] != 1)
      throw std::invalid_argument("modulus must be monic of degree m");
    if (!fqpoly::is_irreducible(F, modulus)) throw std::invalid_argument("modulus is not irreducible over F_q");
    return modulus;
  }

  static std::variant<F2mTower, FqmTower> make_impl(std::uint32_t q, unsigned m, const DigitVec& modulus) {
    if (q == 2 && m <= 63) {
      std::uint64_t w = 0;
      for (unsigned i = 0; i <= m; ++i)
        if (modulus[i]) w |= 1ULL << i;
      return F2mTower(m, w);
    }
    return FqmTower(q, m, modulus);
  }

  std::uint32_t q_;
  unsigned m_;
  DigitVec modulus_;
  std::variant<F2mTower, FqmTower> impl_;
};

} // namespace rankdec

#endif
