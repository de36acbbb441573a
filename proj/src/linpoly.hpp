#ifndef RANKDEC_LINPOLY_HPP
#define RANKDEC_LINPOLY_HPP

#include <optional>
#include <vector>

#include "matrix.hpp"

namespace rankdec {

// Linearized polynomial f(x) = sum_i coeffs[i] * x^(q^i). The evaluation map
// is F_q-linear and its root set is an F_q-subspace of dimension <= qdeg(f).
// Composition convention throughout: (f o g)(x) = f(g(x)).
template <class Tower>
class LinearizedPoly {
public:
  using Elem = typename Tower::Elem;

  explicit LinearizedPoly(const Tower& T) : T_(&T) {}
  LinearizedPoly(const Tower& T, std::vector<Elem> coeffs) : T_(&T), c_(std::move(coeffs)) { trim(); }

  static LinearizedPoly identity(const Tower& T) { return LinearizedPoly(T, {T.one()}); }

  const std::vector<Elem>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  // qdeg of the zero polynomial is reported as -1
  int qdeg() const { return static_cast<int>(c_.size()) - 1; }

  Elem eval(const Elem& x) const {
    const Tower& T = *T_;
    Elem acc = T.zero();
    Elem cur = x;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (!T.is_zero(c_[i])) acc = T.add(acc, T.mul(c_[i], cur));
      if (i + 1 < c_.size()) cur = T.frob(cur);
    }
    return acc;
  }

  LinearizedPoly add(const LinearizedPoly& o) const {
    const Tower& T = *T_;
    std::vector<Elem> out(std::max(c_.size(), o.c_.size()), T.zero());
    for (std::size_t i = 0; i < c_.size(); ++i) out[i] = c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) out[i] = T.add(out[i], o.c_[i]);
    return LinearizedPoly(T, std::move(out));
  }

  LinearizedPoly scale(const Elem& s) const {
    const Tower& T = *T_;
    std::vector<Elem> out(c_.size(), T.zero());
    for (std::size_t i = 0; i < c_.size(); ++i) out[i] = T.mul(s, c_[i]);
    return LinearizedPoly(T, std::move(out));
  }

  // (f o g)_k = sum_{i+j=k} f_i * g_j^(q^i)
  LinearizedPoly compose(const LinearizedPoly& g) const {
    const Tower& T = *T_;
    if (is_zero() || g.is_zero()) return LinearizedPoly(T);
    std::vector<Elem> out(c_.size() + g.c_.size() - 1, T.zero());
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (T.is_zero(c_[i])) continue;
      for (std::size_t j = 0; j < g.c_.size(); ++j) {
        if (T.is_zero(g.c_[j])) continue;
        out[i + j] = T.add(out[i + j], T.mul(c_[i], T.frob_pow(g.c_[j], static_cast<unsigned>(i))));
      }
    }
    return LinearizedPoly(T, std::move(out));
  }

  // Exact left quotient: f with V o f = N, via back-substitution from the top
  // coefficient down. O(qdeg^2) field operations.
  static std::optional<LinearizedPoly> left_divide(const LinearizedPoly& N, const LinearizedPoly& V) {
    const Tower& T = *N.T_;
    if (V.is_zero()) throw std::invalid_argument("left_divide: divisor is zero");
    if (N.is_zero()) return LinearizedPoly(T, {});
    int dV = V.qdeg(), dN = N.qdeg();
    if (dN < dV) return std::nullopt;
    int df = dN - dV;
    std::vector<Elem> f(static_cast<std::size_t>(df) + 1, T.zero());
    const Elem vt_inv = T.inv(V.c_[static_cast<std::size_t>(dV)]);
    const unsigned m = T.m();
    for (int k = dN; k >= dV; --k) {
      // (V o f)_k = sum_i V_i * f_{k-i}^(q^i); isolate i = dV
      Elem s = k <= N.qdeg() ? N.c_[static_cast<std::size_t>(k)] : T.zero();
      for (int i = 0; i < dV; ++i) {
        int j = k - i;
        if (j >= 0 && j <= df && !T.is_zero(V.c_[static_cast<std::size_t>(i)]) && !T.is_zero(f[static_cast<std::size_t>(j)]))
          s = T.sub(s, T.mul(V.c_[static_cast<std::size_t>(i)], T.frob_pow(f[static_cast<std::size_t>(j)], static_cast<unsigned>(i))));
      }
      // s = V_dV * f_j^(q^dV)  with j = k - dV
      Elem fq = T.mul(vt_inv, s);
      f[static_cast<std::size_t>(k - dV)] = T.frob_pow(fq, m - static_cast<unsigned>(dV) % m);
    }
    LinearizedPoly cand(T, std::move(f));
    // remaining equations (k < dV) must close exactly, otherwise no quotient exists
    LinearizedPoly check = V.compose(cand);
    if (check.c_.size() != N.c_.size()) return std::nullopt;
    for (std::size_t i = 0; i < N.c_.size(); ++i)
      if (!(check.c_[i] == N.c_[i])) return std::nullopt;
    return cand;
  }

  // F_q-basis of the root space {x : f(x) = 0}, read off the kernel of the
  // m x m base-field matrix of the evaluation map.
  std::vector<Elem> root_space_basis() const {
    const Tower& T = *T_;
    if (is_zero()) throw std::invalid_argument("root_space_basis: zero polynomial");
    const unsigned m = T.m();
    PrimeField F(T.q());
    FqMat M(m, m);
    for (unsigned j = 0; j < m; ++j) {
      DigitVec unit(m, 0);
      unit[j] = 1;
      Elem img = eval(T.from_digits(unit));
      for (unsigned i = 0; i < m; ++i) M.at(i, j) = T.digit(img, i);
    }
    std::vector<Elem> basis;
    for (auto& v : M.kernel(F)) basis.push_back(T.from_digits(v));
    return basis;
  }

  // Monic linearized polynomial of qdeg = dim span(U) whose root space is
  // exactly span_{F_q}(U): f <- (x^q - f(u)^(q-1) x) o f over a basis of U.
  static LinearizedPoly annihilator(const Tower& T, const std::vector<Elem>& U) {
    LinearizedPoly f = identity(T);
    for (const Elem& u : U) {
      Elem fu = f.eval(u);
      if (T.is_zero(fu)) continue; // u already in the span handled so far
      Elem c = T.pow_u64(fu, T.q() - 1);
      // (x^q - c x) o f
      std::vector<Elem> next(f.c_.size() + 1, T.zero());
      for (std::size_t j = 0; j < f.c_.size(); ++j) {
        next[j + 1] = T.add(next[j + 1], T.frob(f.c_[j]));
        next[j] = T.sub(next[j], T.mul(c, f.c_[j]));
      }
      f = LinearizedPoly(T, std::move(next));
    }
    return f;
  }

private:
  void trim() {
    while (!c_.empty() && T_->is_zero(c_.back())) c_.pop_back();
  }

  const Tower* T_;
  std::vector<Elem> c_;
};

} // namespace rankdec

#endif
