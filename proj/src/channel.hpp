#ifndef RANKDEC_CHANNEL_HPP
#define RANKDEC_CHANNEL_HPP

#include "gabidulin.hpp"
#include "matrix.hpp"
#include "rng.hpp"

namespace rankdec {

template <class Tower>
struct ErrorPartT {
  std::vector<typename Tower::Elem> a; // length w, F_q-rank w
  FqMat B;                             // w x n, full rank
  std::vector<typename Tower::Elem> e; // a * B, rank exactly w
};

// Uniform rank-w error: a uniform among independent w-tuples, B uniform among
// full-rank w x n matrices, both by rejection. The GL(w, F_q) action on
// (a, B) has constant orbit size, so e = aB is uniform over rank-w vectors.
template <class Tower>
ErrorPartT<Tower> sample_error(const Tower& T, std::size_t n, std::size_t w, SeededRng& rng) {
  if (w > n || w > T.m()) throw std::invalid_argument("error rank must satisfy w <= min(n, m)");
  ErrorPartT<Tower> out;
  PrimeField F(T.q());
  out.a.resize(w);
  if (w > 0) {
    for (;;) {
      for (auto& x : out.a) x = T.random(rng);
      if (rank_qm(T, out.a) == w) break;
    }
    out.B = FqMat::random_full_rank(w, n, F, rng);
  } else {
    out.B = FqMat(0, n);
  }
  out.e.assign(n, T.zero());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < w; ++i) {
      digit_t c = out.B.at(i, j);
      if (!c) continue;
      out.e[j] = T.add(out.e[j], c == 1 ? out.a[i] : T.scalar_mul(c, out.a[i]));
    }
  return out;
}

// Row-space representative of a uniform element of Gr(F_q^n, delta).
inline FqMat sample_grassmannian(std::size_t n, std::size_t delta, std::uint32_t q, SeededRng& rng) {
  if (delta > n) throw std::invalid_argument("subspace dimension exceeds ambient dimension");
  PrimeField F(q);
  if (delta == 0) return FqMat(0, n);
  return FqMat::random_full_rank(delta, n, F, rng);
}

template <class Tower>
std::vector<typename Tower::Elem> sample_message(const Tower& T, std::size_t k, SeededRng& rng) {
  std::vector<typename Tower::Elem> msg(k);
  for (auto& x : msg) x = T.random(rng);
  return msg;
}

template <class Tower>
struct InstanceT {
  std::vector<typename Tower::Elem> msg;
  ErrorPartT<Tower> err;
  std::vector<typename Tower::Elem> r; // encode(msg) + e
  std::size_t w = 0;
};

template <class Tower>
InstanceT<Tower> sample_instance(const GabidulinCode<Tower>& code, std::size_t w, SeededRng& rng) {
  const Tower& T = code.tower();
  InstanceT<Tower> inst;
  inst.w = w;
  inst.msg = sample_message(T, code.k(), rng);
  inst.err = sample_error(T, code.n(), w, rng);
  inst.r = code.encode(inst.msg);
  for (std::size_t j = 0; j < code.n(); ++j) inst.r[j] = T.add(inst.r[j], inst.err.e[j]);
  return inst;
}

// Canonical label of a subspace: RREF of its matrix of row generators,
// flattened. Used by the uniformity tests to bucket samples.
inline DigitVec subspace_canonical_label(FqMat M, const PrimeField& F) {
  M.rref(F);
  DigitVec label;
  label.reserve(M.rows() * M.cols());
  for (std::size_t r = 0; r < M.rows(); ++r)
    for (std::size_t c = 0; c < M.cols(); ++c) label.push_back(M.at(r, c));
  return label;
}

} // namespace rankdec

#endif
