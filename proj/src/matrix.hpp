#ifndef RANKDEC_MATRIX_HPP
#define RANKDEC_MATRIX_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gf.hpp"

namespace rankdec {

// ---------------------------------------------------------------------------
// Matrices over the prime base field F_q.
// ---------------------------------------------------------------------------
class FqMat {
public:
  FqMat() : rows_(0), cols_(0) {}
  FqMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  digit_t& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  digit_t at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
  bool operator==(const FqMat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

  FqMat transposed() const {
    FqMat t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
  }

  // In-place reduced row echelon form; returns pivot column list.
  std::vector<std::size_t> rref(const PrimeField& F) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
      std::size_t p = r;
      while (p < rows_ && at(p, c) == 0) ++p;
      if (p == rows_) continue;
      if (p != r)
        for (std::size_t j = 0; j < cols_; ++j) std::swap(at(p, j), at(r, j));
      digit_t li = F.inv(at(r, c));
      for (std::size_t j = c; j < cols_; ++j) at(r, j) = F.mul(at(r, j), li);
      for (std::size_t i = 0; i < rows_; ++i) {
        if (i == r) continue;
        digit_t f = at(i, c);
        if (!f) continue;
        for (std::size_t j = c; j < cols_; ++j) at(i, j) = F.sub(at(i, j), F.mul(f, at(r, j)));
      }
      pivots.push_back(c);
      ++r;
    }
    return pivots;
  }

  std::size_t rank(const PrimeField& F) const {
    FqMat copy = *this;
    return copy.rref(F).size();
  }

  // Basis of the right kernel {x : A x = 0}; each vector has length cols().
  std::vector<DigitVec> kernel(const PrimeField& F) const {
    FqMat R = *this;
    auto pivots = R.rref(F);
    std::vector<bool> is_piv(cols_, false);
    for (auto c : pivots) is_piv[c] = true;
    std::vector<DigitVec> basis;
    for (std::size_t fc = 0; fc < cols_; ++fc) {
      if (is_piv[fc]) continue;
      DigitVec v(cols_, 0);
      v[fc] = 1;
      for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = F.neg(R.at(i, fc));
      basis.push_back(std::move(v));
    }
    return basis;
  }

  static FqMat random(std::size_t rows, std::size_t cols, const PrimeField& F, SeededRng& rng) {
    FqMat m(rows, cols);
    for (auto& x : m.a_) x = static_cast<digit_t>(rng.next_below(F.q));
    return m;
  }

  // Uniform full-row-rank matrix by rejection. Conditioned on full rank the
  // row space is uniform on the Grassmannian.
  static FqMat random_full_rank(std::size_t rows, std::size_t cols, const PrimeField& F, SeededRng& rng) {
    if (rows > cols) throw std::invalid_argument("random_full_rank: rows > cols");
    for (;;) {
      FqMat m = random(rows, cols, F, rng);
      if (m.rank(F) == rows) return m;
    }
  }

private:
  std::size_t rows_, cols_;
  DigitVec a_;
};

// Rank over F_2 of words interpreted as bit rows.
inline std::size_t rank_f2_words(std::vector<std::uint64_t> rows) {
  std::size_t r = 0;
  for (int bit = 63; bit >= 0 && r < rows.size(); --bit) {
    std::size_t p = r;
    while (p < rows.size() && !((rows[p] >> bit) & 1)) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != r && ((rows[i] >> bit) & 1)) rows[i] ^= rows[r];
    ++r;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Column-wise expansion of an extension-field vector into an m x n base-field
// matrix, and the induced rank.
// ---------------------------------------------------------------------------
template <class Tower>
FqMat expand_to_base(const Tower& T, const std::vector<typename Tower::Elem>& v) {
  FqMat M(T.m(), v.size());
  for (std::size_t j = 0; j < v.size(); ++j)
    for (unsigned i = 0; i < T.m(); ++i) M.at(i, j) = T.digit(v[j], i);
  return M;
}

template <class Tower>
std::size_t rank_qm(const Tower& T, const std::vector<typename Tower::Elem>& v) {
  if constexpr (std::is_same_v<Tower, F2mTower>) {
    return rank_f2_words(std::vector<std::uint64_t>(v.begin(), v.end()));
  } else {
    PrimeField F(T.q());
    return expand_to_base(T, v).rank(F);
  }
}

// ---------------------------------------------------------------------------
// Matrices over the extension field.
// ---------------------------------------------------------------------------
template <class Tower>
class ExtMat {
public:
  using Elem = typename Tower::Elem;

  ExtMat(const Tower& T, std::size_t rows, std::size_t cols)
      : T_(&T), rows_(rows), cols_(cols), a_(rows * cols, T.zero()) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Elem& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Elem& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  std::vector<std::size_t> rref() {
    const Tower& T = *T_;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
      std::size_t p = r;
      while (p < rows_ && T.is_zero(at(p, c))) ++p;
      if (p == rows_) continue;
      if (p != r)
        for (std::size_t j = 0; j < cols_; ++j) std::swap(at(p, j), at(r, j));
      Elem li = T.inv(at(r, c));
      for (std::size_t j = c; j < cols_; ++j) at(r, j) = T.mul(at(r, j), li);
      for (std::size_t i = 0; i < rows_; ++i) {
        if (i == r) continue;
        Elem f = at(i, c);
        if (T.is_zero(f)) continue;
        for (std::size_t j = c; j < cols_; ++j) at(i, j) = T.sub(at(i, j), T.mul(f, at(r, j)));
      }
      pivots.push_back(c);
      ++r;
    }
    return pivots;
  }

  std::size_t rank() const {
    ExtMat copy = *this;
    return copy.rref().size();
  }

  std::vector<std::vector<Elem>> kernel() const {
    const Tower& T = *T_;
    ExtMat R = *this;
    auto pivots = R.rref();
    std::vector<bool> is_piv(cols_, false);
    for (auto c : pivots) is_piv[c] = true;
    std::vector<std::vector<Elem>> basis;
    for (std::size_t fc = 0; fc < cols_; ++fc) {
      if (is_piv[fc]) continue;
      std::vector<Elem> v(cols_, T.zero());
      v[fc] = T.one();
      for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = T.neg(R.at(i, fc));
      basis.push_back(std::move(v));
    }
    return basis;
  }

  // One solution of A x = b, or nullopt when b is outside the column span.
  std::optional<std::vector<Elem>> solve(const std::vector<Elem>& b) const {
    const Tower& T = *T_;
    if (b.size() != rows_) throw std::invalid_argument("solve: dimension mismatch");
    ExtMat aug(T, rows_, cols_ + 1);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) aug.at(r, c) = at(r, c);
      aug.at(r, cols_) = b[r];
    }
    auto pivots = aug.rref();
    if (!pivots.empty() && pivots.back() == cols_) return std::nullopt; // inconsistent
    std::vector<Elem> x(cols_, T.zero());
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug.at(i, cols_);
    return x;
  }

private:
  const Tower* T_;
  std::size_t rows_, cols_;
  std::vector<Elem> a_;
};

} // namespace rankdec

#endif
