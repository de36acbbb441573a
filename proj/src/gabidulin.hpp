#ifndef RANKDEC_GABIDULIN_HPP
#define RANKDEC_GABIDULIN_HPP

#include <cmath>
#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <variant>
#include <vector>

#include "field_tower.hpp"
#include "linpoly.hpp"
#include "matrix.hpp"

namespace rankdec {

enum class DecodeStatus { Codeword, Failure };

template <class Tower>
struct DecodeOutcomeT {
  DecodeStatus status = DecodeStatus::Failure;
  std::vector<typename Tower::Elem> codeword; // empty on failure
  std::vector<typename Tower::Elem> message;  // empty on failure
  std::size_t residual_rank = 0;              // rank(r - codeword) when present

  bool ok() const { return status == DecodeStatus::Codeword; }
};

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluation code of linearized polynomials of qdeg < k at locators that are
// F_q-linearly independent. Rows of the generator matrix are successive
// Frobenius powers of the locator vector.
template <class Tower>
class GabidulinCode {
public:
  using Elem = typename Tower::Elem;
  using Vec = std::vector<Elem>;
  using Outcome = DecodeOutcomeT<Tower>;

  GabidulinCode(const Tower& T, std::size_t k, Vec g) : T_(&T), n_(g.size()), k_(k), g_(std::move(g)) {
    if (n_ > T.m()) throw std::invalid_argument("code length exceeds extension degree (need n <= m)");
    if (k_ < 1 || k_ > n_) throw std::invalid_argument("code dimension must satisfy 1 <= k <= n");
    if (rank_qm(T, g_) != n_) throw std::invalid_argument("locators must be F_q-linearly independent");
    // g_j^(q^i) for i < k, reused by every encode
    moore_.assign(k_, Vec(n_));
    for (std::size_t j = 0; j < n_; ++j) {
      Elem cur = g_[j];
      for (std::size_t i = 0; i < k_; ++i) {
        moore_[i][j] = cur;
        if (i + 1 < k_) cur = T.frob(cur);
      }
    }
  }

  const Tower& tower() const { return *T_; }
  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  const Vec& locators() const { return g_; }
  std::size_t unique_radius() const { return (n_ - k_) / 2; }

  ExtMat<Tower> generator_matrix() const {
    ExtMat<Tower> G(*T_, k_, n_);
    for (std::size_t i = 0; i < k_; ++i)
      for (std::size_t j = 0; j < n_; ++j) G.at(i, j) = moore_[i][j];
    return G;
  }

  Vec encode(const Vec& msg) const {
    const Tower& T = *T_;
    if (msg.size() != k_) throw std::invalid_argument("message length must equal k");
    Vec c(n_, T.zero());
    for (std::size_t i = 0; i < k_; ++i) {
      if (T.is_zero(msg[i])) continue;
      for (std::size_t j = 0; j < n_; ++j) c[j] = T.add(c[j], T.mul(msg[i], moore_[i][j]));
    }
    return c;
  }

  // Solve the k x k Moore system on the first k positions, then verify the
  // rest; faults if c is not a codeword.
  Vec recover_message(const Vec& c) const {
    const Tower& T = *T_;
    if (c.size() != n_) throw std::invalid_argument("codeword length must equal n");
    ExtMat<Tower> A(T, k_, k_);
    Vec b(k_);
    for (std::size_t j = 0; j < k_; ++j) {
      for (std::size_t i = 0; i < k_; ++i) A.at(j, i) = moore_[i][j];
      b[j] = c[j];
    }
    auto x = A.solve(b);
    if (!x) throw std::invalid_argument("vector is not a codeword");
    Vec full = encode(*x);
    for (std::size_t j = 0; j < n_; ++j)
      if (!(full[j] == c[j])) throw std::invalid_argument("vector is not a codeword");
    return *x;
  }

  // Error-only decoding up to radius floor((n-k)/2); FAILURE is a value.
  Outcome decode_unique(const Vec& r) const {
    Outcome out = decode_error_erasure(r, FqMat(0, n_));
    if (out.ok() && out.residual_rank > unique_radius()) return Outcome{};
    return out;
  }

  // Error and column-erasure decoding. B_C (gamma x n over F_q, full row
  // rank) spans the part of the error row space handed to the decoder as
  // erasures. Reduction: multiply by a kernel matrix P of B_C, decode the
  // punctured code with locators g P at radius floor((n - gamma - k)/2),
  // and re-encode on the full code. Succeeds whenever the residual error
  // rank t satisfies 2t + gamma <= n - k; outside that condition the result
  // is FAILURE or some codeword, which the caller re-checks.
  Outcome decode_error_erasure(const Vec& r, const FqMat& B_C) const {
    const Tower& T = *T_;
    if (r.size() != n_) throw std::invalid_argument("received word length must equal n");
    const std::size_t gamma = B_C.rows();
    PrimeField F(T.q());
    if (gamma > 0) {
      if (B_C.cols() != n_) throw std::invalid_argument("erasure matrix must have n columns");
      if (B_C.rank(F) != gamma) throw std::invalid_argument("erasure matrix must have full row rank");
    }
    if (n_ - gamma < k_) throw std::invalid_argument("too many erasures: n - gamma < k");

    const Vec* h = &g_;
    const Vec* y = &r;
    Vec hp, yp;
    if (gamma > 0) {
      auto P = B_C.kernel(F); // n - gamma vectors of length n
      hp.assign(P.size(), T.zero());
      yp.assign(P.size(), T.zero());
      for (std::size_t j = 0; j < P.size(); ++j) {
        for (std::size_t i = 0; i < n_; ++i) {
          digit_t c = P[j][i];
          if (!c) continue;
          if (c == 1) {
            hp[j] = T.add(hp[j], g_[i]);
            yp[j] = T.add(yp[j], r[i]);
          } else {
            hp[j] = T.add(hp[j], T.scalar_mul(c, g_[i]));
            yp[j] = T.add(yp[j], T.scalar_mul(c, r[i]));
          }
        }
      }
      h = &hp;
      y = &yp;
    }

    auto msg = reconstruct(*h, *y, (h->size() - k_) / 2);
    if (!msg) return Outcome{};
    Outcome out;
    out.status = DecodeStatus::Codeword;
    out.message = std::move(*msg);
    out.codeword = encode(out.message);
    Vec diff(n_);
    for (std::size_t j = 0; j < n_; ++j) diff[j] = T.sub(r[j], out.codeword[j]);
    out.residual_rank = rank_qm(T, diff);
    return out;
  }

  // All codewords within rank distance w of r, by enumerating the solution
  // space of the degree-w reconstruction system and filtering by the rank
  // test. Feasible only while q^(m * 2xi) stays under the candidate cap.
  std::vector<std::pair<Vec, Vec>> list_close_codewords(const Vec& r, std::size_t w, std::uint64_t cap = 1ULL << 24) const {
    const Tower& T = *T_;
    if (r.size() != n_) throw std::invalid_argument("received word length must equal n");
    if (w < unique_radius()) throw std::invalid_argument("list radius below unique decoding radius");
    if (w > n_) throw std::invalid_argument("list radius exceeds n");
    const double log2q = std::log2(static_cast<double>(T.q()));
    const double twoxi = static_cast<double>(2 * w) - static_cast<double>(n_ - k_);
    if (twoxi > 0 && static_cast<double>(T.m()) * twoxi * log2q > std::log2(static_cast<double>(cap)) + 1e-9)
      throw CapExceeded("candidate space exceeds enumeration cap");

    const std::size_t tcols = w + 1, ncols = k_ + w, cols = tcols + ncols;
    ExtMat<Tower> A = reconstruction_system(g_, r, w, cols);
    auto ker = A.kernel();
    const std::size_t d = ker.size();

    std::set<std::vector<DigitVec>> seen;
    std::vector<std::pair<Vec, Vec>> out;

    // q^m combinations per free coordinate, projective normalization on the
    // leading one
    double qm_log2 = static_cast<double>(T.m()) * log2q;
    if (d >= 1 && static_cast<double>(d - 1) * qm_log2 > std::log2(static_cast<double>(cap)) + 1e-9) {
      // The kernel exceeds its generic dimension 2xi+1 when r sits close to a
      // codeword. All pairs (V, V o f) for one message polynomial f form a
      // subspace of dimension w + 1 - rank(r - c); when one class accounts
      // for the whole kernel the list is that single codeword and no
      // enumeration is needed.
      for (const auto& kv : ker) {
        auto msg = message_from_pair(kv, tcols);
        if (!msg) continue;
        Vec c = encode(*msg);
        Vec diff(n_);
        for (std::size_t j = 0; j < n_; ++j) diff[j] = T.sub(r[j], c[j]);
        std::size_t dist = rank_qm(T, diff);
        if (dist <= w && w + 1 - dist == d) {
          out.emplace_back(std::move(c), std::move(*msg));
          return out;
        }
      }
      throw CapExceeded("candidate space exceeds enumeration cap");
    }
    std::uint64_t fsize = 1; // q^m; only needed (and only small) when d >= 2
    if (d >= 2)
      for (unsigned i = 0; i < T.m(); ++i) fsize *= T.q();

    for (std::size_t lead = 0; lead < d; ++lead) {
      const std::size_t nfree = d - 1 - lead;
      std::vector<std::uint64_t> odo(nfree, 0);
      for (;;) {
        std::vector<Elem> comb(cols, T.zero());
        for (std::size_t c = 0; c < cols; ++c) comb[c] = ker[lead][c];
        for (std::size_t f = 0; f < nfree; ++f) {
          if (odo[f] == 0) continue;
          Elem coef = elem_from_index(T, odo[f]);
          for (std::size_t c = 0; c < cols; ++c)
            comb[c] = T.add(comb[c], T.mul(coef, ker[lead + 1 + f][c]));
        }
        consider_candidate(comb, tcols, r, w, seen, out);
        // odometer
        std::size_t f = 0;
        while (f < nfree) {
          if (++odo[f] < fsize) break;
          odo[f] = 0;
          ++f;
        }
        if (f == nfree) break;
      }
    }
    return out;
  }

private:
  ExtMat<Tower> reconstruction_system(const Vec& h, const Vec& y, std::size_t t, std::size_t cols) const {
    const Tower& T = *T_;
    const std::size_t np = h.size();
    ExtMat<Tower> A(T, np, cols);
    for (std::size_t i = 0; i < np; ++i) {
      Elem cur = y[i];
      for (std::size_t j = 0; j <= t; ++j) {
        A.at(i, j) = cur;
        if (j < t) cur = T.frob(cur);
      }
      cur = h[i];
      for (std::size_t j = 0; j < cols - (t + 1); ++j) {
        A.at(i, t + 1 + j) = T.neg(cur);
        if (j + 1 < cols - (t + 1)) cur = T.frob(cur);
      }
    }
    return A;
  }

  // Find nonzero (V, N), qdeg V <= t, qdeg N <= k + t - 1, with
  // V(y_i) = N(h_i) for all i; the message polynomial is the exact left
  // quotient of N by V.
  std::optional<Vec> reconstruct(const Vec& h, const Vec& y, std::size_t t) const {
    const std::size_t cols = (t + 1) + (k_ + t);
    ExtMat<Tower> A = reconstruction_system(h, y, t, cols);
    auto ker = A.kernel();
    for (const auto& kv : ker) {
      auto msg = message_from_pair(kv, t + 1);
      if (msg) return msg;
    }
    return std::nullopt;
  }

  std::optional<Vec> message_from_pair(const std::vector<Elem>& kv, std::size_t split) const {
    const Tower& T = *T_;
    std::vector<Elem> vc(kv.begin(), kv.begin() + static_cast<std::ptrdiff_t>(split));
    std::vector<Elem> nc(kv.begin() + static_cast<std::ptrdiff_t>(split), kv.end());
    LinearizedPoly<Tower> V(T, std::move(vc)), N(T, std::move(nc));
    if (V.is_zero()) return std::nullopt;
    auto f = LinearizedPoly<Tower>::left_divide(N, V);
    if (!f) return std::nullopt;
    if (f->qdeg() >= static_cast<int>(k_)) return std::nullopt;
    Vec msg(k_, T.zero());
    for (std::size_t i = 0; i < f->coeffs().size(); ++i) msg[i] = f->coeffs()[i];
    return msg;
  }

  void consider_candidate(const std::vector<Elem>& comb, std::size_t split, const Vec& r, std::size_t w,
                          std::set<std::vector<DigitVec>>& seen, std::vector<std::pair<Vec, Vec>>& out) const {
    const Tower& T = *T_;
    auto msg = message_from_pair(comb, split);
    if (!msg) return;
    std::vector<DigitVec> key;
    key.reserve(k_);
    for (const auto& e : *msg) key.push_back(T.to_digits(e));
    if (!seen.insert(key).second) return;
    Vec c = encode(*msg);
    Vec diff(n_);
    for (std::size_t j = 0; j < n_; ++j) diff[j] = T.sub(r[j], c[j]);
    if (rank_qm(T, diff) <= w) out.emplace_back(std::move(c), std::move(*msg));
  }

  static Elem elem_from_index(const Tower& T, std::uint64_t idx) {
    if constexpr (std::is_same_v<Tower, F2mTower>) {
      return static_cast<Elem>(idx);
    } else {
      DigitVec d(T.m(), 0);
      for (unsigned i = 0; i < T.m() && idx; ++i) {
        d[i] = static_cast<digit_t>(idx % T.q());
        idx /= T.q();
      }
      return T.from_digits(d);
    }
  }

  const Tower* T_;
  std::size_t n_, k_;
  Vec g_;
  std::vector<Vec> moore_;
};

} // namespace rankdec

#endif
