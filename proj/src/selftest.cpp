#include "selftest.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "analysis.hpp"
#include "channel.hpp"
#include "gabidulin.hpp"
#include "instance.hpp"
#include "linpoly.hpp"
#include "randdec.hpp"
#include "simulate.hpp"

namespace rankdec::selftest {

namespace an = rankdec::analysis;

std::vector<FqMat> enumerate_subspaces(std::size_t n, std::size_t delta, const PrimeField& F) {
  std::vector<FqMat> out;
  if (delta == 0) {
    out.emplace_back(0, n);
    return out;
  }
  if (delta > n) return out;
  // choose pivot columns, then odometer over the free entries of the RREF form
  std::vector<std::size_t> piv(delta);
  for (std::size_t i = 0; i < delta; ++i) piv[i] = i;
  for (;;) {
    std::vector<std::pair<std::size_t, std::size_t>> free_pos;
    for (std::size_t i = 0; i < delta; ++i)
      for (std::size_t j = piv[i] + 1; j < n; ++j) {
        bool is_piv = false;
        for (auto p : piv)
          if (p == j) is_piv = true;
        if (!is_piv) free_pos.emplace_back(i, j);
      }
    DigitVec vals(free_pos.size(), 0);
    for (;;) {
      FqMat M(delta, n);
      for (std::size_t i = 0; i < delta; ++i) M.at(i, piv[i]) = 1;
      for (std::size_t t = 0; t < free_pos.size(); ++t) M.at(free_pos[t].first, free_pos[t].second) = vals[t];
      out.push_back(std::move(M));
      std::size_t t = 0;
      while (t < vals.size()) {
        if (++vals[t] < F.q) break;
        vals[t] = 0;
        ++t;
      }
      if (t == vals.size()) break;
    }
    // next pivot combination
    std::size_t i = delta;
    for (;;) {
      if (i == 0) return out;
      --i;
      if (piv[i] + 1 <= n - (delta - i)) {
        ++piv[i];
        for (std::size_t j = i + 1; j < delta; ++j) piv[j] = piv[j - 1] + 1;
        break;
      }
    }
  }
}

std::size_t intersection_dim(const FqMat& U, const FqMat& V, const PrimeField& F) {
  FqMat stacked(U.rows() + V.rows(), U.cols());
  for (std::size_t r = 0; r < U.rows(); ++r)
    for (std::size_t c = 0; c < U.cols(); ++c) stacked.at(r, c) = U.at(r, c);
  for (std::size_t r = 0; r < V.rows(); ++r)
    for (std::size_t c = 0; c < V.cols(); ++c) stacked.at(U.rows() + r, c) = V.at(r, c);
  std::size_t sum_dim = U.rank(F) + V.rank(F);
  return sum_dim - stacked.rank(F);
}

namespace {

double gamma_series(double a, double x) {
  double sum = 1.0 / a, term = sum, ap = a;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double chi2_survival(double chi2, double dof) {
  double a = dof / 2.0, x = chi2 / 2.0;
  if (x <= 0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_series(a, x);
  return gamma_contfrac(a, x);
}

namespace {

using Check = CheckResult;

Check gaussian_binomial_vs_enumeration(bool full, bool inject) {
  Check c{"gaussian-binomial-vs-subspace-enumeration", "exact", true, ""};
  long nmax = full ? 5 : 4;
  for (long q : {2L, 3L}) {
    PrimeField F(static_cast<std::uint32_t>(q));
    for (long n = 1; n <= nmax; ++n)
      for (long d = 0; d <= n; ++d) {
        an::BigInt expected = an::gaussian_binomial(n, d, q);
        if (inject && q == 2 && n == 4 && d == 2) expected += 1;
        auto subs = enumerate_subspaces(static_cast<std::size_t>(n), static_cast<std::size_t>(d), F);
        if (an::BigInt(subs.size()) != expected) {
          c.pass = false;
          std::ostringstream os;
          os << "q=" << q << " n=" << n << " d=" << d << ": enumerated " << subs.size() << ", formula " << expected;
          c.detail = os.str();
          return c;
        }
      }
  }
  return c;
}

Check intersection_prob_vs_enumeration(bool full) {
  Check c{"intersection-prob-vs-enumeration", "exact", true, ""};
  long lmax = full ? 5 : 4;
  for (long q : {2L, 3L}) {
    PrimeField F(static_cast<std::uint32_t>(q));
    for (long l = 1; l <= lmax; ++l) {
      for (long u = 0; u <= l; ++u) {
        // fixed U = span of the first u unit vectors; the probability is
        // GL-invariant so any representative works
        FqMat U(static_cast<std::size_t>(u), static_cast<std::size_t>(l));
        for (long i = 0; i < u; ++i) U.at(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = 1;
        for (long v = 0; v <= l; ++v) {
          auto all_v = enumerate_subspaces(static_cast<std::size_t>(l), static_cast<std::size_t>(v), F);
          for (long omega = 0; omega <= std::min(u, v); ++omega) {
            an::BigInt hits = 0;
            for (const auto& V : all_v)
              if (static_cast<long>(intersection_dim(U, V, F)) >= omega) ++hits;
            an::BigRat exact = an::intersection_prob_exact(l, u, v, omega, q);
            if (exact != an::BigRat(hits, an::gaussian_binomial(l, v, q))) {
              c.pass = false;
              std::ostringstream os;
              os << "mismatch at q=" << q << " l=" << l << " u=" << u << " v=" << v << " omega=" << omega;
              c.detail = os.str();
              return c;
            }
          }
        }
      }
    }
  }
  return c;
}

Check close_codewords_vs_codebook(std::uint64_t seed) {
  Check c{"close-codewords-vs-codebook", "exact set equality", true, ""};
  FieldTower tower(2, 6);
  const auto& T = tower.f2m();
  SeededRng rng(seed, 1);
  std::vector<F2mTower::Elem> g(6);
  for (;;) {
    for (auto& x : g) x = T.random(rng);
    if (rank_qm(T, g) == 6) break;
  }
  GabidulinCode<F2mTower> code(T, 2, g);
  const std::size_t w = 3; // xi = 1/2 rounded: 2xi = 2, candidate space 2^12
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<F2mTower::Elem> r(6);
    for (auto& x : r) x = T.random(rng);
    auto listed = code.list_close_codewords(r, w);
    std::set<std::vector<DigitVec>> got;
    for (auto& [cw, msg] : listed) got.insert(digits_from_elems(T, cw));
    std::set<std::vector<DigitVec>> expect;
    for (std::uint64_t m0 = 0; m0 < 64; ++m0)
      for (std::uint64_t m1 = 0; m1 < 64; ++m1) {
        auto cw = code.encode({m0, m1});
        std::vector<F2mTower::Elem> diff(6);
        for (int j = 0; j < 6; ++j) diff[j] = T.sub(r[j], cw[j]);
        if (rank_qm(T, diff) <= w) expect.insert(digits_from_elems(T, cw));
      }
    if (got != expect) {
      c.pass = false;
      std::ostringstream os;
      os << "trial " << trial << ": listed " << got.size() << " codewords, codebook search found " << expect.size();
      c.detail = os.str();
      return c;
    }
  }
  return c;
}

Check guess_prob_vs_montecarlo(std::uint64_t seed, bool full) {
  Check c{"guess-success-prob-vs-montecarlo", "relative error < 5%", true, ""};
  struct Case {
    long n, k, delta, j, q;
  };
  // parameters where the intersection event is frequent enough to measure
  for (Case cs : {Case{6, 2, 2, 2, 2}, Case{8, 2, 3, 3, 2}, Case{6, 2, 2, 2, 3}}) {
    an::BigRat exact = an::guess_success_prob(cs.n, cs.k, cs.delta, cs.j, cs.q);
    double pe = exact.convert_to<double>();
    PrimeField F(static_cast<std::uint32_t>(cs.q));
    SeededRng rng(seed, static_cast<std::uint64_t>(cs.n * 100 + cs.j));
    // fixed row space of dimension j
    FqMat Brows = FqMat::random_full_rank(static_cast<std::size_t>(cs.j), static_cast<std::size_t>(cs.n), F, rng);
    const std::uint64_t draws = full ? 200000 : 60000;
    // success needs dim(U cap rowspace) >= ceil(j - (n-k)/2 + delta/2)
    long need2 = 2 * cs.j - (cs.n - cs.k) + cs.delta; // 2 * needed dimension
    std::uint64_t hit = 0;
    for (std::uint64_t i = 0; i < draws; ++i) {
      FqMat U = sample_grassmannian(static_cast<std::size_t>(cs.n), static_cast<std::size_t>(cs.delta),
                                    static_cast<std::uint32_t>(cs.q), rng);
      if (2 * static_cast<long>(intersection_dim(U, Brows, F)) >= need2) ++hit;
    }
    double pm = static_cast<double>(hit) / static_cast<double>(draws);
    if (std::fabs(pm - pe) > 0.05 * pe) {
      c.pass = false;
      std::ostringstream os;
      os << "n=" << cs.n << " k=" << cs.k << " delta=" << cs.delta << " j=" << cs.j << " q=" << cs.q << ": exact "
         << pe << ", measured " << pm;
      c.detail = os.str();
      return c;
    }
  }
  return c;
}

Check rank_count_partition(bool full) {
  Check c{"rank-count-partition-identity", "exact", true, ""};
  long mx = full ? 8 : 6;
  for (long q : {2L, 3L})
    for (long m = 1; m <= mx; ++m)
      for (long n = 1; n <= mx; ++n) {
        an::BigInt total = 0;
        for (long j = 0; j <= std::min(m, n); ++j) total += an::count_rank_vectors(m, n, j, q);
        an::BigInt full_space = 1;
        for (long i = 0; i < m * n; ++i) full_space *= q;
        if (total != full_space) {
          c.pass = false;
          c.detail = "partition failed at q=" + std::to_string(q) + " m=" + std::to_string(m) + " n=" + std::to_string(n);
          return c;
        }
      }
  return c;
}

Check bound_dominance_spot() {
  Check c{"probability-bound-dominance", "exact <= closed-form bound", true, ""};
  int points = 0;
  for (long q : {2L, 3L})
    for (long n : {8L, 12L, 16L})
      for (long k = 2; k < n; k += 4) {
        if ((n - k) % 2) continue;
        for (long w = (n - k) / 2 + 1; w <= n - k; ++w)
          for (long d = std::max(0L, 2 * w - (n - k)); d <= n - k; ++d) {
            an::ParamSet ps{q, n, n, k, w};
            an::BigRat exact = an::guess_success_prob(n, k, d, w, q);
            if (exact > 0 && an::log2_rat(exact) > an::guess_success_bound_log2(n, k, d, w, q) + 1e-9) {
              c.pass = false;
              c.detail = "weight-w guess bound violated";
              return c;
            }
            auto pl3 = an::iteration_success_prob(ps, d, an::SuccessModel::ErasureOnly);
            if (pl3 > 0 && an::log2_rat(pl3) > an::iteration_success_bound_log2(ps, d) + 1e-9) {
              c.pass = false;
              c.detail = "iteration success bound violated";
              return c;
            }
            ++points;
          }
      }
  c.detail = std::to_string(points) + " grid points";
  return c;
}

Check unique_decode_roundtrip(std::uint64_t seed) {
  Check c{"unique-decode-roundtrip", "100% of trials", true, ""};
  FieldTower tower(2, 12);
  const auto& T = tower.f2m();
  SeededRng rng(seed, 7);
  std::vector<F2mTower::Elem> g(12);
  for (;;) {
    for (auto& x : g) x = T.random(rng);
    if (rank_qm(T, g) == 12) break;
  }
  GabidulinCode<F2mTower> code(T, 4, g);
  for (int t = 0; t < 50; ++t) {
    auto inst = sample_instance(code, code.unique_radius(), rng);
    auto out = code.decode_unique(inst.r);
    bool good = out.ok();
    if (good)
      for (std::size_t i = 0; i < 4; ++i) good = good && out.message[i] == inst.msg[i];
    if (!good) {
      c.pass = false;
      c.detail = "trial " + std::to_string(t) + " failed";
      return c;
    }
  }
  return c;
}

Check frobenius_homomorphism(std::uint64_t seed) {
  Check c{"frobenius-field-homomorphism", "exact, 1000 random pairs over F_2^24", true, ""};
  FieldTower tower(2, 24);
  const auto& T = tower.f2m();
  SeededRng rng(seed, 3);
  for (int i = 0; i < 1000; ++i) {
    auto x = T.random(rng), y = T.random(rng);
    if (T.frob(T.mul(x, y)) != T.mul(T.frob(x), T.frob(y)) || T.frob(T.add(x, y)) != T.add(T.frob(x), T.frob(y))) {
      c.pass = false;
      c.detail = "pair " + std::to_string(i);
      return c;
    }
  }
  return c;
}

Check uniformity_rank1(std::uint64_t seed) {
  Check c{"rank1-error-uniformity-chi2", "p > 0.001 at 1e5 draws", true, ""};
  FieldTower tower(2, 4);
  const auto& T = tower.f2m();
  SeededRng rng(seed, 11);
  std::map<std::vector<std::uint64_t>, std::uint64_t> buckets;
  const std::uint64_t draws = 100000;
  for (std::uint64_t i = 0; i < draws; ++i) {
    auto err = sample_error(T, 3, 1, rng);
    buckets[std::vector<std::uint64_t>(err.e.begin(), err.e.end())]++;
  }
  const double cells = 105.0; // (2^4-1)(2^3-1)/(2-1) rank-1 vectors
  if (buckets.size() != 105) {
    c.pass = false;
    c.detail = "support has " + std::to_string(buckets.size()) + " vectors, expected 105";
    return c;
  }
  double expect = draws / cells, chi2 = 0;
  for (auto& [_, cnt] : buckets) chi2 += (cnt - expect) * (cnt - expect) / expect;
  double p = chi2_survival(chi2, cells - 1);
  std::ostringstream os;
  os << "chi2=" << chi2 << " p=" << p;
  c.detail = os.str();
  c.pass = p > 0.001;
  return c;
}

Check uniformity_grassmannian(std::uint64_t seed) {
  Check c{"grassmannian-uniformity-chi2", "p > 0.001 at 1e5 draws, all n<=5, delta<=n, q in {2,3}", true, ""};
  for (std::uint32_t q : {2u, 3u}) {
    PrimeField F(q);
    for (std::size_t n = 1; n <= 5; ++n)
      for (std::size_t d = 1; d <= n; ++d) {
        an::BigInt cells_big = an::gaussian_binomial(static_cast<long>(n), static_cast<long>(d), q);
        double cells = cells_big.convert_to<double>();
        if (cells == 1.0) continue;
        SeededRng rng(seed, q * 1000 + n * 10 + d);
        std::map<DigitVec, std::uint64_t> buckets;
        const std::uint64_t draws = 100000;
        for (std::uint64_t i = 0; i < draws; ++i)
          buckets[subspace_canonical_label(sample_grassmannian(n, d, q, rng), F)]++;
        if (an::BigInt(buckets.size()) != cells_big) {
          c.pass = false;
          c.detail = "support mismatch at q=" + std::to_string(q) + " n=" + std::to_string(n) + " d=" + std::to_string(d);
          return c;
        }
        double expect = draws / cells, chi2 = 0;
        for (auto& [_, cnt] : buckets) chi2 += (cnt - expect) * (cnt - expect) / expect;
        double p = chi2_survival(chi2, cells - 1.0);
        if (p <= 0.001) {
          std::ostringstream os;
          os << "q=" << q << " n=" << n << " d=" << d << " chi2=" << chi2 << " p=" << p;
          c.pass = false;
          c.detail = os.str();
          return c;
        }
      }
  }
  return c;
}

Check determinism(std::uint64_t seed) {
  Check c{"seeded-determinism", "bit-identical records", true, ""};
  SimulationConfig cfg;
  cfg.params = an::ParamSet{2, 12, 12, 4, 5};
  cfg.delta = 2;
  cfg.trials = 400;
  cfg.seed = seed;
  cfg.workers = 1;
  auto a = run_simulation(cfg);
  cfg.workers = 3; // worker count must not change counts
  auto b = run_simulation(cfg);
  if (a.total_trials != b.total_trials || a.successes != b.successes) {
    c.pass = false;
    c.detail = "worker split changed the tallies";
  }
  return c;
}

} // namespace

std::vector<CheckResult> run(const Options& opt) {
  std::vector<CheckResult> out;
  out.push_back(gaussian_binomial_vs_enumeration(opt.full, opt.inject_failure));
  out.push_back(intersection_prob_vs_enumeration(opt.full));
  out.push_back(close_codewords_vs_codebook(opt.seed));
  out.push_back(guess_prob_vs_montecarlo(opt.seed, opt.full));
  out.push_back(rank_count_partition(opt.full));
  out.push_back(bound_dominance_spot());
  out.push_back(unique_decode_roundtrip(opt.seed));
  out.push_back(frobenius_homomorphism(opt.seed));
  out.push_back(determinism(opt.seed));
  if (opt.full) {
    out.push_back(uniformity_rank1(opt.seed));
    out.push_back(uniformity_grassmannian(opt.seed));
  }
  return out;
}

} // namespace rankdec::selftest
