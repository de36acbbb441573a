// Acceptance suite: one self-contained check per criterion, each printing a
// single PASS/FAIL line. Exit code is the number of failed criteria.
//
//   acceptance [--criterion A1|A2|A3|A4|A5|A6|all] [--trials N]
//
// A2/A4 share one large per-guess simulation (>= 1e6 guesses by default).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "analysis.hpp"
#include "channel.hpp"
#include "gabidulin.hpp"
#include "instance.hpp"
#include "randdec.hpp"
#include "rankdec.h"
#include "selftest.hpp"
#include "simulate.hpp"

using namespace rankdec;
namespace an = rankdec::analysis;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void note(const std::string& s) {
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
};

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

std::string fmt(double v, int prec = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

// ---------------------------------------------------------------------- A1
Outcome run_a1() {
  Outcome out;
  struct Row {
    long q, m, n, k, w;
    double w_rd, w_key, w_comb_n, w_alg;
    long delta;
  };
  const Row rows[] = {
      {2, 24, 24, 16, 6, 19.65, 43.40, 38.99, 126.01, 4},
      {2, 64, 64, 32, 19, 257.20, 371.21, 571.21, 460.01, 6},
      {2, 80, 80, 40, 23, 401.85, 492.64, 897.93, 576.15, 6},
      {2, 96, 96, 48, 27, 578.38, 589.17, 1263.51, 694.93, 6},
      {2, 82, 82, 48, 20, 290.92, 410.92, 838.54, 504.70, 6},
  };
  double t0 = now_seconds();
  for (const auto& row : rows) {
    json params{{"q", row.q}, {"m", row.m}, {"n", row.n}, {"k", row.k}, {"w", row.w}};
    char* rep_text = rd_analyze_json(params.dump().c_str(), nullptr);
    if (!rep_text) {
      out.fail("analyze failed for m=" + std::to_string(row.m) + ": " + rd_last_error());
      continue;
    }
    json rep = json::parse(std::string(rep_text));
    rd_string_free(rep_text);
    auto l2 = rep["log2"];
    auto check = [&](const char* name, double got, double want, double tol) {
      if (std::abs(got - want) > tol)
        out.fail(std::string(name) + " m=" + std::to_string(row.m) + ": got " + fmt(got, 3) + ", table " + fmt(want));
    };
    check("W_RD", l2["W_RD"].get<double>(), row.w_rd, 0.05);
    check("W_Key", l2["W_Key"].get<double>(), row.w_key, 0.05);
    check("W_Comb/N", l2["W_Comb_over_N"].get<double>(), row.w_comb_n, 0.05);
    check("W_Alg", l2["W_Alg"].get<double>(), row.w_alg, 1.0);
    if (l2["delta_star"].get<long>() != row.delta)
      out.fail("delta* m=" + std::to_string(row.m) + ": got " + std::to_string(l2["delta_star"].get<long>()));
  }
  double dt = now_seconds() - t0;
  if (dt >= 10.0) out.fail("runtime " + fmt(dt, 1) + "s exceeds 10s");
  out.note("5 rows, " + fmt(dt, 2) + "s");
  return out;
}

// ---------------------------------------------------------------------- A2
struct SimShared {
  std::optional<SimulationRecord> rec;

  const SimulationRecord& get(std::uint64_t trials) {
    if (!rec) {
      SimulationConfig cfg;
      cfg.params = an::ParamSet{2, 24, 24, 16, 6};
      cfg.delta = 4;
      cfg.trials = trials;
      cfg.seed = 1;
      cfg.workers = std::max(1u, std::thread::hardware_concurrency());
      rec = run_simulation(cfg);
    }
    return *rec;
  }
};

Outcome run_a2(SimShared& shared, std::uint64_t trials) {
  Outcome out;
  const auto& rec = shared.get(trials);
  const double p0 = 4488.0 / 6844700.0;
  const double sigma = std::sqrt(p0 * (1.0 - p0) / static_cast<double>(rec.total_trials));
  const double lo = p0 - 3 * sigma, hi = p0 + 3 * sigma;
  if (rec.empirical_success_rate < lo || rec.empirical_success_rate > hi)
    out.fail("success rate " + fmt(rec.empirical_success_rate, 7) + " outside 3-sigma band [" + fmt(lo, 7) + ", " +
             fmt(hi, 7) + "]");
  if (!rec.empirical_log2_workfactor)
    out.fail("no successes recorded");
  else if (*rec.empirical_log2_workfactor < 19.3 || *rec.empirical_log2_workfactor > 20.2)
    out.fail("log2 work factor " + fmt(*rec.empirical_log2_workfactor) + " outside [19.3, 20.2]");
  out.note(std::to_string(rec.successes) + "/" + std::to_string(rec.total_trials) + " successes, W_Sim=2^" +
           (rec.empirical_log2_workfactor ? fmt(*rec.empirical_log2_workfactor) : "-") + ", " +
           fmt(rec.wall_seconds, 1) + "s");
  return out;
}

// ---------------------------------------------------------------------- A3
Outcome run_a3() {
  Outcome out;
  struct Case {
    long n, k, m, w, dr, dc;
    double want;
  };
  const Case cases[] = {
      {24, 16, 24, 6, 4, 0, 1.66e-22},
      {24, 16, 24, 6, 2, 2, 1.93e-22},
      {64, 32, 64, 19, 6, 0, 5.27e-82},
      {64, 32, 64, 19, 3, 3, 5.27e-82},
  };
  for (const auto& c : cases) {
    double got = an::joint_guess_success_prob(c.n, c.k, c.m, c.w, c.dr, c.dc, 2).convert_to<double>();
    double rel = std::abs(got / c.want - 1.0);
    if (rel > 0.01)
      out.fail("split (" + std::to_string(c.dr) + "," + std::to_string(c.dc) + "): got " + std::to_string(got) +
               ", expected ~" + std::to_string(c.want));
  }
  out.note("4 probabilities within 1%");
  return out;
}

// ---------------------------------------------------------------------- A4
Outcome run_a4(SimShared& shared, std::uint64_t trials) {
  Outcome out;

  // (a) exact intersection probability == Grassmannian enumeration,
  //     every (l <= 5, u, v, omega, q in {2,3})
  int combos = 0;
  for (long q : {2L, 3L}) {
    PrimeField F(static_cast<std::uint32_t>(q));
    for (long l = 1; l <= 5; ++l)
      for (long u = 0; u <= l; ++u) {
        FqMat U(static_cast<std::size_t>(u), static_cast<std::size_t>(l));
        for (long i = 0; i < u; ++i) U.at(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = 1;
        for (long v = 0; v <= l; ++v) {
          auto all_v = selftest::enumerate_subspaces(static_cast<std::size_t>(l), static_cast<std::size_t>(v), F);
          for (long omega = 0; omega <= std::min(u, v); ++omega) {
            an::BigInt hits = 0;
            for (const auto& V : all_v)
              if (static_cast<long>(selftest::intersection_dim(U, V, F)) >= omega) ++hits;
            if (an::intersection_prob_exact(l, u, v, omega, q) != an::BigRat(hits, an::gaussian_binomial(l, v, q))) {
              out.fail("enumeration mismatch at q=" + std::to_string(q) + " l=" + std::to_string(l) + " u=" +
                       std::to_string(u) + " v=" + std::to_string(v) + " omega=" + std::to_string(omega));
            }
            ++combos;
          }
        }
      }
  }
  out.note("(a) " + std::to_string(combos) + " enumeration combos");

  // (b) list decoder == exhaustive codebook search, 20 random received words
  {
    FieldTower tower(2, 8);
    const auto& T = tower.f2m();
    SeededRng rng(2024, 0);
    std::vector<std::uint64_t> g(8);
    for (;;) {
      for (auto& x : g) x = T.random(rng);
      if (rank_qm(T, g) == 8) break;
    }
    GabidulinCode<F2mTower> code(T, 2, g);
    std::vector<std::vector<std::uint64_t>> book;
    book.reserve(1 << 16);
    for (std::uint64_t m0 = 0; m0 < 256; ++m0)
      for (std::uint64_t m1 = 0; m1 < 256; ++m1) book.push_back(code.encode({m0, m1}));
    int mismatches = 0;
    for (int t = 0; t < 20; ++t) {
      std::vector<std::uint64_t> r(8);
      for (auto& x : r) x = T.random(rng);
      std::set<std::vector<std::uint64_t>> expect;
      std::vector<std::uint64_t> diff(8);
      for (const auto& c : book) {
        for (int j = 0; j < 8; ++j) diff[j] = r[j] ^ c[j];
        if (rank_qm(T, diff) <= 4) expect.insert(c);
      }
      std::set<std::vector<std::uint64_t>> got;
      for (auto& [cw, msg] : code.list_close_codewords(r, 4)) got.insert(cw);
      if (got != expect) ++mismatches;
    }
    if (mismatches) out.fail("(b) " + std::to_string(mismatches) + "/20 received words disagree with the codebook");
    out.note("(b) 20/20 codebook matches");
  }

  // (c) the exact intersection-condition model, decoder-free and end-to-end.
  // The measurable decoder-free check runs where the event is frequent; the
  // pinned row-1 parameters are validated end-to-end against the exact
  // per-iteration success sum (~6.5e-4 per guess).
  {
    struct Cond {
      long n, k, delta, j;
    };
    for (const Cond cs : {Cond{6, 2, 2, 2}, Cond{8, 2, 3, 3}}) {
      PrimeField F(2);
      SeededRng rng(31337, static_cast<std::uint64_t>(cs.n));
      FqMat B = FqMat::random_full_rank(static_cast<std::size_t>(cs.j), static_cast<std::size_t>(cs.n), F, rng);
      long need2 = 2 * cs.j - (cs.n - cs.k) + cs.delta;
      std::uint64_t hits = 0;
      const std::uint64_t draws = 1000000;
      for (std::uint64_t i = 0; i < draws; ++i) {
        FqMat U = sample_grassmannian(static_cast<std::size_t>(cs.n), static_cast<std::size_t>(cs.delta), 2, rng);
        if (2 * static_cast<long>(selftest::intersection_dim(U, B, F)) >= need2) ++hits;
      }
      double measured = static_cast<double>(hits) / static_cast<double>(draws);
      double exact = an::guess_success_prob(cs.n, cs.k, cs.delta, cs.j, 2).convert_to<double>();
      if (std::abs(measured / exact - 1.0) > 0.10)
        out.fail("(c) intersection MC at n=" + std::to_string(cs.n) + ": measured " + std::to_string(measured) +
                 " vs exact " + std::to_string(exact));
    }
    const auto& rec = shared.get(trials);
    double exact = an::iteration_success_prob(an::ParamSet{2, 24, 24, 16, 6}, 4, an::SuccessModel::ErasureOnly)
                       .convert_to<double>();
    double rel = std::abs(rec.empirical_success_rate / exact - 1.0);
    if (rel > 0.10)
      out.fail("(c) end-to-end rate " + fmt(rec.empirical_success_rate, 7) + " vs exact model " + fmt(exact, 7) +
               " (rel " + fmt(rel * 100, 1) + "%)");
    out.note("(c) decoder-free MC x2 and end-to-end rel err " + fmt(rel * 100, 1) + "%");
  }
  return out;
}

// ---------------------------------------------------------------------- A5
Outcome run_a5() {
  Outcome out;
  FieldTower tower(2, 24);
  const auto& T = tower.f2m();
  PrimeField F(2);
  SeededRng rng(5150, 0);
  std::vector<std::uint64_t> g(24);
  for (;;) {
    for (auto& x : g) x = T.random(rng);
    if (rank_qm(T, g) == 24) break;
  }
  GabidulinCode<F2mTower> code(T, 16, g);

  // (1) unique-radius decoding: 1000 random trials, 100% success
  int ok = 0;
  for (int t = 0; t < 1000; ++t) {
    std::size_t w = rng.next_below(code.unique_radius() + 1);
    auto inst = sample_instance(code, w, rng);
    auto res = code.decode_unique(inst.r);
    if (res.ok() && res.message == inst.msg && res.residual_rank == w) ++ok;
  }
  if (ok != 1000) out.fail("unique decoding: " + std::to_string(ok) + "/1000");
  out.note("unique decode 1000/1000");

  // (2) constructed erasure-aided instances with 2(w - eps) + delta <= n - k
  struct Shape {
    std::size_t w, eps, delta;
  };
  int built = 0, good = 0;
  for (const Shape s : {Shape{6, 4, 4}, Shape{6, 5, 5}, Shape{5, 3, 4}, Shape{8, 8, 8}, Shape{7, 6, 6}}) {
    for (int t = 0; t < 20; ++t) {
      auto inst = sample_instance(code, s.w, rng);
      // guess = eps rows of the true row space + (delta - eps) rows that are
      // independent of it, so the intersection is exactly eps-dimensional
      FqMat B_C(s.delta, 24);
      for (;;) {
        for (std::size_t i = 0; i < s.eps; ++i)
          for (std::size_t j = 0; j < 24; ++j) B_C.at(i, j) = inst.err.B.at(i, j);
        for (std::size_t i = s.eps; i < s.delta; ++i)
          for (std::size_t j = 0; j < 24; ++j) B_C.at(i, j) = static_cast<digit_t>(rng.next_below(2));
        if (B_C.rank(F) != s.delta) continue;
        FqMat stacked(s.w + s.delta - s.eps, 24);
        for (std::size_t i = 0; i < s.w; ++i)
          for (std::size_t j = 0; j < 24; ++j) stacked.at(i, j) = inst.err.B.at(i, j);
        for (std::size_t i = 0; i < s.delta - s.eps; ++i)
          for (std::size_t j = 0; j < 24; ++j) stacked.at(s.w + i, j) = B_C.at(s.eps + i, j);
        if (stacked.rank(F) == s.w + s.delta - s.eps) break; // intersection exactly eps
      }
      ++built;
      auto res = code.decode_error_erasure(inst.r, B_C);
      if (res.ok() && res.message == inst.msg) ++good;
    }
  }
  if (good != built) out.fail("erasure-aided: " + std::to_string(good) + "/" + std::to_string(built));
  out.note("erasure-aided " + std::to_string(good) + "/" + std::to_string(built));

  // (3) soundness sweep: whatever the decoder returns is never unsound
  int unsound = 0;
  const int sweeps = 10000;
  for (int t = 0; t < sweeps; ++t) {
    auto inst = sample_instance(code, 6, rng);
    FqMat U = sample_grassmannian(24, 4, 2, rng);
    auto res = code.decode_error_erasure(inst.r, U);
    if (res.ok()) {
      std::vector<std::uint64_t> diff(24);
      for (int j = 0; j < 24; ++j) diff[j] = inst.r[j] ^ res.codeword[j];
      if (rank_qm(T, diff) != res.residual_rank || res.codeword != code.encode(res.message)) ++unsound;
    }
  }
  if (unsound) out.fail(std::to_string(unsound) + " unsound outputs");
  out.note("0 unsound outputs in " + std::to_string(sweeps) + " sweeps");
  return out;
}

// ---------------------------------------------------------------------- A6
Outcome run_a6() {
  Outcome out;
  int points = 0;
  for (long q : {2L, 3L}) {
    for (long l = 2; l <= 6; l += 2)
      for (long u = 0; u <= l; ++u)
        for (long v = 0; v <= l; ++v)
          for (long omega = 1; omega <= std::min(u, v); ++omega) {
            auto ex = an::intersection_prob_exact(l, u, v, omega, q);
            if (ex > 0 && an::log2_rat(ex) > an::intersection_prob_bound_log2(l, u, v, omega, q) + 1e-9) {
              out.fail("intersection bound violated at l=" + std::to_string(l));
              ++points;
              continue;
            }
            ++points;
          }
    for (long n : {8L, 12L, 16L, 24L})
      for (long k = 2; k < n; k += 4) {
        if ((n - k) % 2) continue;
        for (long w = (n - k) / 2 + 1; w <= n - k; ++w)
          for (long d = std::max(0L, 2 * w - (n - k)); d <= n - k; ++d) {
            an::ParamSet ps{q, n, n, k, w};
            auto p2 = an::guess_success_prob(n, k, d, w, q);
            if (p2 > 0 && an::log2_rat(p2) > an::guess_success_bound_log2(n, k, d, w, q) + 1e-9)
              out.fail("single-guess bound violated at n=" + std::to_string(n) + " w=" + std::to_string(w));
            auto p3 = an::iteration_success_prob(ps, d, an::SuccessModel::ErasureOnly);
            if (p3 > 0 && an::log2_rat(p3) > an::iteration_success_bound_log2(ps, d) + 1e-9)
              out.fail("iteration bound violated at n=" + std::to_string(n) + " w=" + std::to_string(w));
            ++points;
          }
      }
  }
  if (points < 100) out.fail("grid too small: " + std::to_string(points));

  for (long q : {2L, 3L})
    for (long m = 1; m <= 8; ++m)
      for (long n = 1; n <= 8; ++n) {
        an::BigInt total = 0;
        for (long j = 0; j <= std::min(m, n); ++j) total += an::count_rank_vectors(m, n, j, q);
        an::BigInt expect = 1;
        for (long i = 0; i < m * n; ++i) expect *= q;
        if (total != expect) out.fail("partition identity failed at m=" + std::to_string(m) + " n=" + std::to_string(n));
      }
  out.note(std::to_string(points) + " bound points, partition identity m,n<=8");
  return out;
}

} // namespace

int main(int argc, char** argv) {
  std::string which = "all";
  std::uint64_t trials = 1000000;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--criterion") && i + 1 < argc)
      which = argv[++i];
    else if (!std::strcmp(argv[i], "--trials") && i + 1 < argc)
      trials = std::strtoull(argv[++i], nullptr, 10);
    else {
      std::fprintf(stderr, "usage: acceptance [--criterion A1..A6|all] [--trials N]\n");
      return 2;
    }
  }
  if (trials < 1000000) trials = 1000000; // the criterion demands >= 1e6

  SimShared shared;
  struct Entry {
    const char* id;
    const char* title;
  };
  const Entry entries[] = {
      {"A1", "analysis reproduces the published work-factor table (5 rows)"},
      {"A2", "simulation reproduces the published row-1 success rate"},
      {"A3", "joint row/column guessing probabilities (appendix examples)"},
      {"A4", "oracle equivalences (enumeration, codebook, Monte Carlo)"},
      {"A5", "decoder correctness and soundness"},
      {"A6", "bound dominance and partition identity"},
  };
  auto selected = [&](const char* id) {
    if (which == "all") return true;
    std::stringstream ss(which);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (tok == id) return true;
    return false;
  };
  int failures = 0;
  bool matched = false;
  for (const auto& e : entries) {
    if (!selected(e.id)) continue;
    matched = true;
    Outcome out;
    if (!std::strcmp(e.id, "A1")) out = run_a1();
    if (!std::strcmp(e.id, "A2")) out = run_a2(shared, trials);
    if (!std::strcmp(e.id, "A3")) out = run_a3();
    if (!std::strcmp(e.id, "A4")) out = run_a4(shared, trials);
    if (!std::strcmp(e.id, "A5")) out = run_a5();
    if (!std::strcmp(e.id, "A6")) out = run_a6();
    std::printf("[%s] %s - %s%s%s\n", out.pass ? "PASS" : "FAIL", e.id, e.title, out.detail.empty() ? "" : ": ",
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (!matched) {
    std::fprintf(stderr, "unknown criterion '%s'\n", which.c_str());
    return 2;
  }
  return failures;
}
