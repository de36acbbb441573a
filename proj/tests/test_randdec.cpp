#include <doctest.h>

#include "analysis.hpp"
#include "randdec.hpp"
#include "selftest.hpp"

using namespace rankdec;
namespace an = rankdec::analysis;

namespace {

GabidulinCode<F2mTower> make_code(const F2mTower& T, std::size_t n, std::size_t k, SeededRng& rng) {
  std::vector<std::uint64_t> g(n);
  for (;;) {
    for (auto& x : g) x = T.random(rng);
    if (rank_qm(T, g) == n) break;
  }
  return GabidulinCode<F2mTower>(T, k, g);
}

} // namespace

TEST_CASE("config validation") {
  RandDecoderConfig cfg;
  cfg.delta = 9;
  CHECK_THROWS_AS(cfg.validate(24, 16), std::invalid_argument);
  cfg.delta = 4;
  cfg.max_iter = 0;
  CHECK_THROWS_AS(cfg.validate(24, 16), std::invalid_argument);
  cfg.max_iter = 1;
  CHECK_NOTHROW(cfg.validate(24, 16));
}

TEST_CASE("degenerate runs succeed on the first iteration") {
  FieldTower tower(2, 16);
  const auto& T = tower.f2m();
  SeededRng rng(1, 0);
  auto code = make_code(T, 12, 4, rng);
  SUBCASE("within the unique radius with delta = 0") {
    auto inst = sample_instance(code, 4, rng);
    RandDecoderConfig cfg{0, 5, 4};
    auto rep = randomized_decode(code, inst.r, cfg, rng);
    REQUIRE(rep.outcome.ok());
    CHECK(rep.iterations_used == 1);
    CHECK(rep.outcome.message == inst.msg);
  }
  SUBCASE("received word already a codeword, w = 0") {
    auto c = code.encode(sample_message(T, 4, rng));
    RandDecoderConfig cfg{0, 3, 0};
    auto rep = randomized_decode(code, c, cfg, rng);
    REQUIRE(rep.outcome.ok());
    CHECK(rep.iterations_used == 1);
    CHECK(rep.outcome.codeword == c);
    CHECK(rep.outcome.residual_rank == 0);
  }
}

TEST_CASE("beyond-radius decoding finds a codeword within the target weight") {
  // n=8, k=2: unique radius 3; w=4 with delta=2 succeeds about once per 90
  // guesses, so a few thousand iterations make failure vanishingly unlikely
  FieldTower tower(2, 8);
  const auto& T = tower.f2m();
  SeededRng rng(2, 0);
  auto code = make_code(T, 8, 2, rng);
  an::ParamSet ps{2, 8, 8, 2, 4};
  long delta = an::choose_delta(ps);
  CHECK(delta >= 2);

  int found = 0;
  std::uint64_t trials_total = 0;
  for (int t = 0; t < 10; ++t) {
    auto inst = sample_instance(code, 4, rng);
    RandDecoderConfig cfg{static_cast<std::size_t>(delta), 20000, 4};
    auto rep = randomized_decode(code, inst.r, cfg, rng);
    if (rep.outcome.ok()) {
      ++found;
      trials_total += rep.iterations_used;
      // soundness: the returned codeword really is within the radius
      std::vector<std::uint64_t> diff(8);
      for (int j = 0; j < 8; ++j) diff[j] = inst.r[j] ^ rep.outcome.codeword[j];
      CHECK(rank_qm(T, diff) <= 4);
      CHECK(rep.outcome.codeword == code.encode(rep.outcome.message));
    }
  }
  CHECK(found == 10);
  CHECK(trials_total > 10); // genuinely beyond the unique radius: retries happen
}

TEST_CASE("failure is reported after the iteration budget") {
  FieldTower tower(2, 12);
  const auto& T = tower.f2m();
  SeededRng rng(3, 0);
  auto code = make_code(T, 12, 4, rng);
  auto inst = sample_instance(code, 6, rng); // rank-6 error, target w = 2: hopeless
  RandDecoderConfig cfg{0, 7, 2};
  auto rep = randomized_decode(code, inst.r, cfg, rng);
  CHECK(!rep.outcome.ok());
  CHECK(rep.iterations_used == 7);
  CHECK(rep.trials_attempted == 7);
}

TEST_CASE("exhaustive guess sweep: decoding the true message happens exactly on "
          "the guesses meeting the intersection condition") {
  // n=6, k=2, w=2, delta=2: run the erasure decoder for every one of the
  // [6 choose 2]_2 = 651 possible guesses. Success in reaching the true
  // message must coincide with 2(w - eps) + delta <= n - k, and the success
  // count must equal the numerator of the exact formula.
  FieldTower tower(2, 8);
  const auto& T = tower.f2m();
  PrimeField F(2);
  SeededRng rng(8, 0);
  auto code = make_code(T, 6, 2, rng);
  for (int trial = 0; trial < 3; ++trial) {
    auto inst = sample_instance(code, 2, rng);
    auto guesses = selftest::enumerate_subspaces(6, 2, F);
    REQUIRE(guesses.size() == 651);
    long successes = 0;
    for (const auto& U : guesses) {
      std::size_t eps = selftest::intersection_dim(U, inst.err.B, F);
      bool predicted = 2 * (2 - eps) + 2 <= 4; // eps >= 1
      auto out = code.decode_error_erasure(inst.r, U);
      bool got = out.ok() && out.message == inst.msg;
      CHECK(got == predicted);
      if (got) ++successes;
    }
    // 651 * P_{6,2,2,2} = 91
    an::BigRat p = an::guess_success_prob(6, 2, 2, 2, 2);
    CHECK(an::BigRat(successes, 651) == p);
  }
}

TEST_CASE("per-guess success rate tracks the exact model at small parameters") {
  FieldTower tower(2, 8);
  const auto& T = tower.f2m();
  SeededRng rng(4, 0);
  auto code = make_code(T, 8, 2, rng);
  an::ParamSet ps{2, 8, 8, 2, 4};
  const long delta = 2;
  double p_exact =
      an::iteration_success_prob(ps, delta, an::SuccessModel::ErasureOnly).convert_to<double>();
  const int trials = 20000;
  int hits = 0;
  for (int i = 0; i < trials; ++i) {
    SeededRng trng(99, static_cast<std::uint64_t>(i));
    auto inst = sample_instance(code, 4, trng);
    auto U = sample_grassmannian(8, delta, 2, trng);
    auto out = code.decode_error_erasure(inst.r, U);
    if (out.ok() && out.residual_rank <= 4) ++hits;
  }
  double p_hat = static_cast<double>(hits) / trials;
  // ~230 expected hits; 15% tolerance is ~2.3 sigma
  CHECK(p_hat == doctest::Approx(p_exact).epsilon(0.15));
}
