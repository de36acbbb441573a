#include <doctest.h>

#include "channel.hpp"
#include "gabidulin.hpp"
#include "linpoly.hpp"

using namespace rankdec;

namespace {

std::vector<std::uint64_t> random_locators(const F2mTower& T, std::size_t n, SeededRng& rng) {
  std::vector<std::uint64_t> g(n);
  for (;;) {
    for (auto& x : g) x = T.random(rng);
    if (rank_qm(T, g) == n) return g;
  }
}

} // namespace

TEST_CASE("construction rejects bad parameters") {
  FieldTower tower(2, 6);
  const auto& T = tower.f2m();
  SeededRng rng(1, 0);
  auto g = random_locators(T, 6, rng);
  CHECK_THROWS_AS(GabidulinCode<F2mTower>(T, 0, g), std::invalid_argument);
  CHECK_THROWS_AS(GabidulinCode<F2mTower>(T, 7, g), std::invalid_argument);
  auto bad = g;
  bad[1] = bad[0]; // dependent locators
  CHECK_THROWS_AS(GabidulinCode<F2mTower>(T, 2, bad), std::invalid_argument);
  FieldTower small(2, 4);
  SeededRng rng2(2, 0);
  auto g2 = random_locators(small.f2m(), 4, rng2);
  CHECK_NOTHROW(GabidulinCode<F2mTower>(small.f2m(), 2, g2));
}

TEST_CASE("generator matrix is the Moore matrix of the locators") {
  FieldTower tower(2, 8);
  const auto& T = tower.f2m();
  SeededRng rng(3, 0);
  auto g = random_locators(T, 6, rng);
  SUBCASE("k = 1 gives a single row equal to g") {
    GabidulinCode<F2mTower> code(T, 1, g);
    auto G = code.generator_matrix();
    REQUIRE(G.rows() == 1);
    for (std::size_t j = 0; j < 6; ++j) CHECK(G.at(0, j) == g[j]);
  }
  SUBCASE("each row is the entry-wise frobenius of the previous") {
    GabidulinCode<F2mTower> code(T, 4, g);
    auto G = code.generator_matrix();
    for (std::size_t i = 1; i < 4; ++i)
      for (std::size_t j = 0; j < 6; ++j) CHECK(G.at(i, j) == T.frob(G.at(i - 1, j)));
    CHECK(G.rank() == 4);
  }
  SUBCASE("smallest full-length case: q=2, m=n=4, k=2 has rank 2") {
    FieldTower t4(2, 4);
    SeededRng r4(9, 0);
    std::vector<std::uint64_t> g4(4);
    for (;;) {
      for (auto& x : g4) x = t4.f2m().random(r4);
      if (rank_qm(t4.f2m(), g4) == 4) break;
    }
    GabidulinCode<F2mTower> code4(t4.f2m(), 2, g4);
    CHECK(code4.generator_matrix().rank() == 2);
  }
}

TEST_CASE("encode matches linearized-polynomial evaluation at the locators") {
  FieldTower tower(2, 10);
  const auto& T = tower.f2m();
  SeededRng rng(4, 0);
  auto g = random_locators(T, 8, rng);
  GabidulinCode<F2mTower> code(T, 3, g);
  SUBCASE("zero message encodes to zero") {
    auto c = code.encode({0, 0, 0});
    for (auto x : c) CHECK(x == 0);
  }
  SUBCASE("unit message reproduces the locators") {
    auto c = code.encode({T.one(), 0, 0});
    CHECK(c == g);
  }
  SUBCASE("random messages agree with the evaluation oracle") {
    for (int t = 0; t < 50; ++t) {
      std::vector<std::uint64_t> msg(3);
      for (auto& x : msg) x = T.random(rng);
      auto c = code.encode(msg);
      LinearizedPoly<F2mTower> f(T, msg);
      for (std::size_t j = 0; j < 8; ++j) CHECK(c[j] == f.eval(g[j]));
    }
  }
}

TEST_CASE("tiny code is MRD: every nonzero codeword has rank >= n-k+1") {
  FieldTower tower(2, 6);
  const auto& T = tower.f2m();
  SeededRng rng(5, 0);
  auto g = random_locators(T, 6, rng);
  GabidulinCode<F2mTower> code(T, 2, g);
  for (std::uint64_t m0 = 0; m0 < 64; ++m0)
    for (std::uint64_t m1 = 0; m1 < 64; ++m1) {
      if (!m0 && !m1) continue;
      auto c = code.encode({m0, m1});
      CHECK(rank_qm(T, c) >= 5);
    }
}

TEST_CASE("recover_message") {
  FieldTower tower(2, 10);
  const auto& T = tower.f2m();
  SeededRng rng(6, 0);
  auto g = random_locators(T, 8, rng);
  GabidulinCode<F2mTower> code(T, 3, g);
  SUBCASE("round trip on zero and unit messages") {
    CHECK(code.recover_message(code.encode({0, 0, 0})) == std::vector<std::uint64_t>{0, 0, 0});
    std::vector<std::uint64_t> e1{T.one(), 0, 0};
    CHECK(code.recover_message(code.encode(e1)) == e1);
  }
  SUBCASE("round trip on random messages") {
    for (int t = 0; t < 30; ++t) {
      std::vector<std::uint64_t> msg(3);
      for (auto& x : msg) x = T.random(rng);
      CHECK(code.recover_message(code.encode(msg)) == msg);
    }
  }
  SUBCASE("non-codewords are a contract fault") {
    auto c = code.encode({1, 2, 3});
    c[7] ^= 1;
    CHECK_THROWS_AS(code.recover_message(c), std::invalid_argument);
  }
}

TEST_CASE("unique decoding within floor((n-k)/2)") {
  FieldTower tower(2, 24);
  const auto& T = tower.f2m();
  SeededRng rng(7, 0);
  auto g = random_locators(T, 24, rng);
  GabidulinCode<F2mTower> code(T, 16, g);
  SUBCASE("zero error") {
    auto inst = sample_instance(code, 0, rng);
    auto out = code.decode_unique(inst.r);
    REQUIRE(out.ok());
    CHECK(out.message == inst.msg);
    CHECK(out.residual_rank == 0);
  }
  SUBCASE("200 random errors at the full radius") {
    for (int t = 0; t < 200; ++t) {
      auto inst = sample_instance(code, code.unique_radius(), rng);
      auto out = code.decode_unique(inst.r);
      REQUIRE(out.ok());
      CHECK(out.message == inst.msg);
      CHECK(out.residual_rank == code.unique_radius());
      CHECK(out.codeword == code.encode(out.message));
    }
  }
}

TEST_CASE("decode failure when no codeword is within the radius") {
  FieldTower tower(2, 6);
  const auto& T = tower.f2m();
  SeededRng rng(8, 0);
  auto g = random_locators(T, 6, rng);
  GabidulinCode<F2mTower> code(T, 2, g);
  // find a received word whose distance to the code exceeds the radius, by
  // exhaustive search over the tiny codebook
  int checked = 0;
  for (int attempt = 0; attempt < 200 && checked < 5; ++attempt) {
    std::vector<std::uint64_t> r(6);
    for (auto& x : r) x = T.random(rng);
    bool any_close = false;
    for (std::uint64_t m0 = 0; m0 < 64 && !any_close; ++m0)
      for (std::uint64_t m1 = 0; m1 < 64; ++m1) {
        auto c = code.encode({m0, m1});
        std::vector<std::uint64_t> diff(6);
        for (int j = 0; j < 6; ++j) diff[j] = r[j] ^ c[j];
        if (rank_qm(T, diff) <= code.unique_radius()) {
          any_close = true;
          break;
        }
      }
    if (any_close) continue;
    ++checked;
    CHECK(!code.decode_unique(r).ok());
  }
  CHECK(checked > 0);
}

TEST_CASE("error and column-erasure decoding") {
  FieldTower tower(2, 24);
  const auto& T = tower.f2m();
  PrimeField F(2);
  SeededRng rng(9, 0);
  auto g = random_locators(T, 24, rng);
  GabidulinCode<F2mTower> code(T, 16, g);

  SUBCASE("zero error with arbitrary valid erasures") {
    auto inst = sample_instance(code, 0, rng);
    for (std::size_t gamma : {1u, 4u, 8u}) {
      FqMat B_C = FqMat::random_full_rank(gamma, 24, F, rng);
      auto out = code.decode_error_erasure(inst.r, B_C);
      REQUIRE(out.ok());
      CHECK(out.message == inst.msg);
    }
  }

  SUBCASE("error entirely inside the guessed row space") {
    for (int t = 0; t < 30; ++t) {
      auto inst = sample_instance(code, 5, rng);
      // hand the decoder the exact row space: t = 0, gamma = 5
      auto out = code.decode_error_erasure(inst.r, inst.err.B);
      REQUIRE(out.ok());
      CHECK(out.message == inst.msg);
    }
  }

  SUBCASE("guess sharing exactly 4 of 6 error row-space dimensions succeeds") {
    // 2(w - eps) + delta <= n - k with w=6, delta=4 forces eps >= 4
    for (int t = 0; t < 30; ++t) {
      auto inst = sample_instance(code, 6, rng);
      FqMat B_C(4, 24);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 24; ++j) B_C.at(i, j) = inst.err.B.at(i, j);
      auto out = code.decode_error_erasure(inst.r, B_C);
      REQUIRE(out.ok());
      CHECK(out.message == inst.msg);
      CHECK(out.residual_rank == 6);
    }
  }

  SUBCASE("outputs are always internally consistent") {
    for (int t = 0; t < 50; ++t) {
      auto inst = sample_instance(code, 6, rng);
      FqMat U = sample_grassmannian(24, 4, 2, rng);
      auto out = code.decode_error_erasure(inst.r, U);
      if (out.ok()) {
        CHECK(out.codeword == code.encode(out.message));
        std::vector<std::uint64_t> diff(24);
        for (int j = 0; j < 24; ++j) diff[j] = inst.r[j] ^ out.codeword[j];
        CHECK(out.residual_rank == rank_qm(T, diff));
      }
    }
  }

  SUBCASE("contract faults") {
    auto inst = sample_instance(code, 2, rng);
    FqMat rank_deficient(2, 24);
    for (std::size_t j = 0; j < 24; ++j) {
      rank_deficient.at(0, j) = static_cast<digit_t>(rng.next_below(2));
      rank_deficient.at(1, j) = rank_deficient.at(0, j);
    }
    CHECK_THROWS_AS(code.decode_error_erasure(inst.r, rank_deficient), std::invalid_argument);
    CHECK_THROWS_AS(code.decode_error_erasure(inst.r, FqMat::random_full_rank(9, 24, F, rng)),
                    std::invalid_argument); // n - gamma < k
  }
}

TEST_CASE("puncturing keeps locators independent") {
  FieldTower tower(2, 16);
  const auto& T = tower.f2m();
  PrimeField F(2);
  SeededRng rng(10, 0);
  auto g = random_locators(T, 12, rng);
  for (int t = 0; t < 30; ++t) {
    std::size_t gamma = 1 + rng.next_below(6);
    FqMat B_C = FqMat::random_full_rank(gamma, 12, F, rng);
    auto P = B_C.kernel(F);
    std::vector<std::uint64_t> h(P.size(), 0);
    for (std::size_t j = 0; j < P.size(); ++j)
      for (std::size_t i = 0; i < 12; ++i)
        if (P[j][i]) h[j] ^= g[i];
    CHECK(rank_qm(T, h) == 12 - gamma);
  }
}

TEST_CASE("list decoding at tiny scale") {
  FieldTower tower(2, 8);
  const auto& T = tower.f2m();
  SeededRng rng(11, 0);
  auto g = random_locators(T, 8, rng);
  GabidulinCode<F2mTower> code(T, 2, g);

  SUBCASE("a codeword lists itself") {
    auto c = code.encode({5, 9});
    auto list = code.list_close_codewords(c, 4);
    bool found = false;
    for (auto& [cw, msg] : list) found = found || cw == c;
    CHECK(found);
  }
  SUBCASE("unique-radius list is a singleton") {
    auto inst = sample_instance(code, code.unique_radius(), rng);
    auto list = code.list_close_codewords(inst.r, code.unique_radius());
    REQUIRE(list.size() == 1);
    CHECK(list[0].second == inst.msg);
  }
  SUBCASE("matches exhaustive codebook search on random words") {
    for (int t = 0; t < 3; ++t) {
      std::vector<std::uint64_t> r(8);
      for (auto& x : r) x = T.random(rng);
      auto list = code.list_close_codewords(r, 4);
      std::set<std::vector<std::uint64_t>> got;
      for (auto& [cw, msg] : list) got.insert(cw);
      std::set<std::vector<std::uint64_t>> expect;
      for (std::uint64_t m0 = 0; m0 < 256; ++m0)
        for (std::uint64_t m1 = 0; m1 < 256; ++m1) {
          auto c = code.encode({m0, m1});
          std::vector<std::uint64_t> diff(8);
          for (int j = 0; j < 8; ++j) diff[j] = r[j] ^ c[j];
          if (rank_qm(T, diff) <= 4) expect.insert(c);
        }
      CHECK(got == expect);
    }
  }
  SUBCASE("cap guard") {
    std::vector<std::uint64_t> r(8);
    for (auto& x : r) x = T.random(rng);
    CHECK_THROWS_AS(code.list_close_codewords(r, 5, 1024), CapExceeded);
    CHECK_THROWS_AS(code.list_close_codewords(r, 1), std::invalid_argument); // below the radius
  }
  SUBCASE("whatever the erasure decoder returns is in the list") {
    int returned = 0;
    for (int t = 0; t < 40; ++t) {
      auto inst = sample_instance(code, 4, rng);
      FqMat U = sample_grassmannian(8, 2, 2, rng);
      auto out = code.decode_error_erasure(inst.r, U);
      if (!out.ok() || out.residual_rank > 4) continue;
      ++returned;
      auto list = code.list_close_codewords(inst.r, 4);
      bool member = false;
      for (auto& [cw, msg] : list) member = member || cw == out.codeword;
      CHECK(member);
    }
    CHECK(returned > 0);
  }
}

TEST_CASE("decoder on a generic odd-characteristic tower") {
  FieldTower tower(3, 6);
  const auto& T = tower.fqm();
  SeededRng rng(12, 0);
  std::vector<FqmTower::Elem> g(6);
  for (;;) {
    for (auto& x : g) x = T.random(rng);
    if (rank_qm(T, g) == 6) break;
  }
  GabidulinCode<FqmTower> code(T, 2, g);
  for (int t = 0; t < 10; ++t) {
    auto inst = sample_instance(code, 2, rng);
    auto out = code.decode_unique(inst.r);
    REQUIRE(out.ok());
    CHECK(out.message == inst.msg);
  }
}
