#ifndef RANKDEC_RANDDEC_HPP
#define RANKDEC_RANDDEC_HPP

#include "channel.hpp"
#include "gabidulin.hpp"

namespace rankdec {

struct RandDecoderConfig {
  std::size_t delta = 0;        // dimension of the guessed row space
  std::uint64_t max_iter = 1;   // iteration budget
  std::size_t w = 0;            // target error weight

  void validate(std::size_t n, std::size_t k) const {
    if (delta > n - k) throw std::invalid_argument("guess dimension exceeds decoder capacity (delta > n - k)");
    if (max_iter < 1) throw std::invalid_argument("iteration budget must be at least 1");
    if (w > n) throw std::invalid_argument("target weight exceeds code length");
  }
};

template <class Tower>
struct RandDecodeReportT {
  DecodeOutcomeT<Tower> outcome;
  std::uint64_t iterations_used = 0;
  std::uint64_t trials_attempted = 0; // decoder invocations, incl. failures
};

// Column-erasure-aided randomized decoding: guess a delta-dimensional row
// space uniformly, hand it to the error-erasure decoder, accept any codeword
// within rank distance w of r. Every returned codeword satisfies the radius
// check by construction.
template <class Tower>
RandDecodeReportT<Tower> randomized_decode(const GabidulinCode<Tower>& code,
                                           const std::vector<typename Tower::Elem>& r,
                                           const RandDecoderConfig& cfg, SeededRng& rng) {
  const Tower& T = code.tower();
  cfg.validate(code.n(), code.k());
  RandDecodeReportT<Tower> rep;
  for (std::uint64_t it = 1; it <= cfg.max_iter; ++it) {
    FqMat B_C = sample_grassmannian(code.n(), cfg.delta, T.q(), rng);
    ++rep.trials_attempted;
    auto out = code.decode_error_erasure(r, B_C);
    if (out.ok() && out.residual_rank <= cfg.w) {
      rep.outcome = std::move(out);
      rep.iterations_used = it;
      return rep;
    }
  }
  rep.iterations_used = cfg.max_iter;
  return rep;
}

} // namespace rankdec

#endif
