#ifndef RANKDEC_INSTANCE_HPP
#define RANKDEC_INSTANCE_HPP

#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "gabidulin.hpp"
#include "rng.hpp"

namespace rankdec {

// Digit-level view of a decoding instance; the JSON schema of the toolkit.
// All extension-field values are arrays of m base-field digits, constant
// coefficient first.
struct InstanceData {
  std::uint32_t q = 2;
  unsigned m = 1;
  DigitVec modulus; // m+1 digits, monic
  std::size_t n = 0, k = 0;
  std::vector<DigitVec> g;
  std::vector<DigitVec> r;
  std::size_t w = 0;
  std::optional<std::vector<DigitVec>> msg;
  std::optional<std::vector<DigitVec>> e;
};

InstanceData parse_instance_json(const std::string& text);
std::string instance_to_json(const InstanceData& inst);

// Owns the field tower and the code built over it. Pinned in memory: the
// code keeps a pointer into the tower.
class CodeHandle {
public:
  static std::unique_ptr<CodeHandle> create(std::uint32_t q, unsigned m, DigitVec modulus, std::size_t k,
                                            const std::vector<DigitVec>& locator_digits);
  // random F_q-independent locators
  static std::unique_ptr<CodeHandle> create_random(std::uint32_t q, unsigned m, std::size_t n, std::size_t k,
                                                   SeededRng& rng);
  static std::unique_ptr<CodeHandle> from_instance(const InstanceData& inst);

  CodeHandle(const CodeHandle&) = delete;
  CodeHandle& operator=(const CodeHandle&) = delete;

  const FieldTower& tower() const { return tower_; }
  std::size_t n() const;
  std::size_t k() const;
  std::vector<DigitVec> locator_digits() const;

  template <class Fn>
  decltype(auto) with_code(Fn&& fn) const {
    return std::visit(std::forward<Fn>(fn), code_);
  }

private:
  CodeHandle(FieldTower tower, std::size_t k, const std::vector<DigitVec>& locator_digits);

  FieldTower tower_;
  std::variant<GabidulinCode<F2mTower>, GabidulinCode<FqmTower>> code_;
};

// digit <-> element conversion helpers
template <class Tower>
std::vector<typename Tower::Elem> elems_from_digits(const Tower& T, const std::vector<DigitVec>& v) {
  std::vector<typename Tower::Elem> out;
  out.reserve(v.size());
  for (const auto& d : v) out.push_back(T.from_digits(d));
  return out;
}

template <class Tower>
std::vector<DigitVec> digits_from_elems(const Tower& T, const std::vector<typename Tower::Elem>& v) {
  std::vector<DigitVec> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(T.to_digits(e));
  return out;
}

// Fresh random instance (message + rank-w error + received word).
InstanceData sample_instance_data(std::uint32_t q, unsigned m, std::size_t n, std::size_t k, std::size_t w,
                                  std::uint64_t seed);

struct DecodeRequest {
  std::optional<std::size_t> w;     // default: the instance's w
  std::optional<long> delta;        // default: auto (work-factor minimizer)
  std::uint64_t max_iter = 0;       // 0 = auto (20 / success probability, capped)
  std::uint64_t seed = 0;
};

// Runs the randomized decoder on an instance; returns the outcome JSON.
// ok is set when a codeword within radius w was found.
std::string decode_instance_json(const InstanceData& inst, const DecodeRequest& req, bool* ok);

} // namespace rankdec

#endif
