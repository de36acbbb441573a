#include "instance.hpp"

#include <json.hpp>

#include "analysis.hpp"
#include "channel.hpp"
#include "randdec.hpp"

namespace rankdec {

using nlohmann::json;

namespace {

std::vector<DigitVec> digit_rows(const json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string("instance field '") + what + "' must be an array");
  std::vector<DigitVec> out;
  for (const auto& row : j) {
    if (!row.is_array()) throw std::invalid_argument(std::string("entries of '") + what + "' must be digit arrays");
    DigitVec d;
    for (const auto& x : row) d.push_back(x.get<digit_t>());
    out.push_back(std::move(d));
  }
  return out;
}

json rows_to_json(const std::vector<DigitVec>& rows) {
  json j = json::array();
  for (const auto& r : rows) j.push_back(r);
  return j;
}

} // namespace

InstanceData parse_instance_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("instance is not valid JSON: ") + e.what());
  }
  InstanceData inst;
  try {
    inst.q = j.at("q").get<std::uint32_t>();
    inst.m = j.at("m").get<unsigned>();
    inst.modulus = j.at("modulus").get<DigitVec>();
    inst.n = j.at("n").get<std::size_t>();
    inst.k = j.at("k").get<std::size_t>();
    inst.g = digit_rows(j.at("g"), "g");
    inst.r = digit_rows(j.at("r"), "r");
    inst.w = j.at("w").get<std::size_t>();
    if (j.contains("msg") && !j["msg"].is_null()) inst.msg = digit_rows(j["msg"], "msg");
    if (j.contains("e") && !j["e"].is_null()) inst.e = digit_rows(j["e"], "e");
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed instance: ") + e.what());
  }
  if (inst.g.size() != inst.n) throw std::invalid_argument("instance: locator count does not match n");
  if (inst.r.size() != inst.n) throw std::invalid_argument("instance: received word length does not match n");
  if (inst.msg && inst.msg->size() != inst.k) throw std::invalid_argument("instance: message length does not match k");
  if (inst.e && inst.e->size() != inst.n) throw std::invalid_argument("instance: error length does not match n");
  return inst;
}

std::string instance_to_json(const InstanceData& inst) {
  json j;
  j["q"] = inst.q;
  j["m"] = inst.m;
  j["modulus"] = inst.modulus;
  j["n"] = inst.n;
  j["k"] = inst.k;
  j["g"] = rows_to_json(inst.g);
  j["r"] = rows_to_json(inst.r);
  j["w"] = inst.w;
  if (inst.msg) j["msg"] = rows_to_json(*inst.msg);
  if (inst.e) j["e"] = rows_to_json(*inst.e);
  return j.dump(2);
}

CodeHandle::CodeHandle(FieldTower tower, std::size_t k, const std::vector<DigitVec>& locator_digits)
    : tower_(std::move(tower)),
      code_(tower_.packed()
                ? decltype(code_){std::in_place_type<GabidulinCode<F2mTower>>, tower_.f2m(), k,
                                  elems_from_digits(tower_.f2m(), locator_digits)}
                : decltype(code_){std::in_place_type<GabidulinCode<FqmTower>>, tower_.fqm(), k,
                                  elems_from_digits(tower_.fqm(), locator_digits)}) {}

std::unique_ptr<CodeHandle> CodeHandle::create(std::uint32_t q, unsigned m, DigitVec modulus, std::size_t k,
                                               const std::vector<DigitVec>& locator_digits) {
  FieldTower tower = modulus.empty() ? FieldTower(q, m) : FieldTower(q, m, std::move(modulus));
  return std::unique_ptr<CodeHandle>(new CodeHandle(std::move(tower), k, locator_digits));
}

std::unique_ptr<CodeHandle> CodeHandle::create_random(std::uint32_t q, unsigned m, std::size_t n, std::size_t k,
                                                      SeededRng& rng) {
  FieldTower tower(q, m);
  std::vector<DigitVec> gd = tower.visit([&](const auto& T) {
    std::vector<typename std::decay_t<decltype(T)>::Elem> g(n);
    for (;;) {
      for (auto& x : g) x = T.random(rng);
      if (rank_qm(T, g) == n) break;
    }
    return digits_from_elems(T, g);
  });
  return std::unique_ptr<CodeHandle>(new CodeHandle(std::move(tower), k, gd));
}

std::unique_ptr<CodeHandle> CodeHandle::from_instance(const InstanceData& inst) {
  return create(inst.q, inst.m, inst.modulus, inst.k, inst.g);
}

std::size_t CodeHandle::n() const {
  return with_code([](const auto& c) { return c.n(); });
}
std::size_t CodeHandle::k() const {
  return with_code([](const auto& c) { return c.k(); });
}
std::vector<DigitVec> CodeHandle::locator_digits() const {
  return with_code([](const auto& c) { return digits_from_elems(c.tower(), c.locators()); });
}

InstanceData sample_instance_data(std::uint32_t q, unsigned m, std::size_t n, std::size_t k, std::size_t w,
                                  std::uint64_t seed) {
  SeededRng rng(seed, 0);
  auto handle = CodeHandle::create_random(q, m, n, k, rng);
  InstanceData inst;
  inst.q = q;
  inst.m = m;
  inst.modulus = handle->tower().modulus();
  inst.n = n;
  inst.k = k;
  inst.w = w;
  inst.g = handle->locator_digits();
  handle->with_code([&](const auto& code) {
    auto sampled = sample_instance(code, w, rng);
    const auto& T = code.tower();
    inst.r = digits_from_elems(T, sampled.r);
    inst.msg = digits_from_elems(T, sampled.msg);
    inst.e = digits_from_elems(T, sampled.err.e);
  });
  return inst;
}

std::string decode_instance_json(const InstanceData& inst, const DecodeRequest& req, bool* ok) {
  auto handle = CodeHandle::from_instance(inst);
  const std::size_t n = handle->n(), k = handle->k();
  std::size_t w = req.w.value_or(inst.w);
  if (w > n - k)
    throw std::invalid_argument("target weight exceeds n - k; any word is that close to a codeword");

  analysis::ParamSet ps{static_cast<long>(inst.q), static_cast<long>(inst.m), static_cast<long>(n),
                        static_cast<long>(k), static_cast<long>(w)};
  long delta = req.delta.value_or(-1);
  if (delta < 0) delta = analysis::choose_delta(ps);
  if (delta > static_cast<long>(n - k)) throw std::invalid_argument("delta exceeds decoder capacity n - k");

  std::uint64_t max_iter = req.max_iter;
  if (max_iter == 0) {
    if (2 * w <= n - k) {
      max_iter = 1;
    } else {
      // 20 expected successes' worth of guesses, capped
      double p_log2 = analysis::log2_rat(analysis::iteration_success_prob(ps, delta, analysis::SuccessModel::ErasureOnly));
      double it = std::log2(20.0) - p_log2;
      max_iter = it >= 31.0 ? (1ULL << 31) : static_cast<std::uint64_t>(std::ceil(std::exp2(it)));
      if (max_iter < 1) max_iter = 1;
    }
  }

  SeededRng rng(req.seed, 0);
  RandDecoderConfig cfg;
  cfg.delta = static_cast<std::size_t>(delta);
  cfg.w = w;
  cfg.max_iter = max_iter;

  json out;
  out["w"] = w;
  out["delta"] = delta;
  out["max_iter"] = max_iter;
  handle->with_code([&](const auto& code) {
    const auto& T = code.tower();
    auto r = elems_from_digits(T, inst.r);
    auto rep = randomized_decode(code, r, cfg, rng);
    out["iterations_used"] = rep.iterations_used;
    out["trials_attempted"] = rep.trials_attempted;
    if (rep.outcome.ok()) {
      out["status"] = "codeword";
      out["codeword"] = rows_to_json(digits_from_elems(T, rep.outcome.codeword));
      out["message"] = rows_to_json(digits_from_elems(T, rep.outcome.message));
      out["residual_rank"] = rep.outcome.residual_rank;
      if (ok) *ok = true;
    } else {
      out["status"] = "failure";
      if (ok) *ok = false;
    }
  });
  return out.dump(2);
}

} // namespace rankdec
