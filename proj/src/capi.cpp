#include "rankdec.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "analysis.hpp"
#include "channel.hpp"
#include "instance.hpp"
#include "randdec.hpp"
#include "selftest.hpp"
#include "simulate.hpp"

using nlohmann::json;
namespace an = rankdec::analysis;

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(const std::string& msg) { g_last_error = msg; }

rd_status classify(const std::exception& e) {
  if (dynamic_cast<const rankdec::CapExceeded*>(&e)) return RD_CAP_EXCEEDED;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return RD_INVALID_ARGUMENT;
  if (dynamic_cast<const json::exception*>(&e)) return RD_PARSE_ERROR;
  return RD_INTERNAL_ERROR;
}

template <class Fn>
char* guarded(Fn&& fn, rd_status* status = nullptr) {
  try {
    std::string out = fn();
    if (status) *status = RD_OK;
    return dup_string(out);
  } catch (const std::exception& e) {
    set_error(e.what());
    if (status) *status = classify(e);
    return nullptr;
  }
}

an::ParamSet params_from_json(const json& j) {
  an::ParamSet ps;
  ps.q = j.at("q").get<long>();
  ps.m = j.at("m").get<long>();
  ps.n = j.at("n").get<long>();
  ps.k = j.at("k").get<long>();
  ps.w = j.at("w").get<long>();
  return ps;
}

} // namespace

struct rd_code {
  std::unique_ptr<rankdec::CodeHandle> handle;
};

extern "C" {

const char* rd_version(void) { return "rankdec 1.0.0"; }

const char* rd_last_error(void) { return g_last_error.c_str(); }

void rd_string_free(char* s) { std::free(s); }

char* rd_analyze_json(const char* params_json, const char* options_json) {
  return guarded([&]() -> std::string {
    if (!params_json) throw std::invalid_argument("params_json is null");
    json pj = json::parse(params_json);
    an::ParamSet ps = params_from_json(pj);
    an::ReportOptions opt;
    std::string format = "json";
    if (options_json && *options_json) {
      json oj = json::parse(options_json);
      if (oj.contains("poly_factor")) opt.include_poly = oj["poly_factor"].get<bool>();
      format = oj.value("format", "json");
    }
    auto rep = an::report(ps, opt);
    if (format == "json") return an::report_to_json(rep);
    if (format == "csv") return an::report_to_csv_header() + "\n" + an::report_to_csv(rep);
    if (format == "table") return an::report_to_table(rep);
    throw std::invalid_argument("format must be json, csv or table");
  });
}

char* rd_simulate_json(const char* config_json) {
  return guarded([&]() -> std::string {
    if (!config_json) throw std::invalid_argument("config_json is null");
    json cj = json::parse(config_json);
    rankdec::SimulationConfig cfg;
    cfg.params = params_from_json(cj);
    cfg.delta = cj.value("delta", -1L);
    cfg.trials = cj.value("trials", 0ULL);
    cfg.max_iter = cj.value("max_iter", 0ULL);
    cfg.seed = cj.value("seed", 0ULL);
    cfg.workers = cj.value("workers", 1u);
    std::string mode = cj.value("mode", "per-guess");
    if (mode == "per-guess")
      cfg.mode = rankdec::SimMode::PerGuess;
    else if (mode == "geometric")
      cfg.mode = rankdec::SimMode::Geometric;
    else
      throw std::invalid_argument("mode must be 'per-guess' or 'geometric'");
    std::string format = cj.value("format", "json");
    auto rec = rankdec::run_simulation(cfg);
    if (format == "json") return rankdec::simulation_to_json(rec);
    if (format == "csv") return rankdec::simulation_csv_header() + "\n" + rankdec::simulation_to_csv(rec);
    if (format == "table") return rankdec::simulation_to_table(rec);
    throw std::invalid_argument("format must be json, csv or table");
  });
}

char* rd_make_instance_json(const char* params_json) {
  return guarded([&]() -> std::string {
    if (!params_json) throw std::invalid_argument("params_json is null");
    json pj = json::parse(params_json);
    an::ParamSet ps = params_from_json(pj);
    ps.validate();
    std::uint64_t seed = pj.value("seed", 0ULL);
    auto inst = rankdec::sample_instance_data(static_cast<std::uint32_t>(ps.q), static_cast<unsigned>(ps.m),
                                              static_cast<std::size_t>(ps.n), static_cast<std::size_t>(ps.k),
                                              static_cast<std::size_t>(ps.w), seed);
    return rankdec::instance_to_json(inst);
  });
}

char* rd_decode_json(const char* instance_json, const char* options_json, rd_status* status) {
  try {
    if (!instance_json) throw std::invalid_argument("instance_json is null");
    auto inst = rankdec::parse_instance_json(instance_json);
    rankdec::DecodeRequest req;
    if (options_json && *options_json) {
      json oj = json::parse(options_json);
      if (oj.contains("w") && !oj["w"].is_null()) req.w = oj["w"].get<std::size_t>();
      if (oj.contains("delta") && !oj["delta"].is_null()) {
        long d = oj["delta"].get<long>();
        if (d >= 0) req.delta = d;
      }
      req.max_iter = oj.value("max_iter", 0ULL);
      req.seed = oj.value("seed", 0ULL);
    }
    bool ok = false;
    std::string out = rankdec::decode_instance_json(inst, req, &ok);
    if (!ok) g_last_error = "decoder exhausted its iteration budget";
    if (status) *status = ok ? RD_OK : RD_DECODE_FAILURE;
    return dup_string(out);
  } catch (const std::exception& e) {
    set_error(e.what());
    if (status) *status = classify(e);
    return nullptr;
  }
}

int rd_selftest(int level, int inject_failure, char** report_json) {
  try {
    rankdec::selftest::Options opt;
    opt.full = level > 0;
    opt.inject_failure = inject_failure != 0;
    auto results = rankdec::selftest::run(opt);
    int failed = 0;
    std::string text;
    for (const auto& r : results) {
      text += (r.pass ? "[PASS] " : "[FAIL] ");
      text += r.name + " (" + r.tolerance + ")";
      if (!r.detail.empty()) text += ": " + r.detail;
      text += "\n";
      if (!r.pass) ++failed;
    }
    if (report_json) {
      json j;
      j["failed"] = failed;
      j["total"] = results.size();
      j["text"] = text;
      *report_json = dup_string(j.dump(2));
    }
    return failed;
  } catch (const std::exception& e) {
    set_error(e.what());
    return -1;
  }
}

rd_code* rd_code_create_json(const char* json_text) {
  try {
    if (!json_text) throw std::invalid_argument("json_text is null");
    json j = json::parse(json_text);
    std::unique_ptr<rankdec::CodeHandle> handle;
    if (j.contains("g")) {
      // accept either a bare code description or a full instance
      std::uint32_t q = j.at("q").get<std::uint32_t>();
      unsigned m = j.at("m").get<unsigned>();
      std::size_t k = j.at("k").get<std::size_t>();
      rankdec::DigitVec modulus;
      if (j.contains("modulus")) modulus = j["modulus"].get<rankdec::DigitVec>();
      std::vector<rankdec::DigitVec> g;
      for (const auto& row : j.at("g")) g.push_back(row.get<rankdec::DigitVec>());
      handle = rankdec::CodeHandle::create(q, m, std::move(modulus), k, g);
    } else {
      std::uint32_t q = j.at("q").get<std::uint32_t>();
      unsigned m = j.at("m").get<unsigned>();
      std::size_t n = j.at("n").get<std::size_t>();
      std::size_t k = j.at("k").get<std::size_t>();
      rankdec::SeededRng rng(j.value("seed", 0ULL), 0x636f6465ULL);
      handle = rankdec::CodeHandle::create_random(q, m, n, k, rng);
    }
    auto* out = new rd_code{std::move(handle)};
    return out;
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

void rd_code_destroy(rd_code* code) { delete code; }

int rd_code_length(const rd_code* code) { return code ? static_cast<int>(code->handle->n()) : -1; }
int rd_code_dimension(const rd_code* code) { return code ? static_cast<int>(code->handle->k()) : -1; }

char* rd_code_encode_json(const rd_code* code, const char* message_json) {
  return guarded([&]() -> std::string {
    if (!code || !message_json) throw std::invalid_argument("null argument");
    json mj = json::parse(message_json);
    std::vector<rankdec::DigitVec> msg;
    for (const auto& row : mj) msg.push_back(row.get<rankdec::DigitVec>());
    return code->handle->with_code([&](const auto& c) {
      auto cw = c.encode(rankdec::elems_from_digits(c.tower(), msg));
      json out = json::array();
      for (const auto& d : rankdec::digits_from_elems(c.tower(), cw)) out.push_back(d);
      return out.dump();
    });
  });
}

char* rd_code_decode_json(const rd_code* code, const char* request_json, rd_status* status) {
  try {
    if (!code || !request_json) throw std::invalid_argument("null argument");
    json rj = json::parse(request_json);
    std::vector<rankdec::DigitVec> r;
    for (const auto& row : rj.at("r")) r.push_back(row.get<rankdec::DigitVec>());
    rankdec::InstanceData inst;
    inst.q = static_cast<std::uint32_t>(code->handle->tower().q());
    inst.m = code->handle->tower().m();
    inst.modulus = code->handle->tower().modulus();
    inst.n = code->handle->n();
    inst.k = code->handle->k();
    inst.g = code->handle->locator_digits();
    inst.r = std::move(r);
    inst.w = rj.value("w", 0ULL);
    rankdec::DecodeRequest req;
    req.w = inst.w;
    if (rj.contains("delta") && !rj["delta"].is_null()) {
      long d = rj["delta"].get<long>();
      if (d >= 0) req.delta = d;
    }
    req.max_iter = rj.value("max_iter", 0ULL);
    req.seed = rj.value("seed", 0ULL);
    bool ok = false;
    std::string out = rankdec::decode_instance_json(inst, req, &ok);
    if (!ok) g_last_error = "decoder exhausted its iteration budget";
    if (status) *status = ok ? RD_OK : RD_DECODE_FAILURE;
    return dup_string(out);
  } catch (const std::exception& e) {
    set_error(e.what());
    if (status) *status = classify(e);
    return nullptr;
  }
}

char* rd_code_list_close_json(const rd_code* code, const char* request_json) {
  return guarded([&]() -> std::string {
    if (!code || !request_json) throw std::invalid_argument("null argument");
    json rj = json::parse(request_json);
    std::vector<rankdec::DigitVec> r;
    for (const auto& row : rj.at("r")) r.push_back(row.get<rankdec::DigitVec>());
    std::size_t w = rj.at("w").get<std::size_t>();
    std::uint64_t cap = rj.value("cap", 1ULL << 24);
    return code->handle->with_code([&](const auto& c) {
      auto list = c.list_close_codewords(rankdec::elems_from_digits(c.tower(), r), w, cap);
      json out;
      out["count"] = list.size();
      json arr = json::array();
      for (const auto& [cw, msg] : list) {
        json item;
        json cwj = json::array(), mj = json::array();
        for (const auto& d : rankdec::digits_from_elems(c.tower(), cw)) cwj.push_back(d);
        for (const auto& d : rankdec::digits_from_elems(c.tower(), msg)) mj.push_back(d);
        item["codeword"] = cwj;
        item["message"] = mj;
        arr.push_back(item);
      }
      out["codewords"] = arr;
      return out.dump(2);
    });
  });
}

} // extern "C"
