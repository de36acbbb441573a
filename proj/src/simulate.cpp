#include "simulate.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "channel.hpp"
#include "instance.hpp"
#include "randdec.hpp"

namespace rankdec {

namespace {

// stream index reserved for drawing the code itself; trials use 0,1,2,...
constexpr std::uint64_t kCodeStream = 0x636f6465ULL;

struct Tally {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
};

template <class Tower>
Tally per_guess_range(const GabidulinCode<Tower>& code, std::size_t w, std::size_t delta, std::uint64_t seed,
                      std::uint64_t lo, std::uint64_t hi) {
  Tally t;
  const std::size_t n = code.n();
  const std::uint32_t q = code.tower().q();
  for (std::uint64_t i = lo; i < hi; ++i) {
    SeededRng rng(seed, i);
    auto inst = sample_instance(code, w, rng);
    FqMat U = sample_grassmannian(n, delta, q, rng);
    auto out = code.decode_error_erasure(inst.r, U);
    ++t.trials;
    if (out.ok() && out.residual_rank <= w) ++t.successes;
  }
  return t;
}

template <class Tower>
Tally geometric_range(const GabidulinCode<Tower>& code, std::size_t w, std::size_t delta, std::uint64_t max_iter,
                      std::uint64_t seed, std::uint64_t lo, std::uint64_t hi) {
  Tally t;
  RandDecoderConfig cfg;
  cfg.delta = delta;
  cfg.w = w;
  cfg.max_iter = max_iter;
  for (std::uint64_t i = lo; i < hi; ++i) {
    SeededRng rng(seed, i);
    auto inst = sample_instance(code, w, rng);
    auto rep = randomized_decode(code, inst.r, cfg, rng);
    t.trials += rep.trials_attempted;
    if (rep.outcome.ok()) ++t.successes;
  }
  return t;
}

std::uint64_t auto_max_iter(const analysis::ParamSet& ps, long delta) {
  if (2 * ps.w <= ps.n - ps.k) return 1;
  double p_log2 =
      analysis::log2_rat(analysis::iteration_success_prob(ps, delta, analysis::SuccessModel::ErasureOnly));
  double it = std::log2(20.0) - p_log2;
  if (it >= 31.0) return 1ULL << 31;
  std::uint64_t v = static_cast<std::uint64_t>(std::ceil(std::exp2(it)));
  return v < 1 ? 1 : v;
}

const char* mode_name(SimMode m) { return m == SimMode::PerGuess ? "per-guess" : "geometric"; }

} // namespace

SimulationRecord run_simulation(const SimulationConfig& cfg) {
  cfg.params.validate();
  const auto& ps = cfg.params;
  long delta = cfg.delta;
  if (delta < 0) delta = analysis::choose_delta(ps);
  if (delta > ps.n - ps.k) throw std::invalid_argument("delta exceeds decoder capacity n - k");
  if (cfg.trials == 0) throw std::invalid_argument("trial count must be positive");
  unsigned workers = cfg.workers ? cfg.workers : 1;

  SimulationRecord rec;
  rec.params = ps;
  rec.delta = delta;
  rec.seed = cfg.seed;
  rec.workers = workers;
  rec.mode = cfg.mode;

  std::uint64_t max_iter = cfg.max_iter ? cfg.max_iter : auto_max_iter(ps, delta);

  SeededRng code_rng(cfg.seed, kCodeStream);
  auto handle = CodeHandle::create_random(static_cast<std::uint32_t>(ps.q), static_cast<unsigned>(ps.m),
                                          static_cast<std::size_t>(ps.n), static_cast<std::size_t>(ps.k), code_rng);

  auto t0 = std::chrono::steady_clock::now();
  handle->with_code([&](const auto& code) {
    const std::uint64_t total = cfg.trials;
    std::vector<Tally> parts(workers);
    auto run_range = [&](std::uint64_t lo, std::uint64_t hi, Tally& out) {
      if (cfg.mode == SimMode::PerGuess)
        out = per_guess_range(code, static_cast<std::size_t>(ps.w), static_cast<std::size_t>(delta), cfg.seed, lo, hi);
      else
        out = geometric_range(code, static_cast<std::size_t>(ps.w), static_cast<std::size_t>(delta), max_iter,
                              cfg.seed, lo, hi);
    };
    if (workers == 1) {
      run_range(0, total, parts[0]);
    } else {
      std::vector<std::thread> pool;
      std::uint64_t chunk = total / workers, extra = total % workers, lo = 0;
      for (unsigned wkr = 0; wkr < workers; ++wkr) {
        std::uint64_t hi = lo + chunk + (wkr < extra ? 1 : 0);
        pool.emplace_back(run_range, lo, hi, std::ref(parts[wkr]));
        lo = hi;
      }
      for (auto& th : pool) th.join();
    }
    for (const auto& p : parts) {
      rec.total_trials += p.trials;
      rec.successes += p.successes;
    }
  });
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  rec.empirical_success_rate =
      rec.total_trials ? static_cast<double>(rec.successes) / static_cast<double>(rec.total_trials) : 0.0;
  if (rec.successes > 0)
    rec.empirical_log2_workfactor = 2.0 * std::log2(static_cast<double>(ps.n)) +
                                    std::log2(static_cast<double>(rec.total_trials)) -
                                    std::log2(static_cast<double>(rec.successes));
  if (ps.beyond_unique()) {
    if (ps.w <= ps.n - ps.k) rec.theory_log2_workfactor = analysis::randomized_work_factor(ps).first;
  } else {
    rec.theory_log2_workfactor = 2.0 * std::log2(static_cast<double>(ps.n));
  }
  return rec;
}

std::string simulation_to_json(const SimulationRecord& rec) {
  nlohmann::json j;
  j["params"] = {{"q", rec.params.q}, {"m", rec.params.m}, {"n", rec.params.n}, {"k", rec.params.k}, {"w", rec.params.w}};
  j["delta"] = rec.delta;
  j["seed"] = rec.seed;
  j["workers"] = rec.workers;
  j["mode"] = mode_name(rec.mode);
  j["total_trials"] = rec.total_trials;
  j["successes"] = rec.successes;
  j["empirical_success_rate"] = rec.empirical_success_rate;
  j["empirical_log2_workfactor"] =
      rec.empirical_log2_workfactor ? nlohmann::json(*rec.empirical_log2_workfactor) : nlohmann::json(nullptr);
  j["theory_log2_workfactor"] =
      rec.theory_log2_workfactor ? nlohmann::json(*rec.theory_log2_workfactor) : nlohmann::json(nullptr);
  j["wall_seconds"] = rec.wall_seconds;
  return j.dump(2);
}

std::string simulation_csv_header() {
  return "q,m,n,k,w,delta,seed,workers,mode,total_trials,successes,empirical_success_rate,"
         "empirical_log2_workfactor,theory_log2_workfactor,wall_seconds";
}

namespace {
std::string num_or_empty(const std::optional<double>& v) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}
} // namespace

std::string simulation_to_csv(const SimulationRecord& rec) {
  std::ostringstream os;
  char rate[64];
  std::snprintf(rate, sizeof rate, "%.9e", rec.empirical_success_rate);
  os << rec.params.q << ',' << rec.params.m << ',' << rec.params.n << ',' << rec.params.k << ',' << rec.params.w << ','
     << rec.delta << ',' << rec.seed << ',' << rec.workers << ',' << mode_name(rec.mode) << ',' << rec.total_trials
     << ',' << rec.successes << ',' << rate << ',' << num_or_empty(rec.empirical_log2_workfactor) << ','
     << num_or_empty(rec.theory_log2_workfactor) << ',' << rec.wall_seconds;
  return os.str();
}

std::string simulation_to_table(const SimulationRecord& rec) {
  std::ostringstream os;
  os << "parameters: q=" << rec.params.q << " m=" << rec.params.m << " n=" << rec.params.n << " k=" << rec.params.k
     << " w=" << rec.params.w << " delta=" << rec.delta << " mode=" << mode_name(rec.mode) << '\n'
     << "  trials        " << rec.total_trials << '\n'
     << "  successes     " << rec.successes << '\n';
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.4e", rec.empirical_success_rate);
  os << "  success rate  " << buf << '\n';
  if (rec.empirical_log2_workfactor) {
    std::snprintf(buf, sizeof buf, "2^%.2f", *rec.empirical_log2_workfactor);
    os << "  W_Sim         " << buf << '\n';
  }
  if (rec.theory_log2_workfactor) {
    std::snprintf(buf, sizeof buf, "2^%.2f", *rec.theory_log2_workfactor);
    os << "  W_RD          " << buf << '\n';
  }
  std::snprintf(buf, sizeof buf, "%.1f s", rec.wall_seconds);
  os << "  wall          " << buf << '\n';
  return os.str();
}

} // namespace rankdec
