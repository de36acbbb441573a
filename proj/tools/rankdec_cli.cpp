// Command-line front end. Talks to the toolkit exclusively through the C API
// in rankdec.h; the vendored headers here only do flag parsing and output
// plumbing.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rankdec.h"

namespace {

int verbosity() {
  const char* v = std::getenv("RANKDEC_LOG");
  if (!v || !*v) return 0;
  if (std::string(v) == "0") return 0;
  return 1;
}

void logline(const std::string& s) {
  if (verbosity() > 0) std::cerr << "[rankdec] " << s << "\n";
}

int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return 0;
  }
  std::ofstream f(out_path);
  if (!f) {
    std::cerr << "error: cannot open output file '" << out_path << "'\n";
    return 2;
  }
  f << text << "\n";
  return 0;
}

std::string api_string(char* s) {
  if (!s) return {};
  std::string out(s);
  rd_string_free(s);
  return out;
}

int fail_api(const std::string& what) {
  std::cerr << "error: " << what << ": " << rd_last_error() << "\n";
  return 2;
}

// --delta accepts an integer or the word "auto"
bool parse_delta(const std::string& text, long& delta) {
  if (text == "auto") {
    delta = -1;
    return true;
  }
  try {
    size_t pos = 0;
    delta = std::stol(text, &pos);
    return pos == text.size() && delta >= 0;
  } catch (...) {
    return false;
  }
}

struct ParamFlags {
  long q = 2, m = 0, n = 0, k = 0, w = 0;

  void add_to(CLI::App* cmd, bool required = true) {
    auto* oq = cmd->add_option("--q", q, "base field order (prime)");
    auto* om = cmd->add_option("--m", m, "extension degree");
    auto* on = cmd->add_option("--n", n, "code length");
    auto* ok = cmd->add_option("--k", k, "code dimension");
    auto* ow = cmd->add_option("--w", w, "error rank weight");
    if (required) {
      om->required();
      on->required();
      ok->required();
      ow->required();
    }
    (void)oq;
  }

  nlohmann::json to_json() const { return {{"q", q}, {"m", m}, {"n", n}, {"k", k}, {"w", w}}; }
};

int run_analyze(const ParamFlags& p, const std::string& batch, const std::string& format, const std::string& out,
                bool no_poly) {
  nlohmann::json options{{"poly_factor", !no_poly}, {"format", format}};
  std::vector<nlohmann::json> param_sets;
  if (!batch.empty()) {
    std::ifstream f(batch);
    if (!f) {
      std::cerr << "error: cannot read batch file '" << batch << "'\n";
      return 2;
    }
    nlohmann::json rows;
    try {
      f >> rows;
    } catch (const std::exception& e) {
      std::cerr << "error: batch file is not valid JSON: " << e.what() << "\n";
      return 2;
    }
    if (!rows.is_array()) {
      std::cerr << "error: batch file must hold an array of parameter sets\n";
      return 2;
    }
    for (auto& r : rows) param_sets.push_back(r);
  } else {
    param_sets.push_back(p.to_json());
  }

  std::ostringstream acc;
  bool first = true;
  std::vector<std::string> json_reports;
  for (const auto& ps : param_sets) {
    logline("analyze " + ps.dump());
    char* rep = rd_analyze_json(ps.dump().c_str(), options.dump().c_str());
    if (!rep) return fail_api("analyze failed");
    std::string text = api_string(rep);
    if (format == "csv") {
      auto nl = text.find('\n');
      if (first)
        acc << text;
      else
        acc << text.substr(nl + 1); // header only once
      acc << (&ps != &param_sets.back() ? "\n" : "");
    } else if (format == "json") {
      json_reports.push_back(text);
    } else {
      acc << text;
      if (&ps != &param_sets.back()) acc << "\n";
    }
    first = false;
  }
  if (format == "json") {
    if (json_reports.size() == 1) return emit(json_reports[0], out);
    nlohmann::json arr = nlohmann::json::array();
    for (auto& r : json_reports) arr.push_back(nlohmann::json::parse(r));
    return emit(arr.dump(2), out);
  }
  return emit(acc.str(), out);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"rankdec - rank-metric decoding toolkit for Gabidulin codes"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "evaluate every work-factor formula for a parameter set");
  ParamFlags ap;
  ap.add_to(analyze, false);
  std::string a_format = "table", a_out, a_batch;
  bool a_nopoly = false;
  analyze->add_option("--format", a_format, "json|csv|table")->check(CLI::IsMember({"json", "csv", "table"}));
  analyze->add_option("--out", a_out, "write output to PATH");
  analyze->add_option("--batch", a_batch, "JSON file with an array of parameter sets");
  analyze->add_flag("--no-poly-factor", a_nopoly, "drop the polynomial factor from W_Comb / W_PQComb");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of the randomized decoder work factor");
  ParamFlags sp;
  sp.add_to(simulate);
  std::string s_delta = "auto", s_format = "table", s_out, s_mode = "per-guess";
  std::uint64_t s_trials = 100000, s_seed = 1, s_maxiter = 0;
  unsigned s_workers = 1;
  simulate->add_option("--delta", s_delta, "guessed row-space dimension (integer or 'auto')");
  simulate->add_option("--trials", s_trials, "per-guess: number of guesses; geometric: number of instances");
  simulate->add_option("--max-iter", s_maxiter, "geometric mode iteration budget (0 = auto)");
  simulate->add_option("--seed", s_seed, "master seed");
  simulate->add_option("--workers", s_workers, "worker threads");
  simulate->add_option("--mode", s_mode, "per-guess|geometric")->check(CLI::IsMember({"per-guess", "geometric"}));
  simulate->add_option("--format", s_format, "json|csv|table")->check(CLI::IsMember({"json", "csv", "table"}));
  simulate->add_option("--out", s_out, "write output to PATH");

  // decode
  auto* decode = app.add_subcommand("decode", "run the randomized decoder on an instance file");
  std::string d_file, d_delta = "auto", d_format = "json", d_out;
  std::uint64_t d_seed = 1, d_maxiter = 0;
  long d_w = -1;
  decode->add_option("instance", d_file, "instance JSON file")->required();
  decode->add_option("--w", d_w, "target residual rank (default: the instance's w)");
  decode->add_option("--delta", d_delta, "guessed row-space dimension (integer or 'auto')");
  decode->add_option("--max-iter", d_maxiter, "iteration budget (0 = auto)");
  decode->add_option("--seed", d_seed, "master seed");
  decode->add_option("--format", d_format, "json")->check(CLI::IsMember({"json"}));
  decode->add_option("--out", d_out, "write output to PATH");

  // make-instance
  auto* mk = app.add_subcommand("make-instance", "sample a random decoding instance");
  ParamFlags mp;
  mp.add_to(mk);
  std::uint64_t mk_seed = 1;
  std::string mk_out;
  mk->add_option("--seed", mk_seed, "master seed");
  mk->add_option("--out", mk_out, "write instance JSON to PATH");

  // selftest
  auto* selftest = app.add_subcommand("selftest", "cross-check the analysis formulas against independent oracles");
  std::string t_level = "fast";
  bool t_inject = false;
  selftest->add_option("--level", t_level, "fast|full")->check(CLI::IsMember({"fast", "full"}));
  selftest->add_flag("--inject-failure", t_inject, "deliberately break one check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (analyze->parsed()) {
    if (a_batch.empty()) {
      for (auto* o : {"--m", "--n", "--k", "--w"})
        if (analyze->count(o) == 0) {
          std::cerr << "error: analyze requires " << o << " (or --batch FILE)\n";
          return 2;
        }
    }
    return run_analyze(ap, a_batch, a_format, a_out, a_nopoly);
  }

  if (simulate->parsed()) {
    long delta;
    if (!parse_delta(s_delta, delta)) {
      std::cerr << "error: --delta must be a non-negative integer or 'auto'\n";
      return 2;
    }
    nlohmann::json cfg = sp.to_json();
    cfg["delta"] = delta;
    cfg["trials"] = s_trials;
    cfg["max_iter"] = s_maxiter;
    cfg["seed"] = s_seed;
    cfg["workers"] = s_workers;
    cfg["mode"] = s_mode;
    cfg["format"] = s_format;
    logline("simulate " + cfg.dump());
    char* rec = rd_simulate_json(cfg.dump().c_str());
    if (!rec) return fail_api("simulation failed");
    return emit(api_string(rec), s_out);
  }

  if (decode->parsed()) {
    std::ifstream f(d_file);
    if (!f) {
      std::cerr << "error: cannot read instance file '" << d_file << "'\n";
      return 2;
    }
    std::stringstream buf;
    buf << f.rdbuf();
    long delta;
    if (!parse_delta(d_delta, delta)) {
      std::cerr << "error: --delta must be a non-negative integer or 'auto'\n";
      return 2;
    }
    nlohmann::json opts{{"delta", delta}, {"max_iter", d_maxiter}, {"seed", d_seed}};
    if (d_w >= 0) opts["w"] = d_w;
    rd_status status = RD_OK;
    char* out = rd_decode_json(buf.str().c_str(), opts.dump().c_str(), &status);
    if (!out) return fail_api("decode failed");
    int rc = emit(api_string(out), d_out);
    if (rc) return rc;
    return status == RD_OK ? 0 : 1;
  }

  if (mk->parsed()) {
    nlohmann::json params = mp.to_json();
    params["seed"] = mk_seed;
    char* inst = rd_make_instance_json(params.dump().c_str());
    if (!inst) return fail_api("instance generation failed");
    return emit(api_string(inst), mk_out);
  }

  if (selftest->parsed()) {
    char* report = nullptr;
    int failed = rd_selftest(t_level == "full" ? 1 : 0, t_inject ? 1 : 0, &report);
    if (failed < 0) return fail_api("selftest could not run");
    std::string rep = api_string(report);
    auto j = nlohmann::json::parse(rep);
    std::cout << j["text"].get<std::string>();
    std::cout << (failed == 0 ? "all checks passed\n" : std::to_string(failed) + " check(s) failed\n");
    return failed == 0 ? 0 : 1;
  }

  return 2;
}
