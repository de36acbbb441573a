#ifndef RANKDEC_SIMULATE_HPP
#define RANKDEC_SIMULATE_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "analysis.hpp"

namespace rankdec {

enum class SimMode { PerGuess, Geometric };

struct SimulationConfig {
  analysis::ParamSet params;
  long delta = -1;              // -1 = auto
  std::uint64_t trials = 0;     // per-guess: #guesses; geometric: #instances
  std::uint64_t max_iter = 0;   // geometric budget per instance; 0 = auto
  std::uint64_t seed = 0;
  unsigned workers = 1;
  SimMode mode = SimMode::PerGuess;
};

struct SimulationRecord {
  analysis::ParamSet params;
  long delta = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  SimMode mode = SimMode::PerGuess;
  std::uint64_t total_trials = 0; // decoder invocations
  std::uint64_t successes = 0;
  double empirical_success_rate = 0.0;
  std::optional<double> empirical_log2_workfactor; // log2(n^2 * trials / successes)
  std::optional<double> theory_log2_workfactor;    // work-factor minimum over delta
  double wall_seconds = 0.0;
};

SimulationRecord run_simulation(const SimulationConfig& cfg);

std::string simulation_to_json(const SimulationRecord& rec);
std::string simulation_csv_header();
std::string simulation_to_csv(const SimulationRecord& rec);
std::string simulation_to_table(const SimulationRecord& rec);

} // namespace rankdec

#endif
