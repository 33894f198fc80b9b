#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "sidsp/generator.hpp"
#include "sidsp/model.hpp"

namespace sidsp {

using Permutation = std::vector<std::uint32_t>;

enum class Heuristic { Grasp, EjectionChain, SimulatedAnnealing, TabuSearch };

std::optional<Heuristic> heuristic_from_name(std::string_view name);  // grasp|ec|sa|tabu
const char* heuristic_name(Heuristic h);

struct SolverConfig {
  double alpha = 0.5;
  double alpha_urgent = 1.0;  // phase 1 weighs tardiness fully by default

  // Stopping: wall-clock budget, deterministic evaluation budget, or both
  // (first exhausted wins). GRASP/SA/TS require at least one; EC runs to its
  // natural termination when neither is set.
  std::int64_t time_budget_ms = 0;
  std::int64_t eval_budget = 0;

  std::int64_t grasp_ls_time_ms = 1000;
  int grasp_rcl = 10;
  int ec_depth = 10;
  double sa_t0 = 0.001;
  int tabu_len = 4;
  double tabu_eps = 0.01;
  std::uint64_t seed = 1;

  // Test hooks: stop once the best objective reaches target_phi; log each
  // new best into *best_trace.
  std::optional<double> target_phi;
  std::vector<double>* best_trace = nullptr;
};

struct SolveResult {
  Permutation order;
  Schedule schedule;
  double phi = 0.0;
  std::int64_t evaluations = 0;
};

// Deterministic priority-rule ordering: priority descending, then window
// slack floor((d - r - p) / 1s) ascending, then duration ascending, then id.
Permutation construct_order(const Instance& inst, std::span<const std::uint32_t> scope);
Permutation construct_order(const Instance& inst);

SolveResult grasp(const Instance& inst, const SolverConfig& cfg);
Permutation local_search_random_swap(Permutation pi, const Instance& inst,
                                     const SolverConfig& cfg, std::int64_t budget_ms);
Permutation ejection_chain(Permutation pi, const Instance& inst, const SolverConfig& cfg);
Permutation simulated_annealing(Permutation pi, const Instance& inst, const SolverConfig& cfg);
Permutation tabu_search(Permutation pi, const Instance& inst, const SolverConfig& cfg);

double sa_acceptance_probability(double delta_phi, double temperature);

// Runs one heuristic over an arbitrary request scope, optionally around
// frozen entries. This is the single-phase engine behind two_phase_solve.
SolveResult solve_scope(Heuristic h, const Instance& inst, std::span<const std::uint32_t> scope,
                        const SolverConfig& cfg,
                        const std::vector<ScheduleEntry>* frozen = nullptr);

struct TwoPhaseResult {
  Schedule schedule;
  std::vector<ScheduleEntry> frozen_urgent;  // phase-1 entries, fixed in the result
  double phi = 0.0;
  std::int64_t evaluations = 0;
};

// Phase 1 schedules urgent requests (dual partners of urgent requests are
// promoted), phase 2 schedules the rest around the frozen phase-1 entries.
TwoPhaseResult two_phase_solve(const Instance& inst, const SolverConfig& cfg, Heuristic h);

// Exhaustive search over all orderings; n <= 8 only.
std::pair<Permutation, Schedule> brute_force(const Instance& inst, const ObjectiveParams& params);

}  // namespace sidsp
