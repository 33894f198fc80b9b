#include "sidsp/heuristics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>

#include "sidsp/error.hpp"

namespace sidsp {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct SearchContext {
  ScheduleGenerator gen;
  std::mt19937_64 rng;
  bool use_time = false;
  Clock::time_point t_start{}, t_end{};
  double time_budget_ms = 0;
  bool use_evals = false;
  std::int64_t eval_budget = 0;
  std::int64_t evals = 0;
  bool has_target = false;
  double target_phi = 0;
  bool target_hit = false;
  std::vector<double>* best_trace = nullptr;

  SearchContext(const Instance& inst, const SolverConfig& cfg)
      : gen(inst, ObjectiveParams{cfg.alpha}), rng(cfg.seed) {
    if (cfg.time_budget_ms > 0) {
      use_time = true;
      time_budget_ms = static_cast<double>(cfg.time_budget_ms);
      t_start = Clock::now();
      t_end = t_start + std::chrono::milliseconds(cfg.time_budget_ms);
    }
    if (cfg.eval_budget > 0) {
      use_evals = true;
      eval_budget = cfg.eval_budget;
    }
    if (cfg.target_phi) {
      has_target = true;
      target_phi = *cfg.target_phi;
    }
    best_trace = cfg.best_trace;
  }

  EvalStats eval_stats(const Permutation& p) {
    ++evals;
    return gen.evaluate(p);
  }
  double eval(const Permutation& p) { return eval_stats(p).phi; }

  bool exhausted() const {
    if (target_hit) return true;
    if (use_evals && evals >= eval_budget) return true;
    if (use_time && Clock::now() >= t_end) return true;
    return false;
  }

  // Fraction of the budget still ahead, in [0, 1]; drives the SA cooling.
  double remaining_fraction() const {
    double frac = 1.0;
    if (use_evals)
      frac = std::min(frac, 1.0 - static_cast<double>(evals) / static_cast<double>(eval_budget));
    if (use_time) {
      double elapsed = std::chrono::duration<double, std::milli>(Clock::now() - t_start).count();
      frac = std::min(frac, 1.0 - elapsed / time_budget_ms);
    }
    return std::max(frac, 0.0);
  }

  void note_best(double phi) {
    if (best_trace) best_trace->push_back(phi);
    if (has_target && phi >= target_phi - 1e-9) target_hit = true;
  }
};

Permutation full_scope(const Instance& inst) {
  Permutation all(inst.request_count());
  std::iota(all.begin(), all.end(), 0u);
  return all;
}

void require_budget(const SolverConfig& cfg, const char* who) {
  if (cfg.time_budget_ms <= 0 && cfg.eval_budget <= 0)
    raise(Errc::BadArgument, std::string(who) + " needs a time or evaluation budget");
}

Permutation randomized_construct(SearchContext& ctx, const Instance& inst,
                                 std::span<const std::uint32_t> scope, int rcl) {
  Permutation remaining = construct_order(inst, scope);
  Permutation out;
  out.reserve(remaining.size());
  while (!remaining.empty()) {
    std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(rcl), remaining.size());
    std::size_t pick = std::uniform_int_distribution<std::size_t>(0, k - 1)(ctx.rng);
    out.push_back(remaining[pick]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

// Random-swap first-improvement walk, bounded by the local stop and the
// context budget. `phi` holds the incumbent objective on entry and exit.
void engine_local_search(SearchContext& ctx, Permutation& pi, double& phi,
                         std::optional<Clock::time_point> local_t_end,
                         std::int64_t local_eval_ceiling) {
  if (pi.size() < 2) return;
  std::uniform_int_distribution<std::size_t> dist(0, pi.size() - 1);
  for (;;) {
    if (ctx.exhausted()) return;
    if (local_t_end && Clock::now() >= *local_t_end) return;
    if (local_eval_ceiling >= 0 && ctx.evals >= local_eval_ceiling) return;
    std::size_t i = dist(ctx.rng);
    std::size_t j = dist(ctx.rng);
    while (j == i) j = dist(ctx.rng);
    std::swap(pi[i], pi[j]);
    double phi2 = ctx.eval(pi);
    if (phi2 > phi) {
      phi = phi2;
    } else {
      std::swap(pi[i], pi[j]);
    }
  }
}

Permutation engine_grasp(SearchContext& ctx, const Instance& inst,
                         std::span<const std::uint32_t> scope, const SolverConfig& cfg) {
  Permutation best = construct_order(inst, scope);
  double best_phi = ctx.eval(best);
  ctx.note_best(best_phi);
  while (!ctx.exhausted()) {
    Permutation cand = randomized_construct(ctx, inst, scope, cfg.grasp_rcl);
    double cand_phi = ctx.eval(cand);
    std::optional<Clock::time_point> ls_end;
    std::int64_t ls_ceiling = -1;
    if (cfg.time_budget_ms > 0)
      ls_end = Clock::now() + std::chrono::milliseconds(cfg.grasp_ls_time_ms);
    if (ctx.use_evals) ls_ceiling = ctx.evals + std::max<std::int64_t>(1, ctx.eval_budget / 8);
    engine_local_search(ctx, cand, cand_phi, ls_end, ls_ceiling);
    if (cand_phi > best_phi) {
      best = cand;
      best_phi = cand_phi;
      ctx.note_best(best_phi);
    }
  }
  return best;
}

double eval_hole(SearchContext& ctx, const Permutation& pi, std::size_t skip,
                 Permutation& scratch) {
  scratch.clear();
  for (std::size_t k = 0; k < pi.size(); ++k)
    if (k != skip) scratch.push_back(pi[k]);
  return ctx.eval(scratch);
}

int ec_improvement(SearchContext& ctx, Permutation& pi, std::size_t hole, Permutation& sigma,
                   double& phi_sigma, int depth, Permutation& scratch) {
  if (depth == 0) return 0;
  if (ctx.exhausted()) return 0;
  double phi_hole_best = eval_hole(ctx, pi, hole, scratch);
  std::size_t best_j = kNone;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (i == hole) continue;
    if (ctx.exhausted()) break;
    std::swap(pi[hole], pi[i]);
    double phi_full = ctx.eval(pi);
    if (phi_full > phi_sigma) {
      sigma = pi;  // pi keeps the accepted chain
      phi_sigma = phi_full;
      ctx.note_best(phi_full);
      return 1;
    }
    double phi_hole = eval_hole(ctx, pi, i, scratch);
    std::swap(pi[hole], pi[i]);
    if (phi_hole > phi_hole_best) {
      phi_hole_best = phi_hole;
      best_j = i;
    }
  }
  if (best_j != kNone) {
    std::swap(pi[hole], pi[best_j]);
    if (ec_improvement(ctx, pi, best_j, sigma, phi_sigma, depth - 1, scratch) == 1) return 1;
    std::swap(pi[hole], pi[best_j]);
  }
  return 0;
}

struct EcOutcome {
  Permutation best;
  double phi;
};

EcOutcome engine_ec(SearchContext& ctx, Permutation pi, const SolverConfig& cfg) {
  double phi_sigma = ctx.eval(pi);
  ctx.note_best(phi_sigma);
  Permutation sigma = pi;
  std::size_t n = pi.size();
  if (n == 0) return {sigma, phi_sigma};
  Permutation scratch;
  scratch.reserve(n);
  std::size_t c = n;
  std::size_t hole = 0;
  while (c > 0 && !ctx.exhausted()) {
    if (ec_improvement(ctx, pi, hole, sigma, phi_sigma, cfg.ec_depth, scratch) == 1) {
      c = n;
    } else {
      --c;
    }
    hole = (hole + 1) % n;
  }
  return {sigma, phi_sigma};
}

Permutation engine_sa(SearchContext& ctx, Permutation pi, const SolverConfig& cfg) {
  double phi = ctx.eval(pi);
  ctx.note_best(phi);
  Permutation best = pi;
  double best_phi = phi;
  if (pi.size() < 2) return best;
  std::uniform_int_distribution<std::size_t> dist(0, pi.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (!ctx.exhausted()) {
    std::size_t i = dist(ctx.rng);
    std::size_t j = dist(ctx.rng);
    while (j == i) j = dist(ctx.rng);
    std::swap(pi[i], pi[j]);
    double phi2 = ctx.eval(pi);
    bool accept = phi2 > phi;
    if (!accept) {
      double temp = cfg.sa_t0 * ctx.remaining_fraction();
      accept = unit(ctx.rng) < sa_acceptance_probability(phi2 - phi, temp);
    }
    if (accept) {
      phi = phi2;
      if (phi > best_phi) {
        best_phi = phi;
        best = pi;
        ctx.note_best(best_phi);
      }
    } else {
      std::swap(pi[i], pi[j]);
    }
  }
  return best;
}

struct TabuFeature {
  double f = 0;      // objective value of the visited schedule
  double t_sec = 0;  // its average request start delay, in seconds
};

bool is_tabu(const TabuFeature& cand, const std::deque<TabuFeature>& list, double eps) {
  auto close = [eps](double x, double ref) {
    if (ref == 0.0) return std::abs(x - ref) <= eps;
    return std::abs(x - ref) / ref <= eps;
  };
  for (const TabuFeature& e : list)
    if (close(cand.f, e.f) && close(cand.t_sec, e.t_sec)) return true;
  return false;
}

TabuFeature feature_of(const EvalStats& es) {
  double t = es.scheduled > 0
                 ? static_cast<double>(es.start_delay_sum_ms) / es.scheduled / 1000.0
                 : 0.0;
  return {es.phi, t};
}

Permutation engine_tabu(SearchContext& ctx, Permutation pi, const SolverConfig& cfg) {
  double phi_global = ctx.eval(pi);
  ctx.note_best(phi_global);
  Permutation best = pi;
  if (pi.size() < 2) return best;

  Permutation cur = pi;
  std::deque<TabuFeature> tabu;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t i = 0; i + 1 < cur.size(); ++i)
    for (std::uint32_t j = i + 1; j < cur.size(); ++j) pairs.emplace_back(i, j);

  while (!ctx.exhausted()) {
    std::shuffle(pairs.begin(), pairs.end(), ctx.rng);  // seeded tie-breaking
    bool star_set = false, any_set = false;
    std::size_t star_i = 0, star_j = 0, any_i = 0, any_j = 0;
    double star_phi = 0, any_phi = 0;
    TabuFeature star_feat, any_feat;
    for (auto [i, j] : pairs) {
      if (ctx.exhausted()) break;
      std::swap(cur[i], cur[j]);
      EvalStats es = ctx.eval_stats(cur);
      TabuFeature feat = feature_of(es);
      if (es.phi > phi_global) {  // aspiration: accept regardless of tabu
        phi_global = es.phi;
        best = cur;
        ctx.note_best(phi_global);
        star_set = true;
        star_i = i;
        star_j = j;
        star_phi = es.phi;
        star_feat = feat;
      } else if (!is_tabu(feat, tabu, cfg.tabu_eps) && (!star_set || es.phi > star_phi)) {
        star_set = true;
        star_i = i;
        star_j = j;
        star_phi = es.phi;
        star_feat = feat;
      }
      if (!any_set || es.phi > any_phi) {
        any_set = true;
        any_i = i;
        any_j = j;
        any_phi = es.phi;
        any_feat = feat;
      }
      std::swap(cur[i], cur[j]);
    }
    if (!any_set) break;
    if (!star_set) {  // whole neighbourhood tabu: fall back to its best move
      star_i = any_i;
      star_j = any_j;
      star_feat = any_feat;
    }
    std::swap(cur[star_i], cur[star_j]);
    tabu.push_back(star_feat);
    if (tabu.size() > static_cast<std::size_t>(cfg.tabu_len)) tabu.pop_front();
  }
  return best;
}

}  // namespace

std::optional<Heuristic> heuristic_from_name(std::string_view name) {
  if (name == "grasp") return Heuristic::Grasp;
  if (name == "ec") return Heuristic::EjectionChain;
  if (name == "sa") return Heuristic::SimulatedAnnealing;
  if (name == "tabu") return Heuristic::TabuSearch;
  return std::nullopt;
}

const char* heuristic_name(Heuristic h) {
  switch (h) {
    case Heuristic::Grasp: return "grasp";
    case Heuristic::EjectionChain: return "ec";
    case Heuristic::SimulatedAnnealing: return "sa";
    case Heuristic::TabuSearch: return "tabu";
  }
  return "?";
}

double sa_acceptance_probability(double delta_phi, double temperature) {
  if (temperature <= 0.0) return delta_phi >= 0.0 ? 1.0 : 0.0;
  return std::min(1.0, std::exp(delta_phi / temperature));
}

Permutation construct_order(const Instance& inst, std::span<const std::uint32_t> scope) {
  Permutation out(scope.begin(), scope.end());
  std::sort(out.begin(), out.end(), [&](std::uint32_t a, std::uint32_t b) {
    const Request& ra = inst.requests[a];
    const Request& rb = inst.requests[b];
    if (ra.priority != rb.priority) return ra.priority > rb.priority;
    TimeMs slack_a = (ra.deadline - ra.release - ra.duration) / 1000;  // whole seconds
    TimeMs slack_b = (rb.deadline - rb.release - rb.duration) / 1000;
    if (slack_a != slack_b) return slack_a < slack_b;
    if (ra.duration != rb.duration) return ra.duration < rb.duration;
    return ra.id < rb.id;
  });
  return out;
}

Permutation construct_order(const Instance& inst) {
  Permutation all = full_scope(inst);
  return construct_order(inst, all);
}

SolveResult grasp(const Instance& inst, const SolverConfig& cfg) {
  return solve_scope(Heuristic::Grasp, inst, full_scope(inst), cfg);
}

Permutation local_search_random_swap(Permutation pi, const Instance& inst,
                                     const SolverConfig& cfg, std::int64_t budget_ms) {
  if (budget_ms <= 0 || pi.size() < 2) return pi;
  SolverConfig local = cfg;
  local.time_budget_ms = budget_ms;
  local.eval_budget = 0;
  SearchContext ctx(inst, local);
  double phi = ctx.eval(pi);
  engine_local_search(ctx, pi, phi, std::nullopt, -1);
  return pi;
}

Permutation ejection_chain(Permutation pi, const Instance& inst, const SolverConfig& cfg) {
  SearchContext ctx(inst, cfg);
  return engine_ec(ctx, std::move(pi), cfg).best;
}

Permutation simulated_annealing(Permutation pi, const Instance& inst, const SolverConfig& cfg) {
  require_budget(cfg, "simulated_annealing");
  SearchContext ctx(inst, cfg);
  return engine_sa(ctx, std::move(pi), cfg);
}

Permutation tabu_search(Permutation pi, const Instance& inst, const SolverConfig& cfg) {
  require_budget(cfg, "tabu_search");
  SearchContext ctx(inst, cfg);
  return engine_tabu(ctx, std::move(pi), cfg);
}

SolveResult solve_scope(Heuristic h, const Instance& inst, std::span<const std::uint32_t> scope,
                        const SolverConfig& cfg, const std::vector<ScheduleEntry>* frozen) {
  if (h != Heuristic::EjectionChain) require_budget(cfg, heuristic_name(h));
  SearchContext ctx(inst, cfg);
  if (frozen && !frozen->empty()) ctx.gen.set_frozen(*frozen);

  Permutation best;
  switch (h) {
    case Heuristic::Grasp:
      best = engine_grasp(ctx, inst, scope, cfg);
      break;
    case Heuristic::SimulatedAnnealing:
      best = engine_sa(ctx, construct_order(inst, scope), cfg);
      break;
    case Heuristic::TabuSearch:
      best = engine_tabu(ctx, construct_order(inst, scope), cfg);
      break;
    case Heuristic::EjectionChain: {
      // One run from the deterministic construction; any remaining budget
      // funds restarts from seeded shuffles.
      EcOutcome out = engine_ec(ctx, construct_order(inst, scope), cfg);
      bool budgeted = cfg.time_budget_ms > 0 || cfg.eval_budget > 0;
      while (budgeted && !ctx.exhausted()) {
        Permutation start(scope.begin(), scope.end());
        std::shuffle(start.begin(), start.end(), ctx.rng);
        EcOutcome next = engine_ec(ctx, std::move(start), cfg);
        if (next.phi > out.phi) out = std::move(next);
      }
      best = std::move(out.best);
      break;
    }
  }

  SolveResult result;
  result.order = std::move(best);
  result.schedule = ctx.gen.generate(result.order);
  result.phi = result.schedule.objective_cached.value_or(0.0);
  result.evaluations = ctx.evals;
  return result;
}

TwoPhaseResult two_phase_solve(const Instance& inst, const SolverConfig& cfg, Heuristic h) {
  Permutation urgent, regular;
  for (std::uint32_t j = 0; j < inst.request_count(); ++j) {
    bool promoted = inst.requests[j].urgent;
    std::int32_t partner = inst.dual_partner[j];
    if (!promoted && partner >= 0 &&
        inst.requests[static_cast<std::uint32_t>(partner)].urgent)
      promoted = true;  // dual pairs never span the two phases
    (promoted ? urgent : regular).push_back(j);
  }

  TwoPhaseResult out;
  if (urgent.empty()) {
    SolveResult r = solve_scope(h, inst, regular, cfg);
    out.schedule = std::move(r.schedule);
    out.phi = r.phi;
    out.evaluations = r.evaluations;
    return out;
  }

  // Budgets split proportionally to the phase scope sizes.
  double share = static_cast<double>(urgent.size()) /
                 static_cast<double>(urgent.size() + regular.size());
  SolverConfig cfg1 = cfg;
  cfg1.alpha = cfg.alpha_urgent;
  cfg1.target_phi.reset();
  cfg1.best_trace = nullptr;
  SolverConfig cfg2 = cfg;
  cfg2.target_phi.reset();
  cfg2.best_trace = nullptr;
  cfg2.seed = splitmix64(cfg.seed);
  if (!regular.empty()) {
    if (cfg.time_budget_ms > 0) {
      cfg1.time_budget_ms = std::max<std::int64_t>(1, std::llround(cfg.time_budget_ms * share));
      cfg2.time_budget_ms = std::max<std::int64_t>(1, cfg.time_budget_ms - cfg1.time_budget_ms);
    }
    if (cfg.eval_budget > 0) {
      cfg1.eval_budget = std::max<std::int64_t>(1, std::llround(cfg.eval_budget * share));
      cfg2.eval_budget = std::max<std::int64_t>(1, cfg.eval_budget - cfg1.eval_budget);
    }
  }

  SolveResult r1 = solve_scope(h, inst, urgent, cfg1);
  out.evaluations += r1.evaluations;
  out.frozen_urgent.reserve(r1.schedule.entries.size());
  for (const ScheduleEntry& e : r1.schedule.entries)
    out.frozen_urgent.push_back({e.request, e.start, 0, 0});

  std::vector<ScheduleEntry> combined = out.frozen_urgent;
  if (!regular.empty()) {
    SolveResult r2 = solve_scope(h, inst, regular, cfg2, &out.frozen_urgent);
    out.evaluations += r2.evaluations;
    combined.insert(combined.end(), r2.schedule.entries.begin(), r2.schedule.entries.end());
  }

  out.schedule.entries = std::move(combined);
  assign_channels_antennas(out.schedule, inst);
  out.phi = objective(out.schedule, inst, ObjectiveParams{cfg.alpha});
  out.schedule.objective_cached = out.phi;
  return out;
}

std::pair<Permutation, Schedule> brute_force(const Instance& inst, const ObjectiveParams& params) {
  std::uint32_t n = inst.request_count();
  if (n > 8) raise(Errc::TooLarge, "brute_force is limited to 8 requests");
  Permutation perm = full_scope(inst);
  ScheduleGenerator gen(inst, params);
  Permutation best = perm;
  double best_phi = -std::numeric_limits<double>::infinity();
  do {
    double phi = gen.evaluate(perm).phi;
    if (phi > best_phi) {
      best_phi = phi;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  Schedule sched = gen.generate(best);
  return {std::move(best), std::move(sched)};
}

}  // namespace sidsp
