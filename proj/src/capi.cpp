#include "sidsp.h"

#include <cstring>
#include <string>

#include "json.hpp"
#include "sidsp/error.hpp"
#include "sidsp/heuristics.hpp"
#include "sidsp/instgen.hpp"
#include "sidsp/json_io.hpp"
#include "sidsp/validate.hpp"

struct sidsp_instance {
  sidsp::Instance inst;
};

struct sidsp_schedule {
  sidsp::Schedule sched;
  std::vector<sidsp::ScheduleEntry> frozen_urgent;
  double alpha = 0.5;
};

namespace {

thread_local std::string g_last_error;

sidsp_status fail(sidsp_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

sidsp_status from_errc(const sidsp::Error& e) {
  using sidsp::Errc;
  switch (e.code()) {
    case Errc::ParseError:
      return fail(SIDSP_ERR_PARSE, e.what());
    case Errc::InvariantViolation:
    case Errc::EntryOutOfWindow:
    case Errc::UnknownRequestId:
    case Errc::DuplicateId:
      return fail(SIDSP_ERR_INVARIANT, e.what());
    case Errc::AlreadyPreprocessed:
    case Errc::NotPreprocessed:
      return fail(SIDSP_ERR_STATE, e.what());
    case Errc::IoError:
      return fail(SIDSP_ERR_IO, e.what());
    case Errc::BadArgument:
    case Errc::TooLarge:
      return fail(SIDSP_ERR_ARGUMENT, e.what());
    default:
      return fail(SIDSP_ERR_INTERNAL, e.what());
  }
}

template <typename Fn>
sidsp_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const sidsp::Error& e) {
    return from_errc(e);
  } catch (const std::exception& e) {
    return fail(SIDSP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SIDSP_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* sidsp_version(void) { return "1.0.0"; }

const char* sidsp_last_error(void) { return g_last_error.c_str(); }

void sidsp_string_free(char* s) { delete[] s; }

sidsp_status sidsp_instance_from_json(const char* json, sidsp_instance** out) {
  if (!json || !out) return fail(SIDSP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    auto* handle = new sidsp_instance{sidsp::load_instance(json)};
    *out = handle;
    return SIDSP_OK;
  });
}

sidsp_status sidsp_instance_from_file(const char* path, sidsp_instance** out) {
  if (!path || !out) return fail(SIDSP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    auto* handle = new sidsp_instance{sidsp::load_instance_file(path)};
    *out = handle;
    return SIDSP_OK;
  });
}

sidsp_status sidsp_instance_to_json(const sidsp_instance* inst, char** out_json) {
  if (!inst || !out_json) return fail(SIDSP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out_json = dup_string(sidsp::save_instance(inst->inst));
    return SIDSP_OK;
  });
}

sidsp_status sidsp_instance_generate(const char* profile, uint64_t seed,
                                     const char* overrides_json, sidsp_instance** out) {
  if (!profile || !out) return fail(SIDSP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    sidsp::DensityProfile density;
    if (std::strcmp(profile, "low") == 0) {
      density = sidsp::DensityProfile::Low;
    } else if (std::strcmp(profile, "high") == 0) {
      density = sidsp::DensityProfile::High;
    } else {
      return fail(SIDSP_ERR_ARGUMENT, std::string("unknown profile: ") + profile);
    }
    sidsp::GenProfile p = sidsp::profile_defaults(density);
    if (overrides_json) p.apply_overrides(overrides_json);
    *out = new sidsp_instance{sidsp::generate_instance(p, seed)};
    return SIDSP_OK;
  });
}

sidsp_status sidsp_instance_preprocess(const sidsp_instance* inst, sidsp_instance** out) {
  if (!inst || !out) return fail(SIDSP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new sidsp_instance{sidsp::preprocess(inst->inst)};
    return SIDSP_OK;
  });
}

sidsp_status sidsp_instance_request_count(const sidsp_instance* inst, uint32_t* out) {
  if (!inst || !out) return fail(SIDSP_ERR_ARGUMENT, "null argument");
  *out = inst->inst.request_count();
  return SIDSP_OK;
}

sidsp_status sidsp_instance_is_preprocessed(const sidsp_instance* inst, int32_t* out) {
  if (!inst || !out) return fail(SIDSP_ERR_ARGUMENT, "null argument");
  *out = inst->inst.preprocessed ? 1 : 0;
  return SIDSP_OK;
}

void sidsp_instance_free(sidsp_instance* inst) { delete inst; }

void sidsp_solver_config_init(sidsp_solver_config* cfg) {
  if (!cfg) return;
  sidsp::SolverConfig d;
  cfg->alpha = d.alpha;
  cfg->alpha_urgent = d.alpha_urgent;
  cfg->time_budget_ms = d.time_budget_ms;
  cfg->eval_budget = d.eval_budget;
  cfg->grasp_ls_time_ms = d.grasp_ls_time_ms;
  cfg->grasp_rcl = d.grasp_rcl;
  cfg->ec_depth = d.ec_depth;
  cfg->sa_t0 = d.sa_t0;
  cfg->tabu_len = d.tabu_len;
  cfg->tabu_eps = d.tabu_eps;
  cfg->seed = d.seed;
}

sidsp_status sidsp_solve(const sidsp_instance* inst, const char* heuristic,
                         const sidsp_solver_config* cfg, sidsp_schedule** out) {
  if (!inst || !heuristic || !cfg || !out) return fail(SIDSP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    if (!inst->inst.preprocessed)
      return fail(SIDSP_ERR_STATE, "instance must be preprocessed before solving");
    auto h = sidsp::heuristic_from_name(heuristic);
    if (!h) return fail(SIDSP_ERR_ARGUMENT, std::string("unknown heuristic: ") + heuristic);
    sidsp::SolverConfig sc;
    sc.alpha = cfg->alpha;
    sc.alpha_urgent = cfg->alpha_urgent;
    sc.time_budget_ms = cfg->time_budget_ms;
    sc.eval_budget = cfg->eval_budget;
    sc.grasp_ls_time_ms = cfg->grasp_ls_time_ms;
    sc.grasp_rcl = cfg->grasp_rcl;
    sc.ec_depth = cfg->ec_depth;
    sc.sa_t0 = cfg->sa_t0;
    sc.tabu_len = cfg->tabu_len;
    sc.tabu_eps = cfg->tabu_eps;
    sc.seed = cfg->seed;
    sidsp::TwoPhaseResult result = sidsp::two_phase_solve(inst->inst, sc, *h);
    auto* handle = new sidsp_schedule;
    handle->sched = std::move(result.schedule);
    handle->frozen_urgent = std::move(result.frozen_urgent);
    handle->alpha = sc.alpha;
    *out = handle;
    return SIDSP_OK;
  });
}

sidsp_status sidsp_schedule_from_json(const sidsp_instance* inst, const char* json,
                                      sidsp_schedule** out) {
  if (!inst || !json || !out) return fail(SIDSP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    auto* handle = new sidsp_schedule;
    handle->sched = sidsp::load_schedule(inst->inst, json);
    *out = handle;
    return SIDSP_OK;
  });
}

sidsp_status sidsp_schedule_to_json(const sidsp_instance* inst, const sidsp_schedule* sched,
                                    double alpha, char** out_json) {
  if (!inst || !sched || !out_json) return fail(SIDSP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out_json = dup_string(sidsp::save_schedule(inst->inst, sched->sched, alpha));
    return SIDSP_OK;
  });
}

sidsp_status sidsp_schedule_entry_count(const sidsp_schedule* sched, uint32_t* out) {
  if (!sched || !out) return fail(SIDSP_ERR_ARGUMENT, "null argument");
  *out = static_cast<uint32_t>(sched->sched.entries.size());
  return SIDSP_OK;
}

sidsp_status sidsp_schedule_objective(const sidsp_instance* inst, const sidsp_schedule* sched,
                                      double alpha, double* out) {
  if (!inst || !sched || !out) return fail(SIDSP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = sidsp::objective(sched->sched, inst->inst, sidsp::ObjectiveParams{alpha});
    return SIDSP_OK;
  });
}

sidsp_status sidsp_schedule_metrics_json(const sidsp_instance* inst, const sidsp_schedule* sched,
                                         char** out_json) {
  if (!inst || !sched || !out_json) return fail(SIDSP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    if (!inst->inst.preprocessed)
      return fail(SIDSP_ERR_STATE, "metrics require a preprocessed instance");
    sidsp::MetricsReport rep = sidsp::report_metrics(sched->sched, inst->inst);
    nlohmann::json j;
    j["total_requests"] = rep.total_requests;
    j["urgent_requests"] = rep.urgent_requests;
    j["scheduled"] = rep.scheduled;
    j["unscheduled_total"] = rep.unscheduled_total;
    j["unscheduled_urgent"] = rep.unscheduled_urgent;
    j["avg_tardiness_urgent_s"] = rep.avg_tardiness_urgent_ms / 1000.0;
    j["avg_tardiness_s"] = rep.avg_tardiness_ms / 1000.0;
    j["avg_start_delay_s"] = rep.avg_start_delay_ms / 1000.0;
    j["objective"] = sched->sched.objective_cached
                         ? *sched->sched.objective_cached
                         : sidsp::objective(sched->sched, inst->inst,
                                            sidsp::ObjectiveParams{sched->alpha});
    *out_json = dup_string(j.dump(2) + "\n");
    return SIDSP_OK;
  });
}

sidsp_status sidsp_validate(const sidsp_instance* inst, const sidsp_schedule* sched,
                            char** report_json, int32_t* feasible) {
  if (!inst || !sched || !feasible) return fail(SIDSP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    if (!inst->inst.preprocessed)
      return fail(SIDSP_ERR_STATE, "validation requires a preprocessed instance");
    const std::vector<sidsp::ScheduleEntry>* frozen =
        sched->frozen_urgent.empty() ? nullptr : &sched->frozen_urgent;
    sidsp::ValidationReport rep = sidsp::validate(sched->sched, inst->inst, frozen);
    *feasible = rep.feasible() ? 1 : 0;
    if (report_json) *report_json = dup_string(sidsp::report_to_json(rep, inst->inst));
    return SIDSP_OK;
  });
}

void sidsp_schedule_free(sidsp_schedule* sched) { delete sched; }

}  // extern "C"
