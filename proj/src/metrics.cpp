#include "sidsp/generator.hpp"
#include "sidsp/model.hpp"

namespace sidsp {

std::optional<TimeMs> tardiness_baseline(const Instance& inst, std::uint32_t request) {
  if (request >= inst.request_count())
    raise(Errc::UnknownRequestId, "tardiness_baseline: unknown request");
  ScheduleGenerator gen(inst, ObjectiveParams{0.0});
  gen.enable_dual_restart(false);
  std::uint32_t order[1] = {request};
  gen.evaluate(order);
  return gen.last_start(request);
}

}  // namespace sidsp
