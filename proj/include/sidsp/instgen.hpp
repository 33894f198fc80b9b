#pragma once

#include <cstdint>
#include <string_view>

#include "sidsp/model.hpp"

namespace sidsp {

enum class DensityProfile { Low, High };

// Distribution knobs for the synthetic generator. Station counts, pass
// counts and channel shares follow the published fleet statistics; the rest
// (durations, priorities, gaps, reliability shares) are declared defaults,
// overridable via a JSON profile.
struct GenProfile {
  int stations_min = 8;
  int stations_max = 10;
  double two_channel_share = 0.3;
  double full_power_share_min = 0.2;
  double full_power_share_max = 0.4;
  int passes_min = 4;
  int passes_max = 10;
  TimeMs pass_len_min_ms = 5 * 60'000;
  TimeMs pass_len_max_ms = 15 * 60'000;
  double high_rel_mask_prob = 0.7;
  double high_rel_mask_frac_min = 0.4;
  double high_rel_mask_frac_max = 0.8;
  double request_mean = 100.0;
  double request_sigma_frac = 0.1;
  double urgent_mean = 30.0;
  TimeMs duration_min_ms = 30'000;
  TimeMs duration_max_ms = 300'000;
  int window_passes_min = 1;
  int window_passes_max = 10;
  int priority_min = 1;
  int priority_max = 10;
  double dual_share = 0.02;           // fraction of requests that are dual members
  double high_rel_request_prob = 0.15;
  TimeMs delta_ms = 5'000;
  TimeMs big_delta_ms = 15'000;
  TimeMs horizon_ms = kDayMs;

  void apply_overrides(std::string_view json_text);
};

GenProfile profile_defaults(DensityProfile profile);

Instance generate_instance(DensityProfile profile, std::uint64_t seed);
Instance generate_instance(const GenProfile& profile, std::uint64_t seed);

}  // namespace sidsp
