#pragma once

#include <string>
#include <string_view>

#include "sidsp/model.hpp"

namespace sidsp {

Instance load_instance(std::string_view text);
std::string save_instance(const Instance& inst);

Schedule load_schedule(const Instance& inst, std::string_view text);
std::string save_schedule(const Instance& inst, const Schedule& sched, double alpha);

Instance load_instance_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

}  // namespace sidsp
