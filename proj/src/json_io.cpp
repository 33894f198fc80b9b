#include "sidsp/json_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sidsp/error.hpp"

namespace sidsp {

using nlohmann::json;

namespace {

json require(const json& obj, const char* field, const std::string& where) {
  auto it = obj.find(field);
  if (it == obj.end())
    raise(Errc::ParseError, where + ": missing field '" + field + "'");
  return *it;
}

TimeMs as_time(const json& v, const char* field, const std::string& where) {
  if (!v.is_number_integer())
    raise(Errc::ParseError, where + ": field '" + field + "' must be an integer");
  return v.get<TimeMs>();
}

IntervalSet parse_masks(const json& arr, const std::string& where) {
  if (!arr.is_array()) raise(Errc::ParseError, where + ": mask list must be an array");
  std::vector<Interval> ivs;
  for (const json& m : arr) {
    if (!m.is_array() || m.size() != 2 || !m[0].is_number_integer() || !m[1].is_number_integer())
      raise(Errc::ParseError, where + ": each mask must be a [lo, hi] integer pair");
    Interval iv{m[0].get<TimeMs>(), m[1].get<TimeMs>()};
    if (iv.lo >= iv.hi) raise(Errc::ParseError, where + ": mask interval requires lo < hi");
    ivs.push_back(iv);
  }
  std::vector<Interval> sorted = ivs;
  try {
    return IntervalSet(std::move(sorted));
  } catch (const Error&) {
    raise(Errc::InvariantViolation, where + ": masks must be ordered and non-overlapping");
  }
}

json masks_to_json(const IntervalSet& set) {
  json arr = json::array();
  for (Interval iv : set.intervals()) arr.push_back({iv.lo, iv.hi});
  return arr;
}

}  // namespace

Instance load_instance(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(Errc::ParseError, std::string("instance: ") + e.what());
  }
  if (!root.is_object()) raise(Errc::ParseError, "instance: top level must be an object");

  Instance inst;
  inst.horizon_end = as_time(require(root, "horizon_ms", "instance"), "horizon_ms", "instance");
  inst.delta = as_time(require(root, "delta_ms", "instance"), "delta_ms", "instance");
  inst.big_delta = as_time(require(root, "big_delta_ms", "instance"), "big_delta_ms", "instance");
  inst.preprocessed = root.value("preprocessed", false);

  for (const json& s : require(root, "stations", "instance")) {
    GroundStation gs;
    gs.id = require(s, "id", "station").get<std::string>();
    std::string where = "station " + gs.id;
    std::string power = require(s, "power", where).get<std::string>();
    if (power == "half") {
      gs.power = StationPower::HalfPower;
    } else if (power == "full") {
      gs.power = StationPower::FullPower;
    } else {
      raise(Errc::ParseError, where + ": power must be \"half\" or \"full\"");
    }
    json ch = require(s, "channels", where);
    if (!ch.is_number_integer()) raise(Errc::ParseError, where + ": channels must be an integer");
    gs.channels = ch.get<int>();
    gs.normal_masks = parse_masks(require(s, "normal_masks", where), where);
    gs.high_rel_masks = parse_masks(require(s, "high_rel_masks", where), where);
    inst.stations.push_back(std::move(gs));
  }

  for (const json& r : require(root, "requests", "instance")) {
    Request rq;
    rq.id = require(r, "id", "request").get<std::string>();
    std::string where = "request " + rq.id;
    rq.release = as_time(require(r, "release_ms", where), "release_ms", where);
    rq.deadline = as_time(require(r, "deadline_ms", where), "deadline_ms", where);
    rq.duration = as_time(require(r, "duration_ms", where), "duration_ms", where);
    json w = require(r, "priority", where);
    if (!w.is_number()) raise(Errc::ParseError, where + ": priority must be a number");
    rq.priority = w.get<double>();
    rq.station = require(r, "station", where).get<std::string>();
    json urgent = require(r, "urgent", where);
    json hr = require(r, "high_reliability", where);
    if (!urgent.is_boolean() || !hr.is_boolean())
      raise(Errc::ParseError, where + ": urgent and high_reliability must be booleans");
    rq.urgent = urgent.get<bool>();
    rq.high_reliability = hr.get<bool>();
    inst.requests.push_back(std::move(rq));
  }

  for (const json& p : require(root, "dual_pairs", "instance")) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
      raise(Errc::ParseError, "dual_pairs: each pair must be [id, id]");
    inst.dual_pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
  }

  inst.reindex();
  return inst;
}

std::string save_instance(const Instance& inst) {
  json root;
  root["horizon_ms"] = inst.horizon_end;
  root["delta_ms"] = inst.delta;
  root["big_delta_ms"] = inst.big_delta;
  if (inst.preprocessed) root["preprocessed"] = true;
  json stations = json::array();
  for (const GroundStation& gs : inst.stations) {
    json s;
    s["id"] = gs.id;
    s["power"] = gs.power == StationPower::FullPower ? "full" : "half";
    s["channels"] = gs.channels;
    s["normal_masks"] = masks_to_json(gs.normal_masks);
    s["high_rel_masks"] = masks_to_json(gs.high_rel_masks);
    stations.push_back(std::move(s));
  }
  root["stations"] = std::move(stations);
  json requests = json::array();
  for (const Request& rq : inst.requests) {
    json r;
    r["id"] = rq.id;
    r["release_ms"] = rq.release;
    r["deadline_ms"] = rq.deadline;
    r["duration_ms"] = rq.duration;
    r["priority"] = rq.priority;
    r["station"] = rq.station;
    r["urgent"] = rq.urgent;
    r["high_reliability"] = rq.high_reliability;
    requests.push_back(std::move(r));
  }
  root["requests"] = std::move(requests);
  json pairs = json::array();
  for (const auto& [a, b] : inst.dual_pairs) pairs.push_back({a, b});
  root["dual_pairs"] = std::move(pairs);
  return root.dump(2) + "\n";
}

Schedule load_schedule(const Instance& inst, std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(Errc::ParseError, std::string("schedule: ") + e.what());
  }
  Schedule sched;
  std::vector<char> seen(inst.request_count(), 0);
  for (const json& e : require(root, "entries", "schedule")) {
    ScheduleEntry entry;
    std::string id = require(e, "request", "entry").get<std::string>();
    auto idx = inst.find_request(id);
    if (!idx) raise(Errc::UnknownRequestId, "schedule entry: unknown request " + id);
    if (seen[*idx]) raise(Errc::InvariantViolation, "schedule lists request " + id + " twice");
    seen[*idx] = 1;
    entry.request = *idx;
    entry.start = as_time(require(e, "start_ms", "entry " + id), "start_ms", "entry " + id);
    entry.channel = e.value("channel", 0);
    entry.antenna = e.value("antenna", 0);
    sched.entries.push_back(entry);
  }
  if (root.contains("objective") && root["objective"].is_number())
    sched.objective_cached = root["objective"].get<double>();
  return sched;
}

std::string save_schedule(const Instance& inst, const Schedule& sched, double alpha) {
  json root;
  json entries = json::array();
  for (const ScheduleEntry& e : sched.entries) {
    json j;
    j["request"] = inst.requests[e.request].id;
    j["start_ms"] = e.start;
    j["channel"] = e.channel;
    j["antenna"] = e.antenna;
    entries.push_back(std::move(j));
  }
  root["entries"] = std::move(entries);
  root["objective"] = sched.objective_cached ? *sched.objective_cached
                                             : objective(sched, inst, ObjectiveParams{alpha});
  root["alpha"] = alpha;
  return root.dump(2) + "\n";
}

Instance load_instance_file(const std::string& path) {
  return load_instance(read_file(path));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::IoError, "cannot open " + path + " for writing");
  out << content;
  if (!out) raise(Errc::IoError, "failed writing " + path);
}

}  // namespace sidsp
