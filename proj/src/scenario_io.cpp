// Copyright 2026 The stpart Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stpart/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace stpart {

using nlohmann::json;

ParseError::ParseError(const std::string & field, int line, const std::string & what)
: std::runtime_error(
    (line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + (field.empty() ? "" : field + ": ") + what),
  field_(field),
  line_(line)
{
}

namespace {

// Walks the raw text to find the line where the value at `pointer` starts.
class LineFinder
{
public:
  explicit LineFinder(std::string_view text) : text_(text) {}

  int find(const std::string & pointer)
  {
    target_ = pointer;
    pos_ = 0;
    line_ = 1;
    found_ = 0;
    try {
      skip_ws();
      value("");
    } catch (const Stop &) {
    }
    return found_;
  }

private:
  struct Stop
  {
  };

  void skip_ws()
  {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') { ++line_; }
      ++pos_;
    }
  }

  std::string string()
  {
    std::string out;
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') { ++pos_; }
      if (pos_ < text_.size()) { out += text_[pos_++]; }
    }
    ++pos_;
    return out;
  }

  void value(const std::string & path)
  {
    if (path == target_) {
      found_ = line_;
      throw Stop{};
    }
    if (pos_ >= text_.size()) { throw Stop{}; }
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] != '}') {
        const int key_line = line_;
        const std::string key = string();
        const std::string child = path + "/" + key;
        if (child == target_) {
          found_ = key_line;
          throw Stop{};
        }
        skip_ws();
        ++pos_;  // ':'
        skip_ws();
        value(child);
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') { ++pos_; }
        skip_ws();
      }
      ++pos_;
    } else if (c == '[') {
      ++pos_;
      skip_ws();
      int index = 0;
      while (pos_ < text_.size() && text_[pos_] != ']') {
        value(path + "/" + std::to_string(index++));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') { ++pos_; }
        skip_ws();
      }
      ++pos_;
    } else if (c == '"') {
      string();
    } else {
      while (pos_ < text_.size() && !std::strchr(",]} \t\r\n", text_[pos_])) { ++pos_; }
    }
  }

  std::string_view text_;
  std::string target_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int found_ = 0;
};

class Reader
{
public:
  explicit Reader(std::string_view text) : finder_(text) {}

  [[noreturn]] void fail(const std::string & pointer, const std::string & what)
  {
    throw ParseError(pointer.empty() ? "/" : pointer, finder_.find(pointer), what);
  }

  const json & object(const json & j, const std::string & ptr, std::initializer_list<const char *> keys)
  {
    if (!j.is_object()) { fail(ptr, "expected an object"); }
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!allowed.count(it.key())) { fail(ptr + "/" + it.key(), "unknown field"); }
    }
    for (const char * k : keys) {
      if (!j.contains(k)) { fail(ptr, std::string("missing field \"") + k + "\""); }
    }
    return j;
  }

  double number(const json & j, const std::string & ptr)
  {
    if (!j.is_number()) { fail(ptr, "expected a number"); }
    const double v = j.get<double>();
    if (!std::isfinite(v)) { fail(ptr, "number is not finite"); }
    return v;
  }

  int integer(const json & j, const std::string & ptr)
  {
    if (!j.is_number_integer()) { fail(ptr, "expected an integer"); }
    return j.get<int>();
  }

  std::vector<double> numbers(const json & j, const std::string & ptr)
  {
    if (!j.is_array()) { fail(ptr, "expected an array"); }
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) { out.push_back(number(j[i], ptr + "/" + std::to_string(i))); }
    return out;
  }

private:
  LineFinder finder_;
};

}  // namespace

Scenario parse_scenario(std::string_view text)
{
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error & e) {
    int line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') { ++line; }
    }
    throw ParseError("", line, "invalid JSON");
  }

  Reader rd(text);
  rd.object(
    doc, "",
    {"format_version", "road", "ego", "obstacles", "horizon", "tau", "margin_min", "alpha", "control_bounds",
     "ref_speed", "safety_pad"});
  if (rd.integer(doc["format_version"], "/format_version") != kFormatVersion) {
    rd.fail("/format_version", "unsupported format version");
  }

  Scenario scn;
  const json & road = rd.object(doc["road"], "/road", {"breakpoints", "r_min", "r_max"});
  try {
    scn.road = RoadModel(
      rd.numbers(road["breakpoints"], "/road/breakpoints"), rd.numbers(road["r_min"], "/road/r_min"),
      rd.numbers(road["r_max"], "/road/r_max"));
  } catch (const std::invalid_argument & e) {
    rd.fail("/road", e.what());
  }

  const json & ego = rd.object(doc["ego"], "/ego", {"half_length", "half_width", "initial"});
  scn.ego.half_length = rd.number(ego["half_length"], "/ego/half_length");
  scn.ego.half_width = rd.number(ego["half_width"], "/ego/half_width");
  const json & init = rd.object(ego["initial"], "/ego/initial", {"s", "r", "s_dot", "r_dot"});
  scn.ego.initial << rd.number(init["s"], "/ego/initial/s"), rd.number(init["r"], "/ego/initial/r"),
    rd.number(init["s_dot"], "/ego/initial/s_dot"), rd.number(init["r_dot"], "/ego/initial/r_dot");

  const json & obstacles = doc["obstacles"];
  if (!obstacles.is_array()) { rd.fail("/obstacles", "expected an array"); }
  std::set<int> ids;
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const std::string ptr = "/obstacles/" + std::to_string(i);
    const json & o = rd.object(obstacles[i], ptr, {"id", "poses"});
    ObstacleTrack track;
    track.id = rd.integer(o["id"], ptr + "/id");
    if (!ids.insert(track.id).second) { rd.fail(ptr + "/id", "duplicate obstacle id"); }
    if (!o["poses"].is_array()) { rd.fail(ptr + "/poses", "expected an array"); }
    for (std::size_t k = 0; k < o["poses"].size(); ++k) {
      const std::string pp = ptr + "/poses/" + std::to_string(k);
      const json & pose = rd.object(o["poses"][k], pp, {"s", "r", "heading", "half_length", "half_width"});
      track.poses.push_back(
        {rd.number(pose["s"], pp + "/s"), rd.number(pose["r"], pp + "/r"), rd.number(pose["heading"], pp + "/heading"),
         rd.number(pose["half_length"], pp + "/half_length"), rd.number(pose["half_width"], pp + "/half_width")});
    }
    scn.obstacles.push_back(std::move(track));
  }
  std::sort(scn.obstacles.begin(), scn.obstacles.end(), [](const auto & a, const auto & b) { return a.id < b.id; });

  scn.horizon = rd.number(doc["horizon"], "/horizon");
  scn.tau = rd.number(doc["tau"], "/tau");
  scn.margin_min = rd.number(doc["margin_min"], "/margin_min");
  scn.alpha = rd.number(doc["alpha"], "/alpha");
  const json & cb = rd.object(doc["control_bounds"], "/control_bounds", {"a_lon_max", "a_lat_max"});
  scn.bounds.a_lon_max = rd.number(cb["a_lon_max"], "/control_bounds/a_lon_max");
  scn.bounds.a_lat_max = rd.number(cb["a_lat_max"], "/control_bounds/a_lat_max");
  scn.ref_speed = rd.number(doc["ref_speed"], "/ref_speed");
  scn.safety_pad = rd.number(doc["safety_pad"], "/safety_pad");
  return scn;
}

Scenario load_scenario(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) { throw ParseError("", 0, "cannot open " + path.string()); }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string dump_scenario(const Scenario & scn)
{
  json doc = json::object();
  doc["format_version"] = kFormatVersion;
  doc["road"] = {
    {"breakpoints", scn.road.breakpoints()}, {"r_min", scn.road.r_min_values()}, {"r_max", scn.road.r_max_values()}};
  const EgoState & x0 = scn.ego.initial;
  doc["ego"] = {
    {"half_length", scn.ego.half_length},
    {"half_width", scn.ego.half_width},
    {"initial", {{"s", x0(0)}, {"r", x0(1)}, {"s_dot", x0(2)}, {"r_dot", x0(3)}}}};
  json obstacles = json::array();
  for (const auto & track : scn.obstacles) {
    json poses = json::array();
    for (const auto & p : track.poses) {
      poses.push_back(
        {{"s", p.s}, {"r", p.r}, {"heading", p.heading}, {"half_length", p.half_length}, {"half_width", p.half_width}});
    }
    obstacles.push_back({{"id", track.id}, {"poses", poses}});
  }
  doc["obstacles"] = obstacles;
  doc["horizon"] = scn.horizon;
  doc["tau"] = scn.tau;
  doc["margin_min"] = scn.margin_min;
  doc["alpha"] = scn.alpha;
  doc["control_bounds"] = {{"a_lon_max", scn.bounds.a_lon_max}, {"a_lat_max", scn.bounds.a_lat_max}};
  doc["ref_speed"] = scn.ref_speed;
  doc["safety_pad"] = scn.safety_pad;
  return doc.dump(2) + "\n";
}

}  // namespace stpart
