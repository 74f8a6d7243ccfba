#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "foon/model.hpp"

// Readers and writers for the subgraph text format, the kitchen inventory
// file, and the robot capability profile (JSON).
//
// Subgraph format, tab-separated, one record per line:
//   # comment        ignored
//   O<TAB>label      begins an object node
//   S<TAB>state      adds a state to the current object (repeatable)
//   I<TAB>ingredient adds an ingredient (repeatable)
//   M<TAB>motion     the unit's motion; objects before it are inputs,
//                    objects after it are outputs
//   //               ends the current functional unit
//
// Kitchen format: one object per line, label{state1,state2}[ing1,ing2],
// braces and brackets optional. Profile format is documented at
// parse_profile below.

namespace foon {

// Items available in the environment, keyed by object identity.
struct KitchenInventory {
  std::map<std::string, ObjectNode> items;  // identity key -> representative

  bool contains(const ObjectNode& node) const {
    return items.count(object_identity(node)) > 0;
  }
  bool contains_key(const std::string& key) const {
    return items.count(key) > 0;
  }
};

// Per-robot success rates. Lookup precedence: per-unit override, then motion
// label, then default. All rates in (0, 1].
struct RobotProfile {
  std::string name;
  std::map<int, double> unit_rates;
  std::map<std::string, double> motion_rates;  // lowercased motion label
  double default_rate = 1.0;
  double assistant_rate = 1.0;
};

namespace detail {

[[noreturn]] inline void fail(size_t line, const std::string& msg) {
  throw ParseError("line " + std::to_string(line) + ": " + msg);
}

}  // namespace detail

// Parses the object grammar label{s1,s2}[i1,i2] used by kitchen files and
// the --goal flag.
inline ObjectNode parse_object_spec(std::string_view spec) {
  ObjectNode node;
  size_t brace = spec.find('{');
  size_t bracket = spec.find('[');
  size_t label_end = std::min(brace == std::string_view::npos ? spec.size() : brace,
                              bracket == std::string_view::npos ? spec.size() : bracket);
  node.label = trim(spec.substr(0, label_end));
  if (node.label.empty()) throw ParseError("object spec with empty label: '" + std::string(spec) + "'");

  auto split_list = [](std::string_view body, std::vector<std::string>& out) {
    size_t start = 0;
    while (start <= body.size()) {
      size_t comma = body.find(',', start);
      std::string_view piece =
          body.substr(start, comma == std::string_view::npos ? body.size() - start
                                                             : comma - start);
      std::string item = trim(piece);
      if (!item.empty()) out.push_back(item);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  };

  if (brace != std::string_view::npos) {
    size_t close = spec.find('}', brace);
    if (close == std::string_view::npos)
      throw ParseError("unclosed '{' in object spec: '" + std::string(spec) + "'");
    split_list(spec.substr(brace + 1, close - brace - 1), node.states);
  }
  if (bracket != std::string_view::npos) {
    size_t close = spec.find(']', bracket);
    if (close == std::string_view::npos)
      throw ParseError("unclosed '[' in object spec: '" + std::string(spec) + "'");
    split_list(spec.substr(bracket + 1, close - bracket - 1), node.ingredients);
  }
  return node;
}

inline Subgraph parse_subgraph(std::istream& in, const std::string& name = "") {
  Subgraph sg;
  sg.name = name;

  FunctionalUnit unit;
  ObjectNode current;
  bool have_object = false;
  bool after_motion = false;
  bool unit_started = false;
  size_t lineno = 0;

  auto flush_object = [&]() {
    if (!have_object) return;
    if (after_motion)
      unit.outputs.push_back(current);
    else
      unit.inputs.push_back(current);
    current = ObjectNode{};
    have_object = false;
  };

  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;

    if (trimmed == "//") {
      flush_object();
      if (trim(unit.motion.label).empty())
        detail::fail(lineno, "functional unit has no motion line");
      if (unit.inputs.empty())
        detail::fail(lineno, "functional unit has no input objects");
      if (unit.outputs.empty())
        detail::fail(lineno, "functional unit has no output objects");
      sg.units.push_back(std::move(unit));
      unit = FunctionalUnit{};
      after_motion = false;
      unit_started = false;
      continue;
    }

    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      detail::fail(lineno, "expected '<tag>\\t<value>' record, got '" + trimmed + "'");
    std::string tag = trim(line.substr(0, tab));
    std::string value = trim(line.substr(tab + 1));
    if (value.empty()) detail::fail(lineno, "empty value for tag '" + tag + "'");

    if (tag == "O") {
      flush_object();
      current.label = value;
      have_object = true;
      unit_started = true;
    } else if (tag == "S") {
      if (!have_object) detail::fail(lineno, "'S' record with no open object");
      current.states.push_back(value);
    } else if (tag == "I") {
      if (!have_object) detail::fail(lineno, "'I' record with no open object");
      current.ingredients.push_back(value);
    } else if (tag == "M") {
      if (after_motion) detail::fail(lineno, "second motion line in one unit");
      flush_object();
      if (unit.inputs.empty())
        detail::fail(lineno, "motion line before any input object");
      unit.motion.label = value;
      after_motion = true;
      unit_started = true;
    } else {
      detail::fail(lineno, "unknown record tag '" + tag + "'");
    }
  }

  if (unit_started || have_object)
    detail::fail(lineno, "unterminated functional unit at end of file");
  if (sg.units.empty()) throw ParseError("no functional units");
  return sg;
}

inline Subgraph parse_subgraph(const std::string& text, const std::string& name = "") {
  std::istringstream in(text);
  return parse_subgraph(in, name);
}

// Canonical form: states and ingredients sorted, one trailing newline.
// write(parse(write(x))) is byte-identical to write(x).
inline void write_subgraph(const Subgraph& sg, std::ostream& out) {
  auto write_object = [&](const ObjectNode& node) {
    out << "O\t" << trim(node.label) << "\n";
    std::vector<std::string> st(node.states), in(node.ingredients);
    for (auto& s : st) s = trim(s);
    for (auto& s : in) s = trim(s);
    std::sort(st.begin(), st.end());
    st.erase(std::unique(st.begin(), st.end()), st.end());
    std::sort(in.begin(), in.end());
    in.erase(std::unique(in.begin(), in.end()), in.end());
    for (const auto& s : st) out << "S\t" << s << "\n";
    for (const auto& s : in) out << "I\t" << s << "\n";
  };
  for (const auto& unit : sg.units) {
    for (const auto& node : unit.inputs) write_object(node);
    out << "M\t" << trim(unit.motion.label) << "\n";
    for (const auto& node : unit.outputs) write_object(node);
    out << "//\n";
  }
}

inline std::string write_subgraph(const Subgraph& sg) {
  std::ostringstream out;
  write_subgraph(sg, out);
  return out.str();
}

inline KitchenInventory parse_kitchen(std::istream& in) {
  KitchenInventory kitchen;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    ObjectNode node;
    try {
      node = parse_object_spec(trimmed);
    } catch (const ParseError& e) {
      detail::fail(lineno, e.what());
    }
    kitchen.items.emplace(object_identity(node), std::move(node));
  }
  return kitchen;
}

inline KitchenInventory parse_kitchen(const std::string& text) {
  std::istringstream in(text);
  return parse_kitchen(in);
}

// Accepts 0.75 or "75%", normalized to a fraction.
inline double parse_rate(const nlohmann::json& value, const std::string& key) {
  double rate;
  if (value.is_number()) {
    rate = value.get<double>();
  } else if (value.is_string()) {
    std::string s = trim(value.get<std::string>());
    bool percent = !s.empty() && s.back() == '%';
    if (percent) s.pop_back();
    try {
      size_t consumed = 0;
      rate = std::stod(s, &consumed);
      if (consumed != trim(s).size() && !trim(s.substr(consumed)).empty())
        throw std::invalid_argument(s);
    } catch (const std::exception&) {
      throw ParseError("profile key '" + key + "': unparseable rate '" +
                       value.get<std::string>() + "'");
    }
    if (percent) rate /= 100.0;
  } else {
    throw ParseError("profile key '" + key + "': rate must be a number or percent string");
  }
  if (!(rate > 0.0 && rate <= 1.0))
    throw ParseError("profile key '" + key + "': rate " + std::to_string(rate) +
                     " outside (0, 1]");
  return rate;
}

// Profile document (JSON):
//   {
//     "name": "nao",
//     "default": 0.9,          required; fallback rate
//     "assistant": 1.0,        optional; human success rate, defaults to 1.0
//     "motions": {"stir": 0.75, "heat": "1%"},
//     "units":   {"3": 0.5}    per-unit-id overrides, beat motion rates
//   }
inline RobotProfile parse_profile(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("profile: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("profile: top level must be an object");

  RobotProfile profile;
  profile.name = doc.value("name", std::string{});
  if (!doc.contains("default"))
    throw ParseError("profile key 'default': missing required rate");
  profile.default_rate = parse_rate(doc.at("default"), "default");
  if (doc.contains("assistant"))
    profile.assistant_rate = parse_rate(doc.at("assistant"), "assistant");

  if (doc.contains("motions")) {
    for (const auto& [label, value] : doc.at("motions").items())
      profile.motion_rates[to_lower(trim(label))] =
          parse_rate(value, "motions." + label);
  }
  if (doc.contains("units")) {
    for (const auto& [key, value] : doc.at("units").items()) {
      int id;
      try {
        id = std::stoi(key);
      } catch (const std::exception&) {
        throw ParseError("profile key 'units." + key + "': unit id must be an integer");
      }
      profile.unit_rates[id] = parse_rate(value, "units." + key);
    }
  }
  return profile;
}

inline RobotProfile parse_profile(const std::string& text) {
  std::istringstream in(text);
  return parse_profile(in);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FoonError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace foon
