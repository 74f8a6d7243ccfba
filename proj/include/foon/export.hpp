#pragma once

#include <json.hpp>

#include "foon/collaboration.hpp"

// Graph exports: DOT for visualization (object and motion nodes carry
// distinct shapes) and a versioned structured JSON form that round-trips the
// network exactly.

namespace foon {

inline constexpr int kStructuredFormatVersion = 1;

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

// One object node per distinct object identity (units sharing an object share
// the node, as in the network drawings), one motion node per unit. A profile
// annotates motion nodes with their success rates.
inline std::string to_dot(const UniversalFoon& foon,
                          const RobotProfile* profile = nullptr) {
  std::ostringstream out;
  out << "digraph foon {\n";
  out << "  rankdir=LR;\n";
  out << "  node [fontsize=10];\n";

  std::map<std::string, int> object_ids;
  auto object_node = [&](const ObjectNode& node) {
    std::string key = object_identity(node);
    auto it = object_ids.find(key);
    if (it != object_ids.end()) return it->second;
    int id = int(object_ids.size());
    object_ids.emplace(key, id);
    out << "  o" << id << " [label=\"" << detail::dot_escape(object_display(node))
        << "\", shape=ellipse, class=object, style=filled, fillcolor=lightgreen];\n";
    return id;
  };

  for (const auto& unit : foon.units) {
    std::string label = trim(unit.motion.label);
    if (profile) {
      std::ostringstream rate;
      rate.precision(4);
      rate << unit_rate(*profile, unit);
      label += " (" + rate.str() + ")";
    }
    out << "  m" << unit.id << " [label=\"" << detail::dot_escape(label)
        << "\", shape=box, class=motion, style=filled, fillcolor=lightcoral];\n";
    for (const auto& node : unit.inputs)
      out << "  o" << object_node(node) << " -> m" << unit.id << ";\n";
    for (const auto& node : unit.outputs)
      out << "  m" << unit.id << " -> o" << object_node(node) << ";\n";
  }
  out << "}\n";
  return out.str();
}

inline std::string to_dot(const UniversalFoon& foon, const DelegationPlan& plan) {
  std::ostringstream out;
  out << "digraph task_tree {\n";
  out << "  rankdir=LR;\n";
  out << "  node [fontsize=10];\n";

  std::map<std::string, int> object_ids;
  auto object_node = [&](const ObjectNode& node) {
    std::string key = object_identity(node);
    auto it = object_ids.find(key);
    if (it != object_ids.end()) return it->second;
    int id = int(object_ids.size());
    object_ids.emplace(key, id);
    out << "  o" << id << " [label=\"" << detail::dot_escape(object_display(node))
        << "\", shape=ellipse, class=object, style=filled, fillcolor=lightgreen];\n";
    return id;
  };

  for (size_t i = 0; i < plan.tree.units.size(); ++i) {
    const FunctionalUnit& unit = foon.unit(plan.tree.units[i]);
    bool human = plan.assignment[i] == Executor::Human;
    std::ostringstream rate;
    rate.precision(4);
    rate << plan.rates[i];
    std::string label = trim(unit.motion.label) + " (" + rate.str() + ")" +
                        (human ? " [HUMAN]" : "");
    out << "  m" << unit.id << " [label=\"" << detail::dot_escape(label)
        << "\", shape=box, class=motion, style=filled, fillcolor="
        << (human ? "lightskyblue" : "lightcoral") << "];\n";
    for (const auto& node : unit.inputs)
      out << "  o" << object_node(node) << " -> m" << unit.id << ";\n";
    for (const auto& node : unit.outputs)
      out << "  m" << unit.id << " -> o" << object_node(node) << ";\n";
  }
  out << "}\n";
  return out.str();
}

inline nlohmann::json object_to_json(const ObjectNode& node) {
  std::vector<std::string> st(node.states), in(node.ingredients);
  std::sort(st.begin(), st.end());
  std::sort(in.begin(), in.end());
  return {{"label", trim(node.label)}, {"states", st}, {"ingredients", in}};
}

inline ObjectNode object_from_json(const nlohmann::json& doc) {
  ObjectNode node;
  node.label = doc.at("label").get<std::string>();
  node.states = doc.value("states", std::vector<std::string>{});
  node.ingredients = doc.value("ingredients", std::vector<std::string>{});
  return node;
}

inline nlohmann::json to_structured(const UniversalFoon& foon) {
  nlohmann::json units = nlohmann::json::array();
  for (const auto& unit : foon.units) {
    nlohmann::json inputs = nlohmann::json::array();
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& node : unit.inputs) inputs.push_back(object_to_json(node));
    for (const auto& node : unit.outputs) outputs.push_back(object_to_json(node));
    units.push_back({{"id", unit.id},
                     {"motion", trim(unit.motion.label)},
                     {"inputs", inputs},
                     {"outputs", outputs}});
  }
  return {{"version", kStructuredFormatVersion},
          {"type", "network"},
          {"units", units}};
}

inline nlohmann::json to_structured(const UniversalFoon& foon,
                                    const DelegationPlan& plan) {
  nlohmann::json steps = nlohmann::json::array();
  for (size_t i = 0; i < plan.tree.units.size(); ++i) {
    const FunctionalUnit& unit = foon.unit(plan.tree.units[i]);
    steps.push_back(
        {{"unit_id", unit.id},
         {"motion", trim(unit.motion.label)},
         {"executor", plan.assignment[i] == Executor::Human ? "HUMAN" : "ROBOT"},
         {"rate", plan.rates[i]}});
  }
  return {{"version", kStructuredFormatVersion},
          {"type", "plan"},
          {"goal", plan.tree.goal_key},
          {"m", plan.m},
          {"total_success", plan.total_success},
          {"steps", steps}};
}

inline UniversalFoon from_structured(const nlohmann::json& doc) {
  if (!doc.contains("version"))
    throw ParseError("structured network: missing version field");
  if (doc.at("version").get<int>() != kStructuredFormatVersion)
    throw ParseError("structured network: unsupported version");
  Subgraph sg;
  sg.name = "imported";
  for (const auto& u : doc.at("units")) {
    FunctionalUnit unit;
    unit.motion.label = u.at("motion").get<std::string>();
    for (const auto& node : u.at("inputs")) unit.inputs.push_back(object_from_json(node));
    for (const auto& node : u.at("outputs")) unit.outputs.push_back(object_from_json(node));
    sg.units.push_back(std::move(unit));
  }
  if (sg.units.empty()) throw ParseError("structured network: no units");
  return merge({sg});
}

}  // namespace foon
