#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

// Core types for the bipartite manipulation network: object nodes, motion
// nodes, functional units, demonstration subgraphs, and the merged universal
// network with its producer/consumer index.

namespace foon {

struct FoonError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : FoonError {
  using FoonError::FoonError;
};

struct GoalNotProducibleError : FoonError {
  using FoonError::FoonError;
};

struct DelegationError : FoonError {
  using FoonError::FoonError;
};

struct ExpansionLimitError : FoonError {
  using FoonError::FoonError;
};

inline std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

// An object in some state, possibly containing ingredients. Label comparison
// is case-insensitive; states and ingredients have set semantics.
struct ObjectNode {
  std::string label;
  std::vector<std::string> states;
  std::vector<std::string> ingredients;
};

struct MotionNode {
  std::string label;
};

// One manipulation step: input objects and a single motion producing the
// output objects. Ids are assigned at merge time.
struct FunctionalUnit {
  int id = -1;
  std::vector<ObjectNode> inputs;
  std::vector<ObjectNode> outputs;
  MotionNode motion;
};

// Ordered unit sequence from a single demonstration; order encodes time.
struct Subgraph {
  std::string name;
  std::vector<FunctionalUnit> units;
};

// Canonical key over (label, states, ingredients): lowercased, trimmed,
// sorted. Equal keys iff same object-state-ingredient identity.
inline std::string object_identity(const ObjectNode& node) {
  std::vector<std::string> st, in;
  st.reserve(node.states.size());
  in.reserve(node.ingredients.size());
  for (const auto& s : node.states) st.push_back(to_lower(trim(s)));
  for (const auto& s : node.ingredients) in.push_back(to_lower(trim(s)));
  std::sort(st.begin(), st.end());
  st.erase(std::unique(st.begin(), st.end()), st.end());
  std::sort(in.begin(), in.end());
  in.erase(std::unique(in.begin(), in.end()), in.end());
  std::string key = to_lower(trim(node.label));
  key.push_back('\x1f');
  for (const auto& s : st) {
    key += s;
    key.push_back('\x1e');
  }
  key.push_back('\x1f');
  for (const auto& s : in) {
    key += s;
    key.push_back('\x1e');
  }
  return key;
}

// Human-readable form of an object identity: label{states}[ingredients].
inline std::string object_display(const ObjectNode& node) {
  std::vector<std::string> st(node.states), in(node.ingredients);
  std::sort(st.begin(), st.end());
  std::sort(in.begin(), in.end());
  std::string out = trim(node.label);
  if (!st.empty()) {
    out += "{";
    for (size_t i = 0; i < st.size(); ++i) {
      if (i) out += ",";
      out += st[i];
    }
    out += "}";
  }
  if (!in.empty()) {
    out += "[";
    for (size_t i = 0; i < in.size(); ++i) {
      if (i) out += ",";
      out += in[i];
    }
    out += "]";
  }
  return out;
}

inline void validate_object(const ObjectNode& node) {
  if (trim(node.label).empty())
    throw FoonError("object node with empty label");
}

inline void validate_unit(const FunctionalUnit& unit) {
  if (unit.inputs.empty()) throw FoonError("functional unit with no inputs");
  if (unit.outputs.empty()) throw FoonError("functional unit with no outputs");
  if (trim(unit.motion.label).empty())
    throw FoonError("functional unit with empty motion label");
  for (const auto& n : unit.inputs) validate_object(n);
  for (const auto& n : unit.outputs) validate_object(n);
}

inline std::vector<std::string> sorted_identities(
    const std::vector<ObjectNode>& nodes) {
  std::vector<std::string> keys;
  keys.reserve(nodes.size());
  for (const auto& n : nodes) keys.push_back(object_identity(n));
  std::sort(keys.begin(), keys.end());
  return keys;
}

// Canonical total order key: motion label, then sorted input identities, then
// sorted output identities. Two units are unit_equals iff keys are equal.
inline std::string unit_sort_key(const FunctionalUnit& unit) {
  std::string key = to_lower(trim(unit.motion.label));
  key.push_back('\x1d');
  for (const auto& k : sorted_identities(unit.inputs)) {
    key += k;
    key.push_back('\x1d');
  }
  key.push_back('\x1c');
  for (const auto& k : sorted_identities(unit.outputs)) {
    key += k;
    key.push_back('\x1d');
  }
  return key;
}

// Duplicate criterion: same input/output counts, matching identity multisets,
// same motion label (case-insensitive).
inline bool unit_equals(const FunctionalUnit& a, const FunctionalUnit& b) {
  if (a.inputs.size() != b.inputs.size()) return false;
  if (a.outputs.size() != b.outputs.size()) return false;
  return unit_sort_key(a) == unit_sort_key(b);
}

struct ObjectUses {
  std::vector<int> producers;  // unit ids with this object among outputs
  std::vector<int> consumers;  // unit ids with this object among inputs
};

// Deduplicated union of subgraphs. Immutable once built; unit ids are the
// rank of each unit under the canonical order, so merge output is independent
// of argument order.
struct UniversalFoon {
  std::vector<FunctionalUnit> units;  // indexed by id
  std::unordered_map<std::string, ObjectUses> object_index;

  const FunctionalUnit& unit(int id) const { return units.at(size_t(id)); }

  std::vector<int> producers_of(const ObjectNode& node) const {
    auto it = object_index.find(object_identity(node));
    if (it == object_index.end()) return {};
    return it->second.producers;
  }
};

inline std::unordered_map<std::string, ObjectUses> build_object_index(
    const std::vector<FunctionalUnit>& units) {
  std::unordered_map<std::string, ObjectUses> index;
  for (const auto& u : units) {
    std::set<std::string> in, out;
    for (const auto& n : u.inputs) in.insert(object_identity(n));
    for (const auto& n : u.outputs) out.insert(object_identity(n));
    for (const auto& k : in) index[k].consumers.push_back(u.id);
    for (const auto& k : out) index[k].producers.push_back(u.id);
  }
  return index;
}

// Union of all functional units across subgraphs, one representative per
// unit_equals equivalence class.
inline UniversalFoon merge(const std::vector<Subgraph>& subgraphs) {
  if (subgraphs.empty()) throw FoonError("nothing to merge");
  std::map<std::string, FunctionalUnit> canonical;
  for (const auto& sg : subgraphs) {
    for (const auto& u : sg.units) {
      validate_unit(u);
      canonical.emplace(unit_sort_key(u), u);
    }
  }
  UniversalFoon foon;
  foon.units.reserve(canonical.size());
  int id = 0;
  for (auto& [key, unit] : canonical) {
    unit.id = id++;
    foon.units.push_back(std::move(unit));
  }
  foon.object_index = build_object_index(foon.units);
  return foon;
}

}  // namespace foon
