// Command-line front end: merge subgraphs into a universal network, retrieve
// delegation plans, enumerate task trees, sweep over M, simulate plan
// execution, and export DOT / structured JSON.
//
// Exit codes: 0 success, 1 internal error, 2 parse/usage error, 3 goal not
// producible, 4 no executable tree, 5 M exceeds all tree lengths, 6 expansion
// limit exceeded.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "foon/collaboration.hpp"
#include "foon/export.hpp"
#include "foon/model.hpp"
#include "foon/parse.hpp"
#include "foon/retrieval.hpp"
#include "foon/simulation.hpp"

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitParse = 2;
constexpr int kExitGoalNotProducible = 3;
constexpr int kExitNoExecutableTree = 4;
constexpr int kExitMExceeds = 5;
constexpr int kExitExpansionLimit = 6;

struct NoExecutableTree : foon::FoonError {
  using FoonError::FoonError;
};

struct Request {
  std::string network_path;
  std::string goal_spec;
  std::string kitchen_path;
  std::string profile_path;
  int m = -1;  // -1: auto-select via optimal_m
  double epsilon = 0.05;
  foon::ExpansionLimits limits;
};

// Network files are either canonical subgraph text or structured JSON;
// structured files start with '{'.
foon::UniversalFoon load_network(const std::string& path) {
  std::string text = foon::read_file(path);
  std::string trimmed = foon::trim(text);
  if (!trimmed.empty() && trimmed.front() == '{')
    return foon::from_structured(nlohmann::json::parse(text));
  return foon::merge({foon::parse_subgraph(text, path)});
}

foon::KitchenInventory load_kitchen(const std::string& path) {
  std::istringstream in(foon::read_file(path));
  return foon::parse_kitchen(in);
}

foon::RobotProfile load_profile(const std::string& path) {
  std::istringstream in(foon::read_file(path));
  return foon::parse_profile(in);
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw foon::FoonError("cannot write file: " + out_path);
  out << content;
}

std::vector<foon::TaskTree> enumerate_for(const foon::UniversalFoon& network,
                                          const Request& req,
                                          const foon::KitchenInventory& kitchen,
                                          const foon::ObjectNode& goal) {
  auto forest = foon::build_path_forest(network, goal, req.limits);
  auto trees = foon::enumerate_task_trees(forest, network, kitchen);
  if (trees.empty()) throw NoExecutableTree("no executable tree for goal " +
                                            foon::object_display(goal));
  return trees;
}

void print_plan(const foon::UniversalFoon& network, const foon::DelegationPlan& plan) {
  std::cout << "plan for goal (m=" << plan.m << "):\n";
  for (size_t i = 0; i < plan.tree.units.size(); ++i) {
    const auto& unit = network.unit(plan.tree.units[i]);
    bool human = plan.assignment[i] == foon::Executor::Human;
    std::cout << "  " << (i + 1) << ". [" << (human ? "HUMAN" : "ROBOT") << " "
              << plan.rates[i] << "] " << foon::trim(unit.motion.label) << ": ";
    for (size_t j = 0; j < unit.inputs.size(); ++j)
      std::cout << (j ? ", " : "") << foon::object_display(unit.inputs[j]);
    std::cout << " -> ";
    for (size_t j = 0; j < unit.outputs.size(); ++j)
      std::cout << (j ? ", " : "") << foon::object_display(unit.outputs[j]);
    std::cout << "\n";
    if (human)
      std::cout << "     instruction to assistant: please perform '"
                << foon::trim(unit.motion.label) << "' on the robot's behalf\n";
  }
  std::cout << "total success rate: " << plan.total_success << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"Weighted manipulation-network task planner"};
  app.require_subcommand(1);

  // merge
  auto* merge_cmd = app.add_subcommand("merge", "Merge subgraph files into a universal network");
  std::vector<std::string> merge_inputs;
  std::string merge_out;
  merge_cmd->add_option("subgraphs", merge_inputs, "Subgraph files")->required()->expected(-1);
  merge_cmd->add_option("--out", merge_out, "Output network file (default stdout)");

  // shared planning flags
  auto add_request_flags = [](CLI::App* cmd, Request& req, bool need_profile) {
    cmd->add_option("--network", req.network_path, "Merged network file")->required();
    cmd->add_option("--goal", req.goal_spec, "Goal object, label{states}[ingredients]")->required();
    cmd->add_option("--kitchen", req.kitchen_path, "Kitchen inventory file")->required();
    auto* prof = cmd->add_option("--profile", req.profile_path, "Robot profile file");
    if (need_profile) prof->required();
    cmd->add_option("--max-nodes", req.limits.max_nodes, "Path forest node limit");
    cmd->add_option("--max-children", req.limits.max_children, "Per-expansion product limit");
  };

  Request retrieve_req;
  auto* retrieve_cmd = app.add_subcommand("retrieve", "Retrieve the best delegation plan");
  add_request_flags(retrieve_cmd, retrieve_req, true);
  retrieve_cmd->add_option("--m", retrieve_req.m, "Human-assisted steps (default: auto)");
  retrieve_cmd->add_option("--epsilon", retrieve_req.epsilon, "Improvement threshold for auto M");

  Request enum_req;
  auto* enum_cmd = app.add_subcommand("enumerate", "Enumerate all executable task trees");
  add_request_flags(enum_cmd, enum_req, false);

  Request sweep_req;
  int sweep_max_m = -1;
  std::string sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "Best success rate for each M");
  add_request_flags(sweep_cmd, sweep_req, true);
  sweep_cmd->add_option("--max-m", sweep_max_m, "Largest M (default: longest tree - 1)");
  sweep_cmd->add_option("--out", sweep_out, "Output file (default stdout)");

  Request sim_req;
  uint64_t sim_trials = 10000, sim_seed = 0;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo execution of the best plan");
  add_request_flags(sim_cmd, sim_req, true);
  sim_cmd->add_option("--m", sim_req.m, "Human-assisted steps (default: auto)");
  sim_cmd->add_option("--epsilon", sim_req.epsilon, "Improvement threshold for auto M");
  sim_cmd->add_option("--trials", sim_trials, "Trial count");
  sim_cmd->add_option("--seed", sim_seed, "RNG seed");

  Request export_req;
  std::string export_what, export_format = "dot", export_out, export_network;
  auto* export_cmd = app.add_subcommand("export", "Export network or tree as dot/structured");
  export_cmd->add_option("what", export_what, "network|tree")->required()
      ->check(CLI::IsMember({"network", "tree"}));
  export_cmd->add_option("--network", export_network, "Merged network file")->required();
  export_cmd->add_option("--format", export_format, "dot|structured")
      ->check(CLI::IsMember({"dot", "structured"}));
  export_cmd->add_option("--out", export_out, "Output file (default stdout)");
  export_cmd->add_option("--goal", export_req.goal_spec, "Goal object (tree export)");
  export_cmd->add_option("--kitchen", export_req.kitchen_path, "Kitchen file (tree export)");
  export_cmd->add_option("--profile", export_req.profile_path, "Profile file");
  export_cmd->add_option("--m", export_req.m, "Human-assisted steps (tree export)");
  export_cmd->add_option("--max-nodes", export_req.limits.max_nodes, "Path forest node limit");
  export_cmd->add_option("--max-children", export_req.limits.max_children,
                         "Per-expansion product limit");

  CLI11_PARSE(app, argc, argv);

  if (merge_cmd->parsed()) {
    std::vector<foon::Subgraph> subgraphs;
    size_t units_in = 0;
    for (const auto& path : merge_inputs) {
      subgraphs.push_back(foon::parse_subgraph(foon::read_file(path), path));
      units_in += subgraphs.back().units.size();
    }
    auto network = foon::merge(subgraphs);
    foon::Subgraph merged{"universal", network.units};
    write_output(merge_out, foon::write_subgraph(merged));
    std::cerr << units_in << " units in, " << network.units.size()
              << " after merge\n";
    return 0;
  }

  if (retrieve_cmd->parsed()) {
    auto network = load_network(retrieve_req.network_path);
    auto kitchen = load_kitchen(retrieve_req.kitchen_path);
    auto profile = load_profile(retrieve_req.profile_path);
    auto goal = foon::parse_object_spec(retrieve_req.goal_spec);
    auto trees = enumerate_for(network, retrieve_req, kitchen, goal);
    int m = retrieve_req.m >= 0
                ? retrieve_req.m
                : foon::optimal_m(network, trees, profile, retrieve_req.epsilon);
    auto best = foon::best_plan(network, trees, profile, m);
    print_plan(network, best.primary);
    if (best.co_optimal.size() > 1)
      std::cout << best.co_optimal.size() << " co-optimal plans at this M\n";
    return 0;
  }

  if (enum_cmd->parsed()) {
    auto network = load_network(enum_req.network_path);
    auto kitchen = load_kitchen(enum_req.kitchen_path);
    auto goal = foon::parse_object_spec(enum_req.goal_spec);
    auto trees = enumerate_for(network, enum_req, kitchen, goal);
    std::optional<foon::RobotProfile> profile;
    if (!enum_req.profile_path.empty()) profile = load_profile(enum_req.profile_path);
    std::cout << trees.size() << " task trees\n";
    for (const auto& tree : trees) {
      auto metrics = foon::tree_metrics(network, tree);
      std::cout << "  units [";
      for (size_t i = 0; i < metrics.unit_ids.size(); ++i)
        std::cout << (i ? "," : "") << metrics.unit_ids[i];
      std::cout << "] length " << metrics.length << " depth " << metrics.depth;
      if (profile)
        std::cout << " success " << foon::joint_success(network, tree, *profile);
      std::cout << "\n";
    }
    return 0;
  }

  if (sweep_cmd->parsed()) {
    auto network = load_network(sweep_req.network_path);
    auto kitchen = load_kitchen(sweep_req.kitchen_path);
    auto profile = load_profile(sweep_req.profile_path);
    auto goal = foon::parse_object_spec(sweep_req.goal_spec);
    auto trees = enumerate_for(network, sweep_req, kitchen, goal);
    int max_m = sweep_max_m;
    if (max_m < 0)
      for (const auto& tree : trees)
        max_m = std::max(max_m, int(tree.units.size()) - 1);
    auto report = foon::sweep(network, trees, profile, max_m);
    write_output(sweep_out, foon::sweep_table(report));
    return 0;
  }

  if (sim_cmd->parsed()) {
    auto network = load_network(sim_req.network_path);
    auto kitchen = load_kitchen(sim_req.kitchen_path);
    auto profile = load_profile(sim_req.profile_path);
    auto goal = foon::parse_object_spec(sim_req.goal_spec);
    auto trees = enumerate_for(network, sim_req, kitchen, goal);
    int m = sim_req.m >= 0 ? sim_req.m
                           : foon::optimal_m(network, trees, profile, sim_req.epsilon);
    auto best = foon::best_plan(network, trees, profile, m);
    auto result = foon::simulate(best.primary, sim_trials, sim_seed);
    std::cout << "trials " << result.trials << " successes " << result.successes
              << "\nempirical " << result.empirical_rate << " analytic "
              << result.analytic_rate << " seed " << result.seed << "\n";
    auto ranked = foon::failure_report(result);
    for (const auto& [id, count] : ranked)
      std::cout << "  unit " << id << " ("
                << foon::trim(network.unit(id).motion.label) << ") failed "
                << count << " times\n";
    return 0;
  }

  if (export_cmd->parsed()) {
    auto network = load_network(export_network);
    std::optional<foon::RobotProfile> profile;
    if (!export_req.profile_path.empty())
      profile = load_profile(export_req.profile_path);

    if (export_what == "network") {
      if (export_format == "dot")
        write_output(export_out, foon::to_dot(network, profile ? &*profile : nullptr));
      else
        write_output(export_out, foon::to_structured(network).dump(2) + "\n");
      return 0;
    }

    if (export_req.goal_spec.empty() || export_req.kitchen_path.empty() || !profile)
      throw CLI::ValidationError("export tree", "--goal, --kitchen and --profile are required");
    auto kitchen = load_kitchen(export_req.kitchen_path);
    auto goal = foon::parse_object_spec(export_req.goal_spec);
    auto trees = enumerate_for(network, export_req, kitchen, goal);
    int m = export_req.m >= 0 ? export_req.m : 0;
    auto best = foon::best_plan(network, trees, *profile, m);
    if (export_format == "dot")
      write_output(export_out, foon::to_dot(network, best.primary));
    else
      write_output(export_out, foon::to_structured(network, best.primary).dump(2) + "\n");
    return 0;
  }

  return kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const foon::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const foon::GoalNotProducibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGoalNotProducible;
  } catch (const NoExecutableTree& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoExecutableTree;
  } catch (const foon::DelegationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMExceeds;
  } catch (const foon::ExpansionLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitExpansionLimit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}
