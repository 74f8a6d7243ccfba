#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "support.hpp"

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::path out = fs::temp_directory_path() /
                 ("foon_cli_out_" + std::to_string(counter++) + ".txt");
  std::string command = std::string(FOON_CLI_PATH) + " " + args + " > " +
                        out.string() + " 2>/dev/null";
  int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::ostringstream buf;
  buf << in.rdbuf();
  result.stdout_text = buf.str();
  fs::remove(out);
  return result;
}

std::string fx(const std::string& name) { return foontest::fixture_path(name); }

}  // namespace

TEST_CASE("cli merge reports deduplication and writes a reusable network") {
  fs::path network = fs::temp_directory_path() / "foon_cli_merged.sg";
  auto merge_run = run_cli("merge " + fx("potato_sliced.sg") + " " +
                           fx("potato_baked.sg") + " --out " + network.string());
  REQUIRE(merge_run.exit_code == 0);

  auto again = run_cli("merge " + network.string() + " " + network.string() +
                       " --out /dev/null");
  CHECK(again.exit_code == 0);

  auto retrieve = run_cli("retrieve --network " + network.string() +
                          " --goal \"potato{mashed}\" --kitchen " +
                          fx("potato_kitchen.txt") + " --profile " +
                          fx("potato_profile.json") + " --m 1");
  REQUIRE(retrieve.exit_code == 0);
  CHECK(retrieve.stdout_text.find("HUMAN") != std::string::npos);
  CHECK(retrieve.stdout_text.find("0.8075") != std::string::npos);
  CHECK(retrieve.stdout_text.find("instruction to assistant") != std::string::npos);
  fs::remove(network);
}

TEST_CASE("cli retrieve auto-selects M via the improvement rule") {
  auto result = run_cli("retrieve --network " + fx("potato_sliced.sg") +
                        ",unused --goal x --kitchen y --profile z");
  CHECK(result.exit_code != 0);  // bad paths fail loudly

  fs::path network = fs::temp_directory_path() / "foon_cli_auto.sg";
  run_cli("merge " + fx("potato_sliced.sg") + " " + fx("potato_baked.sg") +
          " --out " + network.string());
  auto auto_m = run_cli("retrieve --network " + network.string() +
                        " --goal \"potato{mashed}\" --kitchen " +
                        fx("potato_kitchen.txt") + " --profile " +
                        fx("potato_profile.json"));
  REQUIRE(auto_m.exit_code == 0);
  CHECK(auto_m.stdout_text.find("m=2") != std::string::npos);
  CHECK(auto_m.stdout_text.find("0.95") != std::string::npos);
  fs::remove(network);
}

TEST_CASE("cli error classes map to distinct exit codes") {
  auto goal_missing = run_cli("retrieve --network " + fx("tea.sg") +
                              " --goal \"gravy\" --kitchen " +
                              fx("tea_kitchen.txt") + " --profile " +
                              fx("tea_profile.json"));
  CHECK(goal_missing.exit_code == 3);

  fs::path empty_kitchen = fs::temp_directory_path() / "foon_cli_empty_kitchen.txt";
  std::ofstream(empty_kitchen) << "# nothing\n";
  auto no_tree = run_cli("retrieve --network " + fx("tea.sg") +
                         " --goal \"tea cup{contains,stirred}[sugar,tea,water]\"" +
                         " --kitchen " + empty_kitchen.string() + " --profile " +
                         fx("tea_profile.json"));
  CHECK(no_tree.exit_code == 4);
  fs::remove(empty_kitchen);

  auto m_too_big = run_cli("retrieve --network " + fx("tea.sg") +
                           " --goal \"tea cup{contains,stirred}[sugar,tea,water]\"" +
                           " --kitchen " + fx("tea_kitchen.txt") + " --profile " +
                           fx("tea_profile.json") + " --m 6");
  CHECK(m_too_big.exit_code == 5);

  fs::path bad_profile = fs::temp_directory_path() / "foon_cli_bad_profile.json";
  std::ofstream(bad_profile) << R"({"default":0.0})";
  auto parse_fail = run_cli("retrieve --network " + fx("tea.sg") +
                            " --goal \"tea cup{contains,stirred}[sugar,tea,water]\"" +
                            " --kitchen " + fx("tea_kitchen.txt") + " --profile " +
                            bad_profile.string());
  CHECK(parse_fail.exit_code == 2);
  fs::remove(bad_profile);
}

TEST_CASE("cli enumerate lists both potato variants") {
  fs::path network = fs::temp_directory_path() / "foon_cli_enum.sg";
  run_cli("merge " + fx("potato_sliced.sg") + " " + fx("potato_baked.sg") +
          " --out " + network.string());
  auto result = run_cli("enumerate --network " + network.string() +
                        " --goal \"potato{mashed}\" --kitchen " +
                        fx("potato_kitchen.txt") + " --profile " +
                        fx("potato_profile.json"));
  REQUIRE(result.exit_code == 0);
  CHECK(result.stdout_text.find("2 task trees") != std::string::npos);
  fs::remove(network);
}

TEST_CASE("cli sweep emits the plot-ready table") {
  auto result = run_cli("sweep --network " + fx("tea.sg") +
                        " --goal \"tea cup{contains,stirred}[sugar,tea,water]\"" +
                        " --kitchen " + fx("tea_kitchen.txt") + " --profile " +
                        fx("tea_profile.json") + " --max-m 5");
  REQUIRE(result.exit_code == 0);
  CHECK(result.stdout_text.starts_with("m\tbest_success\tbest_tree_ids\tdrop\n"));
  CHECK(result.stdout_text.find("0.6859") != std::string::npos);
}

TEST_CASE("cli simulate is seed-stable") {
  std::string args = "simulate --network " + fx("tea.sg") +
                     " --goal \"tea cup{contains,stirred}[sugar,tea,water]\"" +
                     " --kitchen " + fx("tea_kitchen.txt") + " --profile " +
                     fx("tea_profile.json") + " --m 3 --trials 2000 --seed 77";
  auto a = run_cli(args);
  auto b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.stdout_text == b.stdout_text);
  CHECK(a.stdout_text.find("analytic 0.6859") != std::string::npos);
}

TEST_CASE("cli export round-trips the structured network") {
  fs::path network = fs::temp_directory_path() / "foon_cli_exp.sg";
  fs::path structured = fs::temp_directory_path() / "foon_cli_exp.json";
  run_cli("merge " + fx("potato_sliced.sg") + " " + fx("potato_baked.sg") +
          " --out " + network.string());

  auto exp = run_cli("export network --network " + network.string() +
                     " --format structured --out " + structured.string());
  REQUIRE(exp.exit_code == 0);

  // structured file is accepted wherever a network is expected
  auto retrieve = run_cli("retrieve --network " + structured.string() +
                          " --goal \"potato{mashed}\" --kitchen " +
                          fx("potato_kitchen.txt") + " --profile " +
                          fx("potato_profile.json") + " --m 0");
  REQUIRE(retrieve.exit_code == 0);
  CHECK(retrieve.stdout_text.find("0.285") != std::string::npos);

  auto dot = run_cli("export network --network " + network.string() +
                     " --format dot");
  REQUIRE(dot.exit_code == 0);
  CHECK(dot.stdout_text.find("digraph") != std::string::npos);

  auto tree_dot = run_cli("export tree --network " + network.string() +
                          " --goal \"potato{mashed}\" --kitchen " +
                          fx("potato_kitchen.txt") + " --profile " +
                          fx("potato_profile.json") + " --m 1 --format dot");
  REQUIRE(tree_dot.exit_code == 0);
  CHECK(tree_dot.stdout_text.find("HUMAN") != std::string::npos);

  auto bad_format = run_cli("export network --network " + network.string() +
                            " --format png");
  CHECK(bad_format.exit_code != 0);

  fs::remove(network);
  fs::remove(structured);
}
