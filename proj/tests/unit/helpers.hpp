#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "plancurate/task.hpp"

namespace testing {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string golden(const std::string& name) {
  return read_file(std::string(PLANCURATE_GOLDEN_DIR) + "/" + name);
}

// Fresh scratch directory per test.
inline std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("plancurate_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline plancurate::TaskInstance bw_task(std::vector<int> support,
                                        std::vector<std::pair<int, int>> goal,
                                        plancurate::GoalCheck check =
                                            plancurate::GoalCheck::kRejectSatisfied) {
  namespace bw = plancurate::blocksworld;
  const int n = static_cast<int>(support.size());
  return plancurate::TaskInstance::blocksworld(bw::State::from_support(std::move(support)),
                                               bw::Goal::from_atoms(std::move(goal), n), check);
}

// Query task shown after the blocksworld worked example: red on blue on orange,
// yellow on red; goal blue on orange, orange on red, yellow on blue.
inline plancurate::TaskInstance bw_query_task() {
  return bw_task({1, 2, -1, 0}, {{1, 2}, {2, 0}, {3, 1}});
}

inline plancurate::TaskInstance lg_query_task() {
  namespace lg = plancurate::logistics;
  lg::Topology topo{2, 2, 1};
  auto init = lg::State::make(topo, {{0, 1}, {1, 1}}, {{1, 0}},
                              {lg::PackagePosition::at_location({1, 1})});
  return plancurate::TaskInstance::logistics(init, lg::Goal::make({{0, {0, 0}}}, topo, 1));
}

}  // namespace testing
