#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace halfline {

struct CommandResult {
  std::vector<std::string> files;  // written artifacts, relative to the output directory
  std::string summary;             // one line
  std::vector<std::string> warnings;
};

CommandResult cmd_scatter(const RunConfig& rc, const std::string& out_dir);
CommandResult cmd_evolve(const RunConfig& rc, const std::string& out_dir);
CommandResult cmd_verify(const RunConfig& rc, const std::string& out_dir);
CommandResult cmd_line(const RunConfig& rc, const std::string& out_dir);

struct SelftestCase {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string message;
};

std::vector<SelftestCase> run_selftest();
// Writes selftest.json; summary counts failures.
CommandResult cmd_selftest(const std::string& out_dir, std::vector<SelftestCase>* cases = nullptr);

}  // namespace halfline
