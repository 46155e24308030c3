#pragma once

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace testsupport {

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

/// Runs a shell command, capturing stdout/stderr and the exit code.
inline CliResult run_command(const std::string& cmd) {
  const std::string err_path =
      "/tmp/smoothq_cli_err_" + std::to_string(::getpid()) + ".txt";
  const std::string full = cmd + " 2>" + err_path;

  CliResult result{};
  FILE* pipe = ::popen(full.c_str(), "r");
  if (pipe == nullptr) {
    result.exit_code = -1;
    return result;
  }
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    result.out.append(buf.data(), got);
  }
  const int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;

  std::ifstream ef(err_path);
  std::stringstream ss;
  ss << ef.rdbuf();
  result.err = ss.str();
  std::remove(err_path.c_str());
  return result;
}

}  // namespace testsupport
