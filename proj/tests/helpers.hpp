#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "cctune/params.hpp"

namespace cctune::test {

// The workhorse fixture: L = 50 us, g(m) = 20 us + 0.08 us/byte. Linear
// interpolation of an affine function is exact, so g is exact at every size,
// and the sample set doubles as the tuner's table-derived candidates.
inline PLogPParams affine_params() {
  static const Bytes samples[] = {250,  500,   1000,    2000,   3000,
                                  4096, 65536, 1048576, 4194304};
  return synth_params(2.0e-5, 1.25e7, 5.0e-5, samples, "affine-test");
}

// Overhead-dominated: g = 100 us + 0.001 us/byte, L = 50 us.
inline PLogPParams overhead_params() {
  static const Bytes samples[] = {100, 1000, 65536, 1048576};
  return synth_params(1.0e-4, 1.0e9, 5.0e-5, samples, "overhead-test");
}

struct CliResult {
  int exit_code = -1;
  std::string out;
};

#ifdef CCTUNE_CLI_PATH
// Runs the built CLI with the given argument string; captures stdout only.
inline CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(CCTUNE_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  CliResult result;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, n);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}
#endif

inline std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() /
          ("cctune-" + std::to_string(::getpid()) + "-" + name))
      .string();
}

inline std::string write_temp_file(const std::string& name, const std::string& body) {
  const std::string path = temp_path(name);
  std::ofstream out(path, std::ios::binary);
  out << body;
  if (!out) throw std::runtime_error("cannot write " + path);
  return path;
}

inline int count_lines(const std::string& text) {
  int lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  return lines;
}

}  // namespace cctune::test
