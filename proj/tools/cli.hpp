#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ergopt::cli {

inline constexpr const char* kThreadsEnv = "ERGOPT_THREADS";

struct RunConfig {
  std::string command;
  std::string spec_path;
  // Comma-separated lists; rationals as "p/q", reals as decimals.
  std::string h, c, r, lo, hi;
  std::string x0;
  std::size_t grid = 11;
  std::size_t steps = 1000;
  std::size_t max_period = 8;
  std::size_t state_cap = 100'000'000;
  std::uint64_t seed = 1;
  int perturbations = 3;
  std::string output = "json";
  unsigned threads = 1;
};

// Exit codes: 0 success, 1 malformed input or other failure, 2 infeasible
// query, 3 `check` found a failing invariant family.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

int run_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Evaluates f at every index on a bounded worker pool; results keep index
// order whatever the completion order.
std::vector<std::optional<double>> sweep(std::size_t count, unsigned threads,
                                         const std::function<std::optional<double>(std::size_t)>& f);

std::string format_double(double value);

}  // namespace ergopt::cli
