#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "twopiece/wells.hpp"

namespace twopiece::cli {

enum ExitCode : int { ok = 0, usage_error = 2, numerical_failure = 3 };

struct RunConfig {
  std::string command;
  WellSpec well;
  int max_states = 2;
  int state = 0;
  /// 0 selects every j in {1, 2, 3} for `moments`.
  int j = 0;
  double p_max = 50.0;
  int points = 200;
  std::vector<double> cutoffs;
  std::string out;
  std::string format = "csv";
  int threads = 1;
};

/// Default V0 of the reference parameter sets: triangular 5, convexp 15, divexp 5 (a = 1).
double default_v0(WellKind kind);

/// Parses and validates argv; throws DomainError with a usage message on
/// invalid input. Returns false (after writing help) when only help was requested.
bool parse(int argc, const char* const* argv, RunConfig& config, std::ostream& out);

/// Entry point of the `twopiece` tool. Exit codes: 0 success, 2 usage or
/// configuration error, 3 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twopiece::cli
