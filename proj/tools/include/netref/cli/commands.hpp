#pragma once

// Subcommands of the netref tool. Each writes its result to `out`,
// diagnostics to `err`, and returns the process exit code.

#include "netref/cli/scenario.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace netref::cli {

enum class OutputFormat { table, json, csv };

OutputFormat parse_format(std::string_view name);

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitAssumption = 3;
inline constexpr int kExitGap = 4;  // reproduction or oracle gap exceeded

// Largest |computed - reference| that cmd_reproduce accepts.
inline constexpr double kReproduceTol = 1e-4;

enum class SolveMode { simultaneous, sequential, basic };

SolveMode parse_solve_mode(std::string_view name);

int cmd_solve(const Scenario& s, SolveMode mode, OutputFormat fmt, std::ostream& out,
              std::ostream& err);
int cmd_values(const Scenario& s, OutputFormat fmt, std::ostream& out, std::ostream& err);
// `referrer` is 1-based.
int cmd_newcomer(const Scenario& s, long long referrer, OutputFormat fmt, std::ostream& out,
                 std::ostream& err);
int cmd_sweep_eta(const Scenario& s, std::string_view grid, OutputFormat fmt, std::ostream& out,
                  std::ostream& err);
int cmd_reproduce(int table, OutputFormat fmt, std::ostream& out, std::ostream& err);
// Uses the scenario when given, otherwise a random 4-customer two-part
// instance drawn from `seed`.
int cmd_oracle_check(const std::optional<Scenario>& s, std::optional<std::uint64_t> seed,
                     OutputFormat fmt, std::ostream& out, std::ostream& err);

// "a:b:step" -> a, a + step, ..., up to b. A single number is a one-point grid.
std::vector<double> parse_eta_grid(std::string_view spec);

struct ReproductionCell {
  std::string network;
  std::string row;   // case number or panel
  std::string cell;  // "profit", "value({1})", ...
  double computed;
  double reference;
  double gap() const;
};

// Every cell of the given table (1 or 2) with its printed reference value.
std::vector<ReproductionCell> reproduce_table(int table);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace netref::cli
