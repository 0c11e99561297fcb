#pragma once

// Command-line front end.  Exit codes: 0 success (also --help), 1 usage error,
// 2 domain or numeric failure.

#include <iosfwd>
#include <optional>
#include <string>

#include "bautin/constants.hpp"
#include "bautin/dde_sim.hpp"
#include "bautin/spectrum.hpp"

namespace bautin::cli {

enum class Subcommand { spectrum, coeffs, l1, report, simulate, scan };
enum class Format { json, csv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;

struct RunConfig {
  Subcommand subcommand = Subcommand::spectrum;
  Format format = Format::json;

  // spectrum, simulate
  double a = kGainAtHopf;
  double r = kDelay;
  double sigma = spectrum::kGapAbscissa;
  // coeffs, simulate
  double c = 0.0;
  int order = 5;
  // l1
  double c_min = -3.0;
  double c_max = 3.0;
  int steps = 60;
  // report, scan: "c1", "c2" or a number
  std::string c_star = "c1";
  // simulate
  double amp = 0.0;
  double T = 100.0;
  int N = dde::kMinStepsPerDelay;
  // scan
  int rows = 5;
  double mu_fraction = 0.4;
  std::optional<std::string> summary_path;

  std::optional<std::string> out_path;  // stdout when absent
};

// "c1" / "c2" through bautin_candidates, otherwise a finite real.
double resolve_c_star(const std::string& text);

// Parses argv.  On failure or --help returns the exit code to use; the
// message or help text goes to err / out respectively.
std::optional<int> parse(int argc, const char* const* argv, RunConfig& config, std::ostream& out,
                         std::ostream& err);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse + run
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Writes through a temporary file in the same directory and renames it.
void write_atomically(const std::string& path, const std::string& content);

}  // namespace bautin::cli
