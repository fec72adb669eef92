#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "helmspec/density.hpp"
#include "helmspec/spectral_basis.hpp"

namespace helmspec::cli {

enum class Command { Solve, Table1, Drum2d, Sweep, SelfTest };
enum class Method { Power, Lanczos, Block, Rr };
enum class OutputFormat { Csv, JsonLines };

struct RunConfig {
    Command command = Command::Solve;
    BoundaryCondition bc = BoundaryCondition::DD;
    DensitySpec density = DensitySpec::constant(1.0);
    Method method = Method::Power;
    int p_max = 64;
    double tol = 1e-12;
    int basis = 40;
    int states = 1;
    int nodes_per_panel = 12;
    int nx_max = 80;
    double a = 1.0;
    std::optional<double> b;  // rectangle height for solve
    std::vector<double> alphas;
    double beta = 0.0;
    std::vector<double> etas;
    std::vector<double> phis;
    std::vector<double> epsilons;
    std::string out;  // empty: standard output
    OutputFormat format = OutputFormat::Csv;
    int threads = 1;

    // Resolved key/value pairs in header order; feeding them back reproduces the run.
    std::vector<std::pair<std::string, std::string>> resolved;
};

// Keys accepted in a config file and as --key flags.
const std::vector<std::string>& config_keys();

// Flat key=value text. A leading '#' is ignored and lines without '=' are skipped,
// so an output header can be used as a config file.
std::map<std::string, std::string> parse_config_text(const std::string& text);

// Applies command defaults and validates ranges; throws Error(ConfigError).
RunConfig resolve_config(const std::map<std::string, std::string>& values);

// Exit status: 0 success, 1 configuration error, 2 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace helmspec::cli
