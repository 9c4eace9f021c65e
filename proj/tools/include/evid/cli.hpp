#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace evid::cli {

enum ExitCode : int { ok = 0, failure = 1, usage = 2 };

struct JobConfig {
    /// solve | verify | frame | chart | torsion | all
    std::string command;
    /// Block sizes such as "3,2,1"; must agree with the input files when given.
    std::string shape;
    std::string seed_file;
    std::string field_file;
    /// One entry per block in block-local names: "a2" or "a2,a3,...".
    std::vector<std::string> a;
    /// poly | rational | jet
    std::string backend = "rational";
    std::size_t points = 20;
    std::uint64_t rng = 42;
    double tol = 1e-9;
    std::string out;
    unsigned order = 3;
    /// exact | numeric (construction of a_3, ...).
    std::string mode = "exact";
    std::vector<double> p0;
    double radius = 0.3;
    /// Grid points per w-axis, spread over [-radius, radius].
    std::size_t grid = 3;
    double h = 1e-3;
    double chart_tol = 1e-8;
    double push_tol = 1e-6;
};

/// Runs one job. With `out` set the JSON report is written there atomically
/// and the summary goes to `log`; otherwise the report goes to `log` and the
/// summary to `err`.
int run(const JobConfig& config, std::ostream& log, std::ostream& err);

/// Parses flags (and an optional --config file, flags winning) and runs the job.
int main(int argc, const char* const* argv, std::ostream& log, std::ostream& err);

}  // namespace evid::cli
