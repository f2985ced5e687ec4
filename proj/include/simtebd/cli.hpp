#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "simtebd/config.hpp"
#include "simtebd/tebd.hpp"

namespace simtebd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDivergence = 3;

inline constexpr const char* kTrajectoryHeader =
    "t,norm_factor,sz_fict,sz_recovered,re_rho01_recovered,seff,max_bond,discarded_weight";

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record);

/// Output file names derived from a prefix.
std::filesystem::path run_csv_path(const std::string& prefix);
std::filesystem::path sweep_csv_path(const std::string& prefix, double beta);
std::filesystem::path sweep_summary_path(const std::string& prefix);
std::filesystem::path ghz_csv_path(const std::string& prefix);
std::filesystem::path oracle_csv_path(const std::string& prefix);

struct Options {
    std::filesystem::path config;
    std::optional<std::string> out_prefix;
    std::optional<double> tolerance;
    int n_spins{10};
    double beta{0.1};
};

int cmd_run(const Options& opts, std::ostream& log);
int cmd_sweep_beta(const Options& opts, std::ostream& log);
int cmd_ghz_bench(const Options& opts, std::ostream& log);
int cmd_oracle_check(const Options& opts, std::ostream& log);

/// Full command-line entry point (subcommand dispatch).
int main(int argc, char** argv);

}  // namespace simtebd::cli
