#ifndef BSR_RUNNER_HPP
#define BSR_RUNNER_HPP

#include <string>

#include "bsr/config.hpp"
#include "bsr/experiments.hpp"

namespace bsr {

inline constexpr const char* kVersion = "0.1.0";

struct RunnerOptions {
    std::string out_dir = ".";
    int threads = 0;        // 0 = hardware concurrency
    unsigned seed = 0;      // reserved for randomized harnesses
};

/// Dispatches one batch command. Commands: "solve", "limit",
/// "sweep-eps", "sweep-delta", "mms", "galerkin".
///
/// Writes into out_dir: trajectory.csv + final_state.json for the
/// trajectory commands; report.csv + summary.json for sweeps; mms
/// writes summary.json. Returns 0 on success. Solver and fit failures
/// return nonzero after writing failure.json with the error context;
/// nothing is written for an unknown command.
int execute(const std::string& command, const RunConfig& cfg,
            const RunnerOptions& opt);

/// Helpers shared with the tests.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_sweep_outputs(const std::string& dir, const SweepReport& rep);

} // namespace bsr

#endif
