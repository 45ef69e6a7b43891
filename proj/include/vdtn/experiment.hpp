#pragma once

#include "vdtn/config.hpp"
#include "vdtn/metrics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vdtn {

// Workload / engine views of a resolved experiment config. `vehicles_override`
// rescales the world for sweep cells.
WorkloadSpec workload_spec_from(const ExperimentConfig& cfg, int vehicles_override = 0);
SimConfig sim_config_from(const ExperimentConfig& cfg);

struct SingleRun {
    MetricsReport metrics;
    RunLog log;
    std::optional<RunLog> churn_log;
};

// One seeded simulation under one policy (plus the paired churn run when the
// config asks for it). A prebuilt world lets callers share construction
// across policies of the same seed family.
SingleRun run_single(const ExperimentConfig& cfg, PolicyKind kind, uint64_t seed,
                     const BuiltWorld* prebuilt = nullptr);

struct ExperimentResult {
    std::vector<PolicyReport> reports;
    std::vector<std::vector<MetricsReport>> per_run;  // [policy index][run]
};

// Seeds derive as seed, seed+1, ... so one integer reproduces a whole
// experiment. When out_dir is non-empty, reports and per-run logs land there.
ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_outputs);

std::vector<SweepRow> scalability_sweep(const ExperimentConfig& cfg,
                                        const std::vector<int>& sizes);

// CLI entry points; return process exit status.
int cmd_run(const ExperimentConfig& cfg);
int cmd_compare(const ExperimentConfig& cfg);
int cmd_sweep(const ExperimentConfig& cfg);
int cmd_replay(const std::string& runlog_path);

// One per-run metrics row in the fixed per-run CSV format.
std::string per_run_metrics_row(int run_index, const MetricsReport& m);

}  // namespace vdtn
