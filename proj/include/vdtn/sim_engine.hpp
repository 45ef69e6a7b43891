#pragma once

#include "vdtn/core_model.hpp"
#include "vdtn/priority.hpp"
#include "vdtn/runlog.hpp"
#include "vdtn/schedulers.hpp"

#include <vector>

namespace vdtn {

// Per-round intra-twin parameters: a task's payload makes k inter-twin
// update exchanges between its upload and the result download.
struct IntraTwinConfig {
    int k = 2;
    Tick exchange_overhead = 1;   // fixed cost per exchange on top of payload/rate
    int64_t mips_per_unit = 1000; // vm serves host_mips / mips_per_unit units per tick
};

// The finalized processed information returned to the vehicle.
struct ProcessedInfo {
    TaskId task_id = -1;
    int content_version = 0;
    bool final_info = false;
};

struct VirtualMachine {
    VmId id = 0;
    int datacenter_id = 0;
    int64_t mips = 1000;
    int64_t memory = 1;
    Tick busy_until = -1;  // -1 when idle
};

struct FailureInjection {
    TwinId twin = -1;
    Tick time = 0;

    bool operator==(const FailureInjection&) const = default;
};

struct SimConfig {
    Tick horizon = 8000;
    IntraTwinConfig intra;
    PriorityWeights weights;
    AgingPolicy aging;
    std::vector<FailureInjection> failures;
    Tick failure_stall = -1;  // ticks before a dead twin's holdings free; -1 = never
    bool churn = false;
    Tick churn_time = 0;      // 0 = horizon / 2
    double churn_edge_prob = 0.3;
    double hub_bias = 0.85;   // partner-sampling bias after churn re-wiring
    bool count_ops = true;    // instrumentation only, never behavior
};

// Runs one deterministic discrete-event simulation of `world.task_plan`
// under `policy`. The same (world, policy, config, seed) always produces a
// bit-identical RunLog. Throws on invalid config (empty VM set, horizon <= 0)
// and on unknown twins in the failure schedule.
RunLog run_simulation(const World& world, const std::vector<Task>& task_plan,
                      SchedulerPolicy& policy, const SimConfig& config, uint64_t seed);

// Convenience single-task round used by unit tests: runs a one-task plan
// and reports the resulting processed information.
ProcessedInfo intra_twin_round(const World& world, const Task& task,
                               SchedulerPolicy& policy, const SimConfig& config,
                               uint64_t seed);

// Service time of one exchange on a VM.
Tick exchange_service_time(int64_t payload, int64_t host_mips, const IntraTwinConfig& c);

// Upload/download latency of a payload through a base-station channel.
Tick channel_latency(int64_t payload, int64_t transit_rate);

}  // namespace vdtn
