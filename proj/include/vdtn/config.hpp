#pragma once

#include "vdtn/core_model.hpp"
#include "vdtn/priority.hpp"
#include "vdtn/schedulers.hpp"
#include "vdtn/sim_engine.hpp"
#include "vdtn/workload.hpp"

#include <string>
#include <vector>

namespace vdtn {

// Fully resolved experiment configuration. Field names mirror the CLI flags
// and the flat key=value config-file format.
struct ExperimentConfig {
    std::vector<PolicyKind> policies{PolicyKind::PriorityVdtn};
    uint64_t seed = 1;
    int runs = 100;

    int clusters = 10;
    int per_cluster = 10;
    int vehicles = 0;          // 0 = clusters * per_cluster

    int k = 2;
    double alpha = 10.0;
    double beta = 1.0;
    bool aging = true;
    Tick aging_interval = 100;
    double aging_step = 0.0;   // 0 = derive from beta
    double aging_floor = 0.0;  // 0 = derive from alpha + beta

    double mix_high = 0.1;
    double mix_medium = 0.2;
    double mix_normal = 0.7;

    int datacenters = 2;
    int vms_per_datacenter = 10;
    int64_t vm_memory = 1;
    int64_t vm_bandwidth = 1000;
    int64_t host_mips = 1000;

    Tick horizon = 8000;
    Tick inject_window = 2000;
    double injection_factor = 1.25;
    double off_peak_factor = 0.08;
    Tick off_peak_window = 4000;
    int max_resources = 1;
    double hub_bias = 0.85;
    int samples_per_twin = 3;
    Tick capacity_window = 1000;
    Tick exchange_overhead = 1;
    int64_t mips_per_unit = 1000;

    bool churn = false;
    Tick churn_time = 0;       // 0 = horizon / 2
    std::vector<FailureInjection> failures;
    Tick failure_stall = -1;

    std::string trace;
    std::string out = "out";
    std::vector<int> sweep_sizes{10, 20, 30};

    bool operator==(const ExperimentConfig&) const = default;

    PriorityWeights weights() const { return {alpha, beta}; }
    AgingPolicy aging_policy() const;
    ClassMix mix() const { return {mix_high, mix_medium, mix_normal}; }
    int total_vehicles() const { return vehicles > 0 ? vehicles : clusters * per_cluster; }
};

ExperimentConfig default_config();

// Applies one key=value assignment; throws naming the key on bad input.
void apply_config_kv(ExperimentConfig& cfg, const std::string& key,
                     const std::string& value);

// Flat key=value text, one per line, '#' comments.
ExperimentConfig parse_config_text(const std::string& text);
std::string emit_config(const ExperimentConfig& cfg);
ExperimentConfig load_config_file(const std::string& path);

// Validates every invariant; throws naming the offending key (e.g. the
// alpha/beta dominance rule).
void validate_config(const ExperimentConfig& cfg);

// "id@tick" form used by the failure-injection flag.
FailureInjection parse_failure_spec(const std::string& s);

}  // namespace vdtn
