#pragma once

#include "vdtn/core_model.hpp"
#include "vdtn/priority.hpp"
#include "vdtn/rng.hpp"

#include <string>
#include <utility>
#include <vector>

namespace vdtn {

// Random cluster topology: twins grouped into clusters, each cluster wired
// as a connected random graph.
struct Topology {
    std::vector<std::vector<TwinId>> clusters;
    std::vector<std::pair<TwinId, TwinId>> edges;
    uint64_t seed = 0;
    // set when a single-twin world cannot satisfy the "connects with at
    // least one other twin" requirement
    bool degenerate_singleton = false;
};

Topology generate_cluster_topology(int num_clusters, int per_cluster, uint64_t seed);

// Spanning tree plus random extra edges per cluster; shared with the churn
// path, which re-wires mid-run. Tree attachment is biased toward each
// cluster's first twin, which makes that twin the cluster's well-connected
// data hub, mirroring how popular content concentrates.
TwinAdjacency wire_clusters(const std::vector<std::vector<TwinId>>& clusters,
                            double extra_edge_prob, int num_twins, Rng& rng);

TwinAdjacency adjacency_from(const Topology& topo, int num_twins);

// Picks 1..max_count distinct partner resources from the twin's neighbors,
// ascending id order. Popular partners draw most requests: with probability
// hub_bias the twin's lowest-id neighbor (the cluster hub by construction)
// is chosen.
std::vector<ResourceId> sample_required_resources(const TwinAdjacency& adj, TwinId twin,
                                                  int max_count, Rng& rng,
                                                  double hub_bias = 0.85);

// ---------------------------------------------------------------------------
// Mobility-trace ingestion

struct TraceRecord {
    int64_t vehicle_id = 0;
    double angle = 0.0;
    double x = 0.0;
    double y = 0.0;
    std::string vehicle_type;
    double speed = 0.0;
    // columns beyond the required six, preserved untouched
    std::vector<std::pair<std::string, std::string>> extras;
};

struct TraceLoadResult {
    std::vector<TraceRecord> records;
    int64_t dropped = 0;
};

// Header-based, column-order-independent CSV reader. Rows with missing or
// unparseable required fields (or negative speed) are dropped and counted.
// Throws FileNotFound / EmptyAfterCleaning errors.
TraceLoadResult load_mobility_trace(const std::string& path);

// Z-scores each numeric feature (angle, x, y, speed) with the population
// standard deviation; constant columns map to zero.
std::vector<TraceRecord> standardize(const std::vector<TraceRecord>& records);

// ---------------------------------------------------------------------------
// Priority assignment

struct ClassMix {
    double high = 0.1;
    double medium = 0.2;
    double normal = 0.7;
};

// Deterministic largest-remainder split of the mix over the fleet, then a
// seeded shuffle decides which vehicle lands in which class.
void assign_priorities(std::vector<Vehicle>& vehicles, uint64_t seed, const ClassMix& mix);

// ---------------------------------------------------------------------------
// World + task-plan construction

struct WorkloadSpec {
    int num_clusters = 10;
    int per_cluster = 10;
    ClassMix mix;
    PriorityWeights weights;
    int samples_per_twin = 3;
    std::string trace_path;        // empty = synthetic vehicles
    double extra_edge_prob = 0.3;

    // task plan: a rush window followed by sparse off-peak traffic.
    // injection_factor scales the capacity of the contended exchange stage
    // (the cluster hubs), which is what saturates first during the rush.
    Tick inject_window = 2000;
    double injection_factor = 1.25;
    double off_peak_factor = 0.08;   // background rate, fraction of capacity
    Tick off_peak_window = 4000;     // ticks of background traffic after the rush
    int k = 2;
    int max_resources_per_task = 1;
    double hub_bias = 0.85;

    DataCenterConfig datacenter;
    ChannelModel channel;
};

struct BuiltWorld {
    World world;
    std::vector<Task> plan;   // arrival order, dense ids
};

// payload of an application message: safety messages are compact, social
// content is heavy
int64_t payload_for_app(AppClass app);

BuiltWorld build_world(const WorkloadSpec& spec, uint64_t seed);

}  // namespace vdtn
