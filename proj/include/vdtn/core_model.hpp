#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vdtn {

using Tick = int64_t;
using TwinId = int32_t;
using VehicleId = int32_t;
using TaskId = int32_t;
using ResourceId = int32_t;
using VmId = int32_t;
using SampleId = int64_t;

// Vehicle category. Lower rank = more important; comparators order ascending.
enum class VehicleClass : int { High = 1, Medium = 2, Normal = 3 };

// Application category, rank 1 (safety) through 5 (social).
enum class AppClass : int {
    Safety = 1,
    TrafficManagement = 2,
    Efficiency = 3,
    Infotainment = 4,
    Social = 5
};

inline int rank(VehicleClass c) { return static_cast<int>(c); }
inline int rank(AppClass a) { return static_cast<int>(a); }

const char* to_string(VehicleClass c);
const char* to_string(AppClass a);

// Maps a free-form vehicle type label to its category. Unknown labels are
// treated as Normal (no urgency features).
VehicleClass classify_vehicle_type(const std::string& label);

struct Vehicle {
    VehicleId id = 0;
    VehicleClass cls = VehicleClass::Normal;
    double x = 0.0;
    double y = 0.0;
    double speed = 0.0;               // m/s, >= 0
    double angle = 0.0;               // degrees, [0, 360)
    std::string vehicle_type;
    int base_station = 0;             // exactly one at any instant
};

struct DataSample {
    SampleId sample_id = 0;           // globally unique
    TwinId owner_twin = 0;
    int64_t payload_size = 1;         // abstract data units
};

struct DigitalTwin {
    TwinId id = 0;
    VehicleId vehicle_id = 0;         // bijection with vehicles
    std::vector<DataSample> dataset;  // pairwise disjoint across twins
    VehicleClass cls = VehicleClass::Normal;
    double class_priority = 0.0;      // alpha * rank, filled by the priority engine
};

enum class TaskState { Queued, Granted, Exchanging, Done, Failed };

const char* to_string(TaskState s);

struct Task {
    TaskId id = 0;
    TwinId twin_id = 0;
    AppClass app = AppClass::Social;
    std::vector<ResourceId> required_resources;  // non-empty, kept sorted ascending
    Tick enqueue_time = 0;
    double base_priority = 0.0;       // class + app priority, fixed at creation
    TaskState state = TaskState::Queued;
    int64_t payload_size = 1;         // the uploaded message, data units
};

struct ResourceUnit {
    ResourceId id = 0;
    std::optional<VehicleClass> holder_class;  // strongest current holder
    std::optional<TaskId> holder_task;
    std::optional<Tick> release_time;
};

struct ChannelModel {
    int64_t transit_rate = 1000;      // data units per tick
    Tick capacity_window = 1000;      // window length for the rate bound
};

struct DataCenterConfig {
    int num_datacenters = 2;
    int vms_per_datacenter = 10;
    int64_t vm_memory = 1;            // storage units (1 GB-equivalent)
    int64_t vm_bandwidth = 1000;      // data units per tick
    int64_t host_mips = 1000;         // processing capacity units
    std::string os_label = "Linux";
    std::string arch_label = "XEN";

    int total_vms() const { return num_datacenters * vms_per_datacenter; }
};

// Inter-twin adjacency: twin i shares/processes data with adjacency[i].
using TwinAdjacency = std::vector<std::vector<TwinId>>;

struct World {
    std::vector<Vehicle> vehicles;
    std::vector<DigitalTwin> twins;
    std::vector<ResourceUnit> resources;   // one grantable unit per twin
    TwinAdjacency adjacency;
    std::vector<std::vector<TwinId>> clusters;  // membership survives churn re-wiring
    int num_base_stations = 1;
    ChannelModel channel;
    DataCenterConfig datacenter;
};

// ---------------------------------------------------------------------------
// World validation

enum class ViolationKind {
    BijectionViolation,      // vehicle without exactly one twin, or vice versa
    DisjointnessViolation,   // sample owned by two twins
    NoResourceLink,          // twin with no inter-twin connection
    BaseStationViolation     // vehicle bound to a nonexistent base station
};

const char* to_string(ViolationKind k);

struct Violation {
    ViolationKind kind;
    int64_t subject_id = 0;   // vehicle/twin/sample id, by kind
    int64_t other_id = -1;    // second party when applicable
    std::string detail;
};

// Checks the structural requirements encoded above: vehicle<->twin bijection,
// dataset disjointness, at least one inter-twin link per twin, and a valid
// single base station per vehicle. Violations are data, not errors.
std::vector<Violation> validate_world(const World& world);

}  // namespace vdtn
