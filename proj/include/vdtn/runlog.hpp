#pragma once

#include "vdtn/core_model.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace vdtn {

enum class EventKind {
    Upload,
    TwinReceive,
    ResourceGranted,
    ExchangeDone,
    ResultDownload,
    VmComplete,
    TwinFail,
    AgingTick
};

const char* to_string(EventKind k);

struct SimEvent {
    Tick time = 0;
    int64_t seq = 0;      // global tie-break, unique
    EventKind kind = EventKind::Upload;
    int64_t a = -1;       // task / twin id, by kind
    int64_t b = -1;       // resource / vm id
    int64_t c = -1;       // extra payload
};

enum class FailCode { None = 0, TwinFailure = 1, Churn = 2, StalledAtHorizon = 3 };

struct TaskRecord {
    TaskId id = -1;
    int cls_rank = 0;
    int app_rank = 0;
    int64_t payload = 0;
    Tick arrival = -1;         // vehicle starts the upload
    Tick twin_receive = -1;
    Tick first_response = -1;  // first resource grant for update 0
    Tick done = -1;            // result download completed
    TaskState final_state = TaskState::Queued;
    int content_version = 0;
    bool final_info = false;
    FailCode fail_code = FailCode::None;
};

struct BusyInterval {
    Tick start = 0;
    Tick end = 0;        // half-open [start, end)
    int64_t units = 0;   // data units served (channels)
};

// Complete record of one simulation run. Everything the metrics need is
// recomputable from this structure alone, which is what replay relies on.
struct RunLog {
    std::string policy;
    uint64_t seed = 0;
    Tick horizon = 0;
    Tick end_time = 0;   // drain time, or horizon when censored
    int num_vms = 0;
    int num_channels = 0;
    int64_t transit_rate = 0;
    Tick capacity_window = 0;
    int k_updates = 0;

    std::vector<SimEvent> events;
    std::vector<TaskRecord> tasks;
    std::vector<std::vector<BusyInterval>> vm_busy;
    std::vector<std::vector<BusyInterval>> channel_busy;

    int64_t data_messages = 0;
    int64_t control_messages = 0;
    int64_t injected = 0;
    int64_t delivered = 0;
    int64_t failed = 0;
    int64_t in_flight = 0;
    int64_t failure_injected_tasks = 0;  // failed because a twin was killed
    int64_t recovered_tasks = 0;

    int64_t sched_comparisons = 0;
    int64_t sched_queue_ops = 0;
    int64_t sched_table_ops = 0;
    int64_t sched_decisions = 0;

    void write(std::ostream& os) const;
    void save(const std::string& path) const;
    // Throws std::runtime_error naming the offending line on corrupt input.
    static RunLog read(std::istream& is);
    static RunLog load(const std::string& path);
};

}  // namespace vdtn
