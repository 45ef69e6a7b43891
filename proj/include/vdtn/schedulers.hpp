#pragma once

#include "vdtn/core_model.hpp"
#include "vdtn/priority.hpp"

#include <array>
#include <deque>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

namespace vdtn {

enum class PolicyKind { PriorityVdtn, RoundRobin, Throttled };

const char* to_string(PolicyKind k);
PolicyKind policy_from_string(const std::string& s);

enum class GrantAction { ExchangeDirect, Grant, Wait };
enum class GrantReason { Free, AppPriorityWin, FCFSWin, Queued };

// One contention decision. Exactly one of resource_id / vm_id is set.
struct GrantDecision {
    TaskId task_id = -1;
    ResourceId resource_id = -1;
    VmId vm_id = -1;
    GrantAction action = GrantAction::Wait;
    GrantReason reason = GrantReason::Queued;
};

// Abstract-operation instrumentation. Counting never influences behavior;
// it only feeds the algorithm-complexity metric.
struct OpCounter {
    bool enabled = true;
    int64_t comparisons = 0;
    int64_t queue_ops = 0;
    int64_t table_ops = 0;
    int64_t decisions = 0;

    void cmp(int64_t n = 1) { if (enabled) comparisons += n; }
    void queue_op(int64_t n = 1) { if (enabled) queue_ops += n; }
    void table_op(int64_t n = 1) { if (enabled) table_ops += n; }
    void decision(int64_t n = 1) { if (enabled) decisions += n; }

    int64_t total_ops() const { return comparisons + queue_ops + table_ops; }
    double ops_per_decision() const {
        return decisions == 0 ? 0.0 : static_cast<double>(total_ops()) / static_cast<double>(decisions);
    }
};

// What the schedulers need to know about a task.
struct SchedTask {
    TaskId id = -1;
    VehicleClass cls = VehicleClass::Normal;
    AppClass app = AppClass::Social;
    double base_priority = 0.0;
    Tick enqueue_time = 0;
    std::vector<ResourceId> required;  // ascending

    TaskRef ref() const { return {id, base_priority, enqueue_time, rank(cls)}; }
};

struct Dispatch {
    TaskId task = -1;
    VmId vm = -1;
};

struct PolicyActions {
    std::vector<GrantDecision> decisions;
    std::vector<Dispatch> dispatches;     // exchanges to start now
    std::vector<TaskId> cancelled;        // churn casualties, resource-stage waiters
    int64_t extra_control_messages = 0;   // policy-internal coordination (retries etc.)

    void append(PolicyActions&& other);
};

// ---------------------------------------------------------------------------
// Contention queue: the incremental structure behind every priority wait
// list. Entries stay sorted on their cached effective priority; aging takes
// effect at the periodic refresh instead of on every comparison, so pops are
// cheap.

class ContentionQueue {
public:
    // Inserts in sorted position under compare at the insertion instant.
    void push(const TaskRef& t, Tick now, const AgingPolicy& aging, OpCounter& ops);
    // FIFO-style append, used by the arrival-order disciplines.
    void push_back(const TaskRef& t, OpCounter& ops);
    bool remove(TaskId id, OpCounter& ops);
    // First entry (best cached priority) satisfying `gate`; nullopt if none.
    template <typename Gate>
    std::optional<TaskRef> pop_best_if(Tick now, const AgingPolicy& aging, Gate gate,
                                       OpCounter& ops);
    std::optional<TaskRef> pop_front(OpCounter& ops);  // FIFO discipline
    // Re-evaluates every cached priority against `now` and restores order;
    // fired from the aging tick.
    void refresh(Tick now, const AgingPolicy& aging, OpCounter& ops);
    const std::vector<TaskRef>& entries() const { return rebuild_view(); }
    size_t size() const { return sorted_.size(); }
    bool empty() const { return sorted_.empty(); }

private:
    struct Entry {
        TaskRef ref;
        double cached_eff = 0.0;
    };
    static bool before(const Entry& a, const Entry& b);
    std::vector<Entry> sorted_;       // ascending (cached_eff, enqueue, id)
    mutable std::vector<TaskRef> view_;  // entries() compatibility
    const std::vector<TaskRef>& rebuild_view() const;
};

// Reference ordering for a contention queue: plain total sort by `compare`.
// Kept deliberately separate from ContentionQueue's min-extraction path.
std::vector<TaskId> pop_order_oracle(const std::vector<TaskRef>& queue, Tick now,
                                     const AgingPolicy& aging);

// ---------------------------------------------------------------------------
// Resource acquisition stage, shared by all policies.
//
// ClassLanes implements the inter-twin priority update: a resource has one
// holder slot per vehicle class, and a requester passes the gate when no
// holder of equal-or-better class is present. High traffic therefore only
// ever waits for other high traffic. Exclusive is the class-blind variant
// used by the baselines: one holder total, FIFO wait order.
//
// Tasks acquire their resource set in ascending id order and keep partial
// holdings while parked, which rules out hold-and-wait cycles.

class ResourceStage {
public:
    enum class Mode { ClassLanes, Exclusive };

    void reset(int num_resources, Mode mode, PriorityWeights weights, AgingPolicy aging);

    // Registers t and acquires as far as possible. Returns true when the
    // full set is held; false when parked. Decisions are appended.
    bool request(const SchedTask& t, Tick now, std::vector<GrantDecision>& out,
                 OpCounter& ops);

    // Releases everything t holds and cascades grants to parked tasks.
    // Tasks whose acquisition completes as a result are appended to
    // `completed`.
    void release(TaskId t, Tick now, std::vector<GrantDecision>& out,
                 std::vector<TaskId>& completed, OpCounter& ops);

    // Removes a parked/holding task. When keep_holdings is set, its lanes
    // stay occupied (stalled failure semantics) until release() is called.
    void cancel(TaskId t, bool keep_holdings, Tick now, std::vector<GrantDecision>& out,
                std::vector<TaskId>& completed, OpCounter& ops);

    // Dead twins stop answering: their resource admits no new holder.
    void mark_dead(ResourceId r);

    // Drops every parked waiter at once and frees their partial holdings.
    // Atomic so a waiter is never granted by a sibling's cancellation.
    std::vector<TaskId> churn_cancel_all(OpCounter& ops);

    // Aging refresh: re-sorts every contention queue on fresh priorities.
    void refresh_queues(Tick now, OpCounter& ops);

    // Parked task ids, by resource id then queue position.
    std::vector<TaskId> waiting_tasks() const;

    bool is_waiting(TaskId t) const;
    int strongest_holder_rank(ResourceId r) const;  // 0 = free

private:
    struct Entry {
        std::array<TaskId, 3> lane{-1, -1, -1};  // index = class rank - 1
        int strongest = 0;                        // min rank held, 0 when free
        bool dead = false;
        ContentionQueue queue;
        void refresh_strongest();
    };

    struct Pending {
        SchedTask task;
        size_t next = 0;          // index into task.required not yet held
        bool parked = false;
    };

    bool gate_passes(const Entry& e, VehicleClass cls, OpCounter& ops) const;
    // Advances acquisition from pending.next; true when complete.
    bool acquire_from(Pending& p, Tick now, std::vector<GrantDecision>& out,
                      OpCounter& ops);
    void pop_waiters(ResourceId r, Tick now, std::vector<GrantDecision>& out,
                     std::vector<TaskId>& completed, OpCounter& ops);

    Mode mode_ = Mode::Exclusive;
    PriorityWeights weights_;
    AgingPolicy aging_;
    std::vector<Entry> entries_;
    std::unordered_map<TaskId, Pending> pending_;
};

// ---------------------------------------------------------------------------
// Policy interface driven by the simulation engine.

class SchedulerPolicy {
public:
    virtual ~SchedulerPolicy() = default;
    virtual PolicyKind kind() const = 0;
    virtual void reset(int num_vms, int num_resources) = 0;

    // Task wants its next inter-twin exchange: resources, then a VM.
    virtual PolicyActions on_task_ready(const SchedTask& t, Tick now) = 0;
    // Exchange finished: VM freed, resources released, waiters cascade.
    virtual PolicyActions on_exchange_done(TaskId t, VmId vm, Tick now) = 0;
    // Task abandoned (twin failure). Holdings stall when keep_holdings.
    virtual PolicyActions on_cancel(TaskId t, bool keep_holdings, Tick now) = 0;
    // Release a stalled ghost's holdings (post-failure stall expiry).
    virtual PolicyActions on_release_holdings(TaskId t, Tick now) = 0;
    // Free a VM whose exchange was aborted, serving any VM-stage waiter.
    virtual PolicyActions on_vm_abort(VmId vm, Tick now) = 0;
    // Topology churn: resource-stage waiters are cancelled and reported.
    virtual PolicyActions on_churn(Tick now) = 0;
    virtual void mark_resource_dead(ResourceId r) = 0;
    // Tasks still parked in the resource stage (end-of-run triage).
    virtual std::vector<TaskId> parked_tasks() const = 0;
    // Periodic aging refresh; only the priority policy reorders anything.
    virtual void on_aging_tick(Tick now) {}

    OpCounter ops;
};

std::unique_ptr<SchedulerPolicy> make_policy(PolicyKind kind, PriorityWeights weights,
                                             AgingPolicy aging);

// ---------------------------------------------------------------------------
// Priority policy: class-lane resource acquisition plus a single ready queue
// popped by `compare`. The lanes are where the policy earns its keep: a
// contended twin serves one exchange per class concurrently instead of one
// overall. VM dispatch consolidates onto a demand-adaptive working set that
// grows under pressure and shrinks when VMs go idle, so quiet periods run on
// a handful of machines.

class PriorityVdtnPolicy final : public SchedulerPolicy {
public:
    PriorityVdtnPolicy(PriorityWeights weights, AgingPolicy aging);

    PolicyKind kind() const override { return PolicyKind::PriorityVdtn; }
    void reset(int num_vms, int num_resources) override;
    PolicyActions on_task_ready(const SchedTask& t, Tick now) override;
    PolicyActions on_exchange_done(TaskId t, VmId vm, Tick now) override;
    PolicyActions on_cancel(TaskId t, bool keep_holdings, Tick now) override;
    PolicyActions on_release_holdings(TaskId t, Tick now) override;
    PolicyActions on_vm_abort(VmId vm, Tick now) override;
    PolicyActions on_churn(Tick now) override;
    void mark_resource_dead(ResourceId r) override { resources_.mark_dead(r); }
    std::vector<TaskId> parked_tasks() const override { return resources_.waiting_tasks(); }
    void on_aging_tick(Tick now) override;

    // Exposed for direct unit testing of the two halves.
    ResourceStage& resource_stage() { return resources_; }
    std::vector<GrantDecision> request_resources(const SchedTask& t, Tick now);
    std::vector<GrantDecision> release_resources(TaskId t, Tick now,
                                                 std::vector<TaskId>& completed);

private:
    void dispatch_or_park(const SchedTask& t, Tick now, PolicyActions& acts);
    void vm_freed(VmId vm, Tick now, PolicyActions& acts);
    void after_acquisition(const std::vector<TaskId>& completed, Tick now,
                           PolicyActions& acts);

    PriorityWeights weights_;
    AgingPolicy aging_;
    ResourceStage resources_;
    std::vector<VmId> free_vms_;   // sorted descending; back() is lowest index
    ContentionQueue ready_;        // acquisition done, waiting for a VM
    int num_vms_ = 0;
    int working_set_ = 1;          // demand-adaptive consolidation bound
    int pressure_ = 0;             // consecutive full-set dispatch attempts
    std::unordered_map<TaskId, SchedTask> tasks_;
};

// ---------------------------------------------------------------------------
// Round-robin baseline: cyclic VM assignment at arrival, one FIFO per VM,
// blind to both load and priority. Resources are exclusive FIFO.

class RoundRobinPolicy final : public SchedulerPolicy {
public:
    explicit RoundRobinPolicy(PriorityWeights weights, AgingPolicy aging);

    PolicyKind kind() const override { return PolicyKind::RoundRobin; }
    void reset(int num_vms, int num_resources) override;
    PolicyActions on_task_ready(const SchedTask& t, Tick now) override;
    PolicyActions on_exchange_done(TaskId t, VmId vm, Tick now) override;
    PolicyActions on_cancel(TaskId t, bool keep_holdings, Tick now) override;
    PolicyActions on_release_holdings(TaskId t, Tick now) override;
    PolicyActions on_vm_abort(VmId vm, Tick now) override;
    PolicyActions on_churn(Tick now) override;
    void mark_resource_dead(ResourceId r) override { resources_.mark_dead(r); }
    std::vector<TaskId> parked_tasks() const override { return resources_.waiting_tasks(); }

    // Cyclic assignment; the cursor advances regardless of load.
    GrantDecision assign(const SchedTask& t, Tick now, PolicyActions& acts);
    int cursor() const { return cursor_; }

    ResourceStage& resource_stage() { return resources_; }

private:
    void after_acquisition(const std::vector<TaskId>& completed, Tick now,
                           PolicyActions& acts);

    ResourceStage resources_;
    int cursor_ = 0;
    int num_vms_ = 0;
    std::vector<bool> busy_;
    std::vector<std::deque<TaskId>> vm_fifo_;
    std::unordered_map<TaskId, SchedTask> tasks_;
};

// ---------------------------------------------------------------------------
// Throttled baseline: availability index table scanned from index zero,
// first Available VM wins; otherwise the task waits in a global FIFO retried
// on every completion. Resources are exclusive FIFO.

class ThrottledPolicy final : public SchedulerPolicy {
public:
    explicit ThrottledPolicy(PriorityWeights weights, AgingPolicy aging);

    PolicyKind kind() const override { return PolicyKind::Throttled; }
    void reset(int num_vms, int num_resources) override;
    PolicyActions on_task_ready(const SchedTask& t, Tick now) override;
    PolicyActions on_exchange_done(TaskId t, VmId vm, Tick now) override;
    PolicyActions on_cancel(TaskId t, bool keep_holdings, Tick now) override;
    PolicyActions on_release_holdings(TaskId t, Tick now) override;
    PolicyActions on_vm_abort(VmId vm, Tick now) override;
    PolicyActions on_churn(Tick now) override;
    void mark_resource_dead(ResourceId r) override { resources_.mark_dead(r); }
    std::vector<TaskId> parked_tasks() const override { return resources_.waiting_tasks(); }

    // First Available VM scanning from index 0, else Wait.
    GrantDecision assign(const SchedTask& t, Tick now, PolicyActions& acts);
    bool vm_available(VmId vm) const { return available_[static_cast<size_t>(vm)]; }

    ResourceStage& resource_stage() { return resources_; }

private:
    void after_acquisition(const std::vector<TaskId>& completed, Tick now,
                           PolicyActions& acts);

    ResourceStage resources_;
    std::vector<bool> available_;
    std::deque<TaskId> wait_fifo_;
    std::unordered_map<TaskId, SchedTask> tasks_;
};

// --- template implementation -----------------------------------------------

template <typename Gate>
std::optional<TaskRef> ContentionQueue::pop_best_if(Tick now, const AgingPolicy& aging,
                                                    Gate gate, OpCounter& ops) {
    (void)now;
    (void)aging;
    for (size_t i = 0; i < sorted_.size(); ++i) {
        if (!gate(sorted_[i].ref)) continue;
        TaskRef out = sorted_[i].ref;
        sorted_.erase(sorted_.begin() + static_cast<std::ptrdiff_t>(i));
        ops.queue_op();
        return out;
    }
    return std::nullopt;
}

}  // namespace vdtn
